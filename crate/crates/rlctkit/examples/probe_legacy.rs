use num_traits::Zero;
use rlctkit::rational::{rat, Lambda, Rat};
use rlctkit::{
    classify_exclusive_triple, max_degree_selective, min_degree_selective, rlct_from_tree, rlct_from_tree_signed, Caps,
    SopPolynomial,
};

fn triple(t1: [u64; 3], t2: [u64; 3]) -> SopPolynomial {
    let c1: Vec<u64> = vec![t1[0], t1[1], t1[2], 0, 0, 0];
    let c2: Vec<u64> = vec![0, 0, 0, t2[0], t2[1], t2[2]];
    SopPolynomial::from_u64(&[&c1, &c2], false).unwrap()
}

fn main() {
    let caps = Caps::new(100_000);
    let mut checked_g = 0;
    let mut checked_f = 0;
    let mut bad = 0;
    for a in 0..64u64 {
        for b in 0..64u64 {
            let t1 = [a / 16, (a / 4) % 4, a % 4];
            let t2 = [b / 16, (b / 4) % 4, b % 4];
            if t1.iter().sum::<u64>() == 0 || t2.iter().sum::<u64>() == 0 {
                continue;
            }
            let f = triple(t1, t2);
            let class = classify_exclusive_triple(&f).unwrap();
            if class.in_g_prime && !class.in_f {
                let out = max_degree_selective(&f, caps).unwrap();
                if !out.halted() {
                    println!("CAP HIT (max-deg): {t1:?} {t2:?}");
                    bad += 1;
                    continue;
                }
                let got = rlct_from_tree_signed(out.tree()).unwrap();
                let expect = rat(1, *t1.iter().max().unwrap() as i64)
                    + rat(1, *t2.iter().max().unwrap() as i64);
                if got != Lambda::Finite(expect.clone()) {
                    if bad < 10 {
                        println!("MISMATCH max-deg {t1:?} {t2:?}: got {got}, expect {expect}");
                    }
                    bad += 1;
                }
                checked_g += 1;
            }
            if class.in_f {
                let out = min_degree_selective(&f, caps).unwrap();
                if !out.halted() {
                    println!("CAP HIT (min-deg): {t1:?} {t2:?}");
                    bad += 1;
                    continue;
                }
                let got = rlct_from_tree_signed(out.tree()).unwrap();
                if got != Lambda::Finite(Rat::from_integer(1.into())) {
                    if bad < 20 {
                        println!("MISMATCH min-deg {t1:?} {t2:?}: got {got}");
                    }
                    bad += 1;
                }
                checked_f += 1;
            }
        }
    }
    let _ = Rat::zero();
    println!("G'\\F checked: {checked_g}, F checked: {checked_f}, bad: {bad}");
}
