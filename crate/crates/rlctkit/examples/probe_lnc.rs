use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlctkit::{local_nc_blowup, Caps, OuterMonomial, SopPolynomial};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let caps = Caps::default();
    let mut total_nodes = 0usize;
    let mut max_nodes = 0usize;
    let t0 = std::time::Instant::now();
    let mut made = 0usize;
    while made < 1000 {
        let d = rng.gen_range(2..=6);
        let n = rng.gen_range(2..=6);
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..d).map(|_| 2 * rng.gen_range(0..=5u64)).collect())
            .collect();
        let col_refs: Vec<&[u64]> = cols.iter().map(|c| c.as_slice()).collect();
        let Ok(f) = SopPolynomial::from_u64(&col_refs, true) else {
            continue;
        };
        made += 1;
        let tree = match local_nc_blowup(&f, &OuterMonomial::trivial(d), caps) {
            Ok(t) => t,
            Err(e) => {
                println!("CAP on #{made}: f = {f} ({e})");
                continue;
            }
        };
        for id in tree.leaves() {
            assert!(tree.node(id).inner.is_local_normal_crossing());
        }
        total_nodes += tree.len();
        max_nodes = max_nodes.max(tree.len());
    }
    println!(
        "1000 random sops: total nodes {total_nodes}, max tree {max_nodes}, elapsed {:?}",
        t0.elapsed()
    );
}
