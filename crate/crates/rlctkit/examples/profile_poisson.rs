use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let (w, b) = rlctkit::models::poisson_default_truth(2, 1).unwrap();
    let p = rlctkit::models::poisson_polynomial(2, 6, 1, &w, &b, None).unwrap();
    eprintln!("expand: {:?}, terms = {}", t0.elapsed(), p.term_count());
    let t1 = Instant::now();
    let g = rlctkit::OuterMonomial::trivial(p.var_count());
    let bd = rlctkit::simplex_upper_bound(&p, &g).unwrap();
    eprintln!("lp: {:?}, lambda = {}", t1.elapsed(), bd.lambda_smplx);
}
