//! The simplex upper bound and weighted blow-ups.
//!
//! `1/lambda_smplx = max_{alpha in simplex} min_j sum_h alpha_h a_{hj}/s_h`
//! is an upper bound on the RLCT that ignores coefficients entirely, so it
//! applies to any polynomial. The LP optimum also yields the optimal
//! weighted-blow-up weight: the smallest integer vector proportional to
//! `alpha*_h / s_h`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_solve_capped, LpProblem, LpSolution, DEFAULT_PIVOT_CAP};
use crate::poly::{GeneralPolynomial, OuterMonomial};
use crate::rational::{binomial, nat_to_u64, rat_from_nat, Int, Lambda, Nat, Rat};

/// The simplex upper bound together with the LP optimum it came from.
/// `weight` is populated by `optimal_weight` and has gcd 1.
#[derive(Clone, Debug)]
pub struct SimplexBound {
    pub lambda_smplx: Lambda,
    pub beta: Rat,
    pub alpha: Vec<Rat>,
    pub weight: Option<Vec<Nat>>,
}

fn solve(f: &GeneralPolynomial, g: &OuterMonomial, pivot_cap: usize) -> Result<LpSolution> {
    if g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let minimal = pareto_minimal_columns(f)?;
    let problem = LpProblem::from_exponents(
        &crate::matrix::MultiIndexMatrix::new(f.var_count(), minimal)?,
        g,
    )?;
    lp_solve_capped(&problem, pivot_cap)
}

/// The componentwise-minimal exponent columns. A column that dominates
/// another contributes an implied LP constraint, so dropping it changes
/// neither the feasible region nor the optimum.
fn pareto_minimal_columns(f: &GeneralPolynomial) -> Result<Vec<Vec<Nat>>> {
    if f.is_zero() {
        return Err(Error::Invalid(
            "the zero polynomial has no multi-index matrix".into(),
        ));
    }
    let mut cols: Vec<&Vec<Nat>> = f.terms().iter().map(|(_, e)| e).collect();
    // In ascending total degree, every dominator of a column precedes it,
    // so checking against the kept antichain is enough.
    cols.sort_by_cached_key(|e| e.iter().fold(Nat::zero(), |acc, x| acc + x));
    let mut kept: Vec<Vec<Nat>> = Vec::new();
    'cols: for e in cols {
        for k in &kept {
            if k.iter().zip(e).all(|(a, b)| a <= b) {
                continue 'cols;
            }
        }
        kept.push(e.clone());
    }
    Ok(kept)
}

/// `lambda_smplx = 1/beta`, infinite iff the polynomial has a constant
/// term (iff `f(0) != 0`). Coefficients are ignored except that exact
/// zero coefficients have already been dropped by construction.
pub fn simplex_upper_bound(f: &GeneralPolynomial, g: &OuterMonomial) -> Result<SimplexBound> {
    simplex_upper_bound_capped(f, g, DEFAULT_PIVOT_CAP)
}

pub fn simplex_upper_bound_capped(
    f: &GeneralPolynomial,
    g: &OuterMonomial,
    pivot_cap: usize,
) -> Result<SimplexBound> {
    let sol = solve(f, g, pivot_cap)?;
    Ok(SimplexBound {
        lambda_smplx: Lambda::from_inverse(&sol.beta),
        beta: sol.beta,
        alpha: sol.alpha,
        weight: None,
    })
}

/// Smallest non-negative integer vector proportional to `alpha_h / s_h`
/// (cleared denominators, divided by the gcd).
pub fn weight_from_alpha(alpha: &[Rat], s: &[Rat]) -> Result<Vec<Nat>> {
    let ratios: Vec<Rat> = alpha.iter().zip(s).map(|(a, sh)| a / sh).collect();
    let mut lcm = Int::one();
    for r in &ratios {
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<Int> = ratios.iter().map(|r| r.numer() * &lcm / r.denom()).collect();
    let mut gcd = Int::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        return Err(Error::Invalid("alpha is identically zero".into()));
    }
    for v in &mut ints {
        *v /= &gcd;
    }
    ints.iter()
        .map(|v| {
            v.to_biguint()
                .ok_or_else(|| Error::Internal("negative weight component".into()))
        })
        .collect()
}

/// The optimal weighted-blow-up weight: the Bland-terminal LP optimum
/// `alpha*` scaled to the smallest integer vector proportional to
/// `alpha*_h / s_h`. Requires a finite bound. The minimum index ratio at
/// the returned weight equals the LP optimum `beta`.
pub fn optimal_weight(f: &GeneralPolynomial, g: &OuterMonomial) -> Result<SimplexBound> {
    optimal_weight_capped(f, g, DEFAULT_PIVOT_CAP)
}

pub fn optimal_weight_capped(
    f: &GeneralPolynomial,
    g: &OuterMonomial,
    pivot_cap: usize,
) -> Result<SimplexBound> {
    let sol = solve(f, g, pivot_cap)?;
    if sol.beta.is_zero() {
        return Err(Error::Invalid(
            "lambda_smplx is infinite (constant term present); no optimal weight".into(),
        ));
    }
    let weight = weight_from_alpha(&sol.alpha, g.s())?;
    debug_assert_eq!(minimum_index_ratio(f, g, &weight)?, sol.beta);
    Ok(SimplexBound {
        lambda_smplx: Lambda::from_inverse(&sol.beta),
        beta: sol.beta,
        alpha: sol.alpha,
        weight: Some(weight),
    })
}

/// `mu_{(f,g)}(q) = (min_j q . a_{*j}) / (q . s)`.
pub fn minimum_index_ratio(
    f: &GeneralPolynomial,
    g: &OuterMonomial,
    q: &[Nat],
) -> Result<Rat> {
    if q.len() != f.var_count() || g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    if q.iter().all(|x| x.is_zero()) {
        return Err(Error::Invalid("weight q must be non-zero".into()));
    }
    let num = f
        .terms()
        .iter()
        .map(|(_, exps)| {
            exps.iter()
                .zip(q)
                .map(|(a, qh)| a * qh)
                .fold(Nat::zero(), |acc, x| acc + x)
        })
        .min()
        .ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
    let den: Rat = q
        .iter()
        .zip(g.s())
        .map(|(qh, sh)| rat_from_nat(qh) * sh)
        .sum();
    Ok(rat_from_nat(&num) / den)
}

/// The `w_i`-chart of the weighted blow-up with weight `q`: substitute
/// `w_i <- w_i^{q_i}` and `w_j <- w_j w_i^{q_j}` for `j != i`. Every term
/// `c w^a` becomes `c w_i^{q.a} prod_{j != i} w_j^{a_j}`.
pub fn weighted_blowup_chart(
    f: &GeneralPolynomial,
    q: &[Nat],
    chart: usize,
) -> Result<GeneralPolynomial> {
    let d = f.var_count();
    if q.len() != d || chart >= d {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    if q[chart].is_zero() {
        return Err(Error::Invalid(format!(
            "chart variable w{} has zero weight",
            chart + 1
        )));
    }
    let terms = f
        .terms()
        .iter()
        .map(|(c, exps)| {
            let total = exps
                .iter()
                .zip(q)
                .map(|(a, qh)| a * qh)
                .fold(Nat::zero(), |acc, x| acc + x);
            let mut out = exps.clone();
            out[chart] = total;
            (c.clone(), out)
        })
        .collect();
    GeneralPolynomial::new(d, terms)
}

/// Exact multinomial expansion of `f(w + p)`; terms whose coefficients
/// cancel to zero are removed (the cancellation changes the multi-index
/// set, and with it the bound).
pub fn translate(f: &GeneralPolynomial, p: &[Rat]) -> Result<GeneralPolynomial> {
    let d = f.var_count();
    if p.len() != d {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let mut acc = crate::poly::TermAccumulator::new(d);
    for (c, exps) in f.terms() {
        // Expand prod_h (w_h + p_h)^{a_h}, skipping variables with p_h = 0.
        let mut term = GeneralPolynomial::monomial(
            d,
            c.clone(),
            exps.iter()
                .zip(p)
                .map(|(a, ph)| if ph.is_zero() { a.clone() } else { Nat::zero() })
                .collect(),
        );
        for (h, ph) in p.iter().enumerate() {
            if ph.is_zero() || exps[h].is_zero() {
                continue;
            }
            let a = nat_to_u64(&exps[h])?;
            let mut binom_terms = Vec::with_capacity(a as usize + 1);
            for k in 0..=a {
                let coeff = rat_from_nat(&binomial(a, k)) * pow_rat(ph, a - k);
                let mut e = vec![Nat::zero(); d];
                e[h] = Nat::from(k);
                binom_terms.push((coeff, e));
            }
            term = term.mul(&GeneralPolynomial::new(d, binom_terms)?);
        }
        acc.add_poly(&term);
    }
    Ok(acc.finish())
}

fn pow_rat(r: &Rat, k: u64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Exact expansion of `f(Pinv u)` for an invertible rational matrix
/// `Pinv` (each old variable becomes the linear form `sum_k Pinv[h][k] u_k`).
pub fn linear_transform(
    f: &GeneralPolynomial,
    pinv: &[Vec<Rat>],
) -> Result<GeneralPolynomial> {
    let d = f.var_count();
    if pinv.len() != d || pinv.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid("Pinv must be a d x d matrix".into()));
    }
    if det(pinv).is_zero() {
        return Err(Error::Invalid("Pinv is singular".into()));
    }
    let forms: Vec<GeneralPolynomial> = (0..d)
        .map(|h| {
            GeneralPolynomial::new(
                d,
                (0..d)
                    .map(|k| {
                        let mut e = vec![Nat::zero(); d];
                        e[k] = Nat::one();
                        (pinv[h][k].clone(), e)
                    })
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    let mut acc = crate::poly::TermAccumulator::new(d);
    for (c, exps) in f.terms() {
        let mut term = GeneralPolynomial::constant(d, c.clone());
        for (h, form) in forms.iter().enumerate() {
            if exps[h].is_zero() {
                continue;
            }
            term = term.mul(&form.pow(nat_to_u64(&exps[h])?));
        }
        acc.add_poly(&term);
    }
    Ok(acc.finish())
}

fn det(m: &[Vec<Rat>]) -> Rat {
    let d = m.len();
    let mut m: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..d {
        let Some(p) = (col..d).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..d {
            let factor = &m[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..d {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// `lambda_smplx <= (sum_h s_h) / 2` for non-negative `f` with `f(0) = 0`.
pub fn parameter_upper_bound_check(f: &GeneralPolynomial, g: &OuterMonomial) -> Result<bool> {
    let bound = simplex_upper_bound(f, g)?;
    let half_sum: Rat = g.s().iter().sum::<Rat>() / Rat::from_integer(Int::from(2));
    Ok(bound.lambda_smplx <= Lambda::Finite(half_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::rational::{nat, rat, rat_int};

    fn poly(text: &str) -> GeneralPolynomial {
        parse_polynomial(text, 0).unwrap()
    }

    fn s1(d: usize) -> OuterMonomial {
        OuterMonomial::trivial(d)
    }

    #[test]
    fn bound_examples() {
        let b = simplex_upper_bound(&poly("w1^2 + w2^4 + w3^6"), &s1(3)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(11, 12)));

        let b = simplex_upper_bound(&poly("1 + w1^2"), &s1(1)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Infinity);

        let b = simplex_upper_bound(&poly("w1^2 + w2^4"), &s1(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(3, 4)));
    }

    #[test]
    fn optimal_weight_examples() {
        let b = optimal_weight(&poly("w1^2 + w2^4 + w3^6"), &s1(3)).unwrap();
        assert_eq!(b.weight, Some(vec![nat(6), nat(3), nat(2)]));

        let b = optimal_weight(&poly("w1^2 + w2^2"), &s1(2)).unwrap();
        assert_eq!(b.weight, Some(vec![nat(1), nat(1)]));

        assert!(optimal_weight(&poly("1 + w1^2"), &s1(1)).is_err());
    }

    #[test]
    fn minimum_index_ratio_examples() {
        let f = poly("w1^2 + w2^4 + w3^6");
        let mu = minimum_index_ratio(&f, &s1(3), &[nat(6), nat(3), nat(2)]).unwrap();
        assert_eq!(mu, rat(12, 11));

        let f = poly("w1^2 + w2^2");
        let mu = minimum_index_ratio(&f, &s1(2), &[nat(1), nat(1)]).unwrap();
        assert_eq!(mu, rat_int(1));

        assert!(minimum_index_ratio(&f, &s1(2), &[Nat::zero(), Nat::zero()]).is_err());
    }

    #[test]
    fn weighted_chart_examples() {
        // Example: H = w1^2 + w2^4 + w3^6 with q = (6,3,2).
        let h = poly("w1^2 + w2^4 + w3^6");
        let q = [nat(6), nat(3), nat(2)];
        let c1 = weighted_blowup_chart(&h, &q, 0).unwrap();
        assert_eq!(c1, poly("w1^12 + w1^12*w2^4 + w1^12*w3^6"));
        let c2 = weighted_blowup_chart(&h, &q, 1).unwrap();
        assert_eq!(c2, poly("w2^12*w1^2 + w2^12 + w2^12*w3^6"));
        let c3 = weighted_blowup_chart(&h, &q, 2).unwrap();
        assert_eq!(c3, poly("w3^12*w1^2 + w3^12*w2^4 + w3^12"));

        // Weight (1,1) on two coordinates reproduces an ordinary chart.
        let f = poly("w1^2 + w2^4");
        let c = weighted_blowup_chart(&f, &[nat(1), nat(1)], 0).unwrap();
        assert_eq!(c, poly("w1^2 + w1^4*w2^4"));

        assert!(weighted_blowup_chart(&f, &[Nat::zero(), nat(1)], 0).is_err());
    }

    #[test]
    fn translate_examples() {
        // f = w1^4 w2^2 translated by (p1, 0) has bound 1/2; by (0, p2) 1/4.
        let f = poly("w1^4*w2^2");
        let t = translate(&f, &[rat_int(1), rat_int(0)]).unwrap();
        let b = simplex_upper_bound(&t, &s1(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(1, 2)));

        let t = translate(&f, &[rat_int(0), rat_int(2)]).unwrap();
        let b = simplex_upper_bound(&t, &s1(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(1, 4)));

        // Both coordinates shifted off the zero locus: bound infinite.
        let t = translate(&f, &[rat_int(1), rat_int(1)]).unwrap();
        let b = simplex_upper_bound(&t, &s1(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Infinity);

        assert_eq!(translate(&f, &[rat_int(0), rat_int(0)]).unwrap(), f);
    }

    #[test]
    fn linear_transform_example() {
        let f = poly("w1^4*w2^2");
        let pinv = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ];
        let t = linear_transform(&f, &pinv).unwrap();
        let expected = poly(
            "w1^6 + 2*w1^5*w2 - w1^4*w2^2 - 4*w1^3*w2^3 - w1^2*w2^4 + 2*w1*w2^5 + w2^6",
        );
        assert_eq!(t, expected);
        let b = simplex_upper_bound(&t, &s1(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(1, 3)));

        let id = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ];
        assert_eq!(linear_transform(&f, &id).unwrap(), f);

        let sing = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ];
        assert!(linear_transform(&f, &sing).is_err());
    }

    #[test]
    fn parameter_bound_examples() {
        assert!(parameter_upper_bound_check(&poly("w1^2 + w2^4"), &s1(2)).unwrap());
        assert!(parameter_upper_bound_check(&poly("w1^2 + w2^4 + w3^6"), &s1(3)).unwrap());
        let half = OuterMonomial::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let b = simplex_upper_bound(&poly("w1^2 + w2^2"), &half).unwrap();
        assert!(b.lambda_smplx <= Lambda::Finite(rat(1, 2)));
        assert!(parameter_upper_bound_check(&poly("w1^2 + w2^2"), &half).unwrap());
    }
}
