//! Comparison models with known RLCT formulas: reduced rank regression,
//! Poisson mixtures, and Vandermonde matrix-type singularities. Each model
//! yields an exactly expanded polynomial whose bound can be compared with
//! the closed-form RLCT.

use serde::Deserialize;

use crate::bound::translate;
use crate::error::{Error, Result};
use crate::poly::GeneralPolynomial;
use crate::rational::{rat, rat_int, Int, Nat, Rat};
use num_traits::{One, Zero};

/// Default cap on the monomial count of a model expansion.
pub const DEFAULT_TERM_CAP: usize = 100_000;

/// Reduced rank regression: `K' = |C1|^2 + |C2|^2 + |C3|^2 + |B4 A4|^2`
/// with `C1: r x r`, `C2: (N-r) x r`, `C3: r x (M-r)`,
/// `A4: (H-r) x (M-r)`, `B4: (N-r) x (H-r)`; variables ordered block by
/// block, row-major.
pub fn rrr_polynomial(m: u32, n: u32, h: u32, r: u32) -> Result<GeneralPolynomial> {
    if r > m.min(n).min(h) {
        return Err(Error::Invalid(format!(
            "rank r = {r} exceeds min(M, N, H) = {}",
            m.min(n).min(h)
        )));
    }
    let (m, n, h, r) = (m as usize, n as usize, h as usize, r as usize);
    let c1 = r * r;
    let c2 = (n - r) * r;
    let c3 = r * (m - r);
    let a4 = (h - r) * (m - r);
    let b4 = (n - r) * (h - r);
    let d = c1 + c2 + c3 + a4 + b4;
    if d == 0 {
        return Err(Error::Invalid(
            "the model has no free parameters (empty polynomial)".into(),
        ));
    }
    let a4_off = c1 + c2 + c3;
    let b4_off = a4_off + a4;
    // A4 entry (k, j): k < H-r rows, j < M-r cols. B4 entry (i, k).
    let a4_var = |k: usize, j: usize| a4_off + k * (m - r) + j;
    let b4_var = |i: usize, k: usize| b4_off + i * (h - r) + k;

    let mut terms: Vec<(Rat, Vec<Nat>)> = Vec::new();
    for v in 0..a4_off {
        let mut e = vec![Nat::zero(); d];
        e[v] = Nat::from(2u32);
        terms.push((Rat::one(), e));
    }
    for i in 0..(n - r) {
        for j in 0..(m - r) {
            for k in 0..(h - r) {
                for k2 in 0..(h - r) {
                    let mut e = vec![Nat::zero(); d];
                    e[b4_var(i, k)] += Nat::one();
                    e[a4_var(k, j)] += Nat::one();
                    e[b4_var(i, k2)] += Nat::one();
                    e[a4_var(k2, j)] += Nat::one();
                    terms.push((Rat::one(), e));
                }
            }
        }
    }
    GeneralPolynomial::new(d, terms)
}

/// RLCT of reduced rank regression:
/// `min over 0 <= s <= min(M-r, H-r)` of
/// `((N+M)r - r^2 + s(N-r) + (M-r-s)(H-r-s)) / 2`.
pub fn rrr_rlct(m: u32, n: u32, h: u32, r: u32) -> Result<Rat> {
    if r > h {
        return Err(Error::Invalid("requires r <= H".into()));
    }
    let (m, n, h, r) = (m as i64, n as i64, h as i64, r as i64);
    let mut best: Option<Int> = None;
    for s in 0..=(m - r).min(h - r).max(0) {
        let v = (n + m) * r - r * r + s * (n - r) + (m - r - s) * (h - r - s);
        let v = Int::from(v);
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(Rat::new(best.expect("non-empty range"), Int::from(2)))
}

/// Poisson mixture polynomial: `K'(a, B) = sum over x in {0..H+r-1}^M of
/// (sum_h a_h b_h^x - sum_h a*_h b*_h^x)^2`, with `a_1 = 1 - sum_{h>=2}
/// a'_h` eliminating the simplex constraint and the result translated so
/// the supplied expansion point becomes the origin. Variables:
/// `a'_2..a'_H`, then `b_{m1}..b_{mH}` per data dimension `m`.
pub fn poisson_polynomial(
    m: u32,
    h: u32,
    r: u32,
    true_weights: &[Rat],
    true_rates: &[Vec<Rat>],
    expansion_point: Option<&[Rat]>,
) -> Result<GeneralPolynomial> {
    if h < 1 || r < 1 {
        return Err(Error::Invalid("requires H >= 1 and r >= 1".into()));
    }
    if true_weights.len() != r as usize
        || true_rates.len() != m as usize
        || true_rates.iter().any(|row| row.len() != r as usize)
    {
        return Err(Error::Invalid(
            "true parameters must have r weights and an M x r rate matrix".into(),
        ));
    }
    if true_weights.iter().sum::<Rat>() != Rat::one() {
        return Err(Error::Invalid("true weights must sum to 1".into()));
    }
    let (m, h) = (m as usize, h as usize);
    let hr = h + r as usize - 1;
    let d = (h - 1) + m * h;
    let b_var = |mm: usize, hh: usize| (h - 1) + mm * h + hh;

    // sum_h a_h b_h^x as a polynomial for a given count vector x.
    let model_at = |x: &[usize]| -> GeneralPolynomial {
        let mut acc = GeneralPolynomial::zero(d);
        for hh in 0..h {
            let mut exps = vec![Nat::zero(); d];
            for (mm, &xm) in x.iter().enumerate() {
                exps[b_var(mm, hh)] = Nat::from(xm as u64);
            }
            let weight = if hh == 0 {
                // a_1 = 1 - sum a'_h
                let mut w =
                    vec![(Rat::one(), exps.clone())];
                for v in 0..h - 1 {
                    let mut e = exps.clone();
                    e[v] += Nat::one();
                    w.push((-Rat::one(), e));
                }
                GeneralPolynomial::new(d, w)
            } else {
                let mut e = exps;
                e[hh - 1] += Nat::one();
                GeneralPolynomial::new(d, vec![(Rat::one(), e)])
            };
            acc = acc.add(&weight.expect("well-formed block"));
        }
        acc
    };

    let truth_at = |x: &[usize]| -> Rat {
        let mut total = Rat::zero();
        for (hh, w) in true_weights.iter().enumerate() {
            let mut term = w.clone();
            for (mm, &xm) in x.iter().enumerate() {
                let mut pw = Rat::one();
                for _ in 0..xm {
                    pw *= &true_rates[mm][hh];
                }
                term *= pw;
            }
            total += term;
        }
        total
    };

    let mut acc = crate::poly::TermAccumulator::new(d);
    let mut x = vec![0usize; m];
    loop {
        let diff = model_at(&x).sub(&GeneralPolynomial::constant(d, truth_at(&x)));
        acc.add_poly(&diff.mul(&diff));
        // Advance the mixed-radix counter over {0..H+r-1}^M.
        let mut carry = true;
        for xm in x.iter_mut() {
            if *xm + 1 < hr + 1 {
                *xm += 1;
                carry = false;
                break;
            }
            *xm = 0;
        }
        if carry {
            break;
        }
    }
    let k = acc.finish();

    let default_point: Vec<Rat> = {
        let mut p = vec![Rat::zero(); d];
        if h >= 2 {
            p[h - 2] = Rat::one(); // a'_H = 1
        }
        for mm in 0..m {
            p[b_var(mm, h - 1)] = Rat::one(); // b_{mH} = 1
        }
        p
    };
    let point = expansion_point.unwrap_or(&default_point);
    if point.len() != d {
        return Err(Error::Invalid(format!(
            "expansion point must have {d} coordinates"
        )));
    }
    if !k.eval(point)?.is_zero() {
        return Err(Error::Invalid(
            "K' does not vanish at the expansion point; the bound would be vacuous".into(),
        ));
    }
    translate(&k, point)
}

/// Default true parameters for `r = 1`: weight 1, all rates 1.
pub fn poisson_default_truth(m: u32, r: u32) -> Result<(Vec<Rat>, Vec<Vec<Rat>>)> {
    if r != 1 {
        return Err(Error::Invalid(
            "default Poisson truth is defined for r = 1; supply parameters".into(),
        ));
    }
    Ok((
        vec![Rat::one()],
        (0..m).map(|_| vec![Rat::one()]).collect(),
    ))
}

/// RLCT of the Poisson mixture: `(3r + H - 2)/4` for `M = 1`,
/// `(Mr + H - 1)/2` for `M >= 2`.
pub fn poisson_rlct(m: u32, h: u32, r: u32) -> Result<Rat> {
    if h < r || r < 1 {
        return Err(Error::Invalid("requires H >= r >= 1".into()));
    }
    let (m, h, r) = (m as i64, h as i64, r as i64);
    Ok(if m == 1 {
        rat(3 * r + h - 2, 4)
    } else {
        rat(m * r + h - 1, 2)
    })
}

/// Vandermonde matrix-type polynomial `|A B|^2` with `A: M x H` variable,
/// `B` rows indexed by count vectors `L` in `N_0^N` with `|L| = Q k + m`,
/// `0 <= k <= H` (the `r = 0` regime). Variables: `a_{11}..a_{MH}`
/// row-major, then `b_{11}..b_{HN}` row-major.
pub fn vandermonde_polynomial(
    m: u32,
    n: u32,
    h: u32,
    q: u32,
    m_off: u32,
    r: u32,
    term_cap: usize,
) -> Result<GeneralPolynomial> {
    if r != 0 {
        return Err(Error::Invalid(
            "only the r = 0 regime is supported".into(),
        ));
    }
    if m < 1 || n < 1 || h < 1 || q < 1 {
        return Err(Error::Invalid("requires M, N, H, Q >= 1".into()));
    }
    let (m, n, h) = (m as usize, n as usize, h as usize);
    let mut ells: Vec<Vec<u64>> = Vec::new();
    for k in 0..=h as u64 {
        let total = q as u64 * k + m_off as u64;
        push_compositions(n, total, &mut ells);
    }
    let n_star = ells.len();
    let estimate = m * n_star * h * h;
    if estimate > term_cap {
        return Err(Error::TermCap {
            cap: term_cap,
            estimate,
        });
    }
    let d = m * h + h * n;
    let a_var = |mm: usize, hh: usize| mm * h + hh;
    let b_var = |hh: usize, j: usize| m * h + hh * n + j;
    let mut terms: Vec<(Rat, Vec<Nat>)> = Vec::with_capacity(estimate);
    for mm in 0..m {
        for ell in &ells {
            // (sum_h a_{mm,h} b_h^L)^2
            for h1 in 0..h {
                for h2 in 0..h {
                    let mut e = vec![Nat::zero(); d];
                    e[a_var(mm, h1)] += Nat::one();
                    e[a_var(mm, h2)] += Nat::one();
                    for (j, &lj) in ell.iter().enumerate() {
                        e[b_var(h1, j)] += Nat::from(lj);
                        e[b_var(h2, j)] += Nat::from(lj);
                    }
                    terms.push((Rat::one(), e));
                }
            }
        }
    }
    GeneralPolynomial::new(d, terms)
}

fn push_compositions(parts: usize, total: u64, out: &mut Vec<Vec<u64>>) {
    fn rec(parts: usize, total: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            let mut v = prefix.clone();
            v.push(total);
            out.push(v);
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    rec(parts, total, &mut Vec::new(), out);
}

/// RLCT of Vandermonde matrix-type singularities (`r = 0`, `m = 1`), for
/// `N = 1` (any `H`) or `H <= 4`.
pub fn vandermonde_rlct(m: u32, n: u32, h: u32, q: u32) -> Result<Rat> {
    let (mi, ni, hi, qi) = (m as i64, n as i64, h as i64, q as i64);
    if n == 1 {
        // k = max{ i : 2H >= M(i(i-1)Q + 2i) }
        let mut k = 0i64;
        let mut i = 1i64;
        while 2 * hi >= mi * (i * (i - 1) * qi + 2 * i) {
            k = i;
            i += 1;
        }
        return Ok(rat(mi * qi * k * (k + 1) + 2 * hi, 4 * (1 + k * qi)));
    }
    let mut cands: Vec<Rat> = Vec::new();
    match h {
        1 => {
            cands.push(rat(mi.min(ni), 2));
        }
        2 => {
            for b in 0..=2 {
                cands.push(rat(b * ni + (2 - b) * mi, 2));
            }
            cands.push(rat(2 * ni + qi * (ni - 1 + mi), 2 * qi + 2));
        }
        3 => {
            for b in 0..=3 {
                cands.push(rat(b * ni + (3 - b) * mi, 2));
            }
            for b in 2..=3i64 {
                for a in 1..b {
                    cands.push(rat(
                        b * ni + (3 - b) * mi + qi * (a * (ni + a - b) + (3 - a) * mi),
                        2 * (qi + 1),
                    ));
                }
            }
            cands.push(rat(3 * ni + qi * (3 * ni - 3 + 3 * mi), 2 * (2 * qi + 1)));
        }
        4 => {
            for b in 0..=4 {
                cands.push(rat(b * ni + (4 - b) * mi, 2));
            }
            for b in 2..=4i64 {
                for a in 1..b {
                    cands.push(rat(
                        b * ni + (4 - b) * mi + qi * (a * (ni + a - b) + (4 - a) * mi),
                        2 * (qi + 1),
                    ));
                }
            }
            for a in 2..=4i64 {
                cands.push(rat(
                    4 * ni + qi * (a * ni - a - 1 + (8 - a) * mi),
                    2 * (2 * qi + 1),
                ));
            }
            cands.push(rat(4 * ni + qi * (5 * ni - 5 + 3 * mi), 2 * (2 * qi + 1)));
            for a in 2..=3i64 {
                cands.push(rat(
                    3 * ni + mi + qi * (a * ni - a + (8 - a) * mi),
                    2 * (2 * qi + 1),
                ));
            }
            cands.push(rat(4 * ni + qi * (6 * ni - 6 + 6 * mi), 2 * (3 * qi + 1)));
        }
        _ => {
            return Err(Error::Invalid(format!(
                "RLCT unknown for N = {n} >= 2 with H = {h} >= 5"
            )));
        }
    }
    Ok(cands.into_iter().min().expect("non-empty candidate set"))
}

/// A model instance as accepted on the command line.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "model")]
pub enum ModelSpec {
    #[serde(rename = "rrr")]
    Rrr {
        #[serde(rename = "M")]
        m: u32,
        #[serde(rename = "N")]
        n: u32,
        #[serde(rename = "H", default)]
        h: u32,
        r: u32,
    },
    #[serde(rename = "poisson")]
    Poisson {
        #[serde(rename = "M")]
        m: u32,
        #[serde(rename = "H", default)]
        h: u32,
        r: u32,
    },
    #[serde(rename = "vandermonde")]
    Vandermonde {
        #[serde(rename = "M")]
        m: u32,
        #[serde(rename = "N")]
        n: u32,
        #[serde(rename = "H", default)]
        h: u32,
        #[serde(rename = "Q")]
        q: u32,
        #[serde(rename = "m", default = "default_one")]
        m_off: u32,
        #[serde(default)]
        r: u32,
    },
}

fn default_one() -> u32 {
    1
}

impl ModelSpec {
    pub fn default_h(&self) -> u32 {
        match self {
            ModelSpec::Rrr { h, .. }
            | ModelSpec::Poisson { h, .. }
            | ModelSpec::Vandermonde { h, .. } => *h,
        }
    }

    pub fn polynomial(&self, h: u32, term_cap: usize) -> Result<GeneralPolynomial> {
        match *self {
            ModelSpec::Rrr { m, n, r, .. } => rrr_polynomial(m, n, h, r),
            ModelSpec::Poisson { m, r, .. } => {
                let (w, b) = poisson_default_truth(m, r)?;
                poisson_polynomial(m, h, r, &w, &b, None)
            }
            ModelSpec::Vandermonde {
                m, n, q, m_off, r, ..
            } => vandermonde_polynomial(m, n, h, q, m_off, r, term_cap),
        }
    }

    pub fn rlct(&self, h: u32) -> Result<Rat> {
        match *self {
            ModelSpec::Rrr { m, n, r, .. } => rrr_rlct(m, n, h, r),
            ModelSpec::Poisson { m, r, .. } => poisson_rlct(m, h, r),
            ModelSpec::Vandermonde { m, n, q, .. } => vandermonde_rlct(m, n, h, q),
        }
    }

    /// The model's parameter count (the `d` of the figure captions).
    pub fn param_count(&self, h: u32) -> Rat {
        match *self {
            ModelSpec::Rrr { m, n, .. } | ModelSpec::Vandermonde { m, n, .. } => {
                rat_int(((m + n) * h) as i64)
            }
            ModelSpec::Poisson { m, .. } => rat_int(((m + 1) * h) as i64 - 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::simplex_upper_bound;
    use crate::poly::OuterMonomial;
    use crate::rational::Lambda;

    #[test]
    fn rrr_rlct_values() {
        assert_eq!(rrr_rlct(5, 5, 2, 2).unwrap(), rat_int(8));
        assert_eq!(rrr_rlct(5, 5, 7, 2).unwrap(), rat(25, 2));
        assert_eq!(rrr_rlct(5, 5, 8, 2).unwrap(), rat(25, 2));
        assert_eq!(rrr_rlct(3, 3, 0, 0).unwrap(), rat_int(0));
    }

    #[test]
    fn rrr_minimal_instance() {
        // M=N=H=1, r=0: the single term a^2 b^2, bound 1/2.
        let p = rrr_polynomial(1, 1, 1, 0).unwrap();
        assert_eq!(p.term_count(), 1);
        let b = simplex_upper_bound(&p, &OuterMonomial::trivial(p.var_count())).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(1, 2)));
    }

    #[test]
    fn rrr_pure_squares_when_r_equals_h() {
        let p = rrr_polynomial(5, 5, 2, 2).unwrap();
        assert_eq!(p.var_count(), 16);
        assert_eq!(p.term_count(), 16);
        let b = simplex_upper_bound(&p, &OuterMonomial::trivial(16)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat_int(8)));
    }

    #[test]
    fn poisson_rlct_values() {
        assert_eq!(poisson_rlct(1, 1, 1).unwrap(), rat(1, 2));
        assert_eq!(poisson_rlct(2, 3, 1).unwrap(), rat_int(2));
        assert_eq!(poisson_rlct(1, 5, 1).unwrap(), rat(3, 2));
    }

    #[test]
    fn poisson_h1_polynomial() {
        let (w, b) = poisson_default_truth(1, 1).unwrap();
        let p = poisson_polynomial(1, 1, 1, &w, &b, None).unwrap();
        // K' = b^2 after translation; bound = RLCT = 1/2.
        assert_eq!(p.var_count(), 1);
        assert!(p.constant_term().is_none());
        let bnd = simplex_upper_bound(&p, &OuterMonomial::trivial(1)).unwrap();
        assert_eq!(bnd.lambda_smplx, Lambda::Finite(rat(1, 2)));
    }

    #[test]
    fn poisson_rejects_bad_expansion_point() {
        let (w, b) = poisson_default_truth(1, 1).unwrap();
        let d = 1 + 2; // H = 2: one a'-variable, two b-variables
        let bad = vec![Rat::zero(); d];
        assert!(poisson_polynomial(1, 2, 1, &w, &b, Some(&bad)).is_err());
    }

    #[test]
    fn vandermonde_rlct_values() {
        assert_eq!(vandermonde_rlct(3, 3, 1, 2).unwrap(), rat(3, 2));
        // N=1, (M,Q)=(5,2), H=5: k=1, lambda = 30/12 = 5/2.
        assert_eq!(vandermonde_rlct(5, 1, 5, 2).unwrap(), rat(5, 2));
        assert!(vandermonde_rlct(3, 3, 5, 2).is_err());
    }

    #[test]
    fn vandermonde_tiny_instance_expansion() {
        // M=N=Q=H=1, m=1: L in {1, 2}; AB entries a_11 b_11^l.
        let p = vandermonde_polynomial(1, 1, 1, 1, 1, 0, DEFAULT_TERM_CAP).unwrap();
        // (a b)^2 + (a b^2)^2 = a^2 b^2 + a^2 b^4
        assert_eq!(p.term_count(), 2);
        let b = simplex_upper_bound(&p, &OuterMonomial::trivial(2)).unwrap();
        assert_eq!(b.lambda_smplx, Lambda::Finite(rat(1, 2)));
        assert_eq!(vandermonde_rlct(1, 1, 1, 1).unwrap(), rat(1, 2));
    }

    #[test]
    fn term_cap_guards_expansion() {
        assert!(matches!(
            vandermonde_polynomial(3, 3, 4, 2, 1, 0, 100),
            Err(Error::TermCap { .. })
        ));
    }

    #[test]
    fn model_spec_json() {
        let spec: ModelSpec =
            serde_json::from_str(r#"{"model":"rrr","M":5,"N":5,"H":3,"r":2}"#).unwrap();
        assert_eq!(spec.default_h(), 3);
        assert_eq!(spec.rlct(2).unwrap(), rat_int(8));
        assert_eq!(spec.param_count(2), rat_int(20));

        let spec: ModelSpec =
            serde_json::from_str(r#"{"model":"vandermonde","M":5,"N":1,"H":5,"Q":2}"#).unwrap();
        assert_eq!(spec.rlct(5).unwrap(), rat(5, 2));
    }
}
