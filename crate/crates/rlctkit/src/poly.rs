//! Sum-of-products polynomials, general polynomials with rational
//! coefficients, and outer monomials `w^(s-1)`.
//!
//! All values are immutable after construction and every operation is pure.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::MultiIndexMatrix;
use crate::rational::{format_rat, Int, Nat, Rat};

/// A sum-of-products polynomial: every coefficient is 1, so the polynomial
/// is exactly its multi-index matrix. At least two terms are required (the
/// blow-up algorithms assume a non-monomial that is not identically zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SopPolynomial {
    matrix: MultiIndexMatrix,
    nonneg_asserted: bool,
}

impl SopPolynomial {
    /// `nonneg` records the caller's assertion that `f >= 0` on all of R^d.
    /// For binomials the assertion is checked: a non-negative sop binomial
    /// has all exponents even, and a violation is rejected. For three or
    /// more terms no cheap test exists and the flag is stored as given.
    pub fn new(matrix: MultiIndexMatrix, nonneg: bool) -> Result<Self> {
        if matrix.term_count() < 2 {
            return Err(Error::Invalid(
                "a sop polynomial needs at least two terms".into(),
            ));
        }
        if nonneg && matrix.term_count() == 2 {
            for j in 0..2 {
                for h in 0..matrix.var_count() {
                    if (matrix.entry(h, j) % Nat::from(2u32)) == Nat::one() {
                        return Err(Error::Invalid(format!(
                            "exponent of w{} in term {} is odd; \
                             a non-negative sop binomial has even exponents only",
                            h + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(Self {
            matrix,
            nonneg_asserted: nonneg,
        })
    }

    pub fn from_u64(cols: &[&[u64]], nonneg: bool) -> Result<Self> {
        Self::new(MultiIndexMatrix::from_u64(cols)?, nonneg)
    }

    /// Row-per-variable layout.
    pub fn from_rows_u64(rows: &[&[u64]], nonneg: bool) -> Result<Self> {
        Self::new(MultiIndexMatrix::from_rows_u64(rows)?, nonneg)
    }

    pub fn matrix(&self) -> &MultiIndexMatrix {
        &self.matrix
    }

    pub fn nonneg_asserted(&self) -> bool {
        self.nonneg_asserted
    }

    pub fn var_count(&self) -> usize {
        self.matrix.var_count()
    }

    pub fn term_count(&self) -> usize {
        self.matrix.term_count()
    }

    pub fn is_binomial(&self) -> bool {
        self.matrix.term_count() == 2
    }

    fn require_binomial(&self) -> Result<()> {
        if !self.is_binomial() {
            return Err(Error::Invalid(format!(
                "operation requires a binomial, got {} terms",
                self.term_count()
            )));
        }
        Ok(())
    }

    /// The D-statistic of a binomial: `a_{*1} - a_{*2}`.
    pub fn d_statistic(&self) -> Result<Vec<Int>> {
        self.require_binomial()?;
        Ok(self.matrix.col_diff(0, 1))
    }

    /// Bivariate scalar form `(p-q)(r-s)`, the product of the two
    /// D-statistic components.
    pub fn d_statistic_scalar(&self) -> Result<Int> {
        self.require_binomial()?;
        if self.var_count() != 2 {
            return Err(Error::Invalid(
                "the scalar D-statistic is defined for two variables".into(),
            ));
        }
        let d = self.matrix.col_diff(0, 1);
        Ok(&d[0] * &d[1])
    }

    /// A binomial is normal crossing iff one exponent column dominates the
    /// other componentwise (equivalently, the D-statistic is >= 0 or <= 0).
    pub fn is_normal_crossing_binomial(&self) -> Result<bool> {
        self.require_binomial()?;
        Ok(self.matrix.col_le(0, 1) || self.matrix.col_le(1, 0))
    }

    /// Local normal crossing near the origin: some column is componentwise
    /// <= every other column.
    pub fn is_local_normal_crossing(&self) -> bool {
        self.matrix.dominated_column().is_some()
    }

    /// Splits a binomial as `common * (p1 + p2)` with `p1`, `p2` coprime
    /// monomials (disjoint supports).
    pub fn factorize(&self) -> Result<Factorization> {
        self.require_binomial()?;
        let common = self.matrix.min_column();
        let sub = |j: usize| -> Vec<Nat> {
            self.matrix
                .col(j)
                .iter()
                .zip(&common)
                .map(|(a, c)| a - c)
                .collect()
        };
        let (p1, p2) = (sub(0), sub(1));
        Ok(Factorization { common, p1, p2 })
    }

    /// Rebuilds from a transformed matrix, keeping the assertion flag.
    pub(crate) fn with_matrix(&self, matrix: MultiIndexMatrix) -> Self {
        Self {
            matrix,
            nonneg_asserted: self.nonneg_asserted,
        }
    }

    /// The binomial formed by term columns `t1` and `t2` (0-indexed).
    pub fn pair_binomial(&self, t1: usize, t2: usize) -> Result<SopPolynomial> {
        let d = self.var_count();
        let m = MultiIndexMatrix::new(
            d,
            vec![self.matrix.col(t1).to_vec(), self.matrix.col(t2).to_vec()],
        )?;
        // Sub-binomials of non-negative polynomials need not be non-negative.
        SopPolynomial::new(m, false)
    }

    pub fn to_general(&self) -> GeneralPolynomial {
        GeneralPolynomial {
            d: self.var_count(),
            terms: self
                .matrix
                .cols()
                .iter()
                .map(|c| (Rat::one(), c.clone()))
                .collect(),
        }
    }
}

impl std::fmt::Display for SopPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_general())
    }
}

/// Common factor and coprime parts of a binomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub common: Vec<Nat>,
    pub p1: Vec<Nat>,
    pub p2: Vec<Nat>,
}

/// Picks the variable with the maximum exponent of a monomial; ties go to
/// the smallest index. `None` for the empty monomial.
pub fn argmax_degree(mono: &[Nat]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (h, e) in mono.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        match best {
            Some(b) if mono[b] >= *e => {}
            _ => best = Some(h),
        }
    }
    best
}

/// Picks the variable with the minimum positive exponent; ties go to the
/// smallest index.
pub fn argmin_degree(mono: &[Nat]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (h, e) in mono.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        match best {
            Some(b) if mono[b] <= *e => {}
            _ => best = Some(h),
        }
    }
    best
}

/// A polynomial with non-zero rational coefficients and pairwise distinct
/// multi-indexes. Term order is the construction order; merging a duplicate
/// multi-index folds into the earlier position, and terms whose coefficient
/// cancels to zero are removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPolynomial {
    d: usize,
    terms: Vec<(Rat, Vec<Nat>)>,
}

impl GeneralPolynomial {
    pub fn new(d: usize, terms: Vec<(Rat, Vec<Nat>)>) -> Result<Self> {
        let mut acc = TermAccumulator::new(d);
        for (c, e) in terms {
            if e.len() != d {
                return Err(Error::Invalid(format!(
                    "multi-index of length {} in a {d}-variable polynomial",
                    e.len()
                )));
            }
            acc.add(c, e);
        }
        Ok(acc.finish())
    }

    pub fn zero(d: usize) -> Self {
        Self { d, terms: vec![] }
    }

    pub fn constant(d: usize, c: Rat) -> Self {
        if c.is_zero() {
            Self::zero(d)
        } else {
            Self {
                d,
                terms: vec![(c, vec![Nat::zero(); d])],
            }
        }
    }

    /// The monomial `c * w^exps`.
    pub fn monomial(d: usize, c: Rat, exps: Vec<Nat>) -> Self {
        assert_eq!(exps.len(), d);
        if c.is_zero() {
            Self::zero(d)
        } else {
            Self {
                d,
                terms: vec![(c, exps)],
            }
        }
    }

    pub fn var(d: usize, h: usize) -> Self {
        let mut exps = vec![Nat::zero(); d];
        exps[h] = Nat::one();
        Self::monomial(d, Rat::one(), exps)
    }

    pub fn var_count(&self) -> usize {
        self.d
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Rat, Vec<Nat>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Option<&Rat> {
        self.terms
            .iter()
            .find(|(_, e)| e.iter().all(|x| x.is_zero()))
            .map(|(c, _)| c)
    }

    /// Exponent columns as a multi-index matrix (coefficients discarded).
    pub fn multi_index_matrix(&self) -> Result<MultiIndexMatrix> {
        if self.terms.is_empty() {
            return Err(Error::Invalid(
                "the zero polynomial has no multi-index matrix".into(),
            ));
        }
        MultiIndexMatrix::new(self.d, self.terms.iter().map(|(_, e)| e.clone()).collect())
    }

    pub fn is_local_normal_crossing(&self) -> Result<bool> {
        Ok(self.multi_index_matrix()?.dominated_column().is_some())
    }

    /// Conversion to a sop polynomial; requires every coefficient to be 1.
    pub fn to_sop(&self, nonneg: bool) -> Result<SopPolynomial> {
        for (c, _) in &self.terms {
            if !c.is_one() {
                return Err(Error::Invalid(format!(
                    "coefficient {} is not 1; not a sum-of-products polynomial",
                    format_rat(c)
                )));
            }
        }
        SopPolynomial::new(self.multi_index_matrix()?, nonneg)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut acc = TermAccumulator::new(self.d);
        for (c, e) in self.terms.iter().chain(&other.terms) {
            acc.add(c.clone(), e.clone());
        }
        acc.finish()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero(self.d);
        }
        Self {
            d: self.d,
            terms: self.terms.iter().map(|(c, e)| (c * k, e.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut acc = TermAccumulator::new(self.d);
        for (c1, e1) in &self.terms {
            for (c2, e2) in &other.terms {
                let exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                acc.add(c1 * c2, exps);
            }
        }
        acc.finish()
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::constant(self.d, Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        assert_eq!(point.len(), self.d);
        let mut total = Rat::zero();
        for (c, exps) in &self.terms {
            let mut term = c.clone();
            for (p, e) in point.iter().zip(exps) {
                let e = crate::rational::nat_to_u64(e)?;
                let mut pw = Rat::one();
                for _ in 0..e {
                    pw *= p;
                }
                term *= pw;
            }
            total += term;
        }
        Ok(total)
    }
}

impl std::fmt::Display for GeneralPolynomial {
    /// Text form accepted by the parser: `+`/`-` separated terms, factors
    /// joined by `*`, `^1` omitted, coefficient omitted when it is 1.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, exps)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || exps.iter().all(|e| e.is_zero()) {
                factors.push(format_rat(&abs));
            }
            for (h, e) in exps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if e.is_one() {
                    factors.push(format!("w{}", h + 1));
                } else {
                    factors.push(format!("w{}^{}", h + 1, e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Order-preserving term merger.
pub(crate) struct TermAccumulator {
    d: usize,
    order: Vec<Vec<Nat>>,
    coeff: HashMap<Vec<Nat>, Rat>,
}

impl TermAccumulator {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            order: Vec::new(),
            coeff: HashMap::new(),
        }
    }

    pub fn add(&mut self, c: Rat, exps: Vec<Nat>) {
        if c.is_zero() {
            return;
        }
        match self.coeff.get_mut(&exps) {
            Some(existing) => *existing += c,
            None => {
                self.coeff.insert(exps.clone(), c);
                self.order.push(exps);
            }
        }
    }

    pub fn add_poly(&mut self, p: &GeneralPolynomial) {
        for (c, e) in &p.terms {
            self.add(c.clone(), e.clone());
        }
    }

    pub fn finish(mut self) -> GeneralPolynomial {
        let mut terms = Vec::with_capacity(self.order.len());
        for exps in self.order {
            if let Some(c) = self.coeff.remove(&exps) {
                if !c.is_zero() {
                    terms.push((c, exps));
                }
            }
        }
        GeneralPolynomial { d: self.d, terms }
    }
}

/// The monomial `g(w) = w^(s-1)` attached to the prior and accumulated
/// Jacobians. Every `s_h` is positive; under the substitution
/// `w_i <- w_i w_j` the Jacobian factor makes `s` transform exactly like an
/// exponent column: `s_j += s_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterMonomial {
    s: Vec<Rat>,
}

impl OuterMonomial {
    pub fn new(s: Vec<Rat>) -> Result<Self> {
        if s.iter().any(|x| !x.is_positive()) {
            return Err(Error::Invalid(
                "outer monomial exponents s must all be positive".into(),
            ));
        }
        Ok(Self { s })
    }

    /// `g = 1`, i.e. `s = (1, ..., 1)`.
    pub fn trivial(d: usize) -> Self {
        Self {
            s: vec![Rat::one(); d],
        }
    }

    pub fn s(&self) -> &[Rat] {
        &self.s
    }

    pub fn var_count(&self) -> usize {
        self.s.len()
    }

    pub(crate) fn substitute(&mut self, i: usize, j: usize) {
        let add = self.s[i].clone();
        self.s[j] += add;
    }
}

impl std::fmt::Display for OuterMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (h, sh) in self.s.iter().enumerate() {
            let e = sh - Rat::one();
            if e.is_zero() {
                continue;
            }
            if e.is_integer() {
                parts.push(format!("w{}^{}", h + 1, e.numer()));
            } else {
                parts.push(format!("w{}^({})", h + 1, format_rat(&e)));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Applies a blow matrix to a polynomial/outer pair: `A -> B^T A`,
/// `s -> B^T s`.
pub fn apply_blow_matrix(
    f: &SopPolynomial,
    g: &OuterMonomial,
    b: &crate::matrix::BlowMatrix,
) -> Result<(SopPolynomial, OuterMonomial)> {
    if b.dim() != f.var_count() || g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let inner = f.with_matrix(f.matrix().transformed(b));
    let outer = OuterMonomial::new(b.transpose_apply(g.s()))?;
    Ok((inner, outer))
}

/// True iff no variable occurs in both polynomials (disjoint row supports),
/// the certificate required by the sum/product RLCT combinators.
pub fn supports_disjoint(a: &SopPolynomial, b: &SopPolynomial) -> bool {
    if a.var_count() != b.var_count() {
        return false;
    }
    a.matrix()
        .row_support()
        .iter()
        .zip(b.matrix().row_support())
        .all(|(x, y)| !(*x && y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::BlowMatrix;
    use crate::rational::{nat, rat, rat_int};

    fn sop(rows: &[&[u64]]) -> SopPolynomial {
        SopPolynomial::from_rows_u64(rows, false).unwrap()
    }

    #[test]
    fn constructor_rejects_degenerate_inputs() {
        assert!(SopPolynomial::from_rows_u64(&[&[2], &[0]], false).is_err());
        assert!(SopPolynomial::from_rows_u64(&[&[2, 2], &[0, 0]], false).is_err());
        // Odd exponent with the non-negativity assertion on a binomial.
        assert!(SopPolynomial::from_rows_u64(&[&[3, 0], &[0, 4]], true).is_err());
        assert!(SopPolynomial::from_rows_u64(&[&[2, 0], &[0, 4]], true).is_ok());
        // With three or more terms only the assertion is recorded.
        assert!(SopPolynomial::from_rows_u64(&[&[2, 0, 1], &[0, 2, 1]], true).is_ok());
    }

    #[test]
    fn normal_crossing_binomial_examples() {
        assert!(!sop(&[&[2, 0], &[0, 4]])
            .is_normal_crossing_binomial()
            .unwrap());
        assert!(sop(&[&[2, 4], &[2, 4]])
            .is_normal_crossing_binomial()
            .unwrap());
        assert!(!sop(&[&[2, 6], &[4, 2]])
            .is_normal_crossing_binomial()
            .unwrap());
    }

    #[test]
    fn local_normal_crossing_examples() {
        assert!(sop(&[&[2, 2], &[0, 4]]).is_local_normal_crossing());
        assert!(!sop(&[&[2, 0], &[0, 4]]).is_local_normal_crossing());
        assert!(!sop(&[&[1, 2, 3], &[1, 1, 0]]).is_local_normal_crossing());
    }

    #[test]
    fn d_statistic_examples() {
        assert_eq!(
            sop(&[&[2, 0], &[0, 4]]).d_statistic().unwrap(),
            vec![Int::from(2), Int::from(-4)]
        );
        assert_eq!(
            sop(&[&[2, 0], &[0, 4]]).d_statistic_scalar().unwrap(),
            Int::from(-8)
        );
        assert_eq!(
            sop(&[&[6, 2], &[2, 2]]).d_statistic_scalar().unwrap(),
            Int::from(0)
        );
        assert_eq!(
            sop(&[&[4, 2], &[2, 6], &[0, 0]]).d_statistic().unwrap(),
            vec![Int::from(2), Int::from(-4), Int::from(0)]
        );
    }

    #[test]
    fn factorize_examples() {
        // w1^3 w2^5 + w1^6 w2
        let f = sop(&[&[3, 6], &[5, 1]]).factorize().unwrap();
        assert_eq!(f.common, vec![nat(3), nat(1)]);
        assert_eq!(f.p1, vec![nat(0), nat(4)]);
        assert_eq!(f.p2, vec![nat(3), nat(0)]);

        let f = sop(&[&[2, 2], &[4, 6]]).factorize().unwrap();
        assert_eq!(f.common, vec![nat(2), nat(4)]);
        assert_eq!(f.p1, vec![nat(0), nat(0)]);
        assert_eq!(f.p2, vec![nat(0), nat(2)]);

        let f = sop(&[&[2, 0], &[0, 4]]).factorize().unwrap();
        assert_eq!(f.common, vec![nat(0), nat(0)]);
        assert_eq!(f.p1, vec![nat(2), nat(0)]);
        assert_eq!(f.p2, vec![nat(0), nat(4)]);
    }

    #[test]
    fn apply_blow_matrix_examples() {
        let f = sop(&[&[2, 0], &[0, 4]]);
        let g = OuterMonomial::trivial(2);
        // Substitution w2 <- w2*w1, i.e. B = R_{21}, B^T = [[1,1],[0,1]].
        let b = BlowMatrix::elementary(2, 1, 0);
        let (f2, _) = apply_blow_matrix(&f, &g, &b).unwrap();
        assert_eq!(f2.matrix(), sop(&[&[2, 4], &[0, 4]]).matrix());

        let id = BlowMatrix::identity(2);
        let (f3, g3) = apply_blow_matrix(&f, &g, &id).unwrap();
        assert_eq!(f3, f);
        assert_eq!(g3, g);

        // Substitution w1 <- w1*w2 sends s = (1,1) to (1,2).
        let b = BlowMatrix::elementary(2, 0, 1);
        let (_, g4) = apply_blow_matrix(&f, &g, &b).unwrap();
        assert_eq!(g4.s(), &[rat_int(1), rat_int(2)]);
    }

    #[test]
    fn argmax_argmin_degree_tie_break() {
        let m = vec![nat(2), nat(4), nat(4), nat(0)];
        assert_eq!(argmax_degree(&m), Some(1));
        assert_eq!(argmin_degree(&m), Some(0));
        assert_eq!(argmax_degree(&[Nat::zero()]), None);
    }

    #[test]
    fn general_polynomial_merges_and_drops_zeros() {
        let p = GeneralPolynomial::new(
            2,
            vec![
                (rat_int(1), vec![nat(1), nat(0)]),
                (rat_int(2), vec![nat(0), nat(1)]),
                (rat_int(-1), vec![nat(1), nat(0)]),
            ],
        )
        .unwrap();
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.terms()[0].0, rat_int(2));
    }

    #[test]
    fn display_round_trip_shape() {
        let p = GeneralPolynomial::new(
            2,
            vec![
                (rat_int(1), vec![nat(2), nat(0)]),
                (rat(-3, 2), vec![nat(1), nat(1)]),
                (rat_int(5), vec![nat(0), nat(0)]),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "w1^2 - 3/2*w1*w2 + 5");
    }

    #[test]
    fn eval_and_mul() {
        // (w1 + w2)^2 = w1^2 + 2 w1 w2 + w2^2
        let p = GeneralPolynomial::var(2, 0).add(&GeneralPolynomial::var(2, 1));
        let sq = p.pow(2);
        assert_eq!(sq.term_count(), 3);
        assert_eq!(sq.eval(&[rat_int(2), rat_int(3)]).unwrap(), rat_int(25));
    }

    #[test]
    fn disjoint_supports() {
        let a = sop(&[&[2, 0], &[0, 4], &[0, 0], &[0, 0]]);
        let b = sop(&[&[0, 0], &[0, 0], &[2, 0], &[0, 2]]);
        let c = sop(&[&[0, 0], &[4, 0], &[0, 0], &[0, 2]]);
        assert!(supports_disjoint(&a, &b));
        assert!(!supports_disjoint(&a, &c));
    }
}
