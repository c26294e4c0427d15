//! Exact RLCTs of non-negative sop binomials.
//!
//! Three independent routes are exposed: the index-ratio / potential-ratio
//! closed form, the min/max-exponent closed form over crossing pairs, and
//! the blow-up tree (leafwise normal-crossing pole extraction). They agree
//! on every input; the tests sweep that equality.

use num_traits::{Signed, Zero};

use crate::blowup::{blowup_between_terms, BlowupNode, BlowupTree, Caps};
use crate::error::{Error, Result};
use crate::poly::{OuterMonomial, SopPolynomial};
use crate::rational::{rat_from_nat, Int, Lambda, Nat, Rat};

/// A lambda value plus, when it was read off normal-crossing leaves, the
/// order of the corresponding pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RlctValue {
    pub lambda: Lambda,
    pub multiplicity: Option<usize>,
}

impl RlctValue {
    /// Property of summation: for `K(w) = K_a(w_a) + K_b(w_b)` on disjoint
    /// variables, `lambda = lambda_a + lambda_b` and `m = m_a + m_b - 1`.
    /// Disjointness is the caller's certificate (`supports_disjoint`).
    pub fn sum_rule(&self, other: &RlctValue) -> RlctValue {
        let lambda = self.lambda.add(&other.lambda);
        let multiplicity = match (&lambda, self.multiplicity, other.multiplicity) {
            (Lambda::Finite(_), Some(a), Some(b)) => Some(a + b - 1),
            _ => None,
        };
        RlctValue {
            lambda,
            multiplicity,
        }
    }

    /// Property of product: for `K = K_a * K_b` on disjoint variables,
    /// `lambda = min(lambda_a, lambda_b)`; the multiplicity follows the
    /// attaining side, adding when both attain.
    pub fn product_rule(&self, other: &RlctValue) -> RlctValue {
        use std::cmp::Ordering::*;
        match self.lambda.cmp(&other.lambda) {
            Less => self.clone(),
            Greater => other.clone(),
            Equal => RlctValue {
                lambda: self.lambda.clone(),
                multiplicity: match (self.multiplicity, other.multiplicity) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                },
            },
        }
    }
}

/// Index ratios of a binomial pair: `rho_h = min(a_h1, a_h2)/s_h` and the
/// dual `nu_h = max(a_h1, a_h2)/s_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRatioSet {
    pub rho: Vec<Rat>,
    pub nu: Vec<Rat>,
}

pub fn index_ratios(f: &SopPolynomial, g: &OuterMonomial) -> Result<IndexRatioSet> {
    require_dims(f, g)?;
    let m = f.matrix();
    let mut rho = Vec::with_capacity(f.var_count());
    let mut nu = Vec::with_capacity(f.var_count());
    for h in 0..f.var_count() {
        let (a, b) = (m.entry(h, 0), m.entry(h, 1));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        rho.push(rat_from_nat(lo) / &g.s()[h]);
        nu.push(rat_from_nat(hi) / &g.s()[h]);
    }
    Ok(IndexRatioSet { rho, nu })
}

/// Bivariate left/right index ratios and their duals of a stem node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateRatios {
    pub rho_l: Rat,
    pub rho_r: Rat,
    pub nu_l: Rat,
    pub nu_r: Rat,
}

pub fn bivariate_ratios(f: &SopPolynomial, g: &OuterMonomial) -> Result<BivariateRatios> {
    if f.var_count() != 2 {
        return Err(Error::Invalid("left/right ratios need two variables".into()));
    }
    let r = index_ratios(f, g)?;
    Ok(BivariateRatios {
        rho_l: r.rho[0].clone(),
        rho_r: r.rho[1].clone(),
        nu_l: r.nu[0].clone(),
        nu_r: r.nu[1].clone(),
    })
}

/// Potential index ratios of a non-normal-crossing binomial pair:
/// `pi_{ij} = (p_i r'_j + r_i p_j + r_i r'_j) / (s_i r'_j + r_i s_j)` over
/// `I x J`, where `I` and `J` are the variables exclusive to each coprime
/// part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialRatioMatrix {
    /// Variables where term 1 has the larger exponent (0-indexed).
    pub rows: Vec<usize>,
    /// Variables where term 2 has the larger exponent.
    pub cols: Vec<usize>,
    /// `entries[a][b]` is the ratio for `(rows[a], cols[b])`.
    pub entries: Vec<Vec<Rat>>,
}

impl PotentialRatioMatrix {
    pub fn max(&self) -> Option<Rat> {
        self.entries.iter().flatten().max().cloned()
    }
}

pub fn potential_ratios(f: &SopPolynomial, g: &OuterMonomial) -> Result<PotentialRatioMatrix> {
    require_dims(f, g)?;
    if f.is_normal_crossing_binomial()? {
        return Err(Error::Invalid(
            "potential index ratios are defined for non-normal-crossing binomials".into(),
        ));
    }
    let m = f.matrix();
    let common = m.min_column();
    let diff = m.col_diff(0, 1);
    let rows: Vec<usize> = (0..f.var_count())
        .filter(|&h| diff[h].is_positive())
        .collect();
    let cols: Vec<usize> = (0..f.var_count())
        .filter(|&h| diff[h].is_negative())
        .collect();
    let s = g.s();
    let entries = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| {
                    let p_i = rat_from_nat(&common[i]);
                    let p_j = rat_from_nat(&common[j]);
                    let r_i = Rat::from_integer(diff[i].clone());
                    let r_j = Rat::from_integer(-diff[j].clone());
                    let num = &p_i * &r_j + &r_i * &p_j + &r_i * &r_j;
                    let den = &s[i] * &r_j + &r_i * &s[j];
                    num / den
                })
                .collect()
        })
        .collect();
    Ok(PotentialRatioMatrix {
        rows,
        cols,
        entries,
    })
}

/// RLCT of a normal crossing sop binomial: `1/lambda = max_h rho_h`, with
/// multiplicity the number of attaining variables; infinity when the
/// common factor is empty (the polynomial does not vanish at the origin).
pub fn rlct_normal_crossing(f: &SopPolynomial, g: &OuterMonomial) -> Result<RlctValue> {
    require_dims(f, g)?;
    if !f.is_normal_crossing_binomial()? {
        return Err(Error::Invalid(
            "not a normal crossing binomial; use rlct_binomial".into(),
        ));
    }
    let ratios = index_ratios(f, g)?.rho;
    Ok(rlct_from_ratios(&ratios))
}

fn rlct_from_ratios(rho: &[Rat]) -> RlctValue {
    let max = rho.iter().max().cloned().unwrap_or_else(Rat::zero);
    if max.is_zero() {
        return RlctValue {
            lambda: Lambda::Infinity,
            multiplicity: None,
        };
    }
    let count = rho.iter().filter(|r| **r == max).count();
    RlctValue {
        lambda: Lambda::Finite(max.recip()),
        multiplicity: Some(count),
    }
}

/// Exact RLCT of a non-negative sop binomial:
/// `1/lambda = max{ max rho, max pi }` (delegating to the normal-crossing
/// formula when one column dominates). Odd exponents are rejected, since
/// they contradict non-negativity.
pub fn rlct_binomial(f: &SopPolynomial, g: &OuterMonomial) -> Result<RlctValue> {
    require_even(f)?;
    require_dims(f, g)?;
    if f.is_normal_crossing_binomial()? {
        return rlct_normal_crossing(f, g);
    }
    let rho_max = index_ratios(f, g)?.rho.into_iter().max().unwrap();
    let pi_max = potential_ratios(f, g)?
        .max()
        .ok_or_else(|| Error::Internal("non-NC binomial with empty I x J".into()))?;
    let inv = rho_max.max(pi_max);
    Ok(RlctValue {
        lambda: Lambda::from_inverse(&inv),
        multiplicity: None,
    })
}

/// The min/max-exponent closed form:
/// `1/lambda = max{ max_h mu_h, max_{(h,h') in H} (nu_h nu_h' - mu_h mu_h')
/// / (nu_h + nu_h' - mu_h - mu_h') }`, where `H` ranges over pairs of
/// variables whose exponent differences have strictly opposite signs (one
/// larger in term 1, the other larger in term 2; same-side pairs correspond
/// to infeasible LP bases and are excluded).
pub fn rlct_binomial_closed_form(f: &SopPolynomial, g: &OuterMonomial) -> Result<Lambda> {
    require_even(f)?;
    require_dims(f, g)?;
    let ratios = index_ratios(f, g)?;
    let diff = f.matrix().col_diff(0, 1);
    let mut inv = ratios.rho.iter().max().cloned().unwrap();
    for h in 0..f.var_count() {
        for h2 in 0..f.var_count() {
            if !(diff[h].is_positive() && diff[h2].is_negative()) {
                continue;
            }
            let (mu_a, nu_a) = (&ratios.rho[h], &ratios.nu[h]);
            let (mu_b, nu_b) = (&ratios.rho[h2], &ratios.nu[h2]);
            let num = nu_a * nu_b - mu_a * mu_b;
            let den = nu_a + nu_b - mu_a - mu_b;
            debug_assert!(den.is_positive());
            let cand = num / den;
            if cand > inv {
                inv = cand;
            }
        }
    }
    Ok(Lambda::from_inverse(&inv))
}

/// Reads the RLCT and multiplicity off the normal-crossing leaves of a
/// blow-up tree: `1/lambda` is the largest leaf index ratio, and the
/// multiplicity is the largest attaining-coordinate count among leaves
/// attaining `lambda`.
pub fn rlct_from_tree(tree: &BlowupTree) -> Result<RlctValue> {
    let mut best: Option<Rat> = None;
    let mut best_count = 0usize;
    for id in tree.leaves() {
        let node = tree.node(id);
        if !node.inner.is_normal_crossing_binomial()? {
            return Err(Error::Internal("tree has a non-NC leaf".into()));
        }
        let rho = index_ratios(&node.inner, &node.outer)?.rho;
        let leaf_max = rho.iter().max().cloned().unwrap();
        if leaf_max.is_zero() {
            continue;
        }
        let count = rho.iter().filter(|r| **r == leaf_max).count();
        match &best {
            Some(b) if *b > leaf_max => {}
            Some(b) if *b == leaf_max => best_count = best_count.max(count),
            _ => {
                best = Some(leaf_max);
                best_count = count;
            }
        }
    }
    Ok(match best {
        Some(inv) => RlctValue {
            lambda: Lambda::Finite(inv.recip()),
            multiplicity: Some(best_count),
        },
        None => RlctValue {
            lambda: Lambda::Infinity,
            multiplicity: None,
        },
    })
}

/// RLCT via the blow-up-between-terms tree. Agrees with `rlct_binomial`
/// on every non-negative sop binomial.
pub fn rlct_via_tree(f: &SopPolynomial, g: &OuterMonomial, caps: Caps) -> Result<RlctValue> {
    require_even(f)?;
    let tree = blowup_between_terms(f, g, caps)?;
    rlct_from_tree(&tree)
}

/// Tree recovery for sign-indefinite binomials (the legacy exclusive-sop
/// trees, integrated over `{K >= 0}`). A leaf factor `1 + w^u` with an odd
/// component of `u` vanishes to first order on a smooth hypersurface away
/// from the coordinate planes, adding a pole candidate `lambda = 1` that
/// the origin index ratios cannot see. Even-exponent factors stay positive
/// and contribute nothing extra, so this coincides with `rlct_from_tree`
/// on non-negative inputs.
pub fn rlct_from_tree_signed(tree: &BlowupTree) -> Result<Lambda> {
    let origin = rlct_from_tree(tree)?.lambda;
    let two = Int::from(2);
    for id in tree.leaves() {
        let diff = tree.node(id).inner.matrix().col_diff(0, 1);
        if diff.iter().any(|x| !(x % &two).is_zero()) {
            return Ok(origin.min(Lambda::Finite(Rat::from_integer(Int::from(1)))));
        }
    }
    Ok(origin)
}

/// The stem invariant `a(p r' + r q + r r') + b(s q - (p + r) t) +
/// c(s r' + r t)` of a bivariate stem node written as
/// `w1^p w2^q (w1^r + w2^r')` with outer `w1^(s-1) w2^(t-1)`. Constant
/// along every stem of a bivariate between-variables tree.
pub fn invariant_value(node: &BlowupNode, a: &Rat, b: &Rat, c: &Rat) -> Result<Rat> {
    let f = &node.inner;
    if f.var_count() != 2 || !f.is_binomial() {
        return Err(Error::Invalid(
            "the invariant is defined for bivariate binomial nodes".into(),
        ));
    }
    let m = f.matrix();
    let diff = m.col_diff(0, 1);
    if (diff[0].is_positive() && diff[1].is_positive())
        || (diff[0].is_negative() && diff[1].is_negative())
    {
        return Err(Error::Invalid(
            "node is not in stem form w1^p w2^q (w1^r + w2^r')".into(),
        ));
    }
    let common = m.min_column();
    let p = rat_from_nat(&common[0]);
    let q = rat_from_nat(&common[1]);
    let r = Rat::from_integer(diff[0].abs());
    let rp = Rat::from_integer(diff[1].abs());
    let s = node.outer.s()[0].clone();
    let t = node.outer.s()[1].clone();
    Ok(a * (&p * &rp + &r * &q + &r * &rp) + b * (&s * &q - (&p + &r) * &t)
        + c * (&s * &rp + &r * &t))
}

/// `rho_n^* = (p0 r'0 + r0 q0 + r0 r'0) / (s0 r'0 + r0 t0)` computed from a
/// root node: the index ratio reached at the deepest stem leaf.
pub fn stem_terminal_ratio(node: &BlowupNode) -> Result<Rat> {
    let num = invariant_value(node, &Rat::from_integer(Int::from(1)), &Rat::zero(), &Rat::zero())?;
    let den = invariant_value(node, &Rat::zero(), &Rat::zero(), &Rat::from_integer(Int::from(1)))?;
    if den.is_zero() {
        return Err(Error::Invalid("degenerate stem (r = r' = 0)".into()));
    }
    Ok(num / den)
}

fn require_dims(f: &SopPolynomial, g: &OuterMonomial) -> Result<()> {
    if !f.is_binomial() {
        return Err(Error::Invalid(format!(
            "expected a binomial, got {} terms",
            f.term_count()
        )));
    }
    if g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    Ok(())
}

fn require_even(f: &SopPolynomial) -> Result<()> {
    if !f.is_binomial() {
        return Err(Error::Invalid(format!(
            "expected a binomial, got {} terms",
            f.term_count()
        )));
    }
    let two = Nat::from(2u32);
    for j in 0..2 {
        for h in 0..f.var_count() {
            if !(f.matrix().entry(h, j) % &two).is_zero() {
                return Err(Error::Invalid(
                    "odd exponent: the binomial cannot be non-negative".into(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn sop(rows: &[&[u64]]) -> SopPolynomial {
        SopPolynomial::from_rows_u64(rows, true).unwrap()
    }

    fn s1(d: usize) -> OuterMonomial {
        OuterMonomial::trivial(d)
    }

    #[test]
    fn nc_rlct_examples() {
        // w1^2 w2^4 (1 + w1^2 w2^2): lambda = 1/4, multiplicity 1.
        let f = sop(&[&[2, 4], &[4, 6]]);
        let v = rlct_normal_crossing(&f, &s1(2)).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat(1, 4)));
        assert_eq!(v.multiplicity, Some(1));

        // Same f with s = (2, 1): 1/lambda = max(2/2, 4/1) = 4.
        let g = OuterMonomial::new(vec![rat_int(2), rat_int(1)]).unwrap();
        let v = rlct_normal_crossing(&f, &g).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat(1, 4)));

        // Empty common factor: 1 + w1^2 w2^2 never vanishes near 0.
        let f = sop(&[&[0, 2], &[0, 2]]);
        let v = rlct_normal_crossing(&f, &s1(2)).unwrap();
        assert_eq!(v.lambda, Lambda::Infinity);
        assert_eq!(v.multiplicity, None);

        assert!(rlct_normal_crossing(&sop(&[&[2, 0], &[0, 4]]), &s1(2)).is_err());
    }

    #[test]
    fn potential_ratio_examples() {
        let f = sop(&[&[2, 0], &[0, 4]]);
        let p = potential_ratios(&f, &s1(2)).unwrap();
        assert_eq!(p.rows, vec![0]);
        assert_eq!(p.cols, vec![1]);
        assert_eq!(p.entries[0][0], rat(4, 3));

        let f = sop(&[&[2, 0], &[0, 2]]);
        let p = potential_ratios(&f, &s1(2)).unwrap();
        assert_eq!(p.entries[0][0], rat_int(1));

        // w1^2 w3^2 + w2^4: I = {w1, w3}, J = {w2}, both entries 4/3.
        let f = sop(&[&[2, 0], &[0, 4], &[2, 0]]);
        let p = potential_ratios(&f, &s1(3)).unwrap();
        assert_eq!(p.rows, vec![0, 2]);
        assert_eq!(p.cols, vec![1]);
        assert_eq!(p.entries[0][0], rat(4, 3));
        assert_eq!(p.entries[1][0], rat(4, 3));

        assert!(potential_ratios(&sop(&[&[2, 4], &[2, 6]]), &s1(2)).is_err());
    }

    #[test]
    fn rlct_binomial_examples() {
        let v = rlct_binomial(&sop(&[&[2, 0], &[0, 4]]), &s1(2)).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat(3, 4)));

        let v = rlct_binomial(&sop(&[&[2, 0], &[0, 2]]), &s1(2)).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat_int(1)));

        // w1^2 w2^2 + w1^4: non-NC, lambda = 1/2; the tree agrees.
        let f = sop(&[&[2, 4], &[2, 0]]);
        let v = rlct_binomial(&f, &s1(2)).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat(1, 2)));
        let w = rlct_via_tree(&f, &s1(2), Caps::default()).unwrap();
        assert_eq!(w.lambda, v.lambda);

        let odd = SopPolynomial::from_rows_u64(&[&[3, 0], &[0, 4]], false).unwrap();
        assert!(rlct_binomial(&odd, &s1(2)).is_err());
    }

    #[test]
    fn closed_form_matches_ratio_route() {
        for cols in [
            [[2u64, 0], [0, 4]],
            [[2, 0], [0, 2]],
            [[2, 4], [2, 0]],
            [[4, 6], [2, 2]],
            [[2, 4], [4, 6]],
        ] {
            let f = sop(&[&cols[0], &cols[1]]);
            let a = rlct_binomial(&f, &s1(2)).unwrap().lambda;
            let b = rlct_binomial_closed_form(&f, &s1(2)).unwrap();
            assert_eq!(a, b, "mismatch on {cols:?}");
        }
    }

    #[test]
    fn tree_route_examples() {
        let v = rlct_via_tree(&sop(&[&[2, 0], &[0, 4]]), &s1(2), Caps::default()).unwrap();
        assert_eq!(v.lambda, Lambda::Finite(rat(3, 4)));
        assert_eq!(v.multiplicity, Some(1));

        // NC input goes through the same leaf formula.
        let f = sop(&[&[2, 4], &[4, 6]]);
        let v = rlct_via_tree(&f, &s1(2), Caps::default()).unwrap();
        assert_eq!(v, rlct_normal_crossing(&f, &s1(2)).unwrap());
    }

    #[test]
    fn invariant_value_examples() {
        let f = sop(&[&[2, 0], &[0, 4]]);
        let tree = crate::blowup::blowup_between_variables(&f, Caps::default()).unwrap();
        let root = tree.root();
        let one = rat_int(1);
        let zero = Rat::zero();
        assert_eq!(invariant_value(root, &one, &zero, &zero).unwrap(), rat_int(8));
        assert_eq!(invariant_value(root, &zero, &zero, &one).unwrap(), rat_int(6));
        assert_eq!(invariant_value(root, &zero, &zero, &zero).unwrap(), rat_int(0));
        assert_eq!(stem_terminal_ratio(root).unwrap(), rat(4, 3));
    }

    #[test]
    fn combinators() {
        let a = RlctValue {
            lambda: Lambda::Finite(rat(1, 2)),
            multiplicity: Some(1),
        };
        let b = RlctValue {
            lambda: Lambda::Finite(rat(1, 4)),
            multiplicity: Some(2),
        };
        let s = a.sum_rule(&b);
        assert_eq!(s.lambda, Lambda::Finite(rat(3, 4)));
        assert_eq!(s.multiplicity, Some(2));
        let p = a.product_rule(&b);
        assert_eq!(p.lambda, Lambda::Finite(rat(1, 4)));
        assert_eq!(p.multiplicity, Some(2));
        let p = a.product_rule(&a);
        assert_eq!(p.multiplicity, Some(2));
        let inf = RlctValue {
            lambda: Lambda::Infinity,
            multiplicity: None,
        };
        assert_eq!(a.sum_rule(&inf).lambda, Lambda::Infinity);
        assert_eq!(a.product_rule(&inf).lambda, a.lambda);
    }
}
