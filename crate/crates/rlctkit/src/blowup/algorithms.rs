//! The five tree-building algorithms.
//!
//! Three proposed algorithms: blow-up between variables (with Jacobian),
//! blow-up between terms, and local-normal-crossing blow-up; plus the two
//! legacy selective algorithms (minimum / maximum degree). All use FIFO
//! queues. A defensive node cap converts bugs into diagnostics rather than
//! hangs; for the legacy algorithms hitting the cap is a normal outcome.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use super::BlowupTree;
use crate::error::{Error, Result};
use crate::matrix::MultiIndexMatrix;
use crate::poly::{argmax_degree, argmin_degree, OuterMonomial, SopPolynomial};
use crate::rational::{Int, Nat};

/// Resource limits for tree construction.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_nodes: 1_000_000,
        }
    }
}

impl Caps {
    pub fn new(max_nodes: usize) -> Self {
        Self { max_nodes }
    }
}

fn pair_diff(m: &MultiIndexMatrix, h: usize, t1: usize, t2: usize) -> Int {
    Int::from(m.entry(h, t1).clone()) - Int::from(m.entry(h, t2).clone())
}

/// True while the pair still crosses: the two center variables carry
/// exponent differences of strictly opposite signs.
fn pair_crosses(m: &MultiIndexMatrix, i: usize, j: usize, t1: usize, t2: usize) -> bool {
    let di = pair_diff(m, i, t1, t2);
    let dj = pair_diff(m, j, t1, t2);
    (di.is_positive() && dj.is_negative()) || (di.is_negative() && dj.is_positive())
}

/// Repeated blow-up centered on `{w_i = w_j = 0}` below `root`, splitting a
/// node while the exponent columns `t1`, `t2` of its inner polynomial still
/// cross in the pair. Returns the pair-resolved leaves in FIFO order.
fn expand_pair(
    tree: &mut BlowupTree,
    root: usize,
    i: usize,
    j: usize,
    t1: usize,
    t2: usize,
    caps: Caps,
) -> Result<Vec<usize>> {
    let mut queue = VecDeque::from([root]);
    let mut leaves = Vec::new();
    while let Some(v) = queue.pop_front() {
        if pair_crosses(tree.node(v).inner.matrix(), i, j, t1, t2) {
            if tree.len() + 2 > caps.max_nodes {
                return Err(Error::NodeCap(caps.max_nodes));
            }
            let c1 = tree.add_child(v, i, j);
            let c2 = tree.add_child(v, j, i);
            queue.push_back(c1);
            queue.push_back(c2);
        } else {
            leaves.push(v);
        }
    }
    Ok(leaves)
}

/// Between-terms expansion of the column pair (`t1`, `t2`) below `root`:
/// repeatedly factor out the common part, pick the maximum-degree variable
/// of each coprime part, and run a pair expansion, until the pair is
/// normally crossing (one column dominates). Returns those final leaves.
fn expand_between_terms_on_pair(
    tree: &mut BlowupTree,
    root: usize,
    t1: usize,
    t2: usize,
    caps: Caps,
) -> Result<Vec<usize>> {
    let mut queue = VecDeque::from([root]);
    let mut finished = Vec::new();
    while let Some(v) = queue.pop_front() {
        let m = tree.node(v).inner.matrix();
        let d = m.var_count();
        let mut p1 = Vec::with_capacity(d);
        let mut p2 = Vec::with_capacity(d);
        for h in 0..d {
            let diff = pair_diff(m, h, t1, t2);
            if diff.is_positive() {
                p1.push(diff.to_biguint().expect("positive"));
                p2.push(Nat::zero());
            } else {
                p1.push(Nat::zero());
                p2.push((-diff).to_biguint().expect("non-negative"));
            }
        }
        let (Some(s1), Some(s2)) = (argmax_degree(&p1), argmax_degree(&p2)) else {
            // One column dominates the other: the pair is normal crossing.
            finished.push(v);
            continue;
        };
        let sub_leaves = expand_pair(tree, v, s1, s2, t1, t2, caps)?;
        queue.extend(sub_leaves);
    }
    Ok(finished)
}

/// Blow-up between variables for a non-negative bivariate sop binomial
/// (blow-ups centered on the origin until every leaf is normal crossing).
pub fn blowup_between_variables(f: &SopPolynomial, caps: Caps) -> Result<BlowupTree> {
    if f.var_count() != 2 || !f.is_binomial() {
        return Err(Error::Invalid(
            "blow-up between variables expects a bivariate binomial".into(),
        ));
    }
    blowup_between_variables_with_jacobian(f, &OuterMonomial::trivial(2), 0, 1, caps)
}

/// Blow-up between variables with Jacobian tracking, centered on
/// `{w_i = w_j = 0}` (0-indexed variables).
pub fn blowup_between_variables_with_jacobian(
    f: &SopPolynomial,
    g: &OuterMonomial,
    i: usize,
    j: usize,
    caps: Caps,
) -> Result<BlowupTree> {
    if !f.is_binomial() {
        return Err(Error::Invalid(
            "blow-up between variables expects a binomial".into(),
        ));
    }
    let d = f.var_count();
    if i == j || i >= d || j >= d || g.var_count() != d {
        return Err(Error::Invalid("bad blow-up center".into()));
    }
    let mut tree = BlowupTree::new_root(f.clone(), g.clone());
    expand_pair(&mut tree, 0, i, j, 0, 1, caps)?;
    Ok(tree)
}

/// Blow-up between terms for a sop binomial: every leaf's inner polynomial
/// is normal crossing.
pub fn blowup_between_terms(
    f: &SopPolynomial,
    g: &OuterMonomial,
    caps: Caps,
) -> Result<BlowupTree> {
    if !f.is_binomial() {
        return Err(Error::Invalid(
            "blow-up between terms expects a binomial".into(),
        ));
    }
    if g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let mut tree = BlowupTree::new_root(f.clone(), g.clone());
    expand_between_terms_on_pair(&mut tree, 0, 0, 1, caps)?;
    Ok(tree)
}

/// Local-normal-crossing blow-up for a sop polynomial: every leaf's inner
/// polynomial has a column dominated by no other (is LNC). Counters follow
/// the pseudo-code exactly: after resolving the pair (n1, n2), the counter
/// of the non-dominated side moves to `max(n1, n2) + 1`.
pub fn local_nc_blowup(f: &SopPolynomial, g: &OuterMonomial, caps: Caps) -> Result<BlowupTree> {
    if g.var_count() != f.var_count() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let n = f.term_count();
    let mut tree = BlowupTree::new_root(f.clone(), g.clone());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if tree.node(v).inner.is_local_normal_crossing() {
            continue;
        }
        let (n1, n2) = tree.node(v).counters;
        if n1.max(n2) > n {
            return Err(Error::Internal(format!(
                "counter {} exceeded term count {n} on a non-LNC node",
                n1.max(n2)
            )));
        }
        let (t1, t2) = (n1 - 1, n2 - 1);
        let resolved = expand_between_terms_on_pair(&mut tree, v, t1, t2, caps)?;
        for leaf in resolved {
            let m = tree.node(leaf).inner.matrix();
            let counters = if m.col_le(t1, t2) {
                (n1, n1.max(n2) + 1)
            } else if m.col_le(t2, t1) {
                (n1.max(n2) + 1, n2)
            } else {
                return Err(Error::Internal(
                    "pair not resolved after between-terms expansion".into(),
                ));
            };
            tree.set_counters(leaf, counters);
            queue.push_back(leaf);
        }
    }
    Ok(tree)
}

/// Outcome of the legacy selective algorithms: reaching the node cap is a
/// report, not a failure (minimum-degree selection is known not to halt on
/// some inputs).
#[derive(Clone, Debug)]
pub enum SelectiveOutcome {
    Halted(BlowupTree),
    CapReached { partial: BlowupTree, cap: usize },
}

impl SelectiveOutcome {
    pub fn tree(&self) -> &BlowupTree {
        match self {
            SelectiveOutcome::Halted(t) => t,
            SelectiveOutcome::CapReached { partial, .. } => partial,
        }
    }

    pub fn halted(&self) -> bool {
        matches!(self, SelectiveOutcome::Halted(_))
    }
}

fn selective(
    f: &SopPolynomial,
    caps: Caps,
    pick: impl Fn(&[Nat]) -> Option<usize>,
) -> Result<SelectiveOutcome> {
    if !f.is_binomial() {
        return Err(Error::Invalid(
            "selective blow-up expects a binomial".into(),
        ));
    }
    let g = OuterMonomial::trivial(f.var_count());
    let mut tree = BlowupTree::new_root(f.clone(), g);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if tree.node(v).inner.is_normal_crossing_binomial()? {
            continue;
        }
        if tree.len() + 2 > caps.max_nodes {
            return Ok(SelectiveOutcome::CapReached {
                partial: tree,
                cap: caps.max_nodes,
            });
        }
        let fact = tree.node(v).inner.factorize()?;
        let s1 = pick(&fact.p1).ok_or_else(|| Error::Internal("empty coprime part".into()))?;
        let s2 = pick(&fact.p2).ok_or_else(|| Error::Internal("empty coprime part".into()))?;
        let c1 = tree.add_child(v, s1, s2);
        let c2 = tree.add_child(v, s2, s1);
        queue.push_back(c1);
        queue.push_back(c2);
    }
    Ok(SelectiveOutcome::Halted(tree))
}

/// Minimum degree selective blow-up (legacy). Proven to halt on the class
/// `F` of triple exclusive sop binomials; outside it the node cap may be
/// reached.
pub fn min_degree_selective(f: &SopPolynomial, caps: Caps) -> Result<SelectiveOutcome> {
    selective(f, caps, argmin_degree)
}

/// Maximum degree selective blow-up (legacy).
pub fn max_degree_selective(f: &SopPolynomial, caps: Caps) -> Result<SelectiveOutcome> {
    selective(f, caps, argmax_degree)
}

/// Membership in the proven halting domains of the legacy algorithms.
/// `in_f` is the minimum-degree set `F` (exclusive triple binomial with one
/// term of degree <= 1 in every variable); `in_g_prime` is the
/// maximum-degree set `G'` (exclusive triple binomial with all exponents
/// <= 3 and at least one exponent exactly 1). The maximum-degree theorem
/// covers `G' \ F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleSopClass {
    pub in_f: bool,
    pub in_g_prime: bool,
}

impl TripleSopClass {
    pub fn outside_proven_domain(&self) -> bool {
        !self.in_f && !self.in_g_prime
    }
}

pub fn classify_exclusive_triple(f: &SopPolynomial) -> Result<TripleSopClass> {
    if !f.is_binomial() {
        return Err(Error::Invalid("classification expects a binomial".into()));
    }
    let m = f.matrix();
    let col1 = m.col(0);
    let col2 = m.col(1);
    let exclusive = col1
        .iter()
        .zip(col2)
        .all(|(a, b)| a.is_zero() || b.is_zero());
    let vars = |c: &[Nat]| c.iter().filter(|e| !e.is_zero()).count();
    let triple = vars(col1) <= 3 && vars(col2) <= 3;
    if !(exclusive && triple) {
        return Ok(TripleSopClass {
            in_f: false,
            in_g_prime: false,
        });
    }
    let one = Nat::from(1u32);
    let three = Nat::from(3u32);
    let all_le_one = |c: &[Nat]| c.iter().all(|e| *e <= one);
    let some_nonzero = col1.iter().chain(col2).any(|e| !e.is_zero());
    let in_f = (all_le_one(col1) || all_le_one(col2)) && some_nonzero;
    let in_g_prime = col1.iter().chain(col2).all(|e| *e <= three)
        && col1.iter().chain(col2).any(|e| *e == one);
    Ok(TripleSopClass { in_f, in_g_prime })
}

#[cfg(test)]
mod tests {
    use super::super::StemSide;
    use super::*;

    fn sop(rows: &[&[u64]]) -> SopPolynomial {
        SopPolynomial::from_rows_u64(rows, false).unwrap()
    }

    fn nonneg(rows: &[&[u64]]) -> SopPolynomial {
        SopPolynomial::from_rows_u64(rows, true).unwrap()
    }

    #[test]
    fn homogeneous_bivariate_splits_once() {
        // w1^2 + w2^2: root plus two NC leaves.
        let f = nonneg(&[&[2, 0], &[0, 2]]);
        let t = blowup_between_variables(&f, Caps::default()).unwrap();
        assert_eq!(t.len(), 3);
        for id in t.leaves() {
            assert!(t.node(id).inner.is_normal_crossing_binomial().unwrap());
        }
    }

    #[test]
    fn nc_input_is_single_node() {
        let f = nonneg(&[&[2, 4], &[2, 6]]);
        let t = blowup_between_variables(&f, Caps::default()).unwrap();
        assert_eq!(t.len(), 1);
        let t = blowup_between_terms(&f, &OuterMonomial::trivial(2), Caps::default()).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn w1_2_plus_w2_4_tree() {
        let f = nonneg(&[&[2, 0], &[0, 4]]);
        let t = blowup_between_variables(&f, Caps::default()).unwrap();
        assert!(t.depth() >= 2);
        for id in t.leaves() {
            assert!(t.node(id).inner.is_normal_crossing_binomial().unwrap());
        }
        // Root children carry s' = (1,2) and (2,1).
        let with_jac = blowup_between_variables_with_jacobian(
            &f,
            &OuterMonomial::trivial(2),
            0,
            1,
            Caps::default(),
        )
        .unwrap();
        let kids = &with_jac.root().children;
        let s: Vec<String> = kids
            .iter()
            .map(|&k| with_jac.node(k).outer.to_string())
            .collect();
        assert_eq!(kids.len(), 2);
        assert!(s.contains(&"w2^1".to_string()) && s.contains(&"w1^1".to_string()));
    }

    #[test]
    fn jacobian_three_var_pair_trace() {
        // f = w1^2 + w2^2 w3^2, blow-up on (w1, w2): three nodes, the chart
        // substituting w2 is normal crossing, the other is not.
        let f = nonneg(&[&[2, 0], &[0, 2], &[0, 2]]);
        let t = blowup_between_variables_with_jacobian(
            &f,
            &OuterMonomial::trivial(3),
            0,
            1,
            Caps::default(),
        )
        .unwrap();
        assert_eq!(t.len(), 3);
        let leaves = t.leaves();
        assert_eq!(leaves.len(), 2);
        let nc: Vec<bool> = leaves
            .iter()
            .map(|&id| t.node(id).inner.is_normal_crossing_binomial().unwrap())
            .collect();
        assert_eq!(nc.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn between_terms_resolves_three_vars() {
        let f = nonneg(&[&[2, 0], &[2, 0], &[0, 4]]); // w1^2 w2^2 + w3^4
        let t = blowup_between_terms(&f, &OuterMonomial::trivial(3), Caps::default()).unwrap();
        for id in t.leaves() {
            assert!(t.node(id).inner.is_normal_crossing_binomial().unwrap());
        }
    }

    #[test]
    fn local_nc_three_terms() {
        // w1^2 + w2^4 + w3^6
        let f = nonneg(&[&[2, 0, 0], &[0, 4, 0], &[0, 0, 6]]);
        let t = local_nc_blowup(&f, &OuterMonomial::trivial(3), Caps::default()).unwrap();
        for id in t.leaves() {
            assert!(t.node(id).inner.is_local_normal_crossing());
        }
        // Already-LNC input stays a single node.
        let f = nonneg(&[&[2, 2, 2], &[0, 4, 0], &[0, 0, 6]]);
        let t = local_nc_blowup(&f, &OuterMonomial::trivial(3), Caps::default()).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn local_nc_on_binomial_matches_between_terms_leaves() {
        // On a binomial the LNC loop runs exactly one between-terms pass.
        let f = nonneg(&[&[2, 0], &[0, 4]]);
        let bt = blowup_between_terms(&f, &OuterMonomial::trivial(2), Caps::default()).unwrap();
        let lnc = local_nc_blowup(&f, &OuterMonomial::trivial(2), Caps::default()).unwrap();
        let key = |t: &BlowupTree| -> Vec<Vec<Vec<u64>>> {
            let mut v: Vec<Vec<Vec<u64>>> = t
                .leaves()
                .into_iter()
                .map(|id| {
                    t.node(id)
                        .inner
                        .matrix()
                        .cols()
                        .iter()
                        .map(|c| {
                            c.iter()
                                .map(|e| crate::rational::nat_to_u64(e).unwrap())
                                .collect()
                        })
                        .collect()
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(key(&bt), key(&lnc));
    }

    #[test]
    fn selective_algorithms_and_classes() {
        // x1^2 y1^2 z1 + x2 y2^2 z2^3 is in G' but not F.
        let k = sop(&[
            &[2, 0],
            &[2, 0],
            &[1, 0],
            &[0, 1],
            &[0, 2],
            &[0, 3],
        ]);
        let class = classify_exclusive_triple(&k).unwrap();
        assert!(!class.in_f && class.in_g_prime);
        let out = max_degree_selective(&k, Caps::default()).unwrap();
        assert!(out.halted());
        for id in out.tree().leaves() {
            assert!(out.tree().node(id).inner.is_normal_crossing_binomial().unwrap());
        }

        // x1 + x2^2 y2^2 z2^2 is in F.
        let k = sop(&[&[1, 0], &[0, 2], &[0, 2], &[0, 2]]);
        let class = classify_exclusive_triple(&k).unwrap();
        assert!(class.in_f);
        let out = min_degree_selective(&k, Caps::default()).unwrap();
        assert!(out.halted());

        // A tiny cap yields a report, not an error.
        let k = sop(&[&[2, 0], &[2, 0], &[1, 0], &[0, 1], &[0, 2], &[0, 3]]);
        let out = max_degree_selective(&k, Caps::new(3)).unwrap();
        assert!(!out.halted());
    }

    #[test]
    fn cumulative_blow_matrix_reproduces_nodes() {
        let f = nonneg(&[&[2, 0], &[0, 4]]);
        let g = OuterMonomial::trivial(2);
        let t = blowup_between_terms(&f, &g, Caps::default()).unwrap();
        for (_, node) in t.nodes() {
            let (fi, gi) = crate::poly::apply_blow_matrix(&f, &g, &node.blow).unwrap();
            assert_eq!(fi.matrix(), node.inner.matrix());
            assert_eq!(gi, node.outer);
            assert_eq!(node.blow.det(), Int::from(1));
        }
    }

    #[test]
    fn stem_shapes() {
        let f = nonneg(&[&[2, 0], &[0, 2]]);
        let t = blowup_between_variables(&f, Caps::default()).unwrap();
        let s = t.stem(StemSide::Left).unwrap();
        assert_eq!(s.len(), 2);

        let f = nonneg(&[&[2, 0], &[0, 4]]);
        let t = blowup_between_variables(&f, Caps::default()).unwrap();
        let l = t.stem(StemSide::Left).unwrap();
        let r = t.stem(StemSide::Right).unwrap();
        assert_eq!(l.nodes[..l.len() - 1], r.nodes[..r.len() - 1]);
        assert_ne!(l.leaf(), r.leaf());
        // The left leaf has equalized w1 exponents.
        assert!(t.d_component(l.leaf(), 0).is_zero());
        assert!(t.d_component(r.leaf(), 1).is_zero());
    }
}
