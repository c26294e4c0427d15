//! Blow-up trees.
//!
//! Nodes are (inner polynomial, outer monomial) pairs in blown-up local
//! coordinates together with the cumulative blow matrix from the root.
//! Every edge is an elementary substitution `w_i <- w_i * w_j`, recorded as
//! a chart label so trees are replayable. Trees are built breadth-first
//! (FIFO, as in the pseudo-code contracts) and are immutable once returned.

mod algorithms;
mod export;

pub use algorithms::{
    blowup_between_terms, blowup_between_variables, blowup_between_variables_with_jacobian,
    classify_exclusive_triple, local_nc_blowup, max_degree_selective, min_degree_selective, Caps,
    SelectiveOutcome, TripleSopClass,
};
pub use export::{tree_to_dot, tree_to_json};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::BlowMatrix;
use crate::poly::{OuterMonomial, SopPolynomial};
#[cfg(test)]
use crate::rational::Int;

/// The substitution `w_i <- w_i * w_j` on the edge from the parent
/// (0-indexed variables).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartLabel {
    pub i: usize,
    pub j: usize,
}

impl std::fmt::Display for ChartLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "w{} <- w{}*w{}", self.i + 1, self.i + 1, self.j + 1)
    }
}

#[derive(Clone, Debug)]
pub struct BlowupNode {
    pub inner: SopPolynomial,
    pub outer: OuterMonomial,
    /// Cumulative blow matrix from the root: `log w_root = B log w_here`.
    pub blow: BlowMatrix,
    pub depth: usize,
    /// Term-position counters (1-indexed); meaningful only for trees built
    /// by the local-normal-crossing algorithm.
    pub counters: (usize, usize),
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Substitution on the edge from the parent; `None` at the root.
    pub chart: Option<ChartLabel>,
}

#[derive(Clone, Debug)]
pub struct BlowupTree {
    nodes: Vec<BlowupNode>,
}

impl BlowupTree {
    pub(crate) fn new_root(inner: SopPolynomial, outer: OuterMonomial) -> Self {
        let d = inner.var_count();
        Self {
            nodes: vec![BlowupNode {
                inner,
                outer,
                blow: BlowMatrix::identity(d),
                depth: 0,
                counters: (1, 2),
                parent: None,
                children: Vec::new(),
                chart: None,
            }],
        }
    }

    /// Adds the child obtained by `w_i <- w_i * w_j`.
    pub(crate) fn add_child(&mut self, parent: usize, i: usize, j: usize) -> usize {
        let (inner, outer, blow, depth, counters) = {
            let p = &self.nodes[parent];
            let mut m = p.inner.matrix().clone();
            m.substitute(i, j);
            let mut outer = p.outer.clone();
            outer.substitute(i, j);
            let mut blow = p.blow.clone();
            blow.right_mul_elementary(i, j);
            (
                p.inner.with_matrix(m),
                outer,
                blow,
                p.depth + 1,
                p.counters,
            )
        };
        let id = self.nodes.len();
        self.nodes.push(BlowupNode {
            inner,
            outer,
            blow,
            depth,
            counters,
            parent: Some(parent),
            children: Vec::new(),
            chart: Some(ChartLabel { i, j }),
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn node(&self, id: usize) -> &BlowupNode {
        &self.nodes[id]
    }

    pub(crate) fn set_counters(&mut self, id: usize, counters: (usize, usize)) {
        self.nodes[id].counters = counters;
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, &BlowupNode)> {
        self.nodes.iter().enumerate()
    }

    pub fn root(&self) -> &BlowupNode {
        &self.nodes[0]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&id| self.is_leaf(id))
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Max depth of any leaf below `id` (inclusive).
    fn subtree_depth(&self, id: usize) -> usize {
        let mut best = self.nodes[id].depth;
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            let n = &self.nodes[v];
            best = best.max(n.depth);
            stack.extend(&n.children);
        }
        best
    }

    /// Root-to-deepest-leaf path. `side` disambiguates the two deepest
    /// leaves of the final homogeneous split: the left leaf is the one
    /// where the exponents of the first center variable have equalized
    /// (`r_n = 0`), the right one equalizes the second.
    pub fn stem(&self, side: StemSide) -> Result<StemPath> {
        for n in &self.nodes {
            if !(n.children.is_empty() || n.children.len() == 2) {
                return Err(Error::Invalid(
                    "stem is defined for binary blow-up trees".into(),
                ));
            }
        }
        let mut path = vec![0usize];
        let mut cur = 0usize;
        while !self.nodes[cur].children.is_empty() {
            let c1 = self.nodes[cur].children[0];
            let c2 = self.nodes[cur].children[1];
            let next = match (self.is_leaf(c1), self.is_leaf(c2)) {
                (false, true) => c1,
                (true, false) => c2,
                (true, true) => {
                    // Final split: both charts of the pair are leaves.
                    let chart = self.nodes[c1].chart.expect("non-root has a chart");
                    let first = chart.i.min(chart.j);
                    let pick_left = |id: usize| {
                        let diff = self.nodes[id].inner.matrix().col_diff(0, 1);
                        diff[first].is_zero()
                    };
                    match side {
                        StemSide::Left => {
                            if pick_left(c1) {
                                c1
                            } else {
                                c2
                            }
                        }
                        StemSide::Right => {
                            if pick_left(c1) {
                                c2
                            } else {
                                c1
                            }
                        }
                    }
                }
                (false, false) => {
                    let d1 = self.subtree_depth(c1);
                    let d2 = self.subtree_depth(c2);
                    match d1.cmp(&d2) {
                        std::cmp::Ordering::Greater => c1,
                        std::cmp::Ordering::Less => c2,
                        std::cmp::Ordering::Equal => match side {
                            StemSide::Left => c2,
                            StemSide::Right => c1,
                        },
                    }
                }
            };
            path.push(next);
            cur = next;
        }
        Ok(StemPath { nodes: path })
    }

    /// D-statistic of the given node's inner binomial restricted to one
    /// variable (col 1 minus col 2 in row `h`).
    #[cfg(test)]
    pub(crate) fn d_component(&self, id: usize, h: usize) -> Int {
        let m = self.nodes[id].inner.matrix();
        Int::from(m.entry(h, 0).clone()) - Int::from(m.entry(h, 1).clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StemSide {
    Left,
    Right,
}

/// Ordered node indices from the root to a deepest leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemPath {
    pub nodes: Vec<usize>,
}

impl StemPath {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf(&self) -> usize {
        *self.nodes.last().expect("stem contains the root")
    }
}
