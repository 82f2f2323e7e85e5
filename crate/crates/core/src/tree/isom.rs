use std::collections::BTreeSet;
use std::fmt;

use super::graph::Tree;
use super::subtree::Subtree;
use super::TreeError;
use crate::closure::{CarrierError, GroupCarrier};

/// A (possibly partial) map on the subdivision points of a tree.
///
/// Total isometries of finite trees are [`TreeIsom`]; partial maps arise
/// when a group acting on an infinite tree is restricted to a finite ball.
pub trait PointMap {
    fn image(&self, tree: &Tree, id: usize) -> Option<usize>;
}

/// `outer ∘ inner`: `inner` acts first; undefined where either step is.
pub struct Composed<'a, A: ?Sized, B: ?Sized>(pub &'a A, pub &'a B);

impl<A: PointMap + ?Sized, B: PointMap + ?Sized> PointMap for Composed<'_, A, B> {
    fn image(&self, tree: &Tree, id: usize) -> Option<usize> {
        self.1.image(tree, id).and_then(|x| self.0.image(tree, x))
    }
}

/// Subdivision points `p` with `g(p) = p`.
pub fn fixed_points<M: PointMap + ?Sized>(tree: &Tree, g: &M) -> BTreeSet<usize> {
    (0..tree.num_points()).filter(|&p| g.image(tree, p) == Some(p)).collect()
}

/// An automorphism of a finite tree, given by its vertex bijection.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeIsom {
    map: Vec<usize>,
}

impl TreeIsom {
    pub fn identity(n: usize) -> Self {
        TreeIsom { map: (0..n).collect() }
    }

    /// `map[v]` is the image of vertex `v`. Must be a bijection carrying
    /// edges to edges.
    pub fn new(tree: &Tree, map: Vec<usize>) -> Result<Self, TreeError> {
        let n = tree.num_vertices();
        if map.len() != n {
            return Err(TreeError::NotAnIsometry(format!("expected {n} images, got {}", map.len())));
        }
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(TreeError::NotAnIsometry(format!("{map:?} is not a bijection")));
            }
            seen[x] = true;
        }
        // A bijection sending the n-1 edges to edges sends non-edges to non-edges.
        for &(u, v) in tree.edges() {
            if !tree.is_edge(map[u], map[v]) {
                return Err(TreeError::NotAnIsometry(format!(
                    "edge ({u}, {v}) goes to non-edge ({}, {})",
                    map[u], map[v]
                )));
            }
        }
        Ok(TreeIsom { map })
    }

    /// A permutation line: whitespace-separated images of vertices `0, 1, ...`.
    pub fn parse(tree: &Tree, line: &str) -> Result<Self, TreeError> {
        let map = line
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| TreeError::Parse { line: 1, message: format!("{s:?} is not a vertex id") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        TreeIsom::new(tree, map)
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply_vertex(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Image of a subdivision point.
    pub fn apply(&self, tree: &Tree, id: usize) -> usize {
        if tree.is_vertex_id(id) {
            self.map[id]
        } else {
            let (u, v) = tree.midpoint_endpoints(id).expect("point of this tree");
            tree.midpoint_id(self.map[u], self.map[v]).expect("isometry preserves edges")
        }
    }

    pub fn compose(&self, inner: &TreeIsom) -> TreeIsom {
        TreeIsom { map: inner.map.iter().map(|&v| self.map[v]).collect() }
    }

    pub fn inverse(&self) -> TreeIsom {
        let mut inv = vec![0; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            inv[w] = v;
        }
        TreeIsom { map: inv }
    }
}

impl PointMap for TreeIsom {
    fn image(&self, tree: &Tree, id: usize) -> Option<usize> {
        Some(self.apply(tree, id))
    }
}

impl fmt::Debug for TreeIsom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeIsom{:?}", self.map)
    }
}

impl GroupCarrier for TreeIsom {
    fn identity_like(&self) -> Self {
        TreeIsom::identity(self.map.len())
    }

    fn compose(&self, rhs: &Self) -> Result<Self, CarrierError> {
        if self.map.len() != rhs.map.len() {
            return Err(CarrierError::Incompatible(format!(
                "isometries of trees with {} and {} vertices",
                self.map.len(),
                rhs.map.len()
            )));
        }
        Ok(TreeIsom::compose(self, rhs))
    }
}

/// Fixed set of one isometry, or `None` if it fixes nothing.
///
/// Nonempty fixed sets are subtrees; this is checked, and a disconnected
/// fixed set is reported as an error.
pub fn fixed_set<M: PointMap + ?Sized>(tree: &Tree, g: &M) -> Result<Option<Subtree>, TreeError> {
    let pts = fixed_points(tree, g);
    if pts.is_empty() {
        return Ok(None);
    }
    Subtree::new(tree, pts).map(Some)
}

/// Common fixed set of a list of isometries. An empty list fixes everything.
pub fn fixed_set_group<M: PointMap>(tree: &Tree, gens: &[M]) -> Result<Option<Subtree>, TreeError> {
    let mut pts: BTreeSet<usize> = (0..tree.num_points()).collect();
    for g in gens {
        pts.retain(|&p| g.image(tree, p) == Some(p));
        if pts.is_empty() {
            return Ok(None);
        }
    }
    Subtree::new(tree, pts).map(Some)
}
