//! Seeded random trees, symmetric trees and subtree families.

use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::Tree;
use super::subtree::Subtree;
use super::TreeError;

/// A random tree on `n` vertices: each vertex attaches to a uniformly
/// chosen earlier one, then labels are shuffled.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Tree {
    let mut perm: Vec<usize> = (0..n.max(1)).collect();
    perm.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (perm[rng.gen_range(0..v)], perm[v])).collect();
    Tree::new(n.max(1), &edges).expect("random attachment gives a tree")
}

#[derive(Clone)]
struct Shape(Vec<Shape>);

impl Shape {
    fn size(&self) -> usize {
        1 + self.0.iter().map(Shape::size).sum::<usize>()
    }

    fn random<R: Rng>(rng: &mut R, depth: u32) -> Shape {
        if depth == 0 || rng.gen_bool(0.3) {
            return Shape(Vec::new());
        }
        let mut children = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let child = Shape::random(rng, depth - 1);
            let copies = if rng.gen_bool(0.5) { 1 } else { rng.gen_range(2..=3) };
            children.extend(std::iter::repeat_n(child, copies));
        }
        Shape(children)
    }

    fn flatten(&self, parent: Option<usize>, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> usize {
        let me = *next;
        *next += 1;
        if let Some(p) = parent {
            edges.push((p, me));
        }
        for c in &self.0 {
            c.flatten(Some(me), next, edges);
        }
        me
    }
}

/// A random tree with a rich automorphism group, of at most
/// `max_vertices` vertices: rooted subtrees are repeated among siblings,
/// and sometimes two copies of a rooted tree are joined at their roots so
/// that some symmetry inverts the central edge.
pub fn random_symmetric_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> Tree {
    let max_vertices = max_vertices.max(2);
    loop {
        let shape = Shape::random(rng, 4);
        let doubled = rng.gen_bool(0.25);
        let total = if doubled { 2 * shape.size() } else { shape.size() };
        if total > max_vertices || total < 2 {
            continue;
        }
        let mut edges = Vec::new();
        let mut next = 0;
        let r0 = shape.flatten(None, &mut next, &mut edges);
        if doubled {
            let r1 = shape.flatten(None, &mut next, &mut edges);
            edges.push((r0, r1));
        }
        let mut perm: Vec<usize> = (0..next).collect();
        perm.shuffle(rng);
        let edges: Vec<_> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        return Tree::new(next, &edges).expect("flattened shape is a tree");
    }
}

/// `size` subtrees that pairwise intersect: for each pair `i < j` a point
/// `p_ij` is chosen, subtree `i` is the hull of its `p_ij` plus a few
/// random extra points.
pub fn random_pairwise_intersecting_family<R: Rng>(
    rng: &mut R,
    tree: &Tree,
    size: usize,
) -> Result<Vec<Subtree>, TreeError> {
    if size < 2 {
        return Err(TreeError::InvalidArgument("a family needs at least two members".into()));
    }
    let np = tree.num_points();
    let mut shared = vec![vec![0usize; size]; size];
    for i in 0..size {
        for j in i + 1..size {
            let p = rng.gen_range(0..np);
            shared[i][j] = p;
            shared[j][i] = p;
        }
    }
    (0..size)
        .map(|i| {
            let mut pts: Vec<usize> = (0..size).filter(|&j| j != i).map(|j| shared[i][j]).collect();
            for _ in 0..rng.gen_range(0..=2) {
                pts.push(rng.gen_range(0..np));
            }
            Subtree::hull(tree, &pts)
        })
        .collect()
}

/// Between one and three random points of the same kind (all vertices or
/// all midpoints), so any set they generate has even diameter.
pub fn random_same_kind_points<R: Rng>(rng: &mut R, tree: &Tree) -> Vec<usize> {
    let n = tree.num_vertices();
    let midpoints = n > 1 && rng.gen_bool(0.5);
    let range = if midpoints { n..tree.num_points() } else { 0..n };
    (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(range.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::helly_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..40 {
            assert_eq!(random_tree(&mut rng, n).num_vertices(), n);
        }
    }

    #[test]
    fn symmetric_trees_respect_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t = random_symmetric_tree(&mut rng, 30);
            assert!(t.num_vertices() <= 30 && t.num_vertices() >= 2);
        }
    }

    #[test]
    fn families_pairwise_intersect() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_tree(&mut rng, 20);
            let fam = random_pairwise_intersecting_family(&mut rng, &t, 4).unwrap();
            assert!(helly_check(&t, &fam).pairwise_ok);
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let a = random_symmetric_tree(&mut ChaCha8Rng::seed_from_u64(9), 40);
        let b = random_symmetric_tree(&mut ChaCha8Rng::seed_from_u64(9), 40);
        assert_eq!(a, b);
    }
}
