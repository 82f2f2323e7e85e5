use std::collections::BTreeSet;

use serde::Serialize;

use super::graph::{Tree, TreePoint};
use super::TreeError;

/// A nonempty connected set of subdivision points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subtree {
    ids: BTreeSet<usize>,
}

impl Subtree {
    pub fn new(tree: &Tree, ids: BTreeSet<usize>) -> Result<Self, TreeError> {
        let Some(&start) = ids.iter().next() else {
            return Err(TreeError::EmptySubtree);
        };
        if let Some(&bad) = ids.iter().find(|&&id| id >= tree.num_points()) {
            return Err(TreeError::NotASubtree(format!("point id {bad} out of range")));
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in tree.sub_neighbors(x) {
                if ids.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != ids.len() {
            return Err(TreeError::NotASubtree(format!("{} of {} points reachable", seen.len(), ids.len())));
        }
        Ok(Subtree { ids })
    }

    pub fn from_points(tree: &Tree, pts: &[TreePoint]) -> Result<Self, TreeError> {
        let ids = pts.iter().map(|p| tree.point_id(p)).collect::<Result<_, _>>()?;
        Subtree::new(tree, ids)
    }

    /// Smallest subtree containing `ids`: the union of paths from one of
    /// them to all the others.
    pub fn hull(tree: &Tree, ids: &[usize]) -> Result<Self, TreeError> {
        let Some(&first) = ids.first() else {
            return Err(TreeError::EmptySubtree);
        };
        let mut set = BTreeSet::new();
        for &x in ids {
            set.extend(tree.path(first, x));
        }
        Subtree::new(tree, set)
    }

    pub fn whole(tree: &Tree) -> Self {
        Subtree { ids: (0..tree.num_points()).collect() }
    }

    pub fn ids(&self) -> &BTreeSet<usize> {
        &self.ids
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn points(&self, tree: &Tree) -> Vec<TreePoint> {
        self.ids.iter().map(|&id| tree.point(id)).collect()
    }

    pub fn intersection(&self, other: &Subtree) -> BTreeSet<usize> {
        self.ids.intersection(&other.ids).copied().collect()
    }
}

/// Result of a Helly check on a family of subtrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyVerdict {
    pub pairwise_ok: bool,
    pub total_nonempty: bool,
    pub common_point: Option<TreePoint>,
}

impl HellyVerdict {
    /// Pairwise intersections all nonempty but the total one empty. Cannot
    /// happen for subtrees of a tree.
    pub fn is_violation(&self) -> bool {
        self.pairwise_ok && !self.total_nonempty
    }
}

/// Intersects a family of subtrees pairwise and all at once.
pub fn helly_check(tree: &Tree, family: &[Subtree]) -> HellyVerdict {
    let pairwise_ok = family
        .iter()
        .enumerate()
        .all(|(i, a)| family[i + 1..].iter().all(|b| a.ids.intersection(&b.ids).next().is_some()));
    let mut total: BTreeSet<usize> = match family.first() {
        Some(s) => s.ids.clone(),
        None => (0..tree.num_points()).collect(),
    };
    for s in family.iter().skip(1) {
        total.retain(|x| s.ids.contains(x));
    }
    let common_point = total.iter().next().map(|&id| tree.point(id));
    HellyVerdict { pairwise_ok, total_nonempty: common_point.is_some(), common_point }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let t = Tree::path_graph(4);
        assert!(Subtree::new(&t, BTreeSet::from([0, 4, 1])).is_ok());
        assert!(matches!(Subtree::new(&t, BTreeSet::from([0, 1])), Err(TreeError::NotASubtree(_))));
        assert!(matches!(Subtree::new(&t, BTreeSet::new()), Err(TreeError::EmptySubtree)));
        let h = Subtree::hull(&t, &[0, 3]).unwrap();
        assert_eq!(h.len(), t.num_points());
    }

    #[test]
    fn nested_intervals_on_a_path() {
        let t = Tree::path_graph(7);
        let interval = |a, b| Subtree::hull(&t, &[a, b]).unwrap();
        let v = helly_check(&t, &[interval(0, 6), interval(1, 5), interval(2, 4)]);
        assert!(v.pairwise_ok && v.total_nonempty);
        assert_eq!(v.common_point, Some(TreePoint::Vertex(2)));
    }

    #[test]
    fn star_arms_meet_at_hub() {
        let t = Tree::spider(3, 2);
        // leaves are 2, 4, 6; each pair of legs meets only at the hub
        let arms: Vec<Subtree> =
            [(2, 4), (4, 6), (6, 2)].iter().map(|&(a, b)| Subtree::hull(&t, &[a, b]).unwrap()).collect();
        let v = helly_check(&t, &arms);
        assert!(v.pairwise_ok);
        assert_eq!(v.common_point, Some(TreePoint::Vertex(0)));
    }

    #[test]
    fn disjoint_family() {
        let t = Tree::path_graph(5);
        let a = Subtree::hull(&t, &[0, 1]).unwrap();
        let b = Subtree::hull(&t, &[3, 4]).unwrap();
        let v = helly_check(&t, &[a, b]);
        assert!(!v.pairwise_ok && !v.total_nonempty && !v.is_violation());
    }
}
