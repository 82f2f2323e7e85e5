use std::collections::BTreeSet;

use super::graph::{Tree, TreePoint};
use super::TreeError;

/// The point minimising the maximum distance to `pts`.
///
/// Found as the midpoint of a diametral pair, then cross-checked against
/// a brute-force minimisation over every subdivision point. Fails if the
/// midpoint falls strictly inside a half-edge (odd diameter), which cannot
/// happen for sets of vertices only or of midpoints only, so in particular
/// not for orbits.
pub fn circumcentre(tree: &Tree, pts: &[TreePoint]) -> Result<TreePoint, TreeError> {
    let ids = pts.iter().map(|p| tree.point_id(p)).collect::<Result<Vec<_>, _>>()?;
    circumcentre_ids(tree, &ids).map(|id| tree.point(id))
}

pub fn circumcentre_ids(tree: &Tree, ids: &[usize]) -> Result<usize, TreeError> {
    let set: BTreeSet<usize> = ids.iter().copied().collect();
    let Some(&p0) = set.iter().next() else {
        return Err(TreeError::EmptyPointSet);
    };
    let farthest = |from: usize| {
        let d = tree.distances_from(from);
        let far = *set.iter().max_by_key(|&&x| (d[x], std::cmp::Reverse(x))).expect("nonempty");
        (far, d[far])
    };
    let (a, _) = farthest(p0);
    let (b, diameter) = farthest(a);
    if diameter % 2 == 1 {
        return Err(TreeError::OffGridCircumcentre { diameter });
    }
    let centre = tree.path(a, b)[(diameter / 2) as usize];

    // Brute force: eccentricity of every point with respect to the set.
    let mut ecc = vec![0u32; tree.num_points()];
    for &p in &set {
        for (x, d) in tree.distances_from(p).into_iter().enumerate() {
            ecc[x] = ecc[x].max(d);
        }
    }
    let best = *ecc.iter().min().expect("nonempty tree");
    let minimisers: Vec<usize> = (0..ecc.len()).filter(|&x| ecc[x] == best).collect();
    if minimisers != [centre] || best != diameter / 2 {
        return Err(TreeError::CircumcentreMismatch {
            midpoint: tree.point(centre),
            minimisers: minimisers.iter().map(|&x| tree.point(x)).collect(),
        });
    }
    Ok(centre)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let t = Tree::spider(3, 2);
        let p = TreePoint::midpoint(1, 2);
        assert_eq!(circumcentre(&t, &[p]).unwrap(), p);
    }

    #[test]
    fn two_points_at_distance_four() {
        let t = Tree::path_graph(5);
        let c = circumcentre(&t, &[TreePoint::Vertex(1), TreePoint::Vertex(3)]).unwrap();
        assert_eq!(c, TreePoint::Vertex(2));
        let c = circumcentre(&t, &[TreePoint::Vertex(0), TreePoint::Vertex(1)]).unwrap();
        assert_eq!(c, TreePoint::midpoint(0, 1));
    }

    #[test]
    fn spider_leaves() {
        let t = Tree::spider(3, 3);
        let leaves = [3, 6, 9].map(TreePoint::Vertex);
        assert_eq!(circumcentre(&t, &leaves).unwrap(), TreePoint::Vertex(0));
        // two long legs and a short interior point
        let mixed = [TreePoint::Vertex(3), TreePoint::Vertex(6), TreePoint::Vertex(7)];
        assert_eq!(circumcentre(&t, &mixed).unwrap(), TreePoint::Vertex(0));
    }

    #[test]
    fn errors() {
        let t = Tree::path_graph(3);
        assert!(matches!(circumcentre(&t, &[]), Err(TreeError::EmptyPointSet)));
        let odd = [TreePoint::Vertex(0), TreePoint::midpoint(0, 1)];
        assert!(matches!(circumcentre(&t, &odd), Err(TreeError::OffGridCircumcentre { diameter: 1 })));
    }
}
