use std::collections::BTreeSet;

use serde::Serialize;

use super::graph::{Tree, TreePoint};
use super::isom::{fixed_points, Composed, PointMap, TreeIsom};
use super::TreeError;
use crate::closure::{enumerate_closure, Labeled};

/// Group-order cap used when enumerating tree automorphism groups.
pub const DEFAULT_GROUP_CAP: usize = 100_000;

fn common_fixed<M: PointMap>(tree: &Tree, gens: &[M]) -> BTreeSet<usize> {
    let mut pts: BTreeSet<usize> = (0..tree.num_points()).collect();
    for g in gens {
        pts.retain(|&p| g.image(tree, p) == Some(p));
    }
    pts
}

/// Fixed set of every element of `⟨gens⟩`, found by enumerating the group.
/// Returns the point set and the group order.
pub fn group_fixed_points(tree: &Tree, gens: &[TreeIsom], cap: usize) -> Result<(BTreeSet<usize>, usize), TreeError> {
    if gens.is_empty() {
        return Ok(((0..tree.num_points()).collect(), 1));
    }
    let labeled: Vec<Labeled<TreeIsom>> =
        gens.iter().enumerate().map(|(i, g)| Labeled::new(format!("g{i}"), g.clone())).collect();
    let r = enumerate_closure(&labeled, cap)?;
    if !r.complete {
        return Err(TreeError::GroupTooLarge { cap });
    }
    let mut pts: BTreeSet<usize> = (0..tree.num_points()).collect();
    for g in r.elements() {
        pts.retain(|&p| g.apply(tree, p) == p);
        if pts.is_empty() {
            break;
        }
    }
    Ok((pts, r.order()))
}

fn to_points(tree: &Tree, ids: &BTreeSet<usize>) -> Vec<TreePoint> {
    ids.iter().map(|&id| tree.point(id)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub pair: (usize, usize),
    /// `Fix(A_i) ∩ Fix(A_j)`
    pub intersection: Vec<TreePoint>,
    /// Fixed set of the enumerated group `⟨A_i ∪ A_j⟩`.
    pub group_fix: Vec<TreePoint>,
    pub group_order: usize,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub fix: [Vec<TreePoint>; 3],
    pub pairwise: Vec<PairReport>,
    /// `Fix(A_1) ∩ Fix(A_2) ∩ Fix(A_3)`
    pub total_intersection: Vec<TreePoint>,
    /// Fixed set of the enumerated group `⟨A_1 ∪ A_2 ∪ A_3⟩`.
    pub group_fix: Vec<TreePoint>,
    pub group_order: usize,
    pub pairwise_nonempty: bool,
    pub conclusion_nonempty: bool,
    /// Every intersection of fixed sets equals the fixed set of the group
    /// generated, pairwise and for all three.
    pub identities_hold: bool,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.identities_hold && (!self.pairwise_nonempty || self.conclusion_nonempty)
    }
}

pub fn triangle_criterion_check(
    tree: &Tree,
    a1: &[TreeIsom],
    a2: &[TreeIsom],
    a3: &[TreeIsom],
) -> Result<TriangleReport, TreeError> {
    triangle_criterion_check_with_cap(tree, a1, a2, a3, DEFAULT_GROUP_CAP)
}

/// Computes `Fix(A_i)` and checks that intersections of fixed sets agree
/// with fixed sets of the generated groups, pairwise and all together.
pub fn triangle_criterion_check_with_cap(
    tree: &Tree,
    a1: &[TreeIsom],
    a2: &[TreeIsom],
    a3: &[TreeIsom],
    cap: usize,
) -> Result<TriangleReport, TreeError> {
    let sets = [a1, a2, a3];
    let fix: Vec<BTreeSet<usize>> = sets.iter().map(|s| common_fixed(tree, s)).collect();
    let mut pairwise = Vec::new();
    let mut identities_hold = true;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let intersection: BTreeSet<usize> = fix[i].intersection(&fix[j]).copied().collect();
        let joint: Vec<TreeIsom> = sets[i].iter().chain(sets[j]).cloned().collect();
        let (group_fix, group_order) = group_fixed_points(tree, &joint, cap)?;
        let identity_holds = intersection == group_fix;
        identities_hold &= identity_holds;
        pairwise.push(PairReport {
            pair: (i + 1, j + 1),
            intersection: to_points(tree, &intersection),
            group_fix: to_points(tree, &group_fix),
            group_order,
            identity_holds,
        });
    }
    let total: BTreeSet<usize> = fix[0].iter().filter(|p| fix[1].contains(p) && fix[2].contains(p)).copied().collect();
    let all: Vec<TreeIsom> = a1.iter().chain(a2).chain(a3).cloned().collect();
    let (group_fix, group_order) = group_fixed_points(tree, &all, cap)?;
    identities_hold &= total == group_fix;
    let pairwise_nonempty = pairwise.iter().all(|p| !p.intersection.is_empty());
    Ok(TriangleReport {
        fix: [to_points(tree, &fix[0]), to_points(tree, &fix[1]), to_points(tree, &fix[2])],
        pairwise,
        total_intersection: to_points(tree, &total),
        group_fix: to_points(tree, &group_fix),
        group_order,
        pairwise_nonempty,
        conclusion_nonempty: !total.is_empty(),
        identities_hold,
    })
}

/// A product `a1·a2` moving the point of `Fix(A_1)` closest to `Fix(A_2)`.
#[derive(Clone, Debug, Serialize)]
pub struct ProductWitness {
    pub closest: TreePoint,
    pub left: usize,
    pub right: usize,
    /// Image of `closest` under the product, if defined.
    pub image: Option<TreePoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub fix1: Vec<TreePoint>,
    pub fix2: Vec<TreePoint>,
    pub products_checked: usize,
    /// Every product `a1·a2` has a fixed point.
    pub products_all_fixed: bool,
    pub intersection: Vec<TreePoint>,
    /// `products_all_fixed` implies a nonempty intersection.
    pub implication_holds: bool,
    pub witness: Option<ProductWitness>,
}

/// Checks that if every product `a1·a2` (`a1 ∈ A_1`, `a2 ∈ A_2`) fixes a
/// point then `Fix(A_1) ∩ Fix(A_2)` is nonempty. When the intersection is
/// empty, reports the point `p` of `Fix(A_1)` closest to `Fix(A_2)` and a
/// product that moves it.
pub fn product_criterion_check<M: PointMap>(tree: &Tree, a1: &[M], a2: &[M]) -> Result<ProductReport, TreeError> {
    let fix1 = common_fixed(tree, a1);
    if fix1.is_empty() {
        return Err(TreeError::EmptyFixedSet { set: 1 });
    }
    let fix2 = common_fixed(tree, a2);
    if fix2.is_empty() {
        return Err(TreeError::EmptyFixedSet { set: 2 });
    }
    let mut products_all_fixed = true;
    let mut checked = 0;
    for x in a1 {
        for y in a2 {
            checked += 1;
            if fixed_points(tree, &Composed(x, y)).is_empty() {
                products_all_fixed = false;
            }
        }
    }
    let intersection: BTreeSet<usize> = fix1.intersection(&fix2).copied().collect();
    let witness = if intersection.is_empty() {
        let dist = tree.multi_source_distances(fix2.iter().copied());
        let closest = *fix1.iter().min_by_key(|&&p| (dist[p], p)).expect("nonempty");
        let mut found = None;
        'search: for (i, x) in a1.iter().enumerate() {
            for (j, y) in a2.iter().enumerate() {
                let image = Composed(x, y).image(tree, closest);
                if image != Some(closest) {
                    found = Some(ProductWitness {
                        closest: tree.point(closest),
                        left: i,
                        right: j,
                        image: image.map(|id| tree.point(id)),
                    });
                    break 'search;
                }
            }
        }
        found
    } else {
        None
    };
    Ok(ProductReport {
        fix1: to_points(tree, &fix1),
        fix2: to_points(tree, &fix2),
        products_checked: checked,
        products_all_fixed,
        implication_holds: !products_all_fixed || !intersection.is_empty(),
        intersection: to_points(tree, &intersection),
        witness,
    })
}
