//! Enumeration of finitely generated subgroups, and the certificates built
//! on top of it: dihedral presentations, direct products, containment.
//!
//! Dihedral groups are named by their order: `D(2m)` is generated by two
//! involutions whose product has order `m`, so D6 ≅ S3 and D8 is the
//! symmetry group of a square.

mod carrier;
mod certify;

pub use carrier::{element_order, finite_inverse, power, CarrierError, GroupCarrier};
pub use certify::{
    check_containment, check_dihedral, check_direct_product, witness_evaluate, Containment, DihedralCertificate,
    DirectProductCertificate, Outcome, Refutation, WitnessWord,
};

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Default element cap for closure enumeration.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error("closure needs at least one generator")]
    NoGenerators,
    #[error("operation needs a complete closure, enumeration stopped at cap {cap}")]
    Incomplete { cap: usize },
    #[error("element order exceeds cap {0}")]
    OrderCap(u64),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("empty witness word")]
    EmptyWord,
}

/// A generator with a display label.
#[derive(Debug, Clone)]
pub struct Labeled<T> {
    pub label: String,
    pub element: T,
}

impl<T> Labeled<T> {
    pub fn new(label: impl Into<String>, element: T) -> Self {
        Labeled { label: label.into(), element }
    }
}

/// Element set of `⟨gens⟩` as found by breadth-first search.
///
/// Elements are sorted by (word length over the generators, value), which
/// is independent of the order the generators were supplied in.
#[derive(Debug, Clone)]
pub struct ClosureResult<T> {
    pub generators: Vec<Labeled<T>>,
    elements: Vec<T>,
    depths: Vec<u32>,
    index: HashMap<T, usize>,
    pub complete: bool,
    pub cap: usize,
    /// `(element, generator, element·generator)` index triples.
    pub cayley_edges: Option<Vec<(usize, usize, usize)>>,
}

impl<T: GroupCarrier> ClosureResult<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    /// Word length of each element over the generators.
    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn contains(&self, g: &T) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &T) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    fn require_complete(&self) -> Result<(), ClosureError> {
        if self.complete {
            Ok(())
        } else {
            Err(ClosureError::Incomplete { cap: self.cap })
        }
    }

    /// Fills in right multiplication by each generator.
    pub fn with_cayley_edges(mut self) -> Result<Self, ClosureError> {
        self.require_complete()?;
        let mut edges = Vec::with_capacity(self.elements.len() * self.generators.len());
        for (i, x) in self.elements.iter().enumerate() {
            for (k, g) in self.generators.iter().enumerate() {
                let y = x.compose(&g.element)?;
                let j = self.position(&y).expect("complete closure is closed under generators");
                edges.push((i, k, j));
            }
        }
        self.cayley_edges = Some(edges);
        Ok(self)
    }

    /// Post-hoc check that the set contains the identity and is closed under
    /// right multiplication by every generator.
    pub fn verify_closed(&self) -> Result<bool, ClosureError> {
        let Some(first) = self.elements.first() else {
            return Ok(false);
        };
        if !self.contains(&first.identity_like()) {
            return Ok(false);
        }
        for x in &self.elements {
            for g in &self.generators {
                if !self.contains(&x.compose(&g.element)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn summary(&self, order_cap: u64) -> Result<ClosureSummary, ClosureError> {
        let multiset = if self.complete { Some(order_multiset(self, order_cap)?) } else { None };
        Ok(ClosureSummary {
            labels: self.labels(),
            order: self.order(),
            complete: self.complete,
            order_multiset: multiset,
            certificates: Vec::new(),
        })
    }
}

/// JSON view of a closure.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureSummary {
    pub labels: Vec<String>,
    pub order: usize,
    pub complete: bool,
    pub order_multiset: Option<BTreeMap<u64, usize>>,
    pub certificates: Vec<String>,
}

/// Breadth-first closure of `gens` under right multiplication, starting
/// from the identity. Stops with `complete = false` once more than `cap`
/// elements would be needed.
///
/// Each BFS level is expanded in parallel; new elements are then admitted
/// sequentially in a fixed order, so the result does not depend on thread
/// scheduling.
pub fn enumerate_closure<T: GroupCarrier>(gens: &[Labeled<T>], cap: usize) -> Result<ClosureResult<T>, ClosureError> {
    let first = gens.first().ok_or(ClosureError::NoGenerators)?;
    let identity = first.element.identity_like();
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut depths = vec![0u32];
    index.insert(identity, 0);
    let mut frontier: Vec<usize> = vec![0];
    let mut complete = cap >= 1;
    let mut depth = 0u32;

    'outer: while !frontier.is_empty() && complete {
        depth += 1;
        let products: Vec<T> = frontier
            .par_iter()
            .map(|&i| gens.iter().map(|g| elements[i].compose(&g.element)).collect::<Result<Vec<T>, CarrierError>>())
            .collect::<Result<Vec<Vec<T>>, CarrierError>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut next = Vec::new();
        for y in products {
            if index.contains_key(&y) {
                continue;
            }
            if elements.len() >= cap {
                complete = false;
                break 'outer;
            }
            index.insert(y.clone(), elements.len());
            elements.push(y);
            depths.push(depth);
            next.push(elements.len() - 1);
        }
        frontier = next;
    }

    // Canonical order: by depth, then by value.
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| depths[a].cmp(&depths[b]).then_with(|| elements[a].cmp(&elements[b])));
    let sorted: Vec<T> = order.iter().map(|&i| elements[i].clone()).collect();
    let sorted_depths: Vec<u32> = order.iter().map(|&i| depths[i]).collect();
    let index = sorted.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();

    Ok(ClosureResult {
        generators: gens.to_vec(),
        elements: sorted,
        depths: sorted_depths,
        index,
        complete,
        cap,
        cayley_edges: None,
    })
}

/// Multiset of element orders, as `order -> count`.
pub fn order_multiset<T: GroupCarrier>(
    r: &ClosureResult<T>,
    order_cap: u64,
) -> Result<BTreeMap<u64, usize>, ClosureError> {
    r.require_complete()?;
    let orders: Vec<Option<u64>> =
        r.elements.par_iter().map(|g| element_order(g, order_cap)).collect::<Result<_, _>>()?;
    let mut out = BTreeMap::new();
    for o in orders {
        let o = o.ok_or(ClosureError::OrderCap(order_cap))?;
        *out.entry(o).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{Basis, FreeAut, NamedGenerator};

    fn g(name: &str, gen: NamedGenerator, n: usize) -> Labeled<FreeAut> {
        Labeled::new(name, FreeAut::from_generator(&gen, Basis::new(n).unwrap()).unwrap())
    }

    #[test]
    fn h23_rank3() {
        let r =
            enumerate_closure(&[g("theta", NamedGenerator::Theta, 3), g("tau", NamedGenerator::Tau, 3)], 100).unwrap();
        assert!(r.complete);
        assert_eq!(r.order(), 8);
        assert!(r.verify_closed().unwrap());
        let ms = order_multiset(&r, 64).unwrap();
        assert_eq!(ms, BTreeMap::from([(1, 1), (2, 5), (4, 2)]));
    }

    #[test]
    fn h12_rank3() {
        let r = enumerate_closure(
            &[
                g("eps 3", NamedGenerator::Eps(3), 3),
                g("eta", NamedGenerator::Eta, 3),
                g("theta", NamedGenerator::Theta, 3),
            ],
            100,
        )
        .unwrap();
        assert!(r.complete);
        assert_eq!(r.order(), 12);
    }

    #[test]
    fn infinite_cyclic_hits_cap() {
        let r = enumerate_closure(&[g("rho 1 2", NamedGenerator::Rho(1, 2), 3)], 50).unwrap();
        assert!(!r.complete);
        assert_eq!(r.order(), 50);
        assert!(matches!(order_multiset(&r, 10), Err(ClosureError::Incomplete { cap: 50 })));
    }

    #[test]
    fn overflow_propagates() {
        let b = Basis::with_image_limit(2, 5).unwrap();
        let rho = FreeAut::from_generator(&NamedGenerator::Rho(1, 2), b).unwrap();
        let err = enumerate_closure(&[Labeled::new("rho", rho)], 1000).unwrap_err();
        assert!(matches!(err, ClosureError::Carrier(CarrierError::FreeGroup(_))));
    }

    #[test]
    fn small_multisets() {
        let eps = g("eps 3", NamedGenerator::Eps(3), 3);
        let id = Labeled::new("id", eps.element.identity_like());
        let trivial = enumerate_closure(&[id], 10).unwrap();
        assert_eq!(order_multiset(&trivial, 4).unwrap(), BTreeMap::from([(1, 1)]));
        let c2 = enumerate_closure(&[eps], 10).unwrap();
        assert_eq!(order_multiset(&c2, 4).unwrap(), BTreeMap::from([(1, 1), (2, 1)]));
    }

    #[test]
    fn cayley_edges_cover_every_pair() {
        let r = enumerate_closure(&[g("theta", NamedGenerator::Theta, 3), g("tau", NamedGenerator::Tau, 3)], 100)
            .unwrap()
            .with_cayley_edges()
            .unwrap();
        let edges = r.cayley_edges.as_ref().unwrap();
        assert_eq!(edges.len(), 16);
        // involutions: every edge is reversible
        for &(i, k, j) in edges {
            assert!(edges.contains(&(j, k, i)));
        }
    }

    #[test]
    fn empty_generators() {
        assert!(matches!(enumerate_closure::<FreeAut>(&[], 10), Err(ClosureError::NoGenerators)));
    }
}
