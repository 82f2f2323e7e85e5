use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::carrier::{element_order, power, GroupCarrier};
use super::{enumerate_closure, ClosureError, ClosureResult, Labeled};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub check: String,
    pub detail: String,
}

impl Refutation {
    fn new(check: &str, detail: impl Into<String>) -> Self {
        Refutation { check: check.into(), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<C> {
    Certified(C),
    Refuted(Refutation),
}

impl<C> Outcome<C> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Refuted(_) => None,
        }
    }
}

/// `⟨s, t⟩` is dihedral of order `2m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DihedralCertificate {
    pub m: u64,
    pub group_order: usize,
}

/// Certifies `⟨s, t⟩ ≅ D(2m)`: `s² = t² = (st)^m = 1` makes the group a
/// quotient of the dihedral group of order `2m`, and an enumerated order of
/// exactly `2m` makes the quotient map injective.
pub fn check_dihedral<T: GroupCarrier>(
    s: &T,
    t: &T,
    m: u64,
    cap: usize,
) -> Result<Outcome<DihedralCertificate>, ClosureError> {
    if !s.compose(s)?.is_identity() {
        return Ok(Outcome::Refuted(Refutation::new("s^2", "s is not an involution")));
    }
    if !t.compose(t)?.is_identity() {
        return Ok(Outcome::Refuted(Refutation::new("t^2", "t is not an involution")));
    }
    let st = s.compose(t)?;
    if !power(&st, m)?.is_identity() {
        return Ok(Outcome::Refuted(Refutation::new("(st)^m", format!("(st)^{m} is not the identity"))));
    }
    let exact = element_order(&st, m)?;
    if exact != Some(m) {
        return Ok(Outcome::Refuted(Refutation::new(
            "order(st)",
            format!("st has order {exact:?}, expected exactly {m}"),
        )));
    }
    let r = enumerate_closure(&[Labeled::new("s", s.clone()), Labeled::new("t", t.clone())], cap)?;
    if !r.complete {
        return Err(ClosureError::Incomplete { cap });
    }
    let want = 2 * m as usize;
    if r.order() != want {
        return Ok(Outcome::Refuted(Refutation::new("|<s,t>|", format!("enumerated order {} != {want}", r.order()))));
    }
    Ok(Outcome::Certified(DihedralCertificate { m, group_order: want }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectProductCertificate {
    pub left_order: usize,
    pub right_order: usize,
    pub product_order: usize,
}

/// Certifies `⟨U ∪ V⟩ ≅ ⟨U⟩ × ⟨V⟩` for the generator lists `u`, `v`.
///
/// Checks that the generators of `U` commute with those of `V` (so every
/// element of `U` commutes with every element of `V`), that `⟨U⟩ ∩ ⟨V⟩` is
/// trivial, and that the joint closure has order `|U|·|V|`.
pub fn check_direct_product<T: GroupCarrier>(
    u: &[Labeled<T>],
    v: &[Labeled<T>],
    cap: usize,
) -> Result<Outcome<DirectProductCertificate>, ClosureError> {
    for x in u {
        for y in v {
            if x.element.compose(&y.element)? != y.element.compose(&x.element)? {
                return Ok(Outcome::Refuted(Refutation::new(
                    "commute",
                    format!("{} and {} do not commute", x.label, y.label),
                )));
            }
        }
    }
    let left = complete_closure(u, cap)?;
    let right = complete_closure(v, cap)?;
    let shared = left.elements().iter().filter(|g| right.contains(g)).count();
    if shared != 1 {
        return Ok(Outcome::Refuted(Refutation::new("intersection", format!("subgroups share {shared} elements"))));
    }
    let joint: Vec<Labeled<T>> = u.iter().chain(v).cloned().collect();
    let product = complete_closure(&joint, cap)?;
    if product.order() != left.order() * right.order() {
        return Ok(Outcome::Refuted(Refutation::new(
            "order",
            format!("{} != {} * {}", product.order(), left.order(), right.order()),
        )));
    }
    Ok(Outcome::Certified(DirectProductCertificate {
        left_order: left.order(),
        right_order: right.order(),
        product_order: product.order(),
    }))
}

fn complete_closure<T: GroupCarrier>(gens: &[Labeled<T>], cap: usize) -> Result<ClosureResult<T>, ClosureError> {
    let r = enumerate_closure(gens, cap)?;
    if !r.complete {
        return Err(ClosureError::Incomplete { cap });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment<T> {
    pub holds: bool,
    /// First failing element in canonical order.
    pub witness: Option<T>,
}

/// Whether every element of a complete closure satisfies `predicate`.
pub fn check_containment<T, F>(r: &ClosureResult<T>, predicate: F) -> Result<Containment<T>, ClosureError>
where
    T: GroupCarrier,
    F: Fn(&T) -> bool,
{
    if !r.complete {
        return Err(ClosureError::Incomplete { cap: r.cap });
    }
    let witness = r.elements().iter().find(|g| !predicate(g)).cloned();
    Ok(Containment { holds: witness.is_none(), witness })
}

/// A product of labelled generators, read right-to-left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WitnessWord(pub Vec<String>);

impl WitnessWord {
    /// Splits on `∘`: `"perm (2 3) ∘ tau"`.
    pub fn parse(text: &str) -> Self {
        WitnessWord(
            text.split('∘')
                .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
                .filter(|s| !s.is_empty())
                .collect(),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ other`
    pub fn then(&self, other: &WitnessWord) -> WitnessWord {
        WitnessWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Formal inverse, valid when every letter is an involution.
    pub fn reversed(&self) -> WitnessWord {
        WitnessWord(self.0.iter().rev().cloned().collect())
    }

    /// `self ∘ inner ∘ self⁻¹` for a word of involutions.
    pub fn conjugate(&self, inner: &WitnessWord) -> WitnessWord {
        self.then(inner).then(&self.reversed())
    }
}

impl fmt::Display for WitnessWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" ∘ "))
    }
}

/// Right-to-left product of the carriers named by `word`.
pub fn witness_evaluate<T: GroupCarrier>(word: &WitnessWord, table: &HashMap<String, T>) -> Result<T, ClosureError> {
    let mut acc: Option<T> = None;
    for label in word.labels() {
        let g = table.get(label).ok_or_else(|| ClosureError::UnknownLabel(label.clone()))?;
        acc = Some(match acc {
            None => g.clone(),
            Some(a) => a.compose(g)?,
        });
    }
    acc.ok_or(ClosureError::EmptyWord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{Basis, FreeAut, NamedGenerator, Permutation};
    use crate::intmat::IntMatrix;

    fn aut(g: NamedGenerator, n: usize) -> FreeAut {
        FreeAut::from_generator(&g, Basis::new(n).unwrap()).unwrap()
    }

    fn perm(n: usize, i: usize, j: usize) -> FreeAut {
        aut(NamedGenerator::Perm(Permutation::transposition(n, i, j).unwrap()), n)
    }

    fn lab(name: &str, g: FreeAut) -> Labeled<FreeAut> {
        Labeled::new(name, g)
    }

    #[test]
    fn dihedral_certificates() {
        let theta = aut(NamedGenerator::Theta, 3);
        let tau = aut(NamedGenerator::Tau, 3);
        let eta = aut(NamedGenerator::Eta, 3);
        let c = check_dihedral(&theta, &tau, 4, 100).unwrap();
        assert_eq!(c, Outcome::Certified(DihedralCertificate { m: 4, group_order: 8 }));
        assert!(check_dihedral(&theta, &eta, 3, 100).unwrap().is_certified());
        let e1 = aut(NamedGenerator::Eps(1), 3);
        let e2 = aut(NamedGenerator::Eps(2), 3);
        assert!(check_dihedral(&e1, &e2, 2, 100).unwrap().is_certified());
    }

    #[test]
    fn dihedral_refutations() {
        let theta = aut(NamedGenerator::Theta, 3);
        let tau = aut(NamedGenerator::Tau, 3);
        // (θτ)^8 = 1 but θτ has order 4, not 8
        match check_dihedral(&theta, &tau, 8, 100).unwrap() {
            Outcome::Refuted(r) => assert_eq!(r.check, "order(st)"),
            other => panic!("{other:?}"),
        }
        let rho = aut(NamedGenerator::Rho(1, 2), 3);
        assert!(!check_dihedral(&rho, &tau, 4, 100).unwrap().is_certified());
    }

    #[test]
    fn direct_products() {
        let u = [lab("eps 3", aut(NamedGenerator::Eps(3), 3))];
        let v = [lab("theta", aut(NamedGenerator::Theta, 3)), lab("eta", aut(NamedGenerator::Eta, 3))];
        let c = check_direct_product(&u, &v, 100).unwrap();
        assert_eq!(
            c.certificate(),
            Some(&DirectProductCertificate { left_order: 2, right_order: 6, product_order: 12 })
        );

        let u4 = [lab("eps 4", aut(NamedGenerator::Eps(4), 4)), lab("perm (3 4)", perm(4, 3, 4))];
        let v4 = [lab("theta", aut(NamedGenerator::Theta, 4)), lab("eta", aut(NamedGenerator::Eta, 4))];
        let c4 = check_direct_product(&u4, &v4, 1000).unwrap();
        assert_eq!(c4.certificate().map(|c| c.product_order), Some(48));

        let e1 = [lab("eps 1", aut(NamedGenerator::Eps(1), 3))];
        match check_direct_product(&e1, &e1, 100).unwrap() {
            Outcome::Refuted(r) => assert_eq!(r.check, "intersection"),
            other => panic!("{other:?}"),
        }
        let t = [lab("tau", aut(NamedGenerator::Tau, 3))];
        assert!(!check_direct_product(&t, &v, 100).unwrap().is_certified());
    }

    #[test]
    fn containment() {
        let monomial = |g: &FreeAut| g.abelianize().is_monomial();
        let h13 = enumerate_closure(
            &[
                lab("eps 3", aut(NamedGenerator::Eps(3), 3)),
                lab("eta", aut(NamedGenerator::Eta, 3)),
                lab("tau", aut(NamedGenerator::Tau, 3)),
            ],
            1000,
        )
        .unwrap();
        assert!(check_containment(&h13, monomial).unwrap().holds);

        let theta = aut(NamedGenerator::Theta, 3);
        let h23 =
            enumerate_closure(&[lab("theta", theta.clone()), lab("tau", aut(NamedGenerator::Tau, 3))], 100).unwrap();
        let c = check_containment(&h23, monomial).unwrap();
        assert!(!c.holds);
        assert_eq!(c.witness, Some(theta));

        let trivial = enumerate_closure(&[Labeled::new("id", IntMatrix::identity(2))], 5).unwrap();
        assert!(check_containment(&trivial, |m: &IntMatrix| m.is_identity()).unwrap().holds);
    }

    #[test]
    fn witnesses() {
        let n = 5;
        let mut table = HashMap::new();
        table.insert("tau".to_string(), aut(NamedGenerator::Tau, n));
        table.insert("eta".to_string(), aut(NamedGenerator::Eta, n));
        table.insert("eps 1".to_string(), aut(NamedGenerator::Eps(1), n));
        table.insert("eps 2".to_string(), aut(NamedGenerator::Eps(2), n));
        table.insert("perm (2 3)".to_string(), perm(n, 2, 3));
        table.insert("perm (5 3)".to_string(), perm(n, 5, 3));

        let w = WitnessWord::parse("perm (2 3) ∘ tau");
        assert_eq!(witness_evaluate(&w, &table).unwrap(), aut(NamedGenerator::Eps(1), n));
        let w = WitnessWord::parse("eta ∘ eps 1 ∘ eps 2");
        assert_eq!(witness_evaluate(&w, &table).unwrap(), perm(n, 1, 2));
        let w = WitnessWord::parse("tau ∘ perm (5 3) ∘ tau");
        assert_eq!(witness_evaluate(&w, &table).unwrap(), perm(n, 5, 2));

        assert!(matches!(witness_evaluate(&WitnessWord::parse("theta"), &table), Err(ClosureError::UnknownLabel(_))));
        assert!(matches!(witness_evaluate(&WitnessWord::parse(""), &table), Err(ClosureError::EmptyWord)));
    }
}
