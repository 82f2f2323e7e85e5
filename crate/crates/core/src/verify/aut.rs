use serde::Serialize;

use super::sets::{
    anchor_checks, build_generating_sets, build_witness_table, AnchorCheck, GeneratingSets, WitnessCheck,
};
use super::{Verdict, VerifyError};
use crate::closure::{
    check_containment, check_dihedral, check_direct_product, enumerate_closure, ClosureError, ClosureResult,
    ClosureSummary, DihedralCertificate, DirectProductCertificate, Labeled, Outcome, Refutation,
};
use crate::freegroup::{compose_named, FreeAut, NamedGenerator, Order};

/// Ranks above this skip the `W_n`-sized closure of `H13`.
pub const HEAVY_RANK_LIMIT: usize = 6;

const ORDER_CAP: u64 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct OrderChecks {
    pub theta_eta: Order,
    pub theta_tau: Order,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct H12Section {
    pub closure: ClosureSummary,
    pub expected_order: u64,
    pub direct_product: Outcome<DirectProductCertificate>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct H13Section {
    pub closure: Option<ClosureSummary>,
    pub all_monomial: Option<bool>,
    pub wn_order: String,
    pub divides_wn_order: Option<bool>,
    pub equals_wn: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct H23Section {
    pub closure: ClosureSummary,
    pub dihedral: Outcome<DihedralCertificate>,
    /// `⟨θ, η⟩ ≅ D6`
    pub theta_eta_dihedral: Outcome<DihedralCertificate>,
    /// First element, in BFS order, whose abelianization is not monomial.
    pub non_monomial_witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSection {
    pub entries: usize,
    pub verified: usize,
    pub failures: Vec<WitnessCheck>,
    pub anchors: Vec<AnchorCheck>,
    pub anchor_words: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutSection {
    pub verdict: Verdict,
    pub orders: OrderChecks,
    pub h23: H23Section,
    pub h12: H12Section,
    pub h13: H13Section,
    pub witnesses: WitnessSection,
    pub notes: Vec<String>,
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// `|W_n| = 2^n n!`
pub fn wn_order(n: usize) -> u128 {
    (1u128 << n) * factorial(n as u64)
}

/// `|H12| = |W_{n-2}| · 6`
pub fn expected_h12_order(n: usize) -> u64 {
    (wn_order(n - 2) * 6) as u64
}

fn closure(
    gens: &[Labeled<FreeAut>],
    cap: usize,
    notes: &mut Vec<String>,
    name: &str,
) -> Result<ClosureResult<FreeAut>, VerifyError> {
    let r = enumerate_closure(gens, cap)?;
    if !r.complete {
        notes.push(format!("{name}: closure hit the cap of {cap} elements"));
    }
    Ok(r)
}

fn summary(r: &ClosureResult<FreeAut>, certificates: Vec<String>) -> Result<ClosureSummary, VerifyError> {
    let mut s = r.summary(ORDER_CAP)?;
    s.certificates = certificates;
    Ok(s)
}

/// All `Aut(F_n)` checks for one rank.
pub fn verify_aut(n: usize, cap: usize) -> Result<AutSection, VerifyError> {
    let sets: GeneratingSets = build_generating_sets(n)?;
    let basis = sets.basis;
    let mut notes = Vec::new();
    let mut verdict = Verdict::Pass;
    let fail = |v: &mut Verdict, ok: bool| {
        if !ok {
            *v = Verdict::Fail;
        }
    };

    let theta_eta = compose_named(basis, &[NamedGenerator::Theta, NamedGenerator::Eta])?.order(12);
    let theta_tau = compose_named(basis, &[NamedGenerator::Theta, NamedGenerator::Tau])?.order(12);
    let orders_ok = theta_eta == Order::Finite(3) && theta_tau == Order::Finite(4);
    fail(&mut verdict, orders_ok);
    let orders = OrderChecks { theta_eta, theta_tau, ok: orders_ok };

    let theta = &sets.a2[0].element;
    let tau = &sets.a3[0].element;
    let eta = &sets.a1[1].element;

    // H23
    let h23 = closure(&sets.pair(2, 3), cap, &mut notes, "H23")?;
    let dihedral = soft(check_dihedral(theta, tau, 4, cap))?;
    let theta_eta_dihedral = soft(check_dihedral(theta, eta, 3, cap))?;
    if h23.complete {
        fail(&mut verdict, dihedral.is_certified() && theta_eta_dihedral.is_certified() && h23.order() == 8);
    }
    let non_monomial_witness = if h23.complete {
        let containment = check_containment(&h23, |g: &FreeAut| g.abelianize().is_monomial())?;
        containment.witness.map(|w| label_of(&w, &sets))
    } else {
        None
    };
    let mut certs = Vec::new();
    if dihedral.is_certified() {
        certs.push("dihedral of order 8: theta^2 = tau^2 = (theta tau)^4 = 1, order 8".into());
    }
    let h23 = H23Section { closure: summary(&h23, certs)?, dihedral, theta_eta_dihedral, non_monomial_witness };

    // H12 = W_{n-2} × D6, with W_{n-2} = ⟨ε_n, Σ_{n-2}⟩ and D6 = ⟨θ, η⟩
    let h12 = closure(&sets.pair(1, 2), cap, &mut notes, "H12")?;
    let left: Vec<_> = sets.a1.iter().filter(|g| g.label != "eta").cloned().collect();
    let right = vec![sets.a2[0].clone(), sets.a1[1].clone()];
    let direct_product = if h12.complete {
        check_direct_product(&left, &right, cap)?
    } else {
        Outcome::Refuted(Refutation { check: "closure".into(), detail: format!("H12 closure incomplete at cap {cap}") })
    };
    let expected_order = expected_h12_order(n);
    let h12_ok = h12.complete
        && direct_product.certificate().is_some_and(|c| c.product_order as u64 == expected_order)
        && h12.order() as u64 == expected_order;
    fail(&mut verdict, h12_ok || !h12.complete);
    let mut certs = Vec::new();
    if let Some(c) = direct_product.certificate() {
        certs.push(format!(
            "direct product W_{} x D6: {} x {} = {}",
            n - 2,
            c.left_order,
            c.right_order,
            c.product_order
        ));
    }
    let h12 = H12Section { closure: summary(&h12, certs)?, expected_order, direct_product, ok: h12_ok };

    // H13 ⊂ W_n
    let h13 = if n > HEAVY_RANK_LIMIT {
        notes.push(format!("H13 closure skipped above rank {HEAVY_RANK_LIMIT} (|W_n| = 2^n n!)"));
        H13Section {
            closure: None,
            all_monomial: None,
            wn_order: wn_order(n).to_string(),
            divides_wn_order: None,
            equals_wn: None,
            note: Some("skipped".into()),
        }
    } else {
        let r = closure(&sets.pair(1, 3), cap, &mut notes, "H13")?;
        let wn = wn_order(n);
        let mut certs = Vec::new();
        let (all_monomial, divides) = if r.complete {
            let contained = check_containment(&r, |g: &FreeAut| g.abelianize().is_monomial())?;
            let divides = wn.is_multiple_of(r.order() as u128);
            fail(&mut verdict, contained.holds && divides);
            if contained.holds {
                certs.push("every element abelianizes to a monomial matrix".into());
            }
            (Some(contained.holds), Some(divides))
        } else {
            (None, None)
        };
        H13Section {
            closure: Some(summary(&r, certs)?),
            all_monomial,
            wn_order: wn.to_string(),
            divides_wn_order: divides,
            equals_wn: r.complete.then(|| r.order() as u128 == wn),
            note: None,
        }
    };

    // generation
    let table = build_witness_table(n)?;
    let checks = table.verify(&sets)?;
    let anchors = anchor_checks(n)?;
    let failures: Vec<WitnessCheck> = checks.iter().filter(|c| !c.evaluates || !c.abelian_transfer).cloned().collect();
    fail(&mut verdict, failures.is_empty() && anchors.iter().all(|a| a.holds));
    let anchor_words = ["eps 1", "perm (1 2)", "rho 1 2"]
        .iter()
        .map(|k| (k.to_string(), table.entries[*k].word.to_string()))
        .collect();
    let witnesses = WitnessSection {
        entries: checks.len(),
        verified: checks.len() - failures.len(),
        failures,
        anchors,
        anchor_words,
    };

    if verdict == Verdict::Pass && notes.iter().any(|n| n.contains("hit the cap")) {
        verdict = Verdict::Inconclusive;
    }
    Ok(AutSection { verdict, orders, h23, h12, h13, witnesses, notes })
}

/// A cap hit is not a refutation: report it as such instead of erroring.
fn soft<C>(r: Result<Outcome<C>, ClosureError>) -> Result<Outcome<C>, VerifyError> {
    match r {
        Err(ClosureError::Incomplete { cap }) => Ok(Outcome::Refuted(Refutation {
            check: "closure".into(),
            detail: format!("closure incomplete at cap {cap}"),
        })),
        other => Ok(other?),
    }
}

/// A generator label if `g` is one, else its images.
fn label_of(g: &FreeAut, sets: &GeneratingSets) -> String {
    sets.all().find(|x| &x.element == g).map(|x| x.label.clone()).unwrap_or_else(|| g.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::DEFAULT_CAP;

    #[test]
    fn rank_three() {
        let s = verify_aut(3, DEFAULT_CAP).unwrap();
        assert_eq!(s.verdict, Verdict::Pass);
        assert_eq!(s.h23.closure.order, 8);
        assert_eq!(s.h12.closure.order, 12);
        assert_eq!(s.h13.closure.as_ref().unwrap().order, 48);
        assert_eq!(s.h23.non_monomial_witness.as_deref(), Some("theta"));
        let ms = s.h23.closure.order_multiset.as_ref().unwrap();
        assert_eq!(ms.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>(), [(1, 1), (2, 5), (4, 2)]);
    }

    #[test]
    fn h12_orders() {
        assert_eq!(expected_h12_order(3), 12);
        assert_eq!(expected_h12_order(4), 48);
        assert_eq!(expected_h12_order(6), 6 * 16 * 24);
        let s = verify_aut(4, DEFAULT_CAP).unwrap();
        assert_eq!(s.h12.closure.order, 48);
        assert_eq!(s.verdict, Verdict::Pass);
    }

    #[test]
    fn small_cap_is_inconclusive() {
        let s = verify_aut(4, 20).unwrap();
        assert_eq!(s.verdict, Verdict::Inconclusive);
        assert!(!s.h12.closure.complete);
    }
}
