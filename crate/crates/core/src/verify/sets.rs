use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::VerifyError;
use crate::closure::{witness_evaluate, Labeled, WitnessWord};
use crate::freegroup::{Basis, FreeAut, NamedGenerator, Permutation};

/// The three generating sets for `Aut(F_n)`:
/// `A1 = {ε_n, η} ∪ Σ_{n-2}`, `A2 = {θ}`, `A3 = {τ}`, where `Σ_{n-2}`
/// permutes `a_3, ..., a_n` and is given by adjacent transpositions.
#[derive(Clone, Debug)]
pub struct GeneratingSets {
    pub n: usize,
    pub basis: Basis,
    pub a1: Vec<Labeled<FreeAut>>,
    pub a2: Vec<Labeled<FreeAut>>,
    pub a3: Vec<Labeled<FreeAut>>,
}

fn labeled(g: NamedGenerator, basis: Basis) -> Result<Labeled<FreeAut>, VerifyError> {
    let f = FreeAut::from_generator(&g, basis)?;
    Ok(Labeled::new(g.to_string(), f))
}

pub fn build_generating_sets(n: usize) -> Result<GeneratingSets, VerifyError> {
    if n < 3 {
        return Err(VerifyError::RankTooSmall(n));
    }
    let basis = Basis::new(n)?;
    let mut a1 = vec![labeled(NamedGenerator::Eps(n), basis)?, labeled(NamedGenerator::Eta, basis)?];
    for k in 3..n {
        a1.push(labeled(NamedGenerator::Perm(Permutation::transposition(n, k, k + 1)?), basis)?);
    }
    Ok(GeneratingSets {
        n,
        basis,
        a1,
        a2: vec![labeled(NamedGenerator::Theta, basis)?],
        a3: vec![labeled(NamedGenerator::Tau, basis)?],
    })
}

impl GeneratingSets {
    pub fn all(&self) -> impl Iterator<Item = &Labeled<FreeAut>> {
        self.a1.iter().chain(&self.a2).chain(&self.a3)
    }

    pub fn pair(&self, i: usize, j: usize) -> Vec<Labeled<FreeAut>> {
        let sets = [&self.a1, &self.a2, &self.a3];
        sets[i - 1].iter().chain(sets[j - 1].iter()).cloned().collect()
    }

    /// Letter table for evaluating witness words.
    pub fn letters(&self) -> HashMap<String, FreeAut> {
        self.all().map(|g| (g.label.clone(), g.element.clone())).collect()
    }
}

/// A witness word over `A1 ∪ A2 ∪ A3` for one generator of `Aut(F_n)`.
#[derive(Clone, Debug)]
pub struct WitnessEntry {
    pub target: NamedGenerator,
    pub word: WitnessWord,
}

/// Words over `A1 ∪ A2 ∪ A3` for every `ρ_ij`, every `ε_i` and every
/// transposition `(a_i a_j)`, keyed by the target's label.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    pub n: usize,
    pub entries: BTreeMap<String, WitnessEntry>,
}

/// Result of evaluating one table entry.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessCheck {
    pub target: String,
    pub length: usize,
    pub evaluates: bool,
    pub abelian_transfer: bool,
}

/// One of the named identities, checked by direct composition.
#[derive(Clone, Debug, Serialize)]
pub struct AnchorCheck {
    pub identity: String,
    pub holds: bool,
}

fn letter(g: NamedGenerator) -> WitnessWord {
    WitnessWord(vec![g.to_string()])
}

fn perm(n: usize, i: usize, j: usize) -> Result<NamedGenerator, VerifyError> {
    Ok(NamedGenerator::Perm(Permutation::transposition(n, i, j)?))
}

pub fn build_witness_table(n: usize) -> Result<WitnessTable, VerifyError> {
    if n < 3 {
        return Err(VerifyError::RankTooSmall(n));
    }
    let tau = letter(NamedGenerator::Tau);
    let eta = letter(NamedGenerator::Eta);
    let eps_n = letter(NamedGenerator::Eps(n));

    // adjacent[k] = (a_k a_{k+1}); for k >= 3 these are letters of A1
    let mut adjacent: Vec<WitnessWord> = vec![WitnessWord(Vec::new()); n];
    for k in 3..n {
        adjacent[k] = letter(perm(n, k, k + 1)?);
    }
    let chain = |adjacent: &[WitnessWord], i: usize, j: usize| {
        let mut w = adjacent[i].clone();
        for k in i + 1..j {
            w = adjacent[k].conjugate(&w);
        }
        w
    };

    let (eps1, eps2, t23);
    if n >= 4 {
        // (a_n a_3) ∈ Σ_{n-2}; τ conjugates it to (a_n a_2)
        let t3n = chain(&adjacent, 3, n);
        let t2n = tau.conjugate(&t3n);
        eps2 = t2n.conjugate(&eps_n);
        t23 = t2n.conjugate(&t3n);
        eps1 = t23.then(&tau);
    } else {
        // Σ_1 is trivial, so recover ε_2, ε_1 and (a_2 a_3) from τ and η directly
        eps2 = tau.conjugate(&eps_n);
        eps1 = eta.conjugate(&eps2);
        t23 = tau.then(&eps1);
    }
    let t12 = eta.then(&eps1).then(&eps2);
    adjacent[1] = t12;
    adjacent[2] = t23;

    let trans = |i: usize, j: usize| {
        if i == j {
            WitnessWord(Vec::new())
        } else {
            chain(&adjacent, i.min(j), i.max(j))
        }
    };

    let mut entries = BTreeMap::new();
    let mut add = |target: NamedGenerator, word: WitnessWord| {
        entries.insert(target.to_string(), WitnessEntry { target, word });
    };
    for i in 1..=n {
        for j in i + 1..=n {
            add(perm(n, i, j)?, trans(i, j));
        }
    }
    for i in 1..=n {
        let w = match i {
            1 => eps1.clone(),
            2 => eps2.clone(),
            _ if i == n => eps_n.clone(),
            _ => trans(i, n).conjugate(&eps_n),
        };
        add(NamedGenerator::Eps(i), w);
    }
    let rho12 = letter(NamedGenerator::Theta).then(&eps2);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            // σ = (a_1 a_i)(a_2 a_j') sends 1 ↦ i and 2 ↦ j
            let j2 = if j == 1 {
                i
            } else if j == i {
                1
            } else {
                j
            };
            let sigma = trans(1, i).then(&trans(2, j2));
            add(NamedGenerator::Rho(i, j), sigma.conjugate(&rho12));
        }
    }
    Ok(WitnessTable { n, entries })
}

impl WitnessTable {
    /// Evaluates every entry over the letters of `sets`.
    pub fn verify(&self, sets: &GeneratingSets) -> Result<Vec<WitnessCheck>, VerifyError> {
        let letters = sets.letters();
        self.entries
            .iter()
            .map(|(name, e)| {
                let value = witness_evaluate(&e.word, &letters)?;
                let target = FreeAut::from_generator(&e.target, sets.basis)?;
                Ok(WitnessCheck {
                    target: name.clone(),
                    length: e.word.len(),
                    evaluates: value == target,
                    abelian_transfer: value.abelianize() == target.abelianize(),
                })
            })
            .collect()
    }
}

/// `ε_1 = (a_2 a_3) ∘ τ`, `(a_1 a_2) = η ∘ ε_1 ∘ ε_2`, `ρ_12 = θ ∘ ε_2`,
/// `θ ∘ η` of order 3 and `θ ∘ τ` of order 4, by direct composition.
pub fn anchor_checks(n: usize) -> Result<Vec<AnchorCheck>, VerifyError> {
    use crate::freegroup::{compose_named, Order};
    use NamedGenerator::*;
    let basis = Basis::new(n)?;
    let g = |x: NamedGenerator| FreeAut::from_generator(&x, basis);
    let eq = |lhs: &[NamedGenerator], rhs: NamedGenerator| -> Result<bool, VerifyError> {
        Ok(compose_named(basis, lhs)? == g(rhs)?)
    };
    Ok(vec![
        AnchorCheck { identity: "eps 1 = perm (2 3) ∘ tau".into(), holds: eq(&[perm(n, 2, 3)?, Tau], Eps(1))? },
        AnchorCheck {
            identity: "perm (1 2) = eta ∘ eps 1 ∘ eps 2".into(),
            holds: eq(&[Eta, Eps(1), Eps(2)], perm(n, 1, 2)?)?,
        },
        AnchorCheck { identity: "rho 1 2 = theta ∘ eps 2".into(), holds: eq(&[Theta, Eps(2)], Rho(1, 2))? },
        AnchorCheck {
            identity: "order(theta ∘ eta) = 3".into(),
            holds: compose_named(basis, &[Theta, Eta])?.order(12) == Order::Finite(3),
        },
        AnchorCheck {
            identity: "order(theta ∘ tau) = 4".into(),
            holds: compose_named(basis, &[Theta, Tau])?.order(12) == Order::Finite(4),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generating_sets() {
        let s = build_generating_sets(3).unwrap();
        let labels: Vec<_> = s.a1.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["eps 3", "eta"]);
        let s = build_generating_sets(4).unwrap();
        let labels: Vec<_> = s.a1.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["eps 4", "eta", "perm (3 4)"]);
        let s = build_generating_sets(5).unwrap();
        assert!(s.a1.iter().any(|g| g.label == "perm (3 4)"));
        assert!(s.a1.iter().any(|g| g.label == "perm (4 5)"));
        assert!(matches!(build_generating_sets(2), Err(VerifyError::RankTooSmall(2))));
    }

    #[test]
    fn witnesses_evaluate() {
        for n in 3..=6 {
            let sets = build_generating_sets(n).unwrap();
            let table = build_witness_table(n).unwrap();
            assert_eq!(table.entries.len(), n * (n - 1) + n + n * (n - 1) / 2);
            for c in table.verify(&sets).unwrap() {
                assert!(c.evaluates && c.abelian_transfer, "n={n}: {}", c.target);
            }
        }
    }

    #[test]
    fn anchor_words() {
        let t = build_witness_table(4).unwrap();
        // (a_2 a_3) ∘ τ with (a_2 a_3) expanded
        let eps1 = &t.entries["eps 1"].word;
        assert_eq!(eps1.labels().last().unwrap(), "tau");
        assert_eq!(t.entries["rho 1 2"].word.labels()[0], "theta");
        for n in 3..=8 {
            assert!(anchor_checks(n).unwrap().iter().all(|a| a.holds));
        }
    }
}
