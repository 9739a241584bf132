use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MlError;
use crate::model::{Iri, RelationTriple};

/// Train/validation/test partition of the object property assertions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train: BTreeSet<RelationTriple>,
    pub valid: BTreeSet<RelationTriple>,
    pub test: BTreeSet<RelationTriple>,
    pub seed: u64,
    pub ratios: [f64; 3],
    pub moved_for_coverage: usize,
    pub moved_for_leakage: usize,
}

impl Split {
    pub fn len(&self) -> usize {
        self.train.len() + self.valid.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(name, triples)` in file order.
    pub fn parts(&self) -> [(&'static str, &BTreeSet<RelationTriple>); 3] {
        [
            ("train", &self.train),
            ("valid", &self.valid),
            ("test", &self.test),
        ]
    }

    /// Entities and properties of `valid ∪ test` that never occur in train.
    pub fn uncovered(&self) -> Vec<Iri> {
        let seen = coverage(&self.train);
        let mut out: BTreeSet<Iri> = BTreeSet::new();
        for t in self.valid.iter().chain(&self.test) {
            for iri in [&t.subject, &t.object] {
                if !seen.entities.contains(iri) {
                    out.insert(iri.clone());
                }
            }
            if !seen.properties.contains(&t.property) {
                out.insert(t.property.clone());
            }
        }
        out.into_iter().collect()
    }
}

pub fn validate_ratios(ratios: [f64; 3]) -> Result<(), MlError> {
    let sum: f64 = ratios.iter().sum();
    if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(MlError::InvalidRatios(ratios));
    }
    Ok(())
}

/// Splits `n` into parts proportional to `weights` that sum to exactly `n`.
/// Leftover units go to the largest fractional parts, earlier parts first on
/// ties.
pub fn largest_remainder(n: usize, weights: &[f64]) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || total <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

struct Coverage<'a> {
    entities: HashSet<&'a Iri>,
    properties: HashSet<&'a Iri>,
}

fn coverage(train: &BTreeSet<RelationTriple>) -> Coverage<'_> {
    let mut c = Coverage {
        entities: HashSet::new(),
        properties: HashSet::new(),
    };
    for t in train {
        c.entities.insert(&t.subject);
        c.entities.insert(&t.object);
        c.properties.insert(&t.property);
    }
    c
}

/// Seeded shuffle, partition by `ratios`, then coverage repair: evaluation
/// triples with an entity or property missing from train are moved there.
pub fn split(
    assertions: impl IntoIterator<Item = RelationTriple>,
    ratios: [f64; 3],
    seed: u64,
) -> Result<Split, MlError> {
    validate_ratios(ratios)?;
    let sorted: BTreeSet<RelationTriple> = assertions.into_iter().collect();
    let mut triples: Vec<RelationTriple> = sorted.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    triples.shuffle(&mut rng);

    let counts = largest_remainder(triples.len(), &ratios);
    let mut rest = triples.into_iter();
    let train: Vec<RelationTriple> = rest.by_ref().take(counts[0]).collect();
    let valid: Vec<RelationTriple> = rest.by_ref().take(counts[1]).collect();
    let test: Vec<RelationTriple> = rest.collect();

    let mut entities: HashSet<Iri> = HashSet::new();
    let mut properties: HashSet<Iri> = HashSet::new();
    for t in &train {
        entities.insert(t.subject.clone());
        entities.insert(t.object.clone());
        properties.insert(t.property.clone());
    }
    let mut out = Split {
        train: train.into_iter().collect(),
        seed,
        ratios,
        ..Split::default()
    };
    for (part, eval) in [(0, valid), (1, test)] {
        for t in eval {
            let covered = entities.contains(&t.subject)
                && entities.contains(&t.object)
                && properties.contains(&t.property);
            if covered {
                if part == 0 {
                    out.valid.insert(t);
                } else {
                    out.test.insert(t);
                }
            } else {
                entities.insert(t.subject.clone());
                entities.insert(t.object.clone());
                properties.insert(t.property.clone());
                out.train.insert(t);
                out.moved_for_coverage += 1;
            }
        }
    }
    Ok(out)
}

/// Moves to train every evaluation triple whose reverse, under the same
/// property or an inverse one, is in train. Repeats until no triple moves.
pub fn filter_inversion_leakage(split: &Split, inverses: &BTreeSet<(Iri, Iri)>) -> Split {
    let mut partners: HashMap<&Iri, Vec<&Iri>> = HashMap::new();
    for (p, q) in inverses {
        partners.entry(p).or_default().push(q);
        partners.entry(q).or_default().push(p);
    }
    let mut out = split.clone();
    loop {
        let leaks = |t: &RelationTriple, train: &BTreeSet<RelationTriple>| {
            let reversed = |p: &Iri| {
                train.contains(&RelationTriple::new(
                    t.object.clone(),
                    p.clone(),
                    t.subject.clone(),
                ))
            };
            reversed(&t.property)
                || partners
                    .get(&t.property)
                    .is_some_and(|qs| qs.iter().any(|q| reversed(q)))
        };
        let moved_valid: Vec<RelationTriple> =
            out.valid.iter().filter(|t| leaks(t, &out.train)).cloned().collect();
        let moved_test: Vec<RelationTriple> =
            out.test.iter().filter(|t| leaks(t, &out.train)).cloned().collect();
        if moved_valid.is_empty() && moved_test.is_empty() {
            break;
        }
        for t in moved_valid {
            out.valid.remove(&t);
            out.train.insert(t);
            out.moved_for_leakage += 1;
        }
        for t in moved_test {
            out.test.remove(&t);
            out.train.insert(t);
            out.moved_for_leakage += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn t(s: &str, p: &str, o: &str) -> RelationTriple {
        RelationTriple::new(iri(s), iri(p), iri(o))
    }

    #[test]
    fn largest_remainder_sums_exactly() {
        assert_eq!(largest_remainder(10, &[0.8, 0.1, 0.1]), vec![8, 1, 1]);
        assert_eq!(largest_remainder(7, &[1.0, 1.0, 1.0]), vec![3, 2, 2]);
        assert_eq!(largest_remainder(0, &[0.5, 0.5]), vec![0, 0]);
    }

    #[test]
    fn ratios_are_checked() {
        assert!(split(Vec::new(), [0.8, 0.1, 0.2], 1).is_err());
        assert!(split(Vec::new(), [1.0, 0.0, 0.0], 1).is_err());
        assert!(split(Vec::new(), [0.8, 0.1, 0.1], 1).is_ok());
    }

    #[test]
    fn ten_triples_split_eight_one_one_before_repair() {
        let triples: Vec<RelationTriple> = (0..10)
            .map(|i| t(&format!("a{}", i % 3), "p", &format!("b{}", i % 4)))
            .collect();
        let s = split(triples, [0.8, 0.1, 0.1], 7).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s.train.len(), 8 + s.moved_for_coverage);
        assert!(s.uncovered().is_empty());
    }

    #[test]
    fn singleton_property_lands_in_train() {
        let mut triples: Vec<RelationTriple> = (0..20).map(|i| t("a", "p", &format!("b{}", i % 2))).collect();
        triples.push(t("a", "rare", "b0"));
        for seed in 0..20 {
            let s = split(triples.clone(), [0.5, 0.25, 0.25], seed).unwrap();
            assert!(s.train.contains(&t("a", "rare", "b0")));
        }
    }

    #[test]
    fn leakage_moves_reverse_and_inverse() {
        let split = Split {
            train: BTreeSet::from([t("a", "p", "b")]),
            test: BTreeSet::from([t("b", "p", "a"), t("b", "q", "a"), t("a", "p", "a")]),
            ..Split::default()
        };
        let none = filter_inversion_leakage(&split, &BTreeSet::new());
        assert_eq!(none.moved_for_leakage, 1);
        let inverses = BTreeSet::from([(iri("p"), iri("q"))]);
        let filtered = filter_inversion_leakage(&split, &inverses);
        assert_eq!(filtered.moved_for_leakage, 2);
        assert_eq!(filtered.test, BTreeSet::from([t("a", "p", "a")]));
    }

    #[test]
    fn leakage_filter_is_identity_without_reverses() {
        let split = Split {
            train: BTreeSet::from([t("a", "p", "b")]),
            valid: BTreeSet::from([t("a", "p", "c")]),
            ..Split::default()
        };
        assert_eq!(filter_inversion_leakage(&split, &BTreeSet::new()), split);
    }
}
