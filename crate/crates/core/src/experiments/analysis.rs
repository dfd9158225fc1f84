use rayon::prelude::*;
use serde::Serialize;

use super::{Baselines, Member};
use crate::error::{Error, Result};
use crate::relations::Structure;
use crate::scalar::Scalar;
use crate::structcmp::{group_mean_distance, meta_structure, pearson, GroupStats, StructuralMeasure};

/// Decisions that differ between members of an ensemble with several k.
pub const K_VARIED: [&str; 3] = ["k", "seed", "alpha"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairValue {
    pub a: String,
    pub b: String,
    pub value: f64,
}

/// Seed stability at one k: the within-k pair values and the distance of
/// each model to the random and null references.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub k: usize,
    pub delta: String,
    pub models: usize,
    pub within: Vec<PairValue>,
    pub lda: GroupStats,
    pub random: GroupStats,
    pub null: GroupStats,
    pub random_seeds: Vec<u64>,
}

fn against<T: Scalar>(structures: &[&Structure<T>], reference: &Structure<T>, delta: StructuralMeasure) -> Result<Vec<f64>> {
    structures
        .par_iter()
        .map(|s| {
            if s.symbol_ids() != reference.symbol_ids() {
                return Err(Error::SymbolMismatch);
            }
            delta.compare(s.matrix(), reference.matrix()).map(Scalar::as_f64)
        })
        .collect()
}

pub fn stability_analysis<T: Scalar>(
    members: &[Member<T>],
    k: usize,
    baselines: &Baselines<T>,
    delta: StructuralMeasure,
) -> Result<StabilityReport> {
    let at_k: Vec<&Member<T>> = members.iter().filter(|m| m.k == k).collect();
    if at_k.len() < 2 {
        return Err(Error::TooFew {
            what: "structures at this k",
            needed: 2,
            got: at_k.len(),
        });
    }
    if baselines.randoms.is_empty() {
        return Err(Error::TooFew {
            what: "random structures",
            needed: 1,
            got: 0,
        });
    }
    let items: Vec<_> = at_k.iter().map(|m| (m.seed_label(), m.structure.clone())).collect();
    let meta = meta_structure(&items, delta)?;
    let labels = meta.labels();
    let within: Vec<PairValue> = meta
        .pair_values()
        .into_iter()
        .map(|(i, j, v)| PairValue {
            a: labels[i].to_string(),
            b: labels[j].to_string(),
            value: v.as_f64(),
        })
        .collect();
    let values: Vec<f64> = within.iter().map(|p| p.value).collect();
    let structures: Vec<&Structure<T>> = at_k.iter().map(|m| &m.structure).collect();
    let mut random = Vec::new();
    for (_, r) in &baselines.randoms {
        random.extend(against(&structures, r, delta)?);
    }
    let null = against(&structures, &baselines.null, delta)?;
    Ok(StabilityReport {
        k,
        delta: delta.id(),
        models: at_k.len(),
        within,
        lda: GroupStats::of(&values)?,
        random: GroupStats::of(&random)?,
        null: GroupStats::of(&null)?,
        random_seeds: baselines.randoms.iter().map(|(s, _)| *s).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KCell {
    pub k_a: usize,
    pub k_b: usize,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

/// Mean δ between the model groups of every pair of k; within-group means
/// on the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSweepReport {
    pub delta: String,
    pub ks: Vec<usize>,
    /// Row-major |K|×|K|.
    pub cells: Vec<KCell>,
}

impl KSweepReport {
    pub fn mean(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.ks.len() + j].mean
    }
}

pub fn k_sweep<T: Scalar>(members: &[Member<T>], delta: StructuralMeasure) -> Result<KSweepReport> {
    let mut ks: Vec<usize> = members.iter().map(|m| m.k).collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(Error::TooFew {
            what: "values of k",
            needed: 1,
            got: 0,
        });
    }
    let groups: Vec<Vec<&Structure<T>>> = ks
        .iter()
        .map(|&k| members.iter().filter(|m| m.k == k).map(|m| &m.structure).collect())
        .collect();
    let n = ks.len();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let stats = if j < i {
                let c: &KCell = &cells[j * n + i];
                GroupStats {
                    mean: c.mean,
                    std: c.std,
                    count: c.count,
                }
            } else {
                group_mean_distance(&groups[i], &groups[j], delta, &K_VARIED)?
            };
            cells.push(KCell {
                k_a: ks[i],
                k_b: ks[j],
                mean: stats.mean,
                std: stats.std,
                count: stats.count,
            });
        }
    }
    Ok(KSweepReport {
        delta: delta.id(),
        ks,
        cells,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementPair {
    pub a: String,
    pub b: String,
    pub value_a: f64,
    pub value_b: f64,
}

/// Both measures over every unordered pair of members, and the Pearson
/// correlation between the two value lists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub delta_a: String,
    pub delta_b: String,
    pub pairs: Vec<AgreementPair>,
    pub correlation: f64,
}

pub fn delta_agreement<T: Scalar>(
    members: &[Member<T>],
    delta_a: StructuralMeasure,
    delta_b: StructuralMeasure,
) -> Result<AgreementReport> {
    if members.len() < 3 {
        return Err(Error::TooFew {
            what: "structures",
            needed: 3,
            got: members.len(),
        });
    }
    let items: Vec<_> = members.iter().map(|m| (m.label(), m.structure.clone())).collect();
    let ma = meta_structure(&items, delta_a)?;
    let mb = if delta_b == delta_a {
        ma.clone()
    } else {
        meta_structure(&items, delta_b)?
    };
    let labels = ma.labels();
    let pairs: Vec<AgreementPair> = ma
        .pair_values()
        .into_iter()
        .zip(mb.pair_values())
        .map(|((i, j, va), (_, _, vb))| AgreementPair {
            a: labels[i].to_string(),
            b: labels[j].to_string(),
            value_a: va.as_f64(),
            value_b: vb.as_f64(),
        })
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.value_a).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.value_b).collect();
    Ok(AgreementReport {
        delta_a: delta_a.id(),
        delta_b: delta_b.id(),
        correlation: pearson(&xs, &ys)?,
        pairs,
    })
}
