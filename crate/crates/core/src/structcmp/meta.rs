use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{DecisionLedger, StructuralMeasure};
use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::{backdrop, backdrop_digest, find, Decision};
use crate::relations::Structure;
use crate::scalar::Scalar;
use crate::textio::{read_decisions, read_rows, write_atomic, write_decisions, write_rows};

pub const META_MAGIC: &str = "META1";

/// Default cap on nesting depth.
pub const DEFAULT_MAX_LEVEL: u32 = 5;

/// The varied decisions that identify one element of a comparison,
/// e.g. `k=5;seed=42`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Label {
    pub varied: Vec<Decision>,
}

impl Label {
    pub fn new(varied: Vec<Decision>) -> Result<Self> {
        for d in &varied {
            let bad = |s: &str| s.contains([';', '\n', '\r', '=']) || s.is_empty();
            if bad(&d.name) || d.value.contains([';', '\n', '\r']) {
                return Err(Error::InvalidParameter(format!("label decision `{d}` is not encodable")));
            }
        }
        Ok(Label { varied })
    }

    pub fn single(name: &str, value: impl fmt::Display) -> Self {
        Label::new(vec![Decision::new(name, value)]).expect("caller supplies a plain name")
    }

    fn names(&self) -> BTreeSet<&str> {
        self.varied.iter().map(|d| d.name.as_str()).collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let varied = s
            .split(';')
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.split_once('=')
                    .map(|(n, v)| Decision::new(n, v))
                    .ok_or_else(|| Error::InvalidParameter(format!("bad label `{s}`")))
            })
            .collect::<Result<_>>()?;
        Label::new(varied)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.varied.iter().enumerate() {
            if i > 0 {
                f.write_char(';')?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Anything with a square relation matrix over ordered ids: a structure
/// over symbols, or a meta-structure over labeled structures.
pub trait Geometry<T: Scalar> {
    fn matrix(&self) -> &Matrix<T>;
    fn ids(&self) -> Vec<String>;
    fn decisions(&self) -> &[Decision];
    /// 1 for structures over symbols.
    fn level(&self) -> u32;
}

impl<T: Scalar> Geometry<T> for Structure<T> {
    fn matrix(&self) -> &Matrix<T> {
        Structure::matrix(self)
    }

    fn ids(&self) -> Vec<String> {
        self.symbol_ids().to_vec()
    }

    fn decisions(&self) -> &[Decision] {
        Structure::decisions(self)
    }

    fn level(&self) -> u32 {
        1
    }
}

/// δ over every pair of labeled structures sharing a fixed backdrop.
#[derive(Clone, Debug, PartialEq)]
pub struct MetaStructure<T> {
    matrix: Matrix<T>,
    labels: Vec<Label>,
    phi_digest: Digest,
    delta_id: String,
    level: u32,
    ledger: DecisionLedger,
    /// `ledger.fixed` plus the measure and varied names, as seen from the
    /// next level up.
    decisions: Vec<Decision>,
}

impl<T: Scalar> MetaStructure<T> {
    fn assemble(
        matrix: Matrix<T>,
        labels: Vec<Label>,
        phi_digest: Digest,
        delta_id: String,
        level: u32,
        fixed: Vec<Decision>,
    ) -> Result<Self> {
        let names: Vec<String> = labels
            .first()
            .map(|l| l.varied.iter().map(|d| d.name.clone()).collect())
            .unwrap_or_default();
        let varied = names
            .iter()
            .map(|n| {
                let values = labels
                    .iter()
                    .map(|l| find(&l.varied, n).unwrap_or_default().to_string())
                    .collect();
                (n.clone(), values)
            })
            .collect();
        let ledger = DecisionLedger::new(fixed, varied)?;
        let mut decisions = ledger.fixed.clone();
        decisions.push(Decision::new(format!("delta@{level}"), &delta_id));
        decisions.push(Decision::new(format!("sigma@{level}"), names.join(",")));
        Ok(MetaStructure {
            matrix,
            labels,
            phi_digest,
            delta_id,
            level,
            ledger,
            decisions,
        })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn phi_digest(&self) -> &Digest {
        &self.phi_digest
    }

    pub fn delta_id(&self) -> &str {
        &self.delta_id
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ledger(&self) -> &DecisionLedger {
        &self.ledger
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Off-diagonal values of the strict upper triangle, row-major.
    pub fn pair_values(&self) -> Vec<(usize, usize, T)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.matrix[(i, j)]))
            .collect()
    }

    /// `META1 n delta_id level phi_digest`, n matrix rows, n label lines,
    /// then the fixed decisions as `@name=value` lines.
    pub fn to_text(&self) -> String {
        let n = self.len();
        let mut out = String::new();
        writeln!(out, "{META_MAGIC} {n} {} {} {}", self.delta_id, self.level, self.phi_digest).unwrap();
        write_rows(&mut out, &self.matrix);
        for l in &self.labels {
            writeln!(out, "{l}").unwrap();
        }
        write_decisions(&mut out, &self.ledger.fixed);
        out
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::format(origin, "empty file"))?;
        let parts: Vec<&str> = header.split(' ').collect();
        let [magic, n, delta_id, level, digest] = parts[..] else {
            return Err(Error::format(origin, "bad header"));
        };
        if magic != META_MAGIC {
            return Err(Error::format(origin, format!("expected {META_MAGIC}, got {magic}")));
        }
        let n: usize = n.parse().map_err(|_| Error::format(origin, "bad dimension"))?;
        let level: u32 = level.parse().map_err(|_| Error::format(origin, "bad level"))?;
        let phi = Digest::parse(digest).ok_or_else(|| Error::format(origin, "bad phi digest"))?;
        let matrix = read_rows(&mut lines, n, origin)?;
        let labels = (0..n)
            .map(|_| {
                lines
                    .next()
                    .ok_or_else(|| Error::format(origin, "missing label"))
                    .and_then(Label::parse)
            })
            .collect::<Result<Vec<_>>>()?;
        let fixed = read_decisions(lines, origin)?;
        Self::assemble(matrix, labels, phi, delta_id.to_string(), level, fixed)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }
}

impl<T: Scalar> Geometry<T> for MetaStructure<T> {
    fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn ids(&self) -> Vec<String> {
        self.labels.iter().map(Label::to_string).collect()
    }

    fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    fn level(&self) -> u32 {
        self.level
    }
}

/// Checks shared ids and backdrop; returns (varied names, backdrop digest,
/// backdrop decisions).
fn check_backdrop<T: Scalar, G: Geometry<T>>(
    items: &[(&Label, &G)],
) -> Result<(BTreeSet<String>, Digest, Vec<Decision>)> {
    let (first_label, first) = items[0];
    let ids = first.ids();
    let names = first_label.names();
    for (label, g) in items {
        if g.ids() != ids {
            return Err(Error::SymbolMismatch);
        }
        if label.names() != names {
            return Err(Error::LabelMismatch);
        }
    }
    let digest = backdrop_digest(first.decisions(), &names);
    for (label, g) in &items[1..] {
        if backdrop_digest(g.decisions(), &names) != digest {
            let a: BTreeSet<_> = backdrop(first.decisions(), &names).into_iter().collect();
            let b: BTreeSet<_> = backdrop(g.decisions(), &names).into_iter().collect();
            let diff: Vec<String> = a.symmetric_difference(&b).map(|d| d.to_string()).collect();
            return Err(Error::PhiMismatch(format!(
                "`{label}` differs from `{first_label}` in {}",
                diff.join(", ")
            )));
        }
    }
    let fixed = backdrop(first.decisions(), &names);
    Ok((names.into_iter().map(str::to_string).collect(), digest, fixed))
}

/// Computes δ for every unordered pair, in parallel. Callers bound the
/// number of alignments in flight by the rayon pool they run in.
fn pairwise<T: Scalar>(
    mats: &[&Matrix<T>],
    delta: StructuralMeasure,
) -> Result<Matrix<T>> {
    let n = mats.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let values: Vec<T> = pairs
        .par_iter()
        .map(|&(i, j)| delta.compare(mats[i], mats[j]))
        .collect::<Result<_>>()?;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = T::of(delta.self_relation());
    }
    for (&(i, j), v) in pairs.iter().zip(values) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(m)
}

/// δ over all pairs of labeled geometries that differ only in the decisions
/// named by their labels.
pub fn meta_structure<T: Scalar, G: Geometry<T>>(
    items: &[(Label, G)],
    delta: StructuralMeasure,
) -> Result<MetaStructure<T>> {
    if items.len() < 2 {
        return Err(Error::TooFew {
            what: "structures",
            needed: 2,
            got: items.len(),
        });
    }
    let refs: Vec<(&Label, &G)> = items.iter().map(|(l, g)| (l, g)).collect();
    let (_, digest, fixed) = check_backdrop(&refs)?;
    let mats: Vec<&Matrix<T>> = items.iter().map(|(_, g)| g.matrix()).collect();
    let matrix = pairwise(&mats, delta)?;
    let level = items.iter().map(|(_, g)| g.level()).max().unwrap_or(1) + 1;
    MetaStructure::assemble(
        matrix,
        items.iter().map(|(l, _)| l.clone()).collect(),
        digest,
        delta.id(),
        level,
        fixed,
    )
}

/// Treats each inner meta-structure as a structure over its labels and
/// compares them with `delta_prime`.
pub fn nested_semantics<T: Scalar>(
    metas: &[(Label, MetaStructure<T>)],
    delta_prime: StructuralMeasure,
    max_level: u32,
) -> Result<MetaStructure<T>> {
    if metas.len() < 2 {
        return Err(Error::TooFew {
            what: "meta-structures",
            needed: 2,
            got: metas.len(),
        });
    }
    let (_, first) = &metas[0];
    for (_, m) in metas {
        if m.labels() != first.labels() {
            return Err(Error::LabelMismatch);
        }
        if m.delta_id() != first.delta_id() {
            return Err(Error::PhiMismatch(format!(
                "inner measures differ: {} vs {}",
                first.delta_id(),
                m.delta_id()
            )));
        }
    }
    let level = metas.iter().map(|(_, m)| m.level()).max().unwrap_or(1) + 1;
    if level > max_level {
        return Err(Error::LevelOverflow { level, cap: max_level });
    }
    meta_structure(metas, delta_prime)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroupStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub count: usize,
}

impl GroupStats {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPairSet);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Ok(GroupStats {
            mean,
            std: var.sqrt(),
            count: values.len(),
        })
    }
}

/// Mean δ between two groups of structures. When both groups hold the same
/// structures (by digest, in order) only the distinct unordered pairs count;
/// otherwise every cross pair does. `varied` names the decisions allowed to
/// differ across the union.
pub fn group_mean_distance<T: Scalar>(
    group_a: &[&Structure<T>],
    group_b: &[&Structure<T>],
    delta: StructuralMeasure,
    varied: &[&str],
) -> Result<GroupStats> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::TooFew {
            what: "structures in group",
            needed: 1,
            got: 0,
        });
    }
    let names: BTreeSet<&str> = varied.iter().copied().collect();
    let first = group_a[0];
    let digest = backdrop_digest(first.decisions(), &names);
    for s in group_a.iter().chain(group_b) {
        if s.symbol_ids() != first.symbol_ids() {
            return Err(Error::SymbolMismatch);
        }
        if backdrop_digest(s.decisions(), &names) != digest {
            return Err(Error::PhiMismatch(format!(
                "{} and {} differ outside {:?}",
                first.phi_digest().short(),
                s.phi_digest().short(),
                varied
            )));
        }
    }
    let same = group_a.len() == group_b.len()
        && group_a.iter().zip(group_b).all(|(a, b)| a.phi_digest() == b.phi_digest());
    let pairs: Vec<(usize, usize)> = if same {
        (0..group_a.len())
            .flat_map(|i| ((i + 1)..group_a.len()).map(move |j| (i, j)))
            .collect()
    } else {
        (0..group_a.len())
            .flat_map(|i| (0..group_b.len()).map(move |j| (i, j)))
            .collect()
    };
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| delta.compare(group_a[i].matrix(), group_b[j].matrix()).map(Scalar::as_f64))
        .collect::<Result<_>>()?;
    GroupStats::of(&values)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeEquivalence {
    /// δ between the transferred and native structures.
    pub value: f64,
    /// Whether the δ-distance (`value`, or `1 − value` for similarities) is
    /// within the tolerance.
    pub equivalent: bool,
}

/// Compares the structure of S under a model trained elsewhere and applied
/// here (`transfer`) with the structure under a model trained and applied
/// here (`native`). The two may differ only in the `code` decision.
pub fn code_equivalence<T: Scalar>(
    transfer: &Structure<T>,
    native: &Structure<T>,
    delta: StructuralMeasure,
    tol: f64,
) -> Result<CodeEquivalence> {
    if transfer.symbol_ids() != native.symbol_ids() {
        return Err(Error::SymbolMismatch);
    }
    let names: BTreeSet<&str> = ["code"].into();
    if backdrop_digest(transfer.decisions(), &names) != backdrop_digest(native.decisions(), &names) {
        return Err(Error::PhiMismatch(
            "structures differ in decisions other than the training corpus".into(),
        ));
    }
    let value = delta.compare(transfer.matrix(), native.matrix())?.as_f64();
    let distance = delta.as_distance(value);
    Ok(CodeEquivalence {
        value,
        equivalent: distance <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SymbolSet;
    use crate::relations::{random_structure, RandomKind};

    fn symbols(n: usize) -> SymbolSet {
        SymbolSet::new((0..n).map(|i| i.to_string()).collect(), "document").unwrap()
    }

    fn seeded(n: usize, seed: u64) -> (Label, Structure<f64>) {
        (Label::single("seed", seed), random_structure(&symbols(n), RandomKind::Symmetric, seed).unwrap())
    }

    #[test]
    fn label_round_trip() {
        let l = Label::new(vec![Decision::new("k", 5), Decision::new("seed", 42)]).unwrap();
        assert_eq!(l.to_string(), "k=5;seed=42");
        assert_eq!(Label::parse("k=5;seed=42").unwrap(), l);
        assert!(Label::new(vec![Decision::new("a;b", 1)]).is_err());
    }

    #[test]
    fn ten_seeds_give_45_pairs() {
        let items: Vec<_> = (0..10).map(|s| seeded(8, s)).collect();
        let meta = meta_structure(&items, StructuralMeasure::PROCRUSTES).unwrap();
        assert_eq!(meta.len(), 10);
        assert_eq!(meta.pair_values().len(), 45);
        assert_eq!(meta.level(), 2);
        assert!(meta.matrix().is_symmetric(0.0));
        assert_eq!(meta.ledger().varied_names(), vec!["seed"]);
        assert!(meta.ledger().fixed.iter().any(|d| d.name == "model"));
    }

    #[test]
    fn identical_structures_give_the_exact_self_relation() {
        let (_, s) = seeded(6, 3);
        let items = vec![(Label::single("seed", "a"), s.clone()), (Label::single("seed", "b"), s)];
        for delta in [StructuralMeasure::PROCRUSTES, StructuralMeasure::PEARSON, StructuralMeasure::SPEARMAN] {
            let meta = meta_structure(&items, delta).unwrap();
            assert_eq!(meta.matrix()[(0, 1)], delta.self_relation());
        }
    }

    #[test]
    fn mixed_backdrop_is_rejected() {
        let (l1, s1) = seeded(6, 1);
        let (l2, s2) = seeded(6, 2);
        let s2 = s2.with_decisions(vec![
            Decision::new("symbols", symbols(6).digest()),
            Decision::new("model", "something-else"),
            Decision::new("random_kind", RandomKind::Symmetric),
            Decision::new("seed", 2),
        ]);
        let err = meta_structure(&[(l1, s1), (l2, s2)], StructuralMeasure::PROCRUSTES).unwrap_err();
        assert!(matches!(err, Error::PhiMismatch(_)), "{err}");
    }

    #[test]
    fn needs_two_and_shared_symbols() {
        assert!(matches!(
            meta_structure(&[seeded(5, 1)], StructuralMeasure::PROCRUSTES),
            Err(Error::TooFew { .. })
        ));
        assert!(matches!(
            meta_structure(&[seeded(5, 1), seeded(6, 2)], StructuralMeasure::PROCRUSTES),
            Err(Error::SymbolMismatch)
        ));
    }

    #[test]
    fn permuting_labels_permutes_the_matrix() {
        let items: Vec<_> = (0..5).map(|s| seeded(7, s)).collect();
        let perm = [3, 0, 4, 1, 2];
        let permuted: Vec<_> = perm.iter().map(|&i| items[i].clone()).collect();
        let a = meta_structure(&items, StructuralMeasure::PROCRUSTES).unwrap();
        let b = meta_structure(&permuted, StructuralMeasure::PROCRUSTES).unwrap();
        assert_eq!(b.matrix(), &a.matrix().permute_square(&perm));
    }

    #[test]
    fn nesting_levels_and_cap() {
        let items: Vec<_> = (0..4).map(|s| seeded(6, s)).collect();
        let inner = meta_structure(&items, StructuralMeasure::PROCRUSTES).unwrap();
        let metas = vec![(Label::single("corpus", "a"), inner.clone()), (Label::single("corpus", "b"), inner)];
        let outer = nested_semantics(&metas, StructuralMeasure::PROCRUSTES, DEFAULT_MAX_LEVEL).unwrap();
        assert_eq!(outer.level(), 3);
        assert_eq!(outer.matrix()[(0, 1)], 0.0);
        assert!(matches!(
            nested_semantics(&metas, StructuralMeasure::PROCRUSTES, 2),
            Err(Error::LevelOverflow { level: 3, cap: 2 })
        ));
    }

    #[test]
    fn nesting_needs_shared_labels() {
        let a: Vec<_> = (0..3).map(|s| seeded(6, s)).collect();
        let b: Vec<_> = (10..13).map(|s| seeded(6, s)).collect();
        let ma = meta_structure(&a, StructuralMeasure::PROCRUSTES).unwrap();
        let mb = meta_structure(&b, StructuralMeasure::PROCRUSTES).unwrap();
        let metas = vec![(Label::single("corpus", "a"), ma), (Label::single("corpus", "b"), mb)];
        assert!(matches!(
            nested_semantics(&metas, StructuralMeasure::PROCRUSTES, DEFAULT_MAX_LEVEL),
            Err(Error::LabelMismatch)
        ));
    }

    #[test]
    fn meta_text_round_trip_is_exact() {
        let items: Vec<_> = (0..4).map(|s| seeded(6, s)).collect();
        let meta = meta_structure(&items, StructuralMeasure::PEARSON).unwrap();
        let back = MetaStructure::<f64>::from_text(&meta.to_text(), Path::new("mem")).unwrap();
        assert_eq!(back, meta);
    }

    #[test]
    fn group_counts() {
        let group: Vec<_> = (0..10).map(|s| seeded(6, s).1).collect();
        let refs: Vec<&Structure<f64>> = group.iter().collect();
        let within = group_mean_distance(&refs, &refs, StructuralMeasure::PROCRUSTES, &["seed"]).unwrap();
        assert_eq!(within.count, 45);
        let cross = group_mean_distance(&refs[..4], &refs[4..], StructuralMeasure::PROCRUSTES, &["seed"]).unwrap();
        assert_eq!(cross.count, 24);
        assert!(matches!(
            group_mean_distance(&refs[..1], &refs[..1], StructuralMeasure::PROCRUSTES, &["seed"]),
            Err(Error::EmptyPairSet)
        ));
        assert!(matches!(
            group_mean_distance(&refs[..2], &refs[2..4], StructuralMeasure::PROCRUSTES, &[]),
            Err(Error::PhiMismatch(_))
        ));
    }

    #[test]
    fn population_std() {
        let g = GroupStats::of(&[1.0, 3.0]).unwrap();
        assert_eq!((g.mean, g.std, g.count), (2.0, 1.0, 2));
    }

    #[test]
    fn code_equivalence_of_identical_pipelines() {
        let (_, s) = seeded(6, 9);
        let native = s.clone().with_decisions(vec![Decision::new("code", "native"), Decision::new("k", 2)]);
        let transfer = s.with_decisions(vec![Decision::new("code", "abc"), Decision::new("k", 2)]);
        let r = code_equivalence(&transfer, &native, StructuralMeasure::PROCRUSTES, 0.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.equivalent);
        let other = seeded(6, 10).1.with_decisions(vec![Decision::new("code", "native"), Decision::new("k", 2)]);
        let r = code_equivalence(&transfer, &other, StructuralMeasure::PROCRUSTES, 0.0).unwrap();
        assert!(r.value > 0.0 && !r.equivalent);
        let wrong_k = other.with_decisions(vec![Decision::new("code", "native"), Decision::new("k", 3)]);
        assert!(matches!(
            code_equivalence(&transfer, &wrong_k, StructuralMeasure::PROCRUSTES, 0.1),
            Err(Error::PhiMismatch(_))
        ));
    }
}
