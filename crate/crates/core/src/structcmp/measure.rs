use std::fmt;
use std::str::FromStr;

use super::correlation::{extract, pearson, spearman, Extraction};
use super::procrustes::procrustes_matrices;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relations::MeasureKind;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaId {
    Procrustes,
    Pearson,
    Spearman,
}

/// A structural relation measure: how two structures relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StructuralMeasure {
    pub id: DeltaId,
    /// Entry extraction for the correlation measures; ignored by Procrustes.
    pub mode: Extraction,
}

impl StructuralMeasure {
    pub const PROCRUSTES: StructuralMeasure = StructuralMeasure {
        id: DeltaId::Procrustes,
        mode: Extraction::UpperTriangle,
    };
    pub const PEARSON: StructuralMeasure = StructuralMeasure {
        id: DeltaId::Pearson,
        mode: Extraction::UpperTriangle,
    };
    pub const SPEARMAN: StructuralMeasure = StructuralMeasure {
        id: DeltaId::Spearman,
        mode: Extraction::UpperTriangle,
    };

    pub fn with_mode(self, mode: Extraction) -> Self {
        StructuralMeasure { mode, ..self }
    }

    pub fn kind(self) -> MeasureKind {
        match self.id {
            DeltaId::Procrustes => MeasureKind::Dissimilarity,
            DeltaId::Pearson | DeltaId::Spearman => MeasureKind::Similarity,
        }
    }

    pub fn symmetric(self) -> bool {
        true
    }

    /// Value of δ(A, A).
    pub fn self_relation(self) -> f64 {
        match self.kind() {
            MeasureKind::Dissimilarity => 0.0,
            MeasureKind::Similarity => 1.0,
        }
    }

    pub fn id(self) -> String {
        let base = match self.id {
            DeltaId::Procrustes => return "procrustes-std".into(),
            DeltaId::Pearson => "pearson",
            DeltaId::Spearman => "spearman",
        };
        match self.mode {
            Extraction::UpperTriangle => base.into(),
            Extraction::FullOffdiag => format!("{base}-full"),
        }
    }

    /// Maps the value onto a dissimilarity: itself for Procrustes, `1 − r`
    /// for the correlations.
    pub fn as_distance<T: Scalar>(self, value: T) -> T {
        match self.kind() {
            MeasureKind::Dissimilarity => value,
            MeasureKind::Similarity => T::one() - value,
        }
    }

    /// δ between two structure matrices. Bitwise-identical inputs yield the
    /// exact self-relation value.
    pub fn compare<T: Scalar>(self, a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
        if a == b {
            // Still reject inputs the measure cannot score.
            self.compare_inner(a, a)?;
            return Ok(T::of(self.self_relation()));
        }
        // A fixed argument order makes the result bit-exactly symmetric.
        if self.symmetric() && lex_less(b.as_slice(), a.as_slice()) {
            return self.compare_inner(b, a);
        }
        self.compare_inner(a, b)
    }

    fn compare_inner<T: Scalar>(self, a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
        if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
            return Err(Error::SymbolMismatch);
        }
        match self.id {
            DeltaId::Procrustes => procrustes_matrices(a, b),
            DeltaId::Pearson => pearson(&extract(a, self.mode), &extract(b, self.mode)),
            DeltaId::Spearman => spearman(&extract(a, self.mode), &extract(b, self.mode)),
        }
    }
}

impl fmt::Display for StructuralMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for StructuralMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let full = Extraction::FullOffdiag;
        match s {
            "procrustes" | "procrustes-std" => Ok(Self::PROCRUSTES),
            "pearson" => Ok(Self::PEARSON),
            "pearson-full" => Ok(Self::PEARSON.with_mode(full)),
            "spearman" => Ok(Self::SPEARMAN),
            "spearman-full" => Ok(Self::SPEARMAN.with_mode(full)),
            _ => Err(Error::Unknown {
                what: "structural measure",
                name: s.into(),
            }),
        }
    }
}

fn lex_less<T: Scalar>(a: &[T], b: &[T]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    a.len() < b.len()
}

impl serde::Serialize for StructuralMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

impl<'de> serde::Deserialize<'de> for StructuralMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for m in [
            StructuralMeasure::PROCRUSTES,
            StructuralMeasure::PEARSON,
            StructuralMeasure::PEARSON.with_mode(Extraction::FullOffdiag),
            StructuralMeasure::SPEARMAN,
            StructuralMeasure::SPEARMAN.with_mode(Extraction::FullOffdiag),
        ] {
            assert_eq!(m.id().parse::<StructuralMeasure>().unwrap(), m);
        }
        assert_eq!(StructuralMeasure::PROCRUSTES.kind(), MeasureKind::Dissimilarity);
        assert_eq!(StructuralMeasure::PEARSON.kind(), MeasureKind::Similarity);
    }

    #[test]
    fn identical_inputs_give_exact_self_relation() {
        let a = Matrix::from_rows(&[vec![0.0, 0.2, 0.7], vec![0.2, 0.0, 0.3], vec![0.7, 0.3, 0.0]]);
        assert_eq!(StructuralMeasure::PROCRUSTES.compare(&a, &a).unwrap(), 0.0);
        assert_eq!(StructuralMeasure::PEARSON.compare(&a, &a).unwrap(), 1.0);
        assert_eq!(StructuralMeasure::SPEARMAN.compare(&a, &a).unwrap(), 1.0);
        let null = Matrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!(matches!(
            StructuralMeasure::PEARSON.compare(&null, &null),
            Err(Error::ZeroVariance)
        ));
    }
}
