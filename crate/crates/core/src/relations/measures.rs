//! Pairwise relation measures over symbol representations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance on `|sum - 1|` for probability vectors.
pub const PROBABILITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Dissimilarity,
    Similarity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ProbabilityVectors,
    RealVectors,
    Strings,
}

/// The relation measures that ship with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationMeasure {
    /// Jensen-Shannon divergence, base-2 logarithm.
    Jsd2,
    Cosine,
    Hellinger,
    Euclidean,
    /// Levenshtein distance over raw texts.
    Edit,
}

impl RelationMeasure {
    pub const ALL: [RelationMeasure; 5] = [
        RelationMeasure::Jsd2,
        RelationMeasure::Cosine,
        RelationMeasure::Hellinger,
        RelationMeasure::Euclidean,
        RelationMeasure::Edit,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RelationMeasure::Jsd2 => "jsd2",
            RelationMeasure::Cosine => "cosine",
            RelationMeasure::Hellinger => "hellinger",
            RelationMeasure::Euclidean => "euclidean",
            RelationMeasure::Edit => "edit",
        }
    }

    pub fn kind(self) -> MeasureKind {
        MeasureKind::Dissimilarity
    }

    pub fn symmetric(self) -> bool {
        true
    }

    pub fn domain(self) -> Domain {
        match self {
            RelationMeasure::Jsd2 | RelationMeasure::Hellinger => Domain::ProbabilityVectors,
            RelationMeasure::Cosine | RelationMeasure::Euclidean => Domain::RealVectors,
            RelationMeasure::Edit => Domain::Strings,
        }
    }

    pub fn bounds(self) -> Option<(f64, f64)> {
        match self {
            RelationMeasure::Jsd2 | RelationMeasure::Hellinger => Some((0.0, 1.0)),
            RelationMeasure::Cosine => Some((0.0, 2.0)),
            RelationMeasure::Euclidean | RelationMeasure::Edit => None,
        }
    }

    /// Value of `d(x, x)`.
    pub fn self_relation(self) -> f64 {
        0.0
    }

    /// Evaluates the measure on two numeric vectors without domain checks.
    /// Callers validate rows once up front.
    pub(crate) fn eval_unchecked<T: Scalar>(self, u: &[T], v: &[T]) -> T {
        match self {
            RelationMeasure::Jsd2 => jsd_unchecked(u, v),
            RelationMeasure::Hellinger => hellinger_unchecked(u, v),
            RelationMeasure::Cosine => cosine_unchecked(u, v),
            RelationMeasure::Euclidean => euclidean_unchecked(u, v),
            RelationMeasure::Edit => unreachable!("edit distance operates on strings"),
        }
    }

    pub fn eval<T: Scalar>(self, u: &[T], v: &[T]) -> Result<T> {
        match self {
            RelationMeasure::Jsd2 => jsd(u, v),
            RelationMeasure::Hellinger => hellinger(u, v),
            RelationMeasure::Cosine => cosine_distance(u, v),
            RelationMeasure::Euclidean => euclidean(u, v),
            RelationMeasure::Edit => Err(Error::DomainViolation {
                measure: "edit".into(),
                message: "edit distance operates on strings".into(),
            }),
        }
    }
}

impl fmt::Display for RelationMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RelationMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsd2" | "jsd" => Ok(RelationMeasure::Jsd2),
            "cosine" => Ok(RelationMeasure::Cosine),
            "hellinger" => Ok(RelationMeasure::Hellinger),
            "euclidean" => Ok(RelationMeasure::Euclidean),
            "edit" => Ok(RelationMeasure::Edit),
            _ => Err(Error::Unknown {
                what: "relation measure",
                name: s.into(),
            }),
        }
    }
}

fn same_len<T>(u: &[T], v: &[T]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(())
}

pub(crate) fn check_probability<T: Scalar>(p: &[T], measure: &str) -> Result<()> {
    let violation = |message: String| Error::DomainViolation {
        measure: measure.into(),
        message,
    };
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < T::zero()) {
        return Err(violation(format!("entry {x} is negative or not finite")));
    }
    let total = p.iter().copied().sum::<T>().as_f64();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(violation(format!("entries sum to {total}")));
    }
    Ok(())
}

pub(crate) fn check_finite<T: Scalar>(v: &[T], measure: &str) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::DomainViolation {
            measure: measure.into(),
            message: "non-finite entry".into(),
        });
    }
    Ok(())
}

/// Jensen-Shannon divergence with base-2 logarithm, in `[0, 1]`.
pub fn jsd<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    same_len(p, q)?;
    check_probability(p, "jsd2")?;
    check_probability(q, "jsd2")?;
    Ok(jsd_unchecked(p, q))
}

pub(crate) fn jsd_unchecked<T: Scalar>(p: &[T], q: &[T]) -> T {
    let half = T::of(0.5);
    let mut kl_p = T::zero();
    let mut kl_q = T::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        let mi = half * (pi + qi);
        // 0·log(0/m) = 0; m = 0 only when both are 0.
        if pi > T::zero() {
            kl_p = kl_p + pi * (pi / mi).log2();
        }
        if qi > T::zero() {
            kl_q = kl_q + qi * (qi / mi).log2();
        }
    }
    let d = half * kl_p + half * kl_q;
    d.max(T::zero()).min(T::one())
}

/// `1 - u·v / (‖u‖ ‖v‖)`.
pub fn cosine_distance<T: Scalar>(u: &[T], v: &[T]) -> Result<T> {
    same_len(u, v)?;
    check_finite(u, "cosine")?;
    check_finite(v, "cosine")?;
    if norm(u) == T::zero() || norm(v) == T::zero() {
        return Err(Error::ZeroVector);
    }
    Ok(cosine_unchecked(u, v))
}

fn norm<T: Scalar>(u: &[T]) -> T {
    u.iter().map(|&x| x * x).sum::<T>().sqrt()
}

fn cosine_unchecked<T: Scalar>(u: &[T], v: &[T]) -> T {
    let dot: T = u.iter().zip(v).map(|(&a, &b)| a * b).sum();
    let sim = (dot / (norm(u) * norm(v))).max(-T::one()).min(T::one());
    (T::one() - sim).max(T::zero())
}

/// Hellinger distance `‖√p − √q‖ / √2`, in `[0, 1]`.
pub fn hellinger<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    same_len(p, q)?;
    check_probability(p, "hellinger")?;
    check_probability(q, "hellinger")?;
    Ok(hellinger_unchecked(p, q))
}

fn hellinger_unchecked<T: Scalar>(p: &[T], q: &[T]) -> T {
    let s: T = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    (s * T::of(0.5)).sqrt().min(T::one())
}

pub fn euclidean<T: Scalar>(u: &[T], v: &[T]) -> Result<T> {
    same_len(u, v)?;
    check_finite(u, "euclidean")?;
    check_finite(v, "euclidean")?;
    Ok(euclidean_unchecked(u, v))
}

fn euclidean_unchecked<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        .sqrt()
}

/// Levenshtein distance over Unicode scalar values, unit costs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

impl serde::Serialize for RelationMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

impl<'de> serde::Deserialize<'de> for RelationMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
