//! Reference structures carrying no distributional information.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use super::Structure;
use crate::corpus::SymbolSet;
use crate::digest::DigestBuilder;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::Decision;
use crate::rng;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RandomKind {
    /// Strict upper triangle drawn and mirrored.
    #[default]
    Symmetric,
    /// Every off-diagonal entry drawn independently.
    Full,
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomKind::Symmetric => "symmetric",
            RandomKind::Full => "full",
        })
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(RandomKind::Symmetric),
            "full" => Ok(RandomKind::Full),
            _ => Err(Error::Unknown {
                what: "random kind",
                name: s.into(),
            }),
        }
    }
}

/// Off-diagonal entries i.i.d. Uniform[0, 1), zero diagonal.
pub fn random_structure<T: Scalar>(symbols: &SymbolSet, kind: RandomKind, seed: u64) -> Result<Structure<T>> {
    let n = symbols.len();
    let mut rng = rng::stream(seed, "random_structure");
    let mut m = Matrix::zeros(n, n);
    match kind {
        RandomKind::Symmetric => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = T::of(rng.random::<f64>());
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
        RandomKind::Full => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        m[(i, j)] = T::of(rng.random::<f64>());
                    }
                }
            }
        }
    }
    let phi = DigestBuilder::new("structure/random")
        .digest(&symbols.digest())
        .field("kind", kind)
        .u64(seed)
        .finish();
    let decisions = vec![
        Decision::new("symbols", symbols.digest()),
        Decision::new("model", "random"),
        Decision::new("random_kind", kind),
        Decision::new("seed", seed),
    ];
    Structure::new(m, symbols.ids().to_vec(), "random", phi, decisions)
}

/// Every off-diagonal entry equal to `c`, zero diagonal.
pub fn null_structure<T: Scalar>(symbols: &SymbolSet, c: f64) -> Result<Structure<T>> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("null scale must be positive, got {c}")));
    }
    let n = symbols.len();
    let cv = T::of(c);
    let m = Matrix::from_fn(n, n, |i, j| if i == j { T::zero() } else { cv });
    let phi = DigestBuilder::new("structure/null")
        .digest(&symbols.digest())
        .f64(c)
        .finish();
    let decisions = vec![
        Decision::new("symbols", symbols.digest()),
        Decision::new("model", "null"),
        Decision::new("null_scale", c),
    ];
    Structure::new(m, symbols.ids().to_vec(), "null", phi, decisions)
}
