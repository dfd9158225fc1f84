use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EnsembleSpec, StructureStore};
use crate::corpus::{sample_symbols, DocTermMatrix, SymbolSet};
use crate::digest::Digest;
use crate::error::Result;
use crate::lda::{represent_symbols, representation_digest, train_lda, training_digest};
use crate::relations::{null_structure, random_structure, structural_map, structure_digest, RandomKind, Structure};
use crate::rng;
use crate::scalar::Scalar;
use crate::structcmp::Label;

/// One trained θ_{k,ψ} and its structure over the ensemble's symbols.
#[derive(Clone, Debug)]
pub struct Member<T> {
    pub k: usize,
    pub seed: u64,
    pub structure: Structure<T>,
}

impl<T: Scalar> Member<T> {
    /// `seed=ψ`, for comparisons within one k.
    pub fn seed_label(&self) -> Label {
        Label::single("seed", self.seed)
    }

    /// `k=..;seed=..;alpha=..`, for comparisons across k. alpha is listed
    /// because its default follows k.
    pub fn label(&self) -> Label {
        let alpha = crate::provenance::find(self.structure.decisions(), "alpha").unwrap_or("?");
        Label::parse(&format!("k={};seed={};alpha={alpha}", self.k, self.seed)).expect("plain label")
    }
}

pub struct Ensemble<T> {
    pub spec_digest: Digest,
    pub symbols: SymbolSet,
    pub members: Vec<Member<T>>,
    /// Structures computed by this call.
    pub built: usize,
    /// Structures found in the store.
    pub cached: usize,
}

impl<T: Scalar> Ensemble<T> {
    pub fn ks(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.members.iter().map(|m| m.k).collect();
        ks.dedup();
        ks
    }

    pub fn at_k(&self, k: usize) -> Vec<&Member<T>> {
        self.members.iter().filter(|m| m.k == k).collect()
    }

    pub fn manifest(&self) -> EnsembleManifest {
        EnsembleManifest {
            spec_digest: self.spec_digest.clone(),
            symbols: self.symbols.ids().to_vec(),
            members: self
                .members
                .iter()
                .map(|m| ManifestMember {
                    k: m.k,
                    seed: m.seed,
                    phi: m.structure.phi_digest().clone(),
                })
                .collect(),
        }
    }

    /// Reloads every member listed in a manifest.
    pub fn from_manifest(manifest: &EnsembleManifest, store: &StructureStore) -> Result<Self> {
        let members = manifest
            .members
            .iter()
            .map(|m| {
                Ok(Member {
                    k: m.k,
                    seed: m.seed,
                    structure: store.load_structure(&m.phi)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            spec_digest: manifest.spec_digest.clone(),
            symbols: SymbolSet::new(manifest.symbols.clone(), "document")?,
            built: 0,
            cached: members.len(),
            members,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestMember {
    pub k: usize,
    pub seed: u64,
    pub phi: Digest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub spec_digest: Digest,
    pub symbols: Vec<String>,
    pub members: Vec<ManifestMember>,
}

pub fn ensemble_symbols(dtm: &DocTermMatrix, spec: &EnsembleSpec) -> Result<SymbolSet> {
    match spec.symbols {
        Some(n) => sample_symbols(dtm, n, spec.symbols_seed),
        None => SymbolSet::new(dtm.doc_ids().to_vec(), "document"),
    }
}

/// Trains (or loads) every θ_{k,ψ}, represents the symbols and maps them to
/// structures, persisting models and structures. Members whose structure
/// digest is already stored are loaded instead of recomputed.
pub fn build_ensemble<T: Scalar>(
    dtm: &DocTermMatrix,
    spec: &EnsembleSpec,
    store: &StructureStore,
) -> Result<Ensemble<T>> {
    spec.validate()?;
    let symbols = ensemble_symbols(dtm, spec)?;
    let corpus = dtm.digest();
    let sym_digest = symbols.digest();
    let fold = spec.lda.fold_iters;
    let results: Vec<(Member<T>, bool)> = spec
        .members()?
        .into_par_iter()
        .map(|(k, seed)| {
            let cfg = spec.lda.config(k, seed);
            let th = training_digest(&corpus, &cfg);
            let phi = structure_digest(&representation_digest(&th, &corpus, &sym_digest, fold), spec.measure);
            if store.has_structure(&phi) {
                let structure = store.load_structure(&phi)?;
                return Ok((Member { k, seed, structure }, true));
            }
            let model = if store.has_model(&th) {
                store.load_model(&th)?
            } else {
                let m = train_lda(dtm, &cfg)?;
                store.save_model(&m)?;
                m
            };
            let rep = represent_symbols::<T>(&model, dtm, &symbols, fold)?;
            let structure = structural_map(&rep, spec.measure)?;
            debug_assert_eq!(structure.phi_digest(), &phi);
            store.save_structure(&structure)?;
            log::info!("built k={k} seed={seed} -> {}", phi.short());
            Ok((Member { k, seed, structure }, false))
        })
        .collect::<Result<_>>()?;
    let cached = results.iter().filter(|(_, c)| *c).count();
    Ok(Ensemble {
        spec_digest: spec.digest(),
        symbols,
        built: results.len() - cached,
        cached,
        members: results.into_iter().map(|(m, _)| m).collect(),
    })
}

/// Reference structures: random structures and the null structure.
#[derive(Clone, Debug)]
pub struct Baselines<T> {
    pub randoms: Vec<(u64, Structure<T>)>,
    pub null: Structure<T>,
}

impl<T: Scalar> Baselines<T> {
    /// `n_random` random structures with seeds drawn from `master`, and the
    /// null structure at scale `null_scale`.
    pub fn generate(symbols: &SymbolSet, n_random: usize, master: u64, null_scale: f64) -> Result<Self> {
        let randoms = (0..n_random)
            .map(|i| {
                let seed = rng::derive_seed(master, &format!("random/{i}"));
                random_structure(symbols, RandomKind::Symmetric, seed).map(|s| (seed, s))
            })
            .collect::<Result<_>>()?;
        Ok(Baselines {
            randoms,
            null: null_structure(symbols, null_scale)?,
        })
    }

    pub fn persist(&self, store: &StructureStore) -> Result<()> {
        for (_, s) in &self.randoms {
            store.save_structure(s)?;
        }
        store.save_structure(&self.null)?;
        Ok(())
    }

    pub fn manifest(&self) -> BaselineManifest {
        BaselineManifest {
            random: self.randoms.iter().map(|(s, st)| (*s, st.phi_digest().clone())).collect(),
            null: self.null.phi_digest().clone(),
        }
    }

    pub fn from_manifest(m: &BaselineManifest, store: &StructureStore) -> Result<Self> {
        Ok(Baselines {
            randoms: m
                .random
                .iter()
                .map(|(seed, phi)| store.load_structure(phi).map(|s| (*seed, s)))
                .collect::<Result<_>>()?,
            null: store.load_structure(&m.null)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineManifest {
    pub random: Vec<(u64, Digest)>,
    pub null: Digest,
}
