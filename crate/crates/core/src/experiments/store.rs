use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::lda::TopicModel;
use crate::relations::Structure;
use crate::scalar::Scalar;
use crate::textio::write_atomic;

/// Overrides the store root everywhere a default would be used.
pub const STORE_ENV: &str = "GEOMETRIA_STORE";

/// Content-addressed files: structures by phi digest, models by training
/// hash, manifests by name. Writes go through a temp file and a rename, so
/// concurrent writers of the same digest leave one complete copy.
#[derive(Clone, Debug)]
pub struct StructureStore {
    root: PathBuf,
}

impl StructureStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for sub in ["structures", "models", "manifests"] {
            let dir = root.join(sub);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        Ok(StructureStore { root })
    }

    /// `$GEOMETRIA_STORE` if set and non-empty, else `default`.
    pub fn resolve_root(default: &Path) -> PathBuf {
        match std::env::var_os(STORE_ENV) {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => default.to_path_buf(),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn structure_path(&self, phi: &Digest) -> PathBuf {
        self.root.join("structures").join(format!("{phi}.struct"))
    }

    pub fn model_path(&self, training_hash: &Digest) -> PathBuf {
        self.root.join("models").join(format!("{training_hash}.ldam"))
    }

    pub fn manifest_path(&self, name: &str) -> PathBuf {
        self.root.join("manifests").join(format!("{name}.json"))
    }

    pub fn has_structure(&self, phi: &Digest) -> bool {
        self.structure_path(phi).is_file()
    }

    pub fn save_structure<T: Scalar>(&self, s: &Structure<T>) -> Result<PathBuf> {
        let path = self.structure_path(s.phi_digest());
        s.save(&path)?;
        Ok(path)
    }

    pub fn load_structure<T: Scalar>(&self, phi: &Digest) -> Result<Structure<T>> {
        let path = self.structure_path(phi);
        let s = Structure::load(&path)?;
        if s.phi_digest() != phi {
            return Err(Error::StoreCorruption {
                path,
                message: format!("file holds {}", s.phi_digest()),
            });
        }
        Ok(s)
    }

    pub fn has_model(&self, training_hash: &Digest) -> bool {
        self.model_path(training_hash).is_file()
    }

    pub fn save_model(&self, m: &TopicModel) -> Result<PathBuf> {
        let path = self.model_path(m.training_hash());
        m.save(&path)?;
        Ok(path)
    }

    pub fn load_model(&self, training_hash: &Digest) -> Result<TopicModel> {
        let path = self.model_path(training_hash);
        let m = TopicModel::load(&path)?;
        if m.training_hash() != training_hash {
            return Err(Error::StoreCorruption {
                path,
                message: format!("file holds {}", m.training_hash()),
            });
        }
        Ok(m)
    }

    pub fn save_manifest<M: Serialize>(&self, name: &str, value: &M) -> Result<PathBuf> {
        let path = self.manifest_path(name);
        let mut text = serde_json::to_string_pretty(value).expect("manifest serializes");
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }

    pub fn load_manifest<M: DeserializeOwned>(&self, name: &str) -> Result<M> {
        let path = self.manifest_path(name);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::StoreCorruption {
            path,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SymbolSet;
    use crate::relations::{null_structure, random_structure, RandomKind};

    #[test]
    fn structures_round_trip_by_digest() {
        let dir = tempfile::tempdir().unwrap();
        let store = StructureStore::open(dir.path()).unwrap();
        let sym = SymbolSet::new(vec!["a".into(), "b".into(), "c".into()], "document").unwrap();
        let s = random_structure::<f64>(&sym, RandomKind::Symmetric, 4).unwrap();
        assert!(!store.has_structure(s.phi_digest()));
        store.save_structure(&s).unwrap();
        assert!(store.has_structure(s.phi_digest()));
        assert_eq!(store.load_structure::<f64>(s.phi_digest()).unwrap(), s);
    }

    #[test]
    fn misfiled_structure_is_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = StructureStore::open(dir.path()).unwrap();
        let sym = SymbolSet::new(vec!["a".into(), "b".into()], "document").unwrap();
        let a = null_structure::<f64>(&sym, 1.0).unwrap();
        let b = null_structure::<f64>(&sym, 2.0).unwrap();
        store.save_structure(&a).unwrap();
        fs::copy(store.structure_path(a.phi_digest()), store.structure_path(b.phi_digest())).unwrap();
        assert!(matches!(
            store.load_structure::<f64>(b.phi_digest()),
            Err(Error::StoreCorruption { .. })
        ));
    }
}
