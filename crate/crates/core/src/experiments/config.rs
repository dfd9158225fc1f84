use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EnsembleSpec, LdaTemplate, Seeds};
use crate::corpus::{default_stopwords, CorpusFormat, PreprocessConfig, SynthSpec, DEFAULT_TOKEN_PATTERN};
use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};
use crate::relations::RelationMeasure;
use crate::rng;
use crate::structcmp::StructuralMeasure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Master seed for every seed not given explicitly.
    pub seed: u64,
    pub out: PathBuf,
    /// Store root; `$GEOMETRIA_STORE` takes precedence, then `<out>/store`.
    pub store: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: 0,
            out: PathBuf::from("geometria-out"),
            store: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub path: PathBuf,
    pub format: CorpusFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub k_true: usize,
    pub m: usize,
    pub n: usize,
    pub doc_len: usize,
    pub concentration: f64,
    /// Derived from the master seed when absent.
    pub seed: Option<u64>,
    pub topic_seed: Option<u64>,
}

impl Default for SynthSection {
    fn default() -> Self {
        SynthSection {
            k_true: 5,
            m: 2000,
            n: 500,
            doc_len: 40,
            concentration: 0.1,
            seed: None,
            topic_seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessSection {
    pub lowercase: bool,
    pub token_pattern: String,
    /// `"default"`, `"none"`, or a path to a one-word-per-line file.
    pub stopwords: String,
    pub min_term_count: u64,
    pub max_vocab: Option<usize>,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        let d = PreprocessConfig::default();
        PreprocessSection {
            lowercase: d.lowercase,
            token_pattern: DEFAULT_TOKEN_PATTERN.into(),
            stopwords: "default".into(),
            min_term_count: d.min_term_count,
            max_vocab: d.max_vocab,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub ks: Vec<usize>,
    pub seeds: Seeds,
    /// Number of sampled symbols; all documents when absent.
    pub symbols: Option<usize>,
    pub symbols_seed: Option<u64>,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection {
            ks: vec![2, 5, 10, 20],
            seeds: Seeds::Count(5),
            symbols: Some(200),
            symbols_seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasuresSection {
    /// Relation measure over symbol representations.
    pub d: RelationMeasure,
    /// Structural measure for stability and k-sweep analyses.
    pub delta: StructuralMeasure,
    /// Structural measure one level up, for nested comparisons.
    pub delta_prime: StructuralMeasure,
    /// The two measures compared by the agreement analysis.
    pub agreement: [StructuralMeasure; 2],
    pub n_random: usize,
    pub null_scale: f64,
}

impl Default for MeasuresSection {
    fn default() -> Self {
        MeasuresSection {
            d: RelationMeasure::Jsd2,
            delta: StructuralMeasure::PROCRUSTES,
            delta_prime: StructuralMeasure::PROCRUSTES,
            agreement: [StructuralMeasure::PROCRUSTES, StructuralMeasure::PEARSON],
            n_random: 10,
            null_scale: 1.0,
        }
    }
}

/// Everything a run depends on. `corpus` and `synth` are exclusive; with
/// neither, the default synthetic corpus is used.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub corpus: Option<CorpusSection>,
    pub synth: Option<SynthSection>,
    pub preprocess: PreprocessSection,
    pub lda: LdaTemplate,
    pub ensemble: EnsembleSection,
    pub measures: MeasuresSection,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::Config {
            key: String::new(),
            message: e.to_string().trim().to_string(),
        })?;
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            key: e.path().to_string(),
            message: e.inner().to_string().trim().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let cfg_err = |key: &str, message: String| Err(Error::Config { key: key.into(), message });
        if self.corpus.is_some() && self.synth.is_some() {
            return cfg_err("corpus", "give either [corpus] or [synth], not both".into());
        }
        if self.measures.null_scale <= 0.0 || !self.measures.null_scale.is_finite() {
            return cfg_err("measures.null_scale", "must be positive".into());
        }
        if let Err(e) = self.preprocess_config_unresolved().validate() {
            return cfg_err("preprocess", e.to_string());
        }
        if let Err(e) = self.ensemble_spec().validate() {
            return cfg_err("ensemble", e.to_string());
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.run.out)
    }

    pub fn store_root(&self) -> PathBuf {
        let default = match &self.run.store {
            Some(p) => self.resolve(p),
            None => self.out_dir().join("store"),
        };
        super::StructureStore::resolve_root(&default)
    }

    fn preprocess_config_unresolved(&self) -> PreprocessConfig {
        let p = &self.preprocess;
        PreprocessConfig {
            lowercase: p.lowercase,
            token_pattern: p.token_pattern.clone(),
            stopwords: Default::default(),
            min_term_count: p.min_term_count,
            max_vocab: p.max_vocab,
        }
    }

    pub fn preprocess_config(&self) -> Result<PreprocessConfig> {
        let stopwords = match self.preprocess.stopwords.as_str() {
            "default" => default_stopwords(),
            "none" => Default::default(),
            path => PreprocessConfig::stopwords_from_file(&self.resolve(Path::new(path)))?,
        };
        Ok(PreprocessConfig {
            stopwords,
            ..self.preprocess_config_unresolved()
        })
    }

    pub fn synth_spec(&self) -> SynthSpec {
        let s = self.synth.clone().unwrap_or_default();
        let seed = s.seed.unwrap_or_else(|| rng::derive_seed(self.run.seed, "synth"));
        let spec = SynthSpec::new(s.k_true, s.m, s.n, s.doc_len, s.concentration, seed);
        match s.topic_seed {
            Some(t) => spec.with_topic_seed(t),
            None => spec,
        }
    }

    pub fn ensemble_spec(&self) -> EnsembleSpec {
        let e = &self.ensemble;
        let mut spec = EnsembleSpec::new(e.ks.clone(), e.seeds.clone(), self.run.seed);
        spec.lda = self.lda.clone();
        spec.symbols = e.symbols;
        if let Some(s) = e.symbols_seed {
            spec.symbols_seed = s;
        }
        spec.measure = self.measures.d;
        spec
    }

    /// Master seed of the random baselines.
    pub fn baseline_seed(&self) -> u64 {
        rng::derive_seed(self.run.seed, "baselines")
    }

    /// Digest of every setting except output locations, used to name
    /// reports.
    pub fn digest(&self) -> Digest {
        let mut c = self.clone();
        c.run.out = PathBuf::new();
        c.run.store = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        DigestBuilder::new("run-config").str(&json).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_run() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.ensemble_spec().members().unwrap().len(), 20);
    }

    #[test]
    fn full_file_parses() {
        let cfg = RunConfig::from_toml(
            r#"
[run]
seed = 7
out = "results"

[synth]
k_true = 3
m = 100
seed = 5

[preprocess]
stopwords = "none"
min_term_count = 1

[lda]
alpha = 0.1
iterations = 200
burn_in = 100
sample_lag = 10
fold_iters = 50

[ensemble]
ks = [2, 4]
seeds = [1, 2, 3]
symbols = 30

[measures]
d = "hellinger"
delta = "pearson"
agreement = ["procrustes", "spearman"]
n_random = 3
"#,
        )
        .unwrap();
        assert_eq!(cfg.run.seed, 7);
        assert_eq!(cfg.synth_spec().k_true, 3);
        assert_eq!(cfg.synth_spec().seed, 5);
        assert_eq!(cfg.ensemble.seeds, Seeds::List(vec![1, 2, 3]));
        assert_eq!(cfg.measures.d, RelationMeasure::Hellinger);
        assert_eq!(cfg.measures.delta, StructuralMeasure::PEARSON);
        assert_eq!(cfg.lda.alpha, Some(0.1));
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn errors_name_the_key() {
        let err = RunConfig::from_toml("[lda]\niterations = \"many\"\n").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "lda.iterations"), "{err}");
        let err = RunConfig::from_toml("[measures]\ndelta = \"cka\"\n").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "measures.delta"), "{err}");
        let err = RunConfig::from_toml("[ensemble]\nbogus = 1\n").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key.starts_with("ensemble")), "{err}");
        let err = RunConfig::from_toml("[ensemble]\nks = [2, 2]\n").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "ensemble"), "{err}");
    }

    #[test]
    fn digest_follows_settings() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.run.seed = 1;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), RunConfig::default().digest());
        let mut c = a.clone();
        c.run.out = PathBuf::from("elsewhere");
        assert_eq!(a.digest(), c.digest());
    }
}
