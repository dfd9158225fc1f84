use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::report::{write_agreement, write_ksweep, write_stability};
use super::{
    delta_agreement, k_sweep, stability_analysis, AgreementReport, BaselineManifest, Baselines, Ensemble,
    EnsembleManifest, KSweepReport, RunConfig, StabilityReport, StructureStore,
};
use crate::corpus::{ingest_corpus, preprocess_with_report, synth_corpus, DocTermMatrix, PreprocessReport};
use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::structcmp::StructuralMeasure;

/// What a completed run persisted, enough to regenerate every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: Digest,
    pub corpus: Digest,
    pub ensemble: EnsembleManifest,
    pub baselines: BaselineManifest,
}

/// A run configuration bound to its store and output directory.
pub struct Pipeline {
    cfg: RunConfig,
    store: StructureStore,
    tag: String,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let store = StructureStore::open(cfg.store_root())?;
        let tag = cfg.digest().as_str()[..16].to_string();
        Ok(Pipeline { cfg, store, tag })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn store(&self) -> &StructureStore {
        &self.store
    }

    /// Short config digest embedded in report filenames.
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn out_dir(&self) -> PathBuf {
        self.cfg.out_dir()
    }

    fn manifest_name(&self) -> String {
        format!("run_{}", self.cfg.digest())
    }

    /// Ingests (or generates) the corpus and preprocesses it.
    pub fn corpus(&self) -> Result<(DocTermMatrix, PreprocessReport)> {
        let raw = match &self.cfg.corpus {
            Some(c) => ingest_corpus(&self.cfg.resolve(&c.path), c.format)?,
            None => synth_corpus(&self.cfg.synth_spec())?.corpus,
        };
        preprocess_with_report(&raw, &self.cfg.preprocess_config()?)
    }

    pub fn ensemble<T: Scalar>(&self, dtm: &DocTermMatrix) -> Result<Ensemble<T>> {
        super::build_ensemble(dtm, &self.cfg.ensemble_spec(), &self.store)
    }

    pub fn baselines<T: Scalar>(&self, ensemble: &Ensemble<T>) -> Result<Baselines<T>> {
        let m = &self.cfg.measures;
        let b = Baselines::generate(&ensemble.symbols, m.n_random, self.cfg.baseline_seed(), m.null_scale)?;
        b.persist(&self.store)?;
        Ok(b)
    }

    /// Builds everything the analyses need and records it in the run
    /// manifest.
    pub fn prepare<T: Scalar>(&self) -> Result<(Ensemble<T>, Baselines<T>)> {
        let (dtm, _) = self.corpus()?;
        let ensemble = self.ensemble(&dtm)?;
        let baselines = self.baselines(&ensemble)?;
        let manifest = RunManifest {
            config_digest: self.cfg.digest(),
            corpus: dtm.digest(),
            ensemble: ensemble.manifest(),
            baselines: baselines.manifest(),
        };
        self.store.save_manifest(&self.manifest_name(), &manifest)?;
        Ok((ensemble, baselines))
    }

    /// Reloads the ensemble and baselines of a prepared run from the store.
    pub fn load<T: Scalar>(&self) -> Result<(Ensemble<T>, Baselines<T>)> {
        let path = self.store.manifest_path(&self.manifest_name());
        if !path.is_file() {
            return Err(Error::InvalidParameter(format!(
                "no stored run for this configuration ({}); build it first",
                path.display()
            )));
        }
        let m: RunManifest = self.store.load_manifest(&self.manifest_name())?;
        Ok((
            Ensemble::from_manifest(&m.ensemble, &self.store)?,
            Baselines::from_manifest(&m.baselines, &self.store)?,
        ))
    }

    /// Stability reports for `ks` (every k when `None`).
    pub fn stability<T: Scalar>(
        &self,
        ensemble: &Ensemble<T>,
        baselines: &Baselines<T>,
        ks: Option<&[usize]>,
    ) -> Result<(Vec<StabilityReport>, Vec<PathBuf>)> {
        let all = ensemble.ks();
        let chosen: Vec<usize> = match ks {
            Some(ks) => {
                for k in ks {
                    if !all.contains(k) {
                        return Err(Error::InvalidParameter(format!("k={k} is not in the ensemble")));
                    }
                }
                ks.to_vec()
            }
            None => all,
        };
        let reports = chosen
            .iter()
            .map(|&k| stability_analysis(&ensemble.members, k, baselines, self.cfg.measures.delta))
            .collect::<Result<Vec<_>>>()?;
        let tag = match ks {
            Some(ks) => format!(
                "{}_k{}",
                self.tag,
                ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("-")
            ),
            None => self.tag.clone(),
        };
        let files = write_stability(&self.out_dir(), &tag, &reports)?;
        Ok((reports, files))
    }

    pub fn ksweep<T: Scalar>(&self, ensemble: &Ensemble<T>) -> Result<(KSweepReport, Vec<PathBuf>)> {
        let report = k_sweep(&ensemble.members, self.cfg.measures.delta)?;
        let files = write_ksweep(&self.out_dir(), &self.tag, &report)?;
        Ok((report, files))
    }

    pub fn deltacmp<T: Scalar>(
        &self,
        ensemble: &Ensemble<T>,
        a: StructuralMeasure,
        b: StructuralMeasure,
    ) -> Result<(AgreementReport, Vec<PathBuf>)> {
        let report = delta_agreement(&ensemble.members, a, b)?;
        let tag = format!("{}_{}_{}", self.tag, a.id(), b.id());
        let files = write_agreement(&self.out_dir(), &tag, &report)?;
        Ok((report, files))
    }

    /// Every analysis over already-built artifacts.
    pub fn analyze<T: Scalar>(&self, ensemble: &Ensemble<T>, baselines: &Baselines<T>) -> Result<RunSummary> {
        let (stability, mut files) = self.stability(ensemble, baselines, None)?;
        let (ksweep, f) = self.ksweep(ensemble)?;
        files.extend(f);
        let [a, b] = self.cfg.measures.agreement;
        let (agreement, f) = self.deltacmp(ensemble, a, b)?;
        files.extend(f);
        Ok(RunSummary {
            tag: self.tag.clone(),
            built: ensemble.built,
            cached: ensemble.cached,
            stability: stability
                .iter()
                .map(|r| StabilityLine {
                    k: r.k,
                    pairs: r.within.len(),
                    lda_mean: r.lda.mean,
                    random_mean: r.random.mean,
                    null_mean: r.null.mean,
                })
                .collect(),
            ksweep_ks: ksweep.ks,
            agreement_correlation: agreement.correlation,
            agreement_pairs: agreement.pairs.len(),
            files,
        })
    }

    /// Builds (or loads) all artifacts, then runs every analysis.
    pub fn run<T: Scalar>(&self) -> Result<RunSummary> {
        let (ensemble, baselines) = self.prepare::<T>()?;
        self.analyze(&ensemble, &baselines)
    }

    /// Regenerates every report from the store alone.
    pub fn report<T: Scalar>(&self) -> Result<RunSummary> {
        let (ensemble, baselines) = self.load::<T>()?;
        self.analyze(&ensemble, &baselines)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityLine {
    pub k: usize,
    pub pairs: usize,
    pub lda_mean: f64,
    pub random_mean: f64,
    pub null_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub tag: String,
    pub built: usize,
    pub cached: usize,
    pub stability: Vec<StabilityLine>,
    pub ksweep_ks: Vec<usize>,
    pub agreement_correlation: f64,
    pub agreement_pairs: usize,
    pub files: Vec<PathBuf>,
}
