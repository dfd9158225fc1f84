use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use geometria::corpus::{preprocess, synth_corpus, DocTermMatrix, PreprocessConfig, SynthSpec};
use geometria::digest::Digest;
use geometria::experiments::{
    build_ensemble, delta_agreement, k_sweep, stability_analysis, svg, Baselines, EnsembleSpec, LdaTemplate, Member,
    Pipeline, RunConfig, RunManifest, Seeds, StructureStore,
};
use geometria::relations::Structure;
use geometria::structcmp::{procrustes_disparity, StructuralMeasure};
use geometria::Error;

fn small_dtm() -> DocTermMatrix {
    let synth = synth_corpus(&SynthSpec::new(3, 80, 40, 30, 0.1, 21)).unwrap();
    let cfg = PreprocessConfig {
        min_term_count: 1,
        ..PreprocessConfig::default()
    };
    preprocess(&synth.corpus, &cfg).unwrap()
}

fn quick() -> LdaTemplate {
    LdaTemplate {
        iterations: 60,
        burn_in: 30,
        sample_lag: 10,
        fold_iters: 30,
        ..LdaTemplate::default()
    }
}

fn spec(ks: Vec<usize>, seeds: Vec<u64>) -> EnsembleSpec {
    let mut s = EnsembleSpec::new(ks, Seeds::List(seeds), 3);
    s.lda = quick();
    s.symbols = Some(20);
    s
}

#[test]
fn ensemble_is_cached() {
    let dir = tempfile::tempdir().unwrap();
    let store = StructureStore::open(dir.path()).unwrap();
    let dtm = small_dtm();
    let sp = spec(vec![2], vec![1, 2]);
    let first = build_ensemble::<f64>(&dtm, &sp, &store).unwrap();
    assert_eq!((first.built, first.cached, first.members.len()), (2, 0, 2));
    let files = fs::read_dir(dir.path().join("structures")).unwrap().count();
    assert_eq!(files, 2);
    let second = build_ensemble::<f64>(&dtm, &sp, &store).unwrap();
    assert_eq!((second.built, second.cached), (0, 2));
    for (a, b) in first.members.iter().zip(&second.members) {
        assert_eq!(a.structure, b.structure);
    }
    let dup = spec(vec![2], vec![1, 1]);
    assert!(matches!(build_ensemble::<f64>(&dtm, &dup, &store), Err(Error::DuplicateDecision(_))));
}

#[test]
fn analyses_count_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let store = StructureStore::open(dir.path()).unwrap();
    let dtm = small_dtm();
    let ens = build_ensemble::<f64>(&dtm, &spec(vec![2, 4], vec![1, 2, 3, 4]), &store).unwrap();
    let base = Baselines::generate(&ens.symbols, 3, 9, 1.0).unwrap();
    let st = stability_analysis(&ens.members, 4, &base, StructuralMeasure::PROCRUSTES).unwrap();
    assert_eq!(st.within.len(), 6);
    assert_eq!(st.random.count, 12);
    assert_eq!(st.null.count, 4);
    assert!(st.lda.mean < st.random.mean && st.lda.mean < st.null.mean, "{st:?}");
    assert!(matches!(
        stability_analysis(&ens.members, 7, &base, StructuralMeasure::PROCRUSTES),
        Err(Error::TooFew { .. })
    ));

    let ks = k_sweep(&ens.members, StructuralMeasure::PROCRUSTES).unwrap();
    assert_eq!(ks.ks, vec![2, 4]);
    assert_eq!(ks.cells[0].count, 6);
    assert_eq!(ks.cells[1].count, 16);
    assert_eq!(ks.mean(0, 1), ks.mean(1, 0));

    let only2: Vec<Member<f64>> = ens.members.iter().filter(|m| m.k == 2).cloned().collect();
    let one = k_sweep(&only2, StructuralMeasure::PROCRUSTES).unwrap();
    assert_eq!(one.cells.len(), 1);
    assert_eq!(one.mean(0, 0), ks.mean(0, 0));

    let ag = delta_agreement(&ens.members, StructuralMeasure::PROCRUSTES, StructuralMeasure::PEARSON).unwrap();
    assert_eq!(ag.pairs.len(), 8 * 7 / 2);
    assert!(ag.correlation < 0.0);
    let same = delta_agreement(&ens.members, StructuralMeasure::PEARSON, StructuralMeasure::PEARSON).unwrap();
    assert!((same.correlation - 1.0).abs() < 1e-12);
}

#[test]
fn identical_structures_are_stable_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let store = StructureStore::open(dir.path()).unwrap();
    let dtm = small_dtm();
    let ens = build_ensemble::<f64>(&dtm, &spec(vec![3], vec![5]), &store).unwrap();
    let m = ens.members[0].clone();
    let twin = Member { seed: 6, ..m.clone() };
    let base = Baselines::generate(&ens.symbols, 2, 1, 1.0).unwrap();
    let st = stability_analysis(&[m, twin], 3, &base, StructuralMeasure::PROCRUSTES).unwrap();
    assert_eq!(st.lda.mean, 0.0);
}

fn pipeline_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::from_toml(
        r#"
[synth]
k_true = 3
m = 80
n = 40
doc_len = 30
concentration = 0.1

[preprocess]
min_term_count = 1

[lda]
iterations = 60
burn_in = 30
sample_lag = 10
fold_iters = 30

[ensemble]
ks = [2, 3]
seeds = 3
symbols = 20

[measures]
n_random = 2
"#,
    )
    .unwrap();
    cfg.run.out = out.to_path_buf();
    cfg
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn pipeline_is_deterministic_and_reports_regenerate() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let pa = Pipeline::new(pipeline_config(a.path())).unwrap();
    let pb = Pipeline::new(pipeline_config(b.path())).unwrap();
    let sa = pa.run::<f64>().unwrap();
    let sb = pb.run::<f64>().unwrap();
    assert_eq!(sa.built, 6);
    assert_eq!(sa.stability, sb.stability);
    assert_eq!(read_tree(a.path()), read_tree(b.path()));

    let before = read_tree(a.path());
    let again = pa.report::<f64>().unwrap();
    assert_eq!(again.cached, 6);
    assert_eq!(read_tree(a.path()), before);

    let store = a.path().join("store");
    fs::remove_dir_all(&store).unwrap();
    let rerun = Pipeline::new(pipeline_config(a.path())).unwrap().run::<f64>().unwrap();
    assert_eq!(rerun.built, 6);
    assert_eq!(read_tree(a.path()), before);
}

#[test]
fn report_needs_a_prepared_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = Pipeline::new(pipeline_config(dir.path())).unwrap();
    assert!(p.report::<f64>().is_err());
}

/// Recomputes the stability summary from the stored structure files alone,
/// parsing files by hand rather than through the library's report types.
#[test]
fn reported_statistics_recompute_from_stored_structures() {
    let dir = tempfile::tempdir().unwrap();
    let p = Pipeline::new(pipeline_config(dir.path())).unwrap();
    let summary = p.run::<f64>().unwrap();
    let store = p.store();
    let manifest: RunManifest = store.load_manifest(&format!("run_{}", p.config().digest())).unwrap();

    let summary_csv = summary
        .files
        .iter()
        .find(|f| f.file_name().unwrap().to_str().unwrap().starts_with("stability_summary_"))
        .unwrap();
    let text = fs::read_to_string(summary_csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,models,pairs,lda_mean,lda_std,random_mean,random_std,null_mean,null_std"
    );
    let load = |phi: &Digest| -> Structure<f64> { Structure::load(&store.structure_path(phi)).unwrap() };
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
    };
    let randoms: Vec<Structure<f64>> = manifest.baselines.random.iter().map(|(_, d)| load(d)).collect();
    let null = load(&manifest.baselines.null);
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let k: usize = f[0].parse().unwrap();
        let nums: Vec<f64> = f[3..].iter().map(|x| x.parse().unwrap()).collect();
        let group: Vec<Structure<f64>> = manifest
            .ensemble
            .members
            .iter()
            .filter(|m| m.k == k)
            .map(|m| load(&m.phi))
            .collect();
        let mut within = Vec::new();
        for i in 0..group.len() {
            for j in (i + 1)..group.len() {
                within.push(procrustes_disparity(&group[i], &group[j]).unwrap());
            }
        }
        let mut vs_random = Vec::new();
        for r in &randoms {
            for g in &group {
                vs_random.push(procrustes_disparity(g, r).unwrap());
            }
        }
        let vs_null: Vec<f64> = group.iter().map(|g| procrustes_disparity(g, &null).unwrap()).collect();
        for (got, (mean, std)) in nums.chunks(2).zip([stats(&within), stats(&vs_random), stats(&vs_null)]) {
            assert!((got[0] - mean).abs() < 1e-12 && (got[1] - std).abs() < 1e-12, "k={k}: {got:?} vs {mean} {std}");
        }
    }
}

#[test]
fn plots_embed_the_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = Pipeline::new(pipeline_config(dir.path())).unwrap();
    let summary = p.run::<f64>().unwrap();
    let find = |prefix: &str, ext: &str| {
        summary
            .files
            .iter()
            .find(|f| {
                let n = f.file_name().unwrap().to_str().unwrap();
                n.starts_with(prefix) && n.ends_with(ext)
            })
            .unwrap()
            .clone()
    };
    let scatter = fs::read_to_string(find("deltacmp_", ".svg")).unwrap();
    let data = svg::embedded_data(&scatter).unwrap();
    assert_eq!(data.lines().count(), 1 + 15);
    let csv = fs::read_to_string(find("deltacmp_", ".csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 15);
    let heat = fs::read_to_string(find("ksweep_", ".svg")).unwrap();
    assert_eq!(svg::embedded_data(&heat).unwrap().lines().count(), 1 + 4);
}
