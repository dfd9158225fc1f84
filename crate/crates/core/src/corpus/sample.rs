use rand::seq::SliceRandom;

use super::{DocTermMatrix, SymbolSet};
use crate::error::{Error, Result};
use crate::rng;

/// Seeded uniform sample of `size` document ids without replacement, in
/// sampled order.
pub fn sample_symbols(dtm: &DocTermMatrix, size: usize, seed: u64) -> Result<SymbolSet> {
    let m = dtm.m();
    if size < 2 || size > m {
        return Err(Error::SizeOutOfRange { size, max: m });
    }
    let mut ids: Vec<&String> = dtm.doc_ids().iter().collect();
    let mut rng = rng::stream(seed, "sample_symbols");
    let (picked, _) = ids.partial_shuffle(&mut rng, size);
    SymbolSet::new(picked.iter().map(|s| (*s).clone()).collect(), "document")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dtm(m: usize) -> DocTermMatrix {
        DocTermMatrix::from_rows(
            (0..m).map(|_| vec![(0, 1)]).collect(),
            vec!["w".into()],
            (0..m).map(|i| format!("d{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn full_sample_is_a_permutation() {
        let d = dtm(7);
        let s = sample_symbols(&d, 7, 3).unwrap();
        let mut ids = s.ids().to_vec();
        ids.sort();
        let mut all = d.doc_ids().to_vec();
        all.sort();
        assert_eq!(ids, all);
    }

    #[test]
    fn deterministic_and_bounded() {
        let d = dtm(10);
        assert_eq!(sample_symbols(&d, 2, 9).unwrap(), sample_symbols(&d, 2, 9).unwrap());
        assert!(matches!(
            sample_symbols(&d, 11, 0),
            Err(Error::SizeOutOfRange { size: 11, max: 10 })
        ));
        assert!(sample_symbols(&d, 1, 0).is_err());
    }

    #[test]
    fn inclusion_is_uniform_across_seeds() {
        // chi-square over inclusion counts of 20 ids, 2000 samples of size 5.
        let d = dtm(20);
        let mut counts = vec![0f64; 20];
        let trials = 2000;
        for seed in 0..trials {
            for id in sample_symbols(&d, 5, seed).unwrap().ids() {
                counts[id[1..].parse::<usize>().unwrap()] += 1.0;
            }
        }
        let expected = trials as f64 * 5.0 / 20.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 19 dof, p = 0.001 critical value 43.8
        assert!(chi2 < 43.8, "chi2 = {chi2}");
    }
}
