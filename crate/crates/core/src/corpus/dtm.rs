use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};

/// Sparse m×n count matrix with row order `doc_ids` and column order `vocab`.
///
/// Rows are stored as `(column, count)` pairs sorted by column, zero counts
/// omitted. All-zero rows are allowed; all-zero columns are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocTermMatrix {
    rows: Vec<Vec<(u32, u32)>>,
    vocab: Vec<String>,
    doc_ids: Vec<String>,
}

impl DocTermMatrix {
    pub fn from_rows(
        rows: Vec<Vec<(u32, u32)>>,
        vocab: Vec<String>,
        doc_ids: Vec<String>,
    ) -> Result<Self> {
        if rows.len() != doc_ids.len() {
            return Err(Error::LengthMismatch(rows.len(), doc_ids.len()));
        }
        if vocab.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let n = vocab.len();
        let mut col_seen = vec![false; n];
        let mut rows = rows;
        for row in &mut rows {
            row.retain(|&(_, c)| c > 0);
            row.sort_unstable_by_key(|&(j, _)| j);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate column {} in row",
                        w[0].0
                    )));
                }
            }
            for &(j, _) in row.iter() {
                let j = j as usize;
                if j >= n {
                    return Err(Error::InvalidParameter(format!(
                        "column {j} outside vocabulary of size {n}"
                    )));
                }
                col_seen[j] = true;
            }
        }
        if let Some(j) = col_seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!(
                "term `{}` has no occurrences",
                vocab[j]
            )));
        }
        Ok(DocTermMatrix {
            rows,
            vocab,
            doc_ids,
        })
    }

    /// Number of documents.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Vocabulary size.
    pub fn n(&self) -> usize {
        self.vocab.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn row(&self, d: usize) -> &[(u32, u32)] {
        &self.rows[d]
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.doc_ids.iter().position(|x| x == id)
    }

    pub fn doc_len(&self, d: usize) -> u64 {
        self.rows[d].iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn total(&self) -> u64 {
        (0..self.m()).map(|d| self.doc_len(d)).sum()
    }

    pub fn get(&self, d: usize, j: usize) -> u32 {
        self.rows[d]
            .binary_search_by_key(&(j as u32), |&(c, _)| c)
            .map(|i| self.rows[d][i].1)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0; self.n()];
                for &(j, c) in row {
                    dense[j as usize] = c;
                }
                dense
            })
            .collect()
    }

    pub fn empty_rows(&self) -> Vec<&str> {
        self.rows
            .iter()
            .zip(&self.doc_ids)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, id)| id.as_str())
            .collect()
    }

    pub fn digest(&self) -> Digest {
        let mut b = DigestBuilder::new("dtm");
        b.u64(self.m() as u64).u64(self.n() as u64);
        for t in &self.vocab {
            b.str(t);
        }
        for (id, row) in self.doc_ids.iter().zip(&self.rows) {
            b.str(id).u64(row.len() as u64);
            for &(j, c) in row {
                b.u64(j as u64).u64(c as u64);
            }
        }
        b.finish()
    }

    fn sidecars(path: &Path) -> (PathBuf, PathBuf) {
        let mut vocab = path.as_os_str().to_owned();
        vocab.push(".vocab");
        let mut docs = path.as_os_str().to_owned();
        docs.push(".docs");
        (vocab.into(), docs.into())
    }

    /// Writes the triplet file at `path` plus `<path>.vocab` and `<path>.docs`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e| Error::io(path, e);
        let mut w = BufWriter::new(fs::File::create(path).map_err(io)?);
        writeln!(w, "{} {} {}", self.m(), self.n(), self.nnz()).map_err(io)?;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                writeln!(w, "{i} {j} {c}").map_err(io)?;
            }
        }
        w.flush().map_err(io)?;
        let (vocab_path, docs_path) = Self::sidecars(path);
        write_lines(&vocab_path, &self.vocab)?;
        write_lines(&docs_path, &self.doc_ids)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::format(path, "missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::format(path, "header must be `m n nnz`"))?;
        let [m, n, nnz] = dims[..] else {
            return Err(Error::format(path, "header must be `m n nnz`"));
        };
        let mut rows = vec![Vec::new(); m];
        let mut count = 0;
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::MalformedRecord {
                path: path.to_path_buf(),
                record: lineno + 2,
                message: "expected `row col count`".into(),
            };
            let parts: Vec<u64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let [i, j, c] = parts[..] else {
                return Err(bad());
            };
            if i as usize >= m || j as usize >= n {
                return Err(bad());
            }
            rows[i as usize].push((j as u32, c as u32));
            count += 1;
        }
        if count != nnz {
            return Err(Error::format(
                path,
                format!("header declares {nnz} entries, found {count}"),
            ));
        }
        let (vocab_path, docs_path) = Self::sidecars(path);
        let vocab = read_lines(&vocab_path)?;
        let doc_ids = read_lines(&docs_path)?;
        if vocab.len() != n || doc_ids.len() != m {
            return Err(Error::format(path, "sidecar lengths disagree with header"));
        }
        Self::from_rows(rows, vocab, doc_ids)
    }
}

fn write_lines(path: &Path, items: &[String]) -> Result<()> {
    let mut out = String::new();
    for s in items {
        out.push_str(s);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(fs::read_to_string(path)
        .map_err(|e| Error::io(path, e))?
        .lines()
        .map(str::to_string)
        .collect())
}
