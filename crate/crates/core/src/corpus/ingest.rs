use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Document, RawCorpus};
use crate::error::{Error, Result};

/// On-disk corpus layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// One document per line; ids are zero-based line numbers.
    Lines,
    /// Header `doc_id,text`.
    Csv,
    /// One `.txt` file per document; id is the file stem.
    Dir,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lines" => Ok(CorpusFormat::Lines),
            "csv" => Ok(CorpusFormat::Csv),
            "dir" => Ok(CorpusFormat::Dir),
            _ => Err(Error::Unknown {
                what: "corpus format",
                name: s.into(),
            }),
        }
    }
}

pub fn ingest_corpus(path: &Path, format: CorpusFormat) -> Result<RawCorpus> {
    let docs = match format {
        CorpusFormat::Lines => read_lines(path)?,
        CorpusFormat::Csv => read_csv(path)?,
        CorpusFormat::Dir => read_dir(path)?,
    };
    RawCorpus::new(docs)
}

fn read_lines(path: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, line)| Document {
            id: i.to_string(),
            text: line.to_string(),
        })
        .collect())
}

fn read_csv(path: &Path) -> Result<Vec<Document>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::format(path, format!("{other:?}")),
        })?;
    let malformed = |record: usize, message: String| Error::MalformedRecord {
        path: path.to_path_buf(),
        record,
        message,
    };
    let headers = rdr
        .headers()
        .map_err(|e| malformed(0, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "doc_id" || &headers[1] != "text" {
        return Err(malformed(0, "header must be `doc_id,text`".into()));
    }
    let mut docs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let record = i + 1;
        let rec = rec.map_err(|e| malformed(record, e.to_string()))?;
        if rec.len() != 2 {
            return Err(malformed(record, format!("expected 2 fields, got {}", rec.len())));
        }
        let id = rec[0].to_string();
        if id.contains(['\n', '\r']) {
            return Err(malformed(record, "doc_id contains a line break".into()));
        }
        docs.push(Document {
            id,
            text: rec[1].to_string(),
        });
    }
    Ok(docs)
}

fn read_dir(path: &Path) -> Result<Vec<Document>> {
    let mut files: Vec<_> = fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
        .collect::<Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"));
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let id = p
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::format(&p, "file stem is not UTF-8"))?
                .to_string();
            let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            Ok(Document { id, text })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_ids_are_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        fs::write(&p, "one\ntwo\nthree\n").unwrap();
        let c = ingest_corpus(&p, CorpusFormat::Lines).unwrap();
        let ids: Vec<_> = c.docs().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["0", "1", "2"]);
        assert_eq!(c.docs()[2].text, "three");
    }

    #[test]
    fn empty_file_is_zero_documents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        fs::write(&p, "").unwrap();
        assert!(matches!(
            ingest_corpus(&p, CorpusFormat::Lines),
            Err(Error::ZeroDocuments)
        ));
    }

    #[test]
    fn csv_duplicate_and_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        fs::write(&p, "doc_id,text\na,hello\nb,\"quoted, text\"\n").unwrap();
        let c = ingest_corpus(&p, CorpusFormat::Csv).unwrap();
        assert_eq!(c.docs()[1].text, "quoted, text");

        fs::write(&p, "doc_id,text\na,hello\na,again\n").unwrap();
        assert!(matches!(
            ingest_corpus(&p, CorpusFormat::Csv),
            Err(Error::DuplicateId(id)) if id == "a"
        ));

        fs::write(&p, "doc_id,text\na,hello\nb,x,y\n").unwrap();
        assert!(matches!(
            ingest_corpus(&p, CorpusFormat::Csv),
            Err(Error::MalformedRecord { record: 2, .. })
        ));

        fs::write(&p, "id,body\na,hello\n").unwrap();
        assert!(matches!(
            ingest_corpus(&p, CorpusFormat::Csv),
            Err(Error::MalformedRecord { record: 0, .. })
        ));
    }

    #[test]
    fn dir_uses_sorted_file_stems() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.txt"), "bee").unwrap();
        fs::write(dir.path().join("a.txt"), "ay").unwrap();
        fs::write(dir.path().join("skip.md"), "no").unwrap();
        let c = ingest_corpus(dir.path(), CorpusFormat::Dir).unwrap();
        let ids: Vec<_> = c.docs().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["a", "b"]);
    }

    #[test]
    fn unreadable_path() {
        assert!(matches!(
            ingest_corpus(Path::new("/nonexistent/x"), CorpusFormat::Lines),
            Err(Error::Io { .. })
        ));
    }
}
