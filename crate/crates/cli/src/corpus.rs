use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use drift_core::metrics::CorpusFile;
use drift_core::Language;

use crate::{io_err, read_jsonl, HarnessError};

/// One benchmark input: a code context plus optional auxiliary texts
/// (tests, entry points) that must follow any renaming.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub id: String,
    pub language: Language,
    pub source: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patches: Vec<String>,
}

impl SampleRecord {
    pub fn as_corpus_file(&self) -> CorpusFile {
        CorpusFile {
            name: self.id.clone(),
            language: self.language,
            text: self.source.clone(),
        }
    }
}

/// Read a corpus from a `.jsonl` file of [`SampleRecord`]s, or from a
/// directory of `.java` and `.py` files (ids are the relative paths).
/// Samples come back sorted by id; duplicate ids are rejected.
pub fn read_corpus(path: &Path) -> Result<Vec<SampleRecord>, HarnessError> {
    let mut samples: Vec<SampleRecord> = if path.is_dir() {
        let mut out = Vec::new();
        for entry in WalkDir::new(path).sort_by_file_name() {
            let entry = entry.map_err(|e| io_err(path, e))?;
            let p = entry.path();
            let Some(language) = p.extension().and_then(|e| e.to_str()).and_then(Language::from_extension) else {
                continue;
            };
            let source = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            let id = p.strip_prefix(path).unwrap_or(p).to_string_lossy().replace('\\', "/");
            out.push(SampleRecord {
                id,
                language,
                source,
                patches: Vec::new(),
            });
        }
        out
    } else {
        read_jsonl(path)?
    };
    samples.sort_by(|a, b| a.id.cmp(&b.id));
    let mut seen = BTreeSet::new();
    for s in &samples {
        if !seen.insert(s.id.as_str()) {
            return Err(HarnessError::DuplicateId(s.id.clone()));
        }
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_and_directory() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.jsonl");
        fs::write(
            &file,
            "{\"id\":\"b\",\"language\":\"python\",\"source\":\"x=1\\n\"}\n\n{\"id\":\"a\",\"language\":\"java\",\"source\":\"int x;\",\"patches\":[\"t\"]}\n",
        )
        .unwrap();
        let s = read_corpus(&file).unwrap();
        assert_eq!(s.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(s[0].patches, ["t"]);

        let src = dir.path().join("src");
        fs::create_dir_all(src.join("pkg")).unwrap();
        fs::write(src.join("pkg/A.java"), "class A {}").unwrap();
        fs::write(src.join("m.py"), "pass\n").unwrap();
        fs::write(src.join("notes.txt"), "skip").unwrap();
        let s = read_corpus(&src).unwrap();
        assert_eq!(s.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(), ["m.py", "pkg/A.java"]);
        assert_eq!(s[1].language, Language::Java);
    }

    #[test]
    fn duplicates_and_bad_lines() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.jsonl");
        let line = "{\"id\":\"a\",\"language\":\"java\",\"source\":\"\"}\n";
        fs::write(&file, line.repeat(2)).unwrap();
        assert!(matches!(read_corpus(&file), Err(HarnessError::DuplicateId(_))));
        fs::write(&file, "{\"id\":\"a\"}\n").unwrap();
        assert!(matches!(read_corpus(&file), Err(HarnessError::Record { line: 1, .. })));
    }
}
