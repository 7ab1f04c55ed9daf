use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::ast::Formula;
use super::LogicError;
use crate::automata::text::{dfa_from_text, dfa_to_text};
use crate::automata::Dfa;

/// Directory of compiled predicates in the automaton text format, keyed by a
/// hash of the formula and of every predicate it calls.
#[derive(Clone, Debug)]
pub struct CompileCache {
    dir: PathBuf,
}

fn io_err(path: &Path, e: io::Error) -> LogicError {
    LogicError::Cache(format!("{}: {e}", path.display()))
}

impl CompileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, LogicError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(CompileCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `deps` lists `(name, digest)` for every called predicate.
    pub fn key(f: &Formula, deps: &[(String, String)]) -> String {
        let mut h = Sha256::new();
        h.update(b"formula\n");
        h.update(f.to_string().as_bytes());
        for (name, digest) in deps {
            h.update(format!("\n{name} {digest}").as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.dfa"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Dfa>, LogicError> {
        let path = self.path(key);
        match fs::read_to_string(&path) {
            Ok(text) => dfa_from_text(&text)
                .map(Some)
                .map_err(|e| LogicError::Cache(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    pub fn save(&self, key: &str, d: &Dfa) -> Result<(), LogicError> {
        self.write(&self.path(key), &dfa_to_text(d))
    }

    /// Writes through a temporary file so readers never see partial text.
    pub fn write(&self, path: &Path, text: &str) -> Result<(), LogicError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_err(path, e))
    }

    /// Removes every cached predicate; returns how many were removed.
    pub fn clear(&self) -> Result<usize, LogicError> {
        let mut n = 0;
        for entry in fs::read_dir(&self.dir).map_err(|e| io_err(&self.dir, e))? {
            let path = entry.map_err(|e| io_err(&self.dir, e))?.path();
            if path.extension().is_some_and(|x| x == "dfa") {
                fs::remove_file(&path).map_err(|e| io_err(&path, e))?;
                n += 1;
            }
        }
        Ok(n)
    }

    /// Number of cached predicates.
    pub fn len(&self) -> Result<usize, LogicError> {
        let entries = fs::read_dir(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        Ok(entries
            .filter_map(Result::ok)
            .filter(|e| e.path().extension().is_some_and(|x| x == "dfa"))
            .count())
    }

    pub fn is_empty(&self) -> Result<bool, LogicError> {
        Ok(self.len()? == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, PredicateStore};
    use crate::sequences::SequenceId;

    #[test]
    fn round_trip_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CompileCache::new(dir.path()).unwrap();
        let f = parse_formula("E y x=2*y", SequenceId::ThueMorse).unwrap();
        let mut store = PredicateStore::new().with_cache(cache.clone());
        let d = store.define("even", &f).unwrap().clone();
        assert_eq!(cache.len().unwrap(), 1);
        let mut again = PredicateStore::new().with_cache(cache.clone());
        assert_eq!(again.define("even", &f).unwrap(), &d);
        assert_eq!(cache.len().unwrap(), 1);
        let g = parse_formula("$even(x) & x>2", SequenceId::ThueMorse).unwrap();
        again.define("big", &g).unwrap();
        assert_eq!(cache.len().unwrap(), 2);
        assert_eq!(cache.clear().unwrap(), 2);
        assert!(cache.is_empty().unwrap());
    }
}
