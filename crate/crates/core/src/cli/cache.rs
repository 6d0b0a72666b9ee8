use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::report::InvariantReport;

pub const CACHE_ENV: &str = "DELTAKIT_CACHE_DIR";

/// Content-addressed report store: one JSON file per (spec digest, invariant, region).
#[derive(Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    /// Picks the directory from the flag, then the environment, then the user cache directory.
    /// An unusable directory disables caching with a warning.
    pub fn open(flag: Option<&Path>) -> Self {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(default_dir);
        match probe(&dir) {
            Ok(()) => Self { dir: Some(dir) },
            Err(e) => {
                log::warn!(
                    "cache directory {} is not writable ({e}); continuing without cache",
                    dir.display()
                );
                Self::disabled()
            }
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, digest: &str, invariant: &str, region: &str) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let mut h = Sha256::new();
        for part in [env!("CARGO_PKG_VERSION"), digest, invariant, region] {
            h.update(part.as_bytes());
            h.update([0]);
        }
        Some(dir.join(format!("{}.json", hex::encode(h.finalize()))))
    }

    pub fn get(&self, digest: &str, invariant: &str, region: &str) -> Option<InvariantReport> {
        let path = self.path(digest, invariant, region)?;
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<InvariantReport>(&text) {
            Ok(r) if r.spec_digest == digest && r.invariant == invariant => Some(r),
            _ => {
                log::warn!("ignoring unreadable cache entry {}", path.display());
                None
            }
        }
    }

    pub fn put(&self, region: &str, report: &InvariantReport) {
        let Some(path) = self.path(&report.spec_digest, &report.invariant, region) else {
            return;
        };
        let tmp = path.with_extension("tmp");
        let body = serde_json::to_vec(report).expect("reports serialize");
        if let Err(e) = fs::write(&tmp, body).and_then(|()| fs::rename(&tmp, &path)) {
            log::warn!("could not write cache entry {}: {e}", path.display());
        }
    }
}

fn default_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(x).join("deltakit");
    }
    if let Some(h) = std::env::var_os("HOME") {
        return PathBuf::from(h).join(".cache").join("deltakit");
    }
    PathBuf::from(".deltakit-cache")
}

fn probe(dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".probe");
    fs::write(&probe, b"")?;
    fs::remove_file(probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::report::Value;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(Some(dir.path()));
        let mut r = InvariantReport::info("delta", Value::Set(vec![1]));
        r.spec_digest = "abc".into();
        assert!(cache.get("abc", "delta", "k").is_none());
        cache.put("k", &r);
        assert_eq!(cache.get("abc", "delta", "k"), Some(r));
        assert!(cache.get("abc", "delta", "other").is_none());
    }

    #[test]
    fn unusable_directory_disables() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, b"").unwrap();
        let cache = Cache::open(Some(&file.join("sub")));
        assert!(cache.dir().is_none());
        assert!(cache.get("a", "b", "c").is_none());
    }
}
