//! On-disk cache of canonical ray sets.

use std::io::Write;
use std::path::{Path, PathBuf};

use oksos_core::format::{rays_json, read_rays_json};
use oksos_core::polytope::Ray;
use oksos_core::SignVector;
use sha2::{Digest, Sha256};

/// Bumped whenever the stored ray set for a key could change.
pub const ALGORITHM_VERSION: &str = concat!("dd-2/", env!("CARGO_PKG_VERSION"));

pub struct RayCache {
    dir: PathBuf,
}

impl RayCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(RayCache { dir: dir.to_path_buf() })
    }

    /// `cap` is the slack cap of a partial ray set, `None` for the full set.
    pub fn key(d: usize, signs: &SignVector, cap: Option<usize>) -> String {
        let n = signs.len();
        let cap = cap.map_or("all".to_string(), |c| c.to_string());
        let text = format!("n={n};d={d};signs={signs};cap={cap};algorithm={ALGORITHM_VERSION}");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, d: usize, signs: &SignVector, cap: Option<usize>) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(d, signs, cap)))
    }

    /// A missing or unreadable entry is a miss.
    pub fn load(&self, d: usize, signs: &SignVector, cap: Option<usize>) -> Option<Vec<Ray>> {
        let text = std::fs::read_to_string(self.path(d, signs, cap)).ok()?;
        read_rays_json(&text).ok()
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place, so readers never see a partial entry.
    pub fn store(&self, d: usize, signs: &SignVector, cap: Option<usize>, rays: &[Ray]) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(rays_json(rays).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(d, signs, cap)).map_err(|e| e.error)?;
        Ok(())
    }
}
