//! On-disk cache of extreme rays and double description checkpoints.
//!
//! Entries are keyed by party count, family label and a SHA-256 of the
//! canonical half-space rows, so a changed generator never reads stale rays.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};

use super::dd::{DdCheckpoint, DdProgress};
use super::io::MatrixFile;
use super::{Cone, Ray};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "QMIP_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct RayCache {
    dir: PathBuf,
    force_recompute: bool,
    checkpoint_every: Duration,
}

impl RayCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RayCache {
            dir: dir.into(),
            force_recompute: false,
            checkpoint_every: Duration::from_secs(60),
        }
    }

    /// Cache rooted at `$QMIP_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(RayCache::new)
    }

    pub fn force_recompute(mut self, yes: bool) -> Self {
        self.force_recompute = yes;
        self
    }

    pub fn checkpoint_every(mut self, every: Duration) -> Self {
        self.checkpoint_every = every;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(&self, cone: &Cone) -> String {
        let label = if cone.label().is_empty() {
            "custom".to_string()
        } else {
            cone.label().replace(',', "-")
        };
        format!("n{}-{}-{}", cone.parties(), label, &cone.content_hash()[..16])
    }

    pub fn rays_path(&self, cone: &Cone) -> PathBuf {
        self.dir.join(format!("{}.rays", self.key(cone)))
    }

    pub fn checkpoint_path(&self, cone: &Cone) -> PathBuf {
        self.dir.join(format!("{}.ckpt.json", self.key(cone)))
    }

    pub fn load(&self, cone: &Cone) -> Result<Option<Vec<Ray>>> {
        if self.force_recompute {
            return Ok(None);
        }
        let path = self.rays_path(cone);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let (m, comments) = MatrixFile::parse_text(&text)?;
        let expected = format!("hrep-sha256 {}", cone.content_hash());
        if !comments.contains(&expected) || m.dim != cone.dim() {
            return Err(Error::StaleCache { path });
        }
        let rays = m
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        s.parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad ray entry `{s}`")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Ray)
            })
            .collect::<Result<Vec<_>>>()?;
        for r in &rays {
            if !cone.satisfies(r.point()) {
                return Err(Error::StaleCache { path });
            }
        }
        info!("loaded {} rays from {}", rays.len(), path.display());
        Ok(Some(rays))
    }

    pub fn store(&self, cone: &Cone, rays: &[Ray]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let m = MatrixFile::from_rows(cone.dim(), &rays.iter().map(|r| r.point().to_vec()).collect::<Vec<_>>());
        let comments = vec![
            format!("n {}", cone.parties()),
            format!("families {}", cone.label()),
            format!("hrep-sha256 {}", cone.content_hash()),
        ];
        write_atomic(&self.rays_path(cone), &m.to_text(&comments))?;
        let ck = self.checkpoint_path(cone);
        if ck.exists() {
            fs::remove_file(ck)?;
        }
        Ok(())
    }

    pub fn load_checkpoint(&self, cone: &Cone) -> Result<Option<DdCheckpoint>> {
        if self.force_recompute {
            return Ok(None);
        }
        match fs::read_to_string(self.checkpoint_path(cone)) {
            Ok(t) => Ok(Some(serde_json::from_str(&t)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Returns a progress callback writing checkpoints at most every
    /// `checkpoint_every`.
    pub fn checkpointer<'a>(&'a self, cone: &'a Cone) -> impl FnMut(&DdProgress<'_>) + 'a {
        let path = self.checkpoint_path(cone);
        let mut last = Instant::now();
        move |p: &DdProgress<'_>| {
            if last.elapsed() < self.checkpoint_every {
                return;
            }
            last = Instant::now();
            let ck = p.checkpoint();
            let res = fs::create_dir_all(&self.dir)
                .map_err(Error::from)
                .and_then(|_| write_atomic(&path, &serde_json::to_string(&ck)?));
            match res {
                Ok(()) => info!(
                    "checkpoint: {} constraints, {} rays -> {}",
                    ck.processed.len(),
                    ck.rays.len(),
                    path.display()
                ),
                Err(e) => warn!("failed to write checkpoint {}: {e}", path.display()),
            }
        }
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(tmp, path)?;
    Ok(())
}
