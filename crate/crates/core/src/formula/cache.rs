use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{from_json, render, xk_formula, Format, FormulaPolynomial};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Optional on-disk store of `X_k` formulas in their json rendering.
///
/// Without a directory this is just the in-process memo behind [`xk_formula`].
#[derive(Debug, Clone, Default)]
pub struct FormulaCache {
    dir: Option<PathBuf>,
}

impl FormulaCache {
    pub fn in_memory() -> Self {
        FormulaCache { dir: None }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        FormulaCache { dir: Some(dir.into()) }
    }

    /// Reads the directory from `PRODSERIES_CACHE_DIR` when set.
    pub fn from_env() -> Self {
        match std::env::var_os("PRODSERIES_CACHE_DIR") {
            Some(dir) if !dir.is_empty() => Self::with_dir(PathBuf::from(dir)),
            _ => Self::in_memory(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(dir: &Path, k: usize) -> PathBuf {
        dir.join(format!("x{k}.json"))
    }

    /// Loads `X_k` from disk if present, otherwise builds and stores it.
    pub fn get(&self, k: usize, limits: &Limits) -> Result<Arc<FormulaPolynomial>> {
        let Some(dir) = &self.dir else {
            return xk_formula(k, limits);
        };
        let path = Self::path_for(dir, k);
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            let f = from_json(&text)?;
            if f.degree() != k {
                return Err(Error::invalid(format!(
                    "{} holds a formula of degree {}, expected {k}",
                    path.display(),
                    f.degree()
                )));
            }
            return Ok(Arc::new(f));
        }
        let f = xk_formula(k, limits)?;
        fs::create_dir_all(dir)?;
        fs::write(&path, render(&f, Format::Json))?;
        Ok(f)
    }
}
