use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vortinv::field::ScalarField;

use crate::error::{CliError, Result};
use crate::fieldio::write_field_csv;

/// Writes run artifacts into one directory. Every file starts with the
/// config hash of the producing run.
pub struct Artifacts {
    dir: PathBuf,
    hash: String,
    written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn create(dir: &Path, hash: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            hash: hash.to_string(),
            written: Vec::new(),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn put(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(format!("creating {}", parent.display()), e))?;
        }
        fs::write(&path, body).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        self.written.push(path);
        Ok(())
    }

    /// Plain text written as is; used for the config echo.
    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        self.put(name, &format!("# config_hash={}\n{body}", self.hash))
    }

    pub fn csv(&mut self, name: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut body = format!("# config_hash={}\n{}\n", self.hash, columns.join(","));
        for row in rows {
            body.push_str(&row.join(","));
            body.push('\n');
        }
        self.put(name, &body)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            config_hash: &'a str,
            #[serde(flatten)]
            body: &'a T,
        }
        let text = serde_json::to_string_pretty(&Wrapped {
            config_hash: &self.hash,
            body: value,
        })
        .expect("reports serialize");
        self.put(name, &(text + "\n"))
    }

    pub fn field(&mut self, name: &str, f: &ScalarField) -> Result<()> {
        let body = write_field_csv(f, Some(&self.hash));
        self.put(name, &body)
    }
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
