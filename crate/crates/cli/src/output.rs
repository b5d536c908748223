use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Files staged in memory and written together. If any write fails, every file
/// already written by this batch is removed again.
#[derive(Default)]
pub struct OutputBatch {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl OutputBatch {
    pub fn add(&mut self, rel: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((rel.into(), bytes));
    }

    pub fn write_under(self, out: &Path) -> Result<()> {
        let mut written: Vec<PathBuf> = Vec::new();
        let mut created_dirs: Vec<PathBuf> = Vec::new();
        let result = (|| -> Result<()> {
            for (rel, bytes) in &self.files {
                let path = out.join(rel);
                if let Some(parent) = path.parent() {
                    let mut missing = Vec::new();
                    let mut p = parent;
                    while !p.exists() {
                        missing.push(p.to_path_buf());
                        match p.parent() {
                            Some(up) => p = up,
                            None => break,
                        }
                    }
                    fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
                    created_dirs.extend(missing.into_iter().rev());
                }
                fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                written.push(path);
            }
            Ok(())
        })();
        if result.is_err() {
            for p in written.iter().rev() {
                let _ = fs::remove_file(p);
            }
            for d in created_dirs.iter().rev() {
                let _ = fs::remove_dir(d);
            }
        }
        result
    }
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}
