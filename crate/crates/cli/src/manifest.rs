use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

/// Plain `key=value` record of a run: the configuration followed by one
/// `file.<name>.sha256` line per emitted file.
pub struct Manifest {
    dir: PathBuf,
    entries: Vec<(String, String)>,
    files: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(subcommand: &str, dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            entries: vec![
                ("subcommand".into(), subcommand.into()),
                ("out_dir".into(), dir.display().to_string()),
            ],
            files: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn add_file(&mut self, name: &str, contents: &[u8]) {
        self.files
            .push((name.to_string(), hex::encode(Sha256::digest(contents))));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        let names: Vec<&str> = self.files.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&format!("files={}\n", names.join(",")));
        for (name, digest) in &self.files {
            out.push_str(&format!("file.{name}.sha256={digest}\n"));
        }
        out
    }

    pub fn write(&self) -> Result<()> {
        let path = self.dir.join("manifest.txt");
        std::fs::write(&path, self.render()).with_context(|| format!("writing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_lists_checksums() {
        let mut m = Manifest::new("bpdn", Path::new("out"));
        m.set("seed", 3);
        m.add_file("a.csv", b"");
        let text = m.render();
        assert!(text.starts_with("subcommand=bpdn\nout_dir=out\nseed=3\nfiles=a.csv\n"));
        assert!(text.contains(
            "file.a.csv.sha256=e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        ));
    }
}
