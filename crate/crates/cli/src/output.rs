//! Output directory handling and run manifests.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::Cli;

/// Everything needed to rerun a command and check its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, without `--out`.
    pub args: Vec<String>,
    /// Directory relative input paths are resolved against.
    pub cwd: PathBuf,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    /// `ok`, `violation` or `error`.
    pub status: String,
    pub message: Option<String>,
    pub summary: serde_json::Value,
}

fn strip_out(args: Vec<String>) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        if a == "--out" {
            iter.next();
        } else if !a.starts_with("--out=") {
            kept.push(a);
        }
    }
    kept
}

pub struct Outputs {
    dir: PathBuf,
    manifest: Manifest,
}

impl Outputs {
    pub fn new(dir: &Path, command: &str, args: Vec<String>) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        let manifest = Manifest {
            tool: "rlcongest".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            args: strip_out(args),
            cwd: std::env::current_dir()?,
            seed: None,
            outputs: Vec::new(),
            status: "ok".into(),
            message: None,
            summary: serde_json::Value::Null,
        };
        Ok(Outputs { dir: dir.to_path_buf(), manifest })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Creates `name` inside the output directory and records it.
    pub fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        if !self.manifest.outputs.iter().any(|o| o == name) {
            self.manifest.outputs.push(name.to_owned());
        }
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(BufWriter::new(file))
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn set_summary(&mut self, summary: impl Serialize) -> Result<()> {
        self.manifest.summary = serde_json::to_value(summary)?;
        Ok(())
    }

    /// Writes `manifest.json` with the run's final status.
    pub fn finish(mut self, result: &Result<()>) -> Result<()> {
        if let Err(e) = result {
            let violation = crate::exit_code(e) == 2;
            self.manifest.status = if violation { "violation" } else { "error" }.into();
            self.manifest.message = Some(format!("{e:#}"));
        }
        let manifest = self.manifest.clone();
        let mut out = self.create("manifest.json")?;
        serde_json::to_writer_pretty(&mut out, &manifest)?;
        use std::io::Write;
        writeln!(out)?;
        Ok(())
    }
}

impl std::fmt::Debug for Outputs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Outputs").field("dir", &self.dir).finish()
    }
}

/// Reruns the manifest's command from its recorded working directory,
/// writing into `out`.
pub fn replay(manifest_path: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(manifest_path).with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: Manifest = serde_json::from_str(&text).context("parsing manifest")?;
    fs::create_dir_all(out)?;
    let out = fs::canonicalize(out)?;
    std::env::set_current_dir(&manifest.cwd)
        .with_context(|| format!("entering recorded directory {}", manifest.cwd.display()))?;
    let mut argv = vec!["rlcongest".to_owned()];
    argv.extend(manifest.args.iter().cloned());
    argv.push("--out".into());
    argv.push(out.display().to_string());
    let cli = Cli::try_parse_from(&argv).map_err(|e| anyhow::anyhow!("manifest arguments no longer parse: {e}"))?;
    if matches!(cli.command, crate::Command::Replay(_)) {
        anyhow::bail!("a manifest cannot replay another replay");
    }
    crate::dispatch(cli, argv[1..].to_vec())
}
