use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::scenarios::{Artifact, Table};

pub fn write_table<W: Write>(t: &Table, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&t.header)?;
    for row in &t.rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_artifact<W: Write>(a: &Artifact, out: W) -> CliResult<()> {
    match a {
        Artifact::Csv(t) => write_table(t, out),
        Artifact::EdgeList(bytes) => {
            let mut out = out;
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    scenario: &'static str,
    seed: u64,
    config: &'a std::collections::BTreeMap<String, String>,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_unix: Option<u64>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the artifact to `out` and a JSON manifest next to it.
pub fn write_outputs(a: &Artifact, out: &Path, settings: &Settings, deterministic: bool) -> CliResult<()> {
    let file = File::create(out).map_err(io_err(out))?;
    write_artifact(a, BufWriter::new(file))?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: girg_core::VERSION,
        scenario: settings.scenario().name(),
        seed: settings.seed()?,
        config: settings.values(),
        outputs: vec![out.display().to_string()],
        created_unix: (!deterministic).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
    };
    let path = manifest_path(out);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(io_err(&path))
}
