use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use honeycomb::lattice::{export_json, CellComplex};

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `start:stop:count` with both endpoints included.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        bail!("grid `{s}` is not start:stop:count");
    };
    let (a, b): (f64, f64) = (a.parse()?, b.parse()?);
    let n: usize = n.parse()?;
    match n {
        0 => bail!("grid `{s}` has no points"),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .with_context(|| format!("bad list item `{x}`"))
        })
        .collect()
}

pub fn lattice_hash(c: &CellComplex) -> String {
    Sha256::digest(export_json(c).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub lattice_hash: Option<String>,
    pub wall_time_secs: f64,
    pub output: String,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Where a command's result goes, plus what its manifest records.
pub struct Sink<'a> {
    pub argv: &'a [String],
    pub started: Instant,
    pub out: Option<&'a Path>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub lattice_hash: Option<String>,
}

impl Sink<'_> {
    /// Writes `body` to the output file with a manifest beside it, or to
    /// stdout when no file was requested.
    pub fn emit(self, body: &str) -> Result<()> {
        let Some(path) = self.out else {
            print!("{body}");
            return Ok(());
        };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
        let manifest = RunManifest {
            command: self.argv[1..].join(" "),
            params: self.params,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            lattice_hash: self.lattice_hash,
            wall_time_secs: self.started.elapsed().as_secs_f64(),
            output: path.display().to_string(),
        };
        let mp = manifest_path(path);
        std::fs::write(&mp, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", mp.display()))?;
        Ok(())
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.8:0.8:1").unwrap(), vec![0.8]);
        let g = parse_grid("0.3:1.2:10").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.3);
        assert!((g[9] - 1.2).abs() < 1e-15);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }
}
