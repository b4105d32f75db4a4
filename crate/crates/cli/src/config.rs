use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;

use crate::Cli;

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_owned)
        }
    })
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", n + 1);
        };
        out.push((
            k.trim().trim_start_matches("--").to_owned(),
            v.trim().to_owned(),
        ));
    }
    Ok(out)
}

fn longs(cmd: &clap::Command) -> BTreeSet<String> {
    cmd.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_owned))
        .collect()
}

fn all_longs(cmd: &clap::Command, acc: &mut BTreeSet<String>) {
    acc.extend(longs(cmd));
    for sub in cmd.get_subcommands() {
        all_longs(sub, acc);
    }
}

/// Appends flags from the `--config` file that the chosen subcommand accepts
/// and the command line does not already set.
pub fn apply(mut argv: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let entries = parse(&text)?;

    let root = Cli::command();
    let mut known = BTreeSet::new();
    all_longs(&root, &mut known);
    let mut accepted = longs(&root);
    let mut leaf = &root;
    for token in argv.iter().skip(1) {
        if let Some(sub) = leaf.find_subcommand(token) {
            leaf = sub;
            accepted.extend(longs(leaf));
        }
    }

    for (key, value) in entries {
        if !known.contains(&key) {
            bail!("config key `{key}` is not a flag of any subcommand");
        }
        let flag = format!("--{key}");
        let given = argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if accepted.contains(&key) && !given && key != "config" {
            argv.push(flag);
            argv.push(value);
        }
    }
    Ok(argv)
}
