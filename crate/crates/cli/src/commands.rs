use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use honeycomb::code::{
    build_code, geometric_logical_set, geometric_logicals, relation_census, verify_logical_pairing,
    verify_no_minus_identity, Axis,
};
use honeycomb::excitations::{barrier_scan, braid_table, ScanKind};
use honeycomb::lattice::{build_lattice, export_csv, export_json, CellComplex, LatticeSpec};
use honeycomb::montecarlo::{locate_transition, run_ising_mc, MCConfig, ObservableSummary};
use honeycomb::partition::{
    dominance_report, enumeration_guard, reduced_quantum_sum, verify_cross_term_bound,
    verify_sector_duality, BoundParams, PartitionParams,
};
use honeycomb::verify::{run_criterion, NUM_CRITERIA};

use crate::output::{fmt17, json, lattice_hash, manifest_path, parse_grid, parse_list, Sink};
use crate::{
    Cli, CodeCmd, Command, ExactCmd, ExciteCmd, ExportFormat, Kind, LatticeCmd, McCmd, SizeArg,
};

fn lattice(size: &SizeArg) -> Result<CellComplex> {
    let spec = if size.size == 1 {
        LatticeSpec::multigraph(1)?
    } else {
        LatticeSpec::new(size.size)?
    };
    Ok(build_lattice(spec))
}

fn axis(dir: char) -> Result<Axis> {
    Axis::from_char(dir.to_ascii_lowercase())
        .with_context(|| format!("direction `{dir}` is not x, y or z"))
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn dispatch<'a>(cli: &'a Cli, argv: &'a [String]) -> Result<ExitCode> {
    let ctx = Ctx {
        argv,
        started: Instant::now(),
    };

    match &cli.command {
        Command::Lattice(LatticeCmd::Export { size, format, out }) => {
            let c = lattice(size)?;
            let body = match format {
                ExportFormat::Json => export_json(&c),
                ExportFormat::Csv => export_csv(&c),
            };
            let params = json!({"L": size.size, "format": format!("{format:?}").to_lowercase()});
            ctx.sink(out, params, None, Some(lattice_hash(&c)))
                .emit(&body)?;
        }
        Command::Lattice(LatticeCmd::Validate { size }) => {
            let c = lattice(size)?;
            let report = c.validate();
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                .collect();
            print!(
                "{}",
                json(
                    &json!({"L": size.size, "all_passed": report.all_passed(), "checks": checks})
                )?
            );
            return Ok(status(report.all_passed()));
        }
        Command::Code(CodeCmd::Analyze { size, out }) => {
            let c = lattice(size)?;
            let code = build_code(&c)?;
            let body = json(&json!({
                "L": size.size,
                "qubits": code.num_qubits(),
                "plaquettes": code.generators().len(),
                "rank": code.rank(),
                "kernel_dim": code.kernel_dim(),
                "k": code.encoded_qubits(),
                "no_minus_identity": verify_no_minus_identity(&code),
                "census": relation_census(&c, &code),
            }))?;
            ctx.sink(out, json!({"L": size.size}), None, Some(lattice_hash(&c)))
                .emit(&body)?;
        }
        Command::Code(CodeCmd::Logicals { size, out }) => {
            let c = lattice(size)?;
            let code = build_code(&c)?;
            let mut axes = Vec::new();
            for a in Axis::ALL {
                let (surface, string) = geometric_logicals(&c, a)?;
                axes.push(json!({
                    "axis": a.as_char().to_string(),
                    "surface_qubits": surface.support(),
                    "surface_weight": surface.weight(),
                    "string_path": string.path,
                    "string_letters": string.letters.iter().map(|l| l.as_char()).collect::<String>(),
                    "period_four_pattern": string.has_period_four_pattern(),
                }));
            }
            let report = verify_logical_pairing(&geometric_logical_set(&c)?, &code);
            let body = json(&json!({
                "L": size.size,
                "logicals": axes,
                "pairing_matrix": report.matrix,
                "standard_form": report.standard_form,
                "commute_with_stabilizers": report.commute_with_stabilizers,
                "outside_stabilizer_span": report.outside_stabilizer_span,
                "passed": report.passed(),
            }))?;
            ctx.sink(out, json!({"L": size.size}), None, Some(lattice_hash(&c)))
                .emit(&body)?;
            return Ok(status(report.passed()));
        }
        Command::Excite(ExciteCmd::Scan {
            size,
            kind,
            dir,
            coupling,
            out,
        }) => {
            let c = lattice(size)?;
            let code = build_code(&c)?;
            let scan_kind = match kind {
                Kind::String => ScanKind::String,
                Kind::Surface => ScanKind::Surface,
            };
            let rows = barrier_scan(&c, &code, scan_kind, axis(*dir)?, *coupling)?;
            let mut body = String::from("size,weight,energy,perimeter\n");
            for r in rows {
                writeln!(
                    body,
                    "{},{},{},{}",
                    r.size,
                    r.weight,
                    fmt17(r.energy),
                    r.perimeter
                )?;
            }
            let params = json!({
                "L": size.size,
                "kind": format!("{kind:?}").to_lowercase(),
                "dir": dir.to_string(),
                "J": coupling,
            });
            ctx.sink(out, params, None, Some(lattice_hash(&c)))
                .emit(&body)?;
        }
        Command::Excite(ExciteCmd::Braid { size, dir }) => {
            let c = lattice(size)?;
            let code = build_code(&c)?;
            println!("configuration,crossings,phase");
            for r in braid_table(&c, &code, axis(*dir)?)? {
                println!("{},{},{:+}", r.configuration, r.crossings, r.phase);
            }
        }
        Command::Exact(cmd) => return exact(cmd, &ctx),
        Command::Mc(cmd) => return mc(cmd, &ctx),
        Command::VerifyAll(args) => {
            let ids: Vec<usize> = match &args.only {
                Some(s) => parse_list(s)?,
                None => (1..=NUM_CRITERIA).collect(),
            };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=NUM_CRITERIA).contains(&i)) {
                bail!("no acceptance criterion {bad}");
            }
            if args.size.size < 2 {
                bail!("verify-all needs L >= 2");
            }
            let mut results = Vec::new();
            for id in ids {
                let r = run_criterion(id, args.size.size as usize);
                println!("{r}");
                results.push(r);
            }
            let passed = results.iter().filter(|r| r.passed).count();
            println!("{passed}/{} criteria passed", results.len());
            if args.out.is_some() {
                ctx.sink(
                    &args.out,
                    json!({"L": args.size.size, "only": args.only}),
                    None,
                    None,
                )
                .emit(&json(&results)?)?;
            }
            return Ok(status(passed == results.len()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Ctx<'a> {
    argv: &'a [String],
    started: Instant,
}

impl<'a> Ctx<'a> {
    fn sink(
        &self,
        out: &'a Option<PathBuf>,
        params: serde_json::Value,
        seed: Option<u64>,
        lattice_hash: Option<String>,
    ) -> Sink<'a> {
        Sink {
            argv: self.argv,
            started: self.started,
            out: out.as_deref(),
            params,
            seed,
            lattice_hash,
        }
    }
}

fn exact<'a>(cmd: &'a ExactCmd, ctx: &Ctx<'a>) -> Result<ExitCode> {
    match cmd {
        ExactCmd::Decompose { size, beta_j, out } => {
            let c = lattice(size)?;
            enumeration_guard(&c)?;
            let code = build_code(&c)?;
            let r = reduced_quantum_sum(&c, &code, PartitionParams::new(*beta_j)?)?;
            let body = json(&json!({
                "L": size.size,
                "betaJ": beta_j,
                "alpha": r.alpha,
                "total": r.total,
                "surface": r.surface_part,
                "pure": r.pure_type_part,
                "cross": r.cross_part,
                "pure_type_product": r.pure_type_product,
                "kernel_dim": code.kernel_dim(),
            }))?;
            ctx.sink(
                out,
                json!({"L": size.size, "betaJ": beta_j}),
                None,
                Some(lattice_hash(&c)),
            )
            .emit(&body)?;
        }
        ExactCmd::Duality { size, grid, out } => {
            let c = lattice(size)?;
            enumeration_guard(&c)?;
            let report = verify_sector_duality(&c, &parse_grid(grid)?)?;
            let mut body = String::from(
                "betaJ,dual_betaJ,trivial_sum,ising_side,relative_error,full_sum,sector_ratio\n",
            );
            for r in &report.rows {
                let cols = [
                    r.beta_j,
                    r.dual_beta_j,
                    r.trivial_sum,
                    r.ising_side,
                    r.relative_error,
                    r.full_sum,
                    r.sector_ratio,
                ];
                writeln!(body, "{}", cols.map(fmt17).join(","))?;
            }
            ctx.sink(
                out,
                json!({"L": size.size, "betaJ_grid": grid}),
                None,
                Some(lattice_hash(&c)),
            )
            .emit(&body)?;
            if !report.passed(1e-9) {
                eprintln!(
                    "sector identity or ratio trend failed (max relative error {:e})",
                    report.max_relative_error
                );
                return Ok(ExitCode::from(1));
            }
        }
        ExactCmd::Bound {
            size,
            eps1,
            eps2,
            out,
        } => {
            let c = lattice(size)?;
            enumeration_guard(&c)?;
            let code = build_code(&c)?;
            let r = verify_cross_term_bound(&c, &code, BoundParams::new(*eps1, *eps2)?)?;
            let body = json(&json!({
                "L": size.size,
                "passed": r.passed(),
                "min_slack": r.min_slack,
                "tightest_counts": r.tightest_counts,
                "tightest_type": r.tightest_axis.as_char().to_string(),
                "checks": r.checks,
                "violations": r.violations,
                "type_fractions": r.type_fractions,
            }))?;
            let params = json!({"L": size.size, "eps1": eps1, "eps2": eps2});
            ctx.sink(out, params, None, Some(lattice_hash(&c)))
                .emit(&body)?;
            return Ok(status(r.passed()));
        }
        ExactCmd::Dominance { sizes, grid, out } => {
            let rows = dominance_report(&parse_list(sizes)?, &parse_grid(grid)?)?;
            let mut body = String::from("L,betaJ,surface,pure,cross,ratio\n");
            for r in rows {
                writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    r.size,
                    fmt17(r.beta_j),
                    fmt17(r.surface_part),
                    fmt17(r.pure_type_part),
                    fmt17(r.cross_part),
                    fmt17(r.ratio)
                )?;
            }
            ctx.sink(out, json!({"sizes": sizes, "betaJ_grid": grid}), None, None)
                .emit(&body)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

const MC_HEADER: &str = "dual_betaJ,E_mean,E_err,Cv,Cv_err,m_abs,binder";

fn read_mc_csv(path: &Path) -> Result<(usize, Vec<ObservableSummary>)> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != MC_HEADER {
        bail!("{}: unexpected header `{header}`", path.display());
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let v: Vec<f64> = record?
            .iter()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()?;
        rows.push(ObservableSummary {
            dual_beta_j: v[0],
            e_mean: v[1],
            e_err: v[2],
            cv: v[3],
            cv_err: v[4],
            m_abs: v[5],
            m_abs_err: 0.0,
            binder: v[6],
            binder_err: 0.0,
            acceptance: f64::NAN,
        });
    }
    Ok((size_of_run(path)?, rows))
}

/// Lattice size from the run's manifest, else from an `L<digits>` tag in the
/// file name.
fn size_of_run(path: &Path) -> Result<usize> {
    if let Ok(text) = std::fs::read_to_string(manifest_path(path)) {
        let m: serde_json::Value = serde_json::from_str(&text)?;
        if let Some(l) = m["params"]["L"].as_u64() {
            return Ok(l as usize);
        }
    }
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    stem.match_indices('L')
        .find_map(|(i, _)| {
            let digits: String = stem[i + 1..]
                .chars()
                .take_while(char::is_ascii_digit)
                .collect();
            digits.parse().ok()
        })
        .with_context(|| {
            format!(
                "{}: no manifest and no L<n> in the file name",
                path.display()
            )
        })
}

fn mc<'a>(cmd: &'a McCmd, ctx: &Ctx<'a>) -> Result<ExitCode> {
    match cmd {
        McCmd::Run {
            size,
            grid,
            sweeps,
            therm,
            interval,
            replicates,
            seed,
            out,
        } => {
            let c = lattice(size)?;
            let config = MCConfig {
                size: size.size as usize,
                grid: parse_grid(grid)?,
                sweeps: *sweeps,
                thermalization: *therm,
                interval: *interval,
                seed: *seed,
                replicates: *replicates,
            };
            let series = run_ising_mc(&c.dual_graph(), &config)?;
            let mut body = format!("{MC_HEADER}\n");
            for s in series {
                let r = s.summary();
                let cols = [
                    r.dual_beta_j,
                    r.e_mean,
                    r.e_err,
                    r.cv,
                    r.cv_err,
                    r.m_abs,
                    r.binder,
                ];
                writeln!(body, "{}", cols.map(fmt17).join(","))?;
            }
            let params = json!({
                "L": size.size,
                "grid": grid,
                "sweeps": sweeps,
                "therm": therm,
                "interval": interval,
                "replicates": replicates,
            });
            ctx.sink(out, params, Some(*seed), Some(lattice_hash(&c)))
                .emit(&body)?;
        }
        McCmd::Critical { inputs, out } => {
            let paths: Vec<PathBuf> = parse_list(inputs)?;
            let results = paths
                .iter()
                .map(|p| read_mc_csv(p))
                .collect::<Result<Vec<_>>>()?;
            let t = locate_transition(&results)?;
            let body = json(&json!({
                "dual_betaJc": t.dual_beta_jc,
                "betaJc_quantum": t.beta_jc_quantum,
                "uncertainty": t.uncertainty,
                "binder_crossing": t.binder_crossing,
                "peaks": t.peaks,
            }))?;
            ctx.sink(out, json!({"in": inputs}), None, None)
                .emit(&body)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
