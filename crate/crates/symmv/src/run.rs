//! Subcommand bodies. Each returns the process exit code or an error, which
//! the caller maps to exit code 2.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use symmv_core::elliptic::SublinearSolver;
use symmv_core::radial::volume_max_bound;
use symmv_core::rearrange::decreasing_rearrangement;
use symmv_core::verify::{domain_failure_reports, CheckReport, PreparedDomain, SuiteConfig};
use symmv_core::{build_grid, compute_sq, lp_norm, max_field, schwarz_radius, DomainSpec, Grid};

use crate::cli::{parse_range, CommonArgs, Format, SweepArgs, SweepParam};
use crate::config::load_config;
use crate::output::{emit, fmt_float, reports_csv, sidecar_path, summary_text, AtomicWrites, CsvTable, Tally};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

/// Config file (or defaults) with command-line overrides applied.
pub fn settings(args: &CommonArgs) -> Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(p) => load_config(p)?,
        None => SuiteConfig::default(),
    };
    if !args.domain.is_empty() {
        cfg.domains = args.domain.clone();
    }
    if !args.q.is_empty() {
        cfg.q_values = args.q.clone();
    }
    if !args.k.is_empty() {
        cfg.k_values = args.k.clone();
    }
    if let Some(r) = args.resolution {
        cfg.resolution = r;
    }
    if let Some(t) = args.tolerance {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tolerance must be a positive number");
        }
    }
    Ok(cfg)
}

/// The whole suite, parallel over domains and exponents. Output order is the
/// same as [`symmv_core::verify::run_suite`].
pub fn run_verify(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let per_domain: Vec<Vec<CheckReport>> = cfg
        .domains
        .par_iter()
        .map(|spec| {
            let grid = match build_grid(spec, cfg.resolution) {
                Ok(g) => g,
                Err(e) => return domain_failure_reports(spec, cfg, &e),
            };
            let prepared = match PreparedDomain::new(&grid, cfg) {
                Ok(p) => p,
                Err(e) => return domain_failure_reports(spec, cfg, &e),
            };
            let mut out = prepared.domain_reports();
            let per_q: Vec<Vec<CheckReport>> = cfg.q_values.par_iter().map(|&q| prepared.q_reports(q)).collect();
            out.extend(per_q.into_iter().flatten());
            out
        })
        .collect();
    Ok(per_domain.into_iter().flatten().collect())
}

pub fn cmd_verify(args: &CommonArgs) -> Result<u8> {
    let mut cfg = settings(args)?;
    if let Some(t) = args.tolerance {
        cfg.tolerances.grid = t;
    }
    let reports = run_verify(&cfg)?;
    let bytes = match args.format {
        Format::Csv => reports_csv(&reports)?,
        Format::Summary => summary_text(&reports).into_bytes(),
    };
    emit(args.out.as_deref(), &bytes)?;
    let tally = Tally::of(&reports);
    eprintln!("{tally}");
    Ok(if tally.fail > 0 { EXIT_FAIL } else { EXIT_OK })
}

fn single_domain(cfg: &SuiteConfig) -> Result<DomainSpec> {
    match cfg.domains.as_slice() {
        [d] => Ok(d.clone()),
        _ => bail!("this command takes exactly one domain; pass --domain"),
    }
}

fn single_q(cfg: &SuiteConfig) -> Result<f64> {
    match cfg.q_values.as_slice() {
        [q] => {
            symmv_core::check_exponent(*q)?;
            Ok(*q)
        }
        _ => bail!("this command takes exactly one q; pass --q"),
    }
}

fn solver_options(cfg: &SuiteConfig, args: &CommonArgs) -> symmv_core::SublinearOptions {
    let mut opts = cfg.solver.clone();
    if let Some(t) = args.tolerance {
        opts.tol = t;
    }
    opts
}

fn build(spec: &DomainSpec, resolution: usize) -> Result<Grid> {
    build_grid(spec, resolution).with_context(|| format!("cannot build a grid for {spec} at resolution {resolution}"))
}

fn require_out(args: &CommonArgs) -> Result<&Path> {
    args.out.as_deref().context("this command writes several files; pass --out")
}

/// Text of the `.meta` sidecar, one `key = value` per line.
fn solve_meta(grid: &Grid, q: f64, u: &symmv_core::ScalarField<'_>, diag: &symmv_core::SolveDiagnostics) -> Result<String> {
    let volume = grid.domain_area();
    let mut s = String::new();
    let _ = writeln!(s, "domain = \"{}\"", grid.spec().label());
    let _ = writeln!(s, "q = {}", fmt_float(q));
    let _ = writeln!(s, "resolution = {}", grid.resolution());
    let _ = writeln!(s, "cells = {}", grid.len());
    let _ = writeln!(s, "spacing = {}", fmt_float(grid.spacing()));
    let _ = writeln!(s, "volume = {}", fmt_float(volume));
    let _ = writeln!(s, "grid_volume = {}", fmt_float(grid.len() as f64 * grid.cell_measure()));
    let _ = writeln!(s, "ball_radius = {}", fmt_float(schwarz_radius(volume, 2)?));
    let _ = writeln!(s, "sq = {}", fmt_float(compute_sq(u, q)?));
    let _ = writeln!(s, "max_u = {}", fmt_float(max_field(u)));
    let _ = writeln!(s, "norm_q_plus_1 = {}", fmt_float(lp_norm(u, q + 1.0)));
    let _ = writeln!(s, "max_bound = {}", fmt_float(volume_max_bound(volume, 2, q)?));
    let _ = writeln!(s, "lambda1 = {}", fmt_float(diag.lambda1));
    let _ = writeln!(s, "iterations = {}", diag.iterations);
    let _ = writeln!(s, "bracket_gap = {}", fmt_float(diag.final_gap));
    Ok(s)
}

pub fn cmd_solve(args: &CommonArgs) -> Result<u8> {
    let cfg = settings(args)?;
    let spec = single_domain(&cfg)?;
    let q = single_q(&cfg)?;
    let out = require_out(args)?;
    let grid = build(&spec, cfg.resolution)?;
    let solver = SublinearSolver::new(&grid, solver_options(&cfg, args))?;
    let (u, diag) = solver.solve(q)?;

    let mut t = CsvTable::new(&["x", "y", "u"])?;
    for (k, v) in u.values().iter().enumerate() {
        let c = grid.cell_center(k);
        t.float_row(&[c[0], c[1], *v])?;
    }
    let mut w = AtomicWrites::new();
    w.stage(out, &t.into_bytes()?)?;
    w.stage(&sidecar_path(out, "meta"), solve_meta(&grid, q, &u, &diag)?.as_bytes())?;
    w.commit()?;
    Ok(EXIT_OK)
}

pub fn cmd_rearrange(args: &CommonArgs) -> Result<u8> {
    let cfg = settings(args)?;
    let spec = single_domain(&cfg)?;
    let q = single_q(&cfg)?;
    let out = require_out(args)?;
    let grid = build(&spec, cfg.resolution)?;
    let solver = SublinearSolver::new(&grid, solver_options(&cfg, args))?;
    let (u, _) = solver.solve(q)?;
    let profile = decreasing_rearrangement(&u)?;

    let mut rows = CsvTable::new(&["measure", "value"])?;
    let mut radial = CsvTable::new(&["radius", "value"])?;
    for (s, v) in profile.rows() {
        rows.float_row(&[s, v])?;
        radial.float_row(&[(s / std::f64::consts::PI).sqrt(), v])?;
    }
    let mut w = AtomicWrites::new();
    w.stage(out, &rows.into_bytes()?)?;
    w.stage(&sidecar_path(out, "schwarz.csv"), &radial.into_bytes()?)?;
    w.commit()?;
    Ok(EXIT_OK)
}

/// One sweep row: max u, S_q, volume bound, relative margin, torsion max.
fn sweep_row(solver: &SublinearSolver<'_>, q: f64) -> Result<[f64; 5]> {
    let (u, _) = solver.solve(q)?;
    let grid = solver.grid();
    let max_u = max_field(&u);
    let bound = volume_max_bound(grid.domain_area(), 2, q)?;
    Ok([max_u, compute_sq(&u, q)?, bound, (bound - max_u) / bound, max_field(&solver.torsion())])
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<u8> {
    let common = &args.common;
    let cfg = settings(common)?;
    let values = parse_range(&args.range).map_err(|e| anyhow::anyhow!("--range: {e}"))?;
    let spec = single_domain(&cfg)?;
    let opts = solver_options(&cfg, common);

    let rows: Vec<[f64; 5]> = match args.param {
        SweepParam::Q => {
            for &q in &values {
                symmv_core::check_exponent(q)?;
            }
            let grid = build(&spec, cfg.resolution)?;
            let solver = SublinearSolver::new(&grid, opts)?;
            values.par_iter().map(|&q| sweep_row(&solver, q)).collect::<Result<_>>()?
        }
        SweepParam::Resolution => {
            let q = single_q(&cfg)?;
            let res: Vec<usize> = values
                .iter()
                .map(|&v| {
                    if v.fract() != 0.0 || v < 0.0 {
                        bail!("resolution {v} is not a whole number");
                    }
                    Ok(v as usize)
                })
                .collect::<Result<_>>()?;
            res.par_iter()
                .map(|&r| {
                    let grid = build(&spec, r)?;
                    sweep_row(&SublinearSolver::new(&grid, opts.clone())?, q)
                })
                .collect::<Result<_>>()?
        }
        SweepParam::DomainScale => {
            let q = single_q(&cfg)?;
            let specs: Vec<DomainSpec> = values.iter().map(|&s| spec.scaled(s)).collect::<Result<_, _>>()?;
            specs
                .par_iter()
                .map(|s| {
                    let grid = build(s, cfg.resolution)?;
                    sweep_row(&SublinearSolver::new(&grid, opts.clone())?, q)
                })
                .collect::<Result<_>>()?
        }
    };

    let first = match args.param {
        SweepParam::Q => "q",
        SweepParam::Resolution => "resolution",
        SweepParam::DomainScale => "domain_scale",
    };
    let mut t = CsvTable::new(&[first, "max_u", "sq", "max_bound", "margin", "torsion_max"])?;
    for (v, r) in values.iter().zip(&rows) {
        let mut fields = vec![fmt_float(*v)];
        fields.extend(r.iter().map(|x| fmt_float(*x)));
        t.row(fields)?;
    }
    emit(common.out.as_deref(), &t.into_bytes()?)?;
    Ok(EXIT_OK)
}
