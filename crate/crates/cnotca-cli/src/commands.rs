//! Subcommand implementations.

use std::path::PathBuf;

use cnotca::density::{
    mutual_information_grid, single_entropy_grid, single_qubit_rho, two_qubit_rho,
    von_neumann_entropy,
};
use cnotca::fractal;
use cnotca::lattice::{build_step, BoundaryCondition, CircuitSpec};
use cnotca::oracle::{DenseState, MAX_QUBITS};
use cnotca::product_state::SingleQubitState;
use cnotca::Error;

use crate::output::{
    format_e12, write_decay_csv, write_grid_csv, write_grid_pgm, write_series_csv,
};
use crate::random::random_states;
use crate::{CliError, CommonArgs};

/// Fast path and oracle must agree to this tolerance in `oracle-check`.
pub const ORACLE_GATE: f64 = 1e-8;
/// Number of seeded states the oracle check draws.
pub const ORACLE_STATES: usize = 5;

fn spec_from(args: &CommonArgs) -> Result<CircuitSpec, CliError> {
    Ok(build_step(args.n, args.bc.into())?)
}

fn state_from(args: &CommonArgs) -> Result<SingleQubitState, CliError> {
    if !args.theta.is_finite() || !args.phi.is_finite() {
        return Err(CliError::Arg("angles must be finite".into()));
    }
    Ok(SingleQubitState::from_angles(args.theta, args.phi))
}

fn require_out(args: &CommonArgs) -> Result<&PathBuf, CliError> {
    args.out
        .as_ref()
        .ok_or_else(|| CliError::Arg("--out is required for this command".into()))
}

pub fn entropy_map(args: &CommonArgs) -> Result<(), CliError> {
    let out = require_out(args)?;
    let spec = spec_from(args)?;
    let state = state_from(args)?;
    let grid = single_entropy_grid(&spec, &state, args.steps)?;
    let csv = out.with_extension("csv");
    let pgm = out.with_extension("pgm");
    write_grid_csv(&csv, &grid)?;
    write_grid_pgm(&pgm, &grid)?;
    println!("wrote {} and {}", csv.display(), pgm.display());
    Ok(())
}

pub fn mutual_info(args: &CommonArgs) -> Result<(), CliError> {
    let out = require_out(args)?;
    let spec = spec_from(args)?;
    let state = state_from(args)?;
    let grid = mutual_information_grid(&spec, &state, args.steps)?;
    let csv = out.with_extension("csv");
    let pgm = out.with_extension("pgm");
    write_grid_csv(&csv, &grid)?;
    write_grid_pgm(&pgm, &grid)?;
    println!("wrote {} and {}", csv.display(), pgm.display());
    Ok(())
}

pub fn fractal(args: &CommonArgs) -> Result<(), CliError> {
    let out = require_out(args)?;
    let series = fractal::bulk_state_series(args.tmax, args.margin)?;
    let csv = out.with_extension("csv");
    write_series_csv(&csv, &series)?;
    if args.tmax >= 32 {
        let fit = fractal::hausdorff_fit(&series, (16, args.tmax))?;
        println!(
            "hausdorff_fit: slope={} intercept={} r_squared={} window={}..{}",
            format_e12(fit.slope),
            format_e12(fit.intercept),
            format_e12(fit.r_squared),
            fit.window.0,
            fit.window.1
        );
    } else {
        println!("hausdorff_fit: skipped (tmax must be at least 32)");
    }
    let mut mismatches = 0u32;
    for (m, t) in fractal::flashback_times(args.tmax).into_iter().enumerate() {
        let count = series.count(t);
        let expected = m as u64 + 3;
        let ok = count == expected;
        if !ok {
            mismatches += 1;
        }
        println!(
            "flashback t={t} count={count} expected={expected} {}",
            if ok { "ok" } else { "MISMATCH" }
        );
    }
    println!("flashback_mismatches={mismatches}");
    println!("wrote {}", csv.display());
    Ok(())
}

pub fn fit_decay(args: &CommonArgs) -> Result<(), CliError> {
    let out = require_out(args)?;
    let state = state_from(args)?;
    match fractal::decay_fit_with_margin(&state, args.tmax, args.margin) {
        Ok(report) => {
            let csv = out.with_extension("csv");
            write_decay_csv(&csv, &report.samples)?;
            println!(
                "bulk_fit: slope={} intercept={} r_squared={} window={}..{} excluded={}",
                format_e12(report.bulk.slope),
                format_e12(report.bulk.intercept),
                format_e12(report.bulk.r_squared),
                report.bulk.window.0,
                report.bulk.window.1,
                report.bulk.excluded.len()
            );
            println!(
                "flashback_fit: slope={} intercept={} r_squared={}",
                format_e12(report.flashback.slope),
                format_e12(report.flashback.intercept),
                format_e12(report.flashback.r_squared)
            );
            println!("wrote {}", csv.display());
            Ok(())
        }
        Err(Error::FitRejected(reason)) => {
            println!("fit rejected: {reason}");
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn charges(args: &CommonArgs) -> Result<(), CliError> {
    let spec = spec_from(args)?;
    let state = state_from(args)?;
    let sites: Vec<usize> = (0..args.n.min(5)).collect();

    let mut text = String::new();
    text.push_str("site,step,support\n");
    for &site in &sites {
        let orbit = cnotca::pauli::z_orbit(site, &spec, cnotca::gf2::ORDER_CAP)?;
        for (i, label) in orbit.labels().iter().enumerate() {
            let support: Vec<String> = label.ones().map(|s| (s + 1).to_string()).collect();
            text.push_str(&format!("{},{},{}\n", site + 1, i, support.join("+")));
        }
    }

    text.push_str("\nsite,period,periodic,max_mode_drift\n");
    let mut reports = Vec::new();
    for &site in &sites {
        let report = cnotca::charges::oscillation_report(site, &state, &spec, args.steps)?;
        let drift = report.mode_drift.iter().copied().fold(0.0f64, f64::max);
        text.push_str(&format!(
            "{},{},{},{}\n",
            site + 1,
            report.period,
            u8::from(report.periodic),
            format_e12(drift)
        ));
        reports.push(report);
    }

    text.push_str("\nsite,t,expectation\n");
    for (&site, report) in sites.iter().zip(&reports) {
        for (t, value) in report.series.iter().enumerate() {
            text.push_str(&format!("{},{t},{}\n", site + 1, format_e12(*value)));
        }
    }

    print!("{text}");
    if let Some(out) = &args.out {
        std::fs::write(out.with_extension("csv"), &text)?;
    }
    for (&site, report) in sites.iter().zip(&reports) {
        if !report.passes(1e-12) {
            return Err(CliError::Numeric(format!(
                "oscillation verification failed at site {}",
                site + 1
            )));
        }
    }
    Ok(())
}

/// Largest deviations between the fast path and the dense oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleDeviation {
    /// Over all single-site and pair density-matrix entries.
    pub entries: f64,
    /// Over all entropies and mutual informations.
    pub entropies: f64,
}

impl OracleDeviation {
    #[must_use]
    pub fn max(&self) -> f64 {
        self.entries.max(self.entropies)
    }
}

/// Runs the full fast-vs-dense comparison for one boundary condition over
/// the given states, all sites/pairs and every `t <= t_max`.
///
/// # Errors
/// Propagates construction and numeric-contract failures.
pub fn oracle_deviation(
    n: usize,
    bc: BoundaryCondition,
    states: &[SingleQubitState],
    t_max: u64,
) -> Result<OracleDeviation, CliError> {
    let spec = build_step(n, bc)?;
    let mut dev = OracleDeviation::default();
    for state in states {
        let mut dense = DenseState::from_product(n, state)?;
        for t in 0..=t_max {
            let mut single_entropies_fast = Vec::with_capacity(n);
            let mut single_entropies_oracle = Vec::with_capacity(n);
            for site in 0..n {
                let fast = single_qubit_rho(site, t, &spec, state)?;
                let reference = dense.reduced_density(&[site])?;
                for r in 0..2 {
                    for c in 0..2 {
                        dev.entries = dev
                            .entries
                            .max((fast.entry(r, c) - reference.entry(r, c)).norm());
                    }
                }
                let s_fast = von_neumann_entropy(&fast)?;
                let s_oracle = von_neumann_entropy(&reference)?;
                dev.entropies = dev.entropies.max((s_fast - s_oracle).abs());
                single_entropies_fast.push(s_fast);
                single_entropies_oracle.push(s_oracle);
            }
            for site in 0..n - 1 {
                let fast = two_qubit_rho(site, t, &spec, state)?;
                let reference = dense.reduced_density(&[site, site + 1])?;
                for r in 0..4 {
                    for c in 0..4 {
                        dev.entries = dev
                            .entries
                            .max((fast.entry(r, c) - reference.entry(r, c)).norm());
                    }
                }
                let s_fast = von_neumann_entropy(&fast)?;
                let s_oracle = von_neumann_entropy(&reference)?;
                dev.entropies = dev.entropies.max((s_fast - s_oracle).abs());
                let mi_fast =
                    single_entropies_fast[site] + single_entropies_fast[site + 1] - s_fast;
                let mi_oracle =
                    single_entropies_oracle[site] + single_entropies_oracle[site + 1] - s_oracle;
                dev.entropies = dev.entropies.max((mi_fast - mi_oracle).abs());
            }
            dense.step(&spec);
        }
    }
    Ok(dev)
}

pub fn oracle_check(args: &CommonArgs) -> Result<(), CliError> {
    if args.n > MAX_QUBITS {
        return Err(CliError::Arg(format!(
            "oracle-check supports at most {MAX_QUBITS} sites, got {}",
            args.n
        )));
    }
    let states = random_states(args.seed, ORACLE_STATES);
    let dev = oracle_deviation(args.n, args.bc.into(), &states, args.steps)?;
    println!("max_abs_dev={}", format_e12(dev.max()));
    if dev.max() >= ORACLE_GATE {
        return Err(CliError::Numeric(format!(
            "oracle deviation {} exceeds {ORACLE_GATE:e}",
            dev.max()
        )));
    }
    Ok(())
}
