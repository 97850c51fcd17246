//! The four subcommands. Each returns a process exit code.

use std::path::PathBuf;
use std::time::Instant;

use factorized_operators::{eigensolve, factorized_hamiltonian, model_hamiltonian, ModelKind};

use crate::config::SuiteConfig;
use crate::error::{CliError, Result, EXIT_FAIL, EXIT_PASS};
use crate::report::{CheckRecord, Table, VerificationReport};
use crate::suites::{find_suite, spectrum_model, SuiteOutput};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunOptions {
    pub fn new(config: impl Into<PathBuf>) -> Self {
        Self { config: config.into(), out: None, seed: None }
    }
}

/// Result of one command: the report written, and any CSV files.
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub report: VerificationReport,
    pub report_path: PathBuf,
    pub csv_files: Vec<PathBuf>,
}

impl CommandOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn load(opts: &RunOptions) -> Result<SuiteConfig> {
    let mut c = SuiteConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        c.seed = seed;
    }
    Ok(c)
}

fn run_suite(c: &SuiteConfig) -> Result<SuiteOutput> {
    let suite = find_suite(&c.suite).ok_or_else(|| CliError::Config(format!("unknown suite {}", c.suite)))?;
    (suite.run)(c)
}

fn finish(command: &str, c: &SuiteConfig, opts: &RunOptions, out: SuiteOutput, tables: &[Table]) -> Result<CommandOutcome> {
    let report = VerificationReport::new(command, c, out.checks, out.notes);
    let report_path = opts.out.clone().unwrap_or_else(|| c.report_path());
    report.write(&report_path)?;
    let dir = c.output_dir();
    let csv_files = tables.iter().map(|t| t.write_csv(&dir)).collect::<Result<Vec<_>>>()?;
    Ok(CommandOutcome { report, report_path, csv_files })
}

pub fn verify(opts: &RunOptions) -> Result<CommandOutcome> {
    let c = load(opts)?;
    let out = run_suite(&c)?;
    finish("verify", &c, opts, out, &[])
}

pub fn converge(opts: &RunOptions) -> Result<CommandOutcome> {
    let c = load(opts)?;
    let suite = find_suite(&c.suite).expect("validated suite");
    if !suite.uses_ladder {
        return Err(CliError::Config(format!("suite {} does not run over a grid ladder", c.suite)));
    }
    if c.ladder.len() < 3 {
        return Err(CliError::Config(format!("converge needs a ladder of at least 3 sizes, got {:?}", c.ladder)));
    }
    let out = run_suite(&c)?;
    let tables: Vec<Table> = out.tables.iter().filter(|t| t.headers == ["spacing", "residual"]).cloned().collect();
    finish("converge", &c, opts, out, &tables)
}

/// Sorted sums of `n` levels chosen with repetition: the free bosonic spectrum.
pub fn bosonic_sums(levels: &[f64], n: usize) -> Vec<f64> {
    fn rec(levels: &[f64], start: usize, left: usize, acc: f64, out: &mut Vec<f64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..levels.len() {
            rec(levels, i, left - 1, acc + levels[i], out);
        }
    }
    let mut out = Vec::new();
    rec(levels, 0, n, 0.0, &mut out);
    out.sort_by(f64::total_cmp);
    out
}

pub fn spectrum(opts: &RunOptions) -> Result<CommandOutcome> {
    let c = load(opts)?;
    let n_sites = c.ladder.last().copied().unwrap_or(32);
    let model = spectrum_model(&c, n_sites)?;
    let factorized = c.params.operator.as_deref() == Some("factorized");
    let t = Instant::now();
    let h = if factorized { factorized_hamiltonian(&model)? } else { model_hamiltonian(&model)? };
    let k = c.params.eigenvalues.unwrap_or(6).clamp(1, h.rows());
    let r = eigensolve(&h, k)?;
    let mut out = SuiteOutput::default();
    let worst = r.residual_norms.iter().copied().fold(0.0, f64::max);
    out.checks.push(
        CheckRecord::bound("eigenpair-residuals", "certified eigenpairs", worst, 1e-8 * r.operator_norm.max(1.0))
            .timed(t.elapsed().as_secs_f64()),
    );
    if let (ModelKind::DeltaGas { beta }, false) = (model.kind, factorized) {
        if beta == 0.0 {
            let dx = model.grid.spacing();
            let levels: Vec<f64> = (0..n_sites)
                .map(|j| 2.0 * (1.0 - (2.0 * std::f64::consts::PI * j as f64 / n_sites as f64).cos()) / (dx * dx))
                .collect();
            let oracle = bosonic_sums(&levels, model.n_particles);
            let dev = r.eigenvalues.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            out.checks.push(CheckRecord::bound("free-spectrum", "free bosons on the discrete Laplacian", dev, 1e-9 * r.operator_norm.max(1.0)));
        }
    }
    let mut table = Table::new(format!("{}-spectrum", c.suite), &["index", "eigenvalue", "residual_norm"]);
    table.rows = r.eigenvalues.iter().zip(&r.residual_norms).enumerate().map(|(i, (e, res))| vec![i as f64, *e, *res]).collect();
    out.notes.push(format!(
        "{} operator on {n_sites} sites, N = {}, dimension {}, {} solver",
        if factorized { "factorized" } else { "model" },
        model.n_particles,
        h.rows(),
        r.method.label()
    ));
    finish("spectrum", &c, opts, out, &[table])
}

pub fn sample(opts: &RunOptions) -> Result<CommandOutcome> {
    let c = load(opts)?;
    if c.suite != "poisson-functional" {
        return Err(CliError::Config(format!("sample drives the poisson-functional suite, not {}", c.suite)));
    }
    let out = run_suite(&c)?;
    let tables = out.tables.clone();
    finish("sample", &c, opts, out, &tables)
}

/// Prints a one-line summary per check.
pub fn summarize(outcome: &CommandOutcome, w: &mut dyn std::io::Write) -> std::io::Result<()> {
    for ch in &outcome.report.checks {
        let status = if ch.pass { "PASS" } else { "FAIL" };
        match ch.order {
            Some(p) => writeln!(w, "{status} {} order={p:.3} threshold={} finest={:.3e}", ch.name, ch.tolerance, ch.residual)?,
            None => writeln!(w, "{status} {} residual={:.3e} tolerance={:.1e}", ch.name, ch.residual, ch.tolerance)?,
        }
    }
    writeln!(w, "report: {}", outcome.report_path.display())?;
    for f in &outcome.csv_files {
        writeln!(w, "csv: {}", f.display())?;
    }
    Ok(())
}

