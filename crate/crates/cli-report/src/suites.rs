//! The suite registry. Each suite turns a config into check records and tables.

use std::f64::consts::PI;
use std::time::Instant;

use current_algebra_checks::{check_current_algebra, check_normal_ordering, ConvergenceRecord, CurrentAlgebraCase};
use factorized_operators::{
    check_coulomb_regularization, check_equivalence, check_hierarchy_commutation, coulomb_s, eigensolve,
    groundstate_check, model_factorization, model_hamiltonian, separation_convergence, FactorSpec, KernelSpec,
    ModelKind, ModelSpec,
};
use fock_lattice::{build_sector, LatticeGrid};
use functional_measure::{
    characteristic_functional_mc, factorial_moment_closed_form, normal_ordered_moment_mc, poisson_closed_form,
    positive_definiteness_check, reference_functions, BoxDomain, PoissonEnsemble, TestFunctionGrid,
};
use jastrow_analytic::{
    cms_energy_per_length, dunkl_apply, energy_statistics, finite_diff_drift_check, finite_diff_laplacian_check,
    groundstate_energy, local_energy, rational_energy_density, JastrowModel,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SuiteConfig;
use crate::error::{CliError, Result};
use crate::report::{CheckRecord, Table};

#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl SuiteOutput {
    fn push(&mut self, start: Instant, record: CheckRecord) {
        self.checks.push(record.timed(start.elapsed().as_secs_f64()));
    }

    fn push_convergence(&mut self, name: &str, record: &ConvergenceRecord) {
        self.tables.push(Table::convergence(name, &record.spacings, &record.residuals, record.fitted_order));
    }
}

pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    /// Whether the suite runs over a grid ladder (and so supports `converge`).
    pub uses_ladder: bool,
    pub run: fn(&SuiteConfig) -> Result<SuiteOutput>,
}

pub static SUITES: &[Suite] = &[
    Suite { name: "current-algebra", description: "density/current brackets under refinement", uses_ladder: true, run: current_algebra },
    Suite { name: "normal-ordering", description: "exact pair and triple normal-ordering identities", uses_ladder: false, run: normal_ordering },
    Suite { name: "oscillatory", description: "harmonic trap: lattice ground energy and factorization", uses_ladder: true, run: oscillatory },
    Suite { name: "generalized-oscillatory", description: "pairwise harmonic model against its factorized form", uses_ladder: true, run: generalized_oscillatory },
    Suite { name: "cms", description: "inverse-sine-square model against its factorized form", uses_ladder: true, run: cms },
    Suite { name: "delta-gas", description: "contact-interaction gas against its factorized form", uses_ladder: true, run: delta_gas },
    Suite { name: "coulomb", description: "regularized Coulomb-type model and its eps sweep", uses_ladder: true, run: coulomb },
    Suite { name: "hierarchy", description: "commuting powers of the factorized operator", uses_ladder: true, run: hierarchy },
    Suite { name: "jastrow", description: "pointwise eigen-identities of closed-form ground states", uses_ladder: false, run: jastrow },
    Suite { name: "poisson-functional", description: "Monte Carlo generating functional and moments", uses_ladder: false, run: poisson_functional },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

fn current_algebra(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let l = c.length_or(2.0 * PI);
    let k = 2.0 * PI / l;
    let g1 = move |x: f64| (k * x).sin();
    let g2 = move |x: f64| (2.0 * k * x).cos();
    let f = move |x: f64| (k * x).cos();
    let case = CurrentAlgebraCase {
        length: l,
        n_particles: c.particles_or(2),
        ladder: c.ladder_or(&[16, 32, 64]),
        g1: &g1,
        g2: &g2,
        f: &f,
        probe_modes: c.params.probe_modes.unwrap_or(2),
    };
    let t = Instant::now();
    let r = check_current_algebra(&case)?;
    let threshold = c.order_threshold(1.5);
    let finest = |rec: &ConvergenceRecord| rec.residuals.last().copied().unwrap_or(f64::NAN);
    out.push(t, CheckRecord::order("jj-weak-order", "current-current bracket", finest(&r.jj), r.jj.fitted_order, threshold));
    out.push(t, CheckRecord::order("j-rho-weak-order", "current-density bracket", finest(&r.j_rho), r.j_rho.fitted_order, threshold));
    out.push(t, CheckRecord::bound("rho-rho-commutator", "densities commute", r.rho_rho, c.residual_tolerance(1e-12)));
    out.push_convergence("current-algebra-jj", &r.jj);
    out.push_convergence("current-algebra-j-rho", &r.j_rho);
    out.push_convergence("current-algebra-jj-entrywise", &r.jj_entrywise);
    out.notes.push("residuals are weak norms over symmetrized plane-wave probes".into());
    Ok(out)
}

fn normal_ordering(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let n = c.ladder.first().copied().unwrap_or(4);
    let grid = LatticeGrid::with_length(n, c.length_or(1.0))?;
    let sector = build_sector(grid, c.particles_or(3))?;
    let t = Instant::now();
    let (mut pair, mut triple): (f64, f64) = (0.0, 0.0);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let r = check_normal_ordering(&sector, (x, y, z))?;
                pair = pair.max(r.pair);
                triple = triple.max(r.triple);
            }
        }
    }
    let tol = c.residual_tolerance(1e-12);
    out.push(t, CheckRecord::bound("pair-normal-ordering", "pair normal ordering", pair, tol));
    out.push(t, CheckRecord::bound("triple-normal-ordering", "triple normal ordering", triple, tol));
    Ok(out)
}

fn model_on(kind: ModelKind, length: f64, n_particles: usize, n_sites: usize) -> Result<ModelSpec> {
    Ok(ModelSpec::new(kind, LatticeGrid::with_length(n_sites, length)?, n_particles)?)
}

/// Equivalence order on the ladder plus positivity and ground-vector
/// annihilation on the coarsest grid.
fn factorized_model_checks(c: &SuiteConfig, out: &mut SuiteOutput, model: &ModelSpec, ladder: &[usize]) -> Result<()> {
    let name = model.kind.name();
    let t = Instant::now();
    let eq = check_equivalence(model, ladder)?;
    let finest = eq.weak.residuals.last().copied().unwrap_or(f64::NAN);
    let anchor = "factorized form equals model plus shift";
    let record = if eq.weak.is_exact() {
        CheckRecord::bound(format!("{name}-equivalence-exact"), anchor, 0.0, c.residual_tolerance(1e-12))
    } else {
        CheckRecord::order(format!("{name}-equivalence-order"), anchor, finest, eq.weak.fitted_order, c.order_threshold(1.0))
    };
    out.push(t, record);
    out.push_convergence(&format!("{name}-equivalence"), &eq.weak);
    if let Some((label, alt)) = &eq.alternative {
        out.push_convergence(&format!("{name}-equivalence-alternative"), alt);
        out.notes.push(format!("{name}: alternative shift recorded ({label})"));
    }

    let t = Instant::now();
    let coarse = model.refined(ladder[0])?;
    let sector = coarse.sector()?;
    let spec = model_factorization(&coarse)?.spec;
    let g = groundstate_check(&sector, &spec)?;
    out.push(t, CheckRecord::bound(format!("{name}-positivity"), "factorized operator is positive", -g.min_eigenvalue, 1e-10 * g.norm));
    out.push(
        t,
        CheckRecord::bound(format!("{name}-ground-annihilation"), "ground vector in the kernel of every D(x)", g.max_local_defect, 1e-5 * g.norm.sqrt()),
    );
    Ok(())
}

fn oscillatory(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let omega = c.params.omega.unwrap_or(1.0);
    let n_particles = c.particles_or(1);
    let ladder = c.ladder_or(&[32, 64, 128]);
    let model = model_on(ModelKind::Oscillatory { omega }, c.length_or(20.0), n_particles, ladder[0])?;
    let exact = 0.5 * omega * n_particles as f64;
    let t = Instant::now();
    let mut errors = Vec::new();
    let mut spacings = Vec::new();
    for &n in &ladder {
        let m = model.refined(n)?;
        let ground = eigensolve(&model_hamiltonian(&m)?, 1)?.eigenvalues[0];
        errors.push((ground - exact).abs());
        spacings.push(m.grid.spacing());
    }
    let tol = c.residual_tolerance(1e-2);
    out.push(t, CheckRecord::bound("oscillatory-ground-energy", "lattice ground energy equals N omega / 2", *errors.last().unwrap(), tol));
    out.push(t, CheckRecord::decreasing("oscillatory-ground-energy-refinement", "lattice ground energy converges", &errors));
    let rec = ConvergenceRecord::new(spacings, errors)?;
    out.push_convergence("oscillatory-ground-energy", &rec);
    factorized_model_checks(c, &mut out, &model, &ladder)?;
    Ok(out)
}

fn generalized_oscillatory(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let ladder = c.ladder_or(&[16, 32, 64]);
    let kind = ModelKind::GeneralizedOscillatory { omega_bar: c.params.omega_bar.unwrap_or(0.8) };
    let model = model_on(kind, c.length_or(2.0 * PI), c.particles_or(2), ladder[0])?;
    factorized_model_checks(c, &mut out, &model, &ladder)?;
    Ok(out)
}

fn cms(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let ladder = c.ladder_or(&[16, 32, 64]);
    let l = c.length_or(2.0 * PI);
    let kind = ModelKind::Cms { beta: c.params.beta.unwrap_or(1.0), length: l };
    let model = model_on(kind, l, c.particles_or(2), ladder[0])?;
    factorized_model_checks(c, &mut out, &model, &ladder)?;
    Ok(out)
}

fn delta_gas(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let ladder = c.ladder_or(&[16, 32, 64]);
    let kind = ModelKind::DeltaGas { beta: c.params.beta.unwrap_or(1.0) };
    let model = model_on(kind, c.length_or(2.0 * PI), c.particles_or(2), ladder[0])?;
    factorized_model_checks(c, &mut out, &model, &ladder)?;
    out.notes.push("contact kernel uses eps = dx on every grid".into());
    Ok(out)
}

/// Largest |ds/dx - |x|^(eps - 1)| by central differences at a few points.
pub fn coulomb_derivative_residual(epsilon: f64) -> f64 {
    let h = 1e-6;
    [0.3, 0.7, 1.3, 2.9, -0.5, -1.7]
        .iter()
        .map(|&x: &f64| {
            let fd = (coulomb_s(x + h, epsilon) - coulomb_s(x - h, epsilon)) / (2.0 * h);
            (fd - x.abs().powf(epsilon - 1.0)).abs()
        })
        .fold(0.0, f64::max)
}

fn coulomb(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let ladder = c.ladder_or(&[16, 32, 64]);
    let alpha = c.params.alpha.unwrap_or(0.5);
    let epsilon = c.params.epsilon.unwrap_or(0.25);
    let l = c.length_or(10.0);
    let model = model_on(ModelKind::Coulomb { alpha, epsilon }, l, c.particles_or(2), ladder[0])?;

    let t = Instant::now();
    let worst = [0.05, 0.1, 0.2, epsilon].iter().map(|&e| coulomb_derivative_residual(e)).fold(0.0, f64::max);
    out.push(t, CheckRecord::bound("coulomb-kernel-derivative", "ds/dx = |x|^(eps-1)", worst, 1e-6));

    factorized_model_checks(c, &mut out, &model, &ladder)?;
    if let Some(eps) = &c.params.epsilons {
        let t = Instant::now();
        let fine = model.refined(*ladder.last().unwrap())?;
        let r = check_coulomb_regularization(&fine, eps)?;
        out.push(t, CheckRecord::decreasing("coulomb-regularization-sweep", "residual vanishes as eps -> 0", &r.weak));
        let mut table = Table::new("coulomb-regularization", &["epsilon", "weak_residual", "entrywise_residual", "shift"]);
        for i in 0..r.epsilons.len() {
            table.rows.push(vec![r.epsilons[i], r.weak[i], r.entrywise[i], r.shifts[i]]);
        }
        out.tables.push(table);
    }
    Ok(out)
}

fn hierarchy(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let ladder = c.ladder_or(&[6, 8, 12]);
    let l = c.length_or(6.0);
    let beta = c.params.beta.unwrap_or(1.0);
    let n_particles = c.particles_or(3);
    let grid = LatticeGrid::with_length(ladder[0], l)?;
    let sector = build_sector(grid, n_particles)?;
    let spec = FactorSpec::from_kernel(KernelSpec::heaviside_on(&grid, beta));
    let t = Instant::now();
    let r = check_hierarchy_commutation(&sector, &spec, &[1, 2, 3])?;
    out.push(t, CheckRecord::bound("hierarchy-global", "powers of the factorized operator commute", r.worst_global(), c.residual_tolerance(1e-9)));
    out.push(t, CheckRecord::bound("hierarchy-local-distant", "distant local densities commute", r.worst_local_beyond(2), 1e-10));
    out.push(t, CheckRecord::bound("hierarchy-number", "hierarchy conserves particle number", r.number_commutator, 1e-12));
    if ladder.len() >= 2 {
        let t = Instant::now();
        let adj = separation_convergence(l, n_particles, &ladder, 1, &|g| FactorSpec::from_kernel(KernelSpec::heaviside_on(g, beta)))?;
        out.push(t, CheckRecord::decreasing("hierarchy-adjacent-refinement", "adjacent local commutators shrink", &adj.residuals));
        out.push_convergence("hierarchy-adjacent", &adj);
    }
    Ok(out)
}

fn jastrow(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let samples = c.params.samples.unwrap_or(100);
    let cases: Vec<(usize, f64, f64)> = match c.params.beta {
        Some(beta) => vec![(c.particles_or(2), beta, c.length_or(PI))],
        None => vec![(2, 1.0, PI), (3, 2.0, 2.0 * PI), (5, 0.5, 1.0)],
    };
    for (i, &(n, beta, l)) in cases.iter().enumerate() {
        let m = JastrowModel::cms(beta, l, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(i as u64));
        let t = Instant::now();
        let (mut energies, mut dunkl, mut drift_fd, mut lap_fd): (Vec<f64>, f64, f64, f64) = (vec![], 0.0, 0.0, 0.0);
        for _ in 0..samples {
            let x = m.random_configuration(&mut rng);
            energies.push(local_energy(&m, &x)?);
            for j in 0..n {
                dunkl = dunkl.max(dunkl_apply(&m, &x, j)?.abs());
            }
            if let Ok(r) = finite_diff_drift_check(&m, &x) {
                drift_fd = drift_fd.max(r.worst());
            }
            if let Ok(r) = finite_diff_laplacian_check(&m, &x) {
                lap_fd = lap_fd.max(r.worst());
            }
        }
        let s = energy_statistics(&energies, groundstate_energy(&m))?;
        let tag = format!("cms-n{n}-beta{beta}-l{l:.4}");
        out.push(t, CheckRecord::bound(format!("{tag}-local-energy"), "local energy equals E_N", s.max_deviation, c.residual_tolerance(1e-9)));
        out.push(t, CheckRecord::bound(format!("{tag}-dunkl"), "Dunkl-type operators annihilate the ground state", dunkl, 1e-10));
        out.push(t, CheckRecord::bound(format!("{tag}-drift-fd"), "drift is the gradient of log psi", drift_fd, 1e-6));
        out.push(t, CheckRecord::bound(format!("{tag}-laplacian-fd"), "analytic Laplacian of log psi", lap_fd, 1e-5));
    }

    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(1000));
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let m = JastrowModel::oscillator_1d(c.params.omega.unwrap_or(1.0), n)?;
        let e = groundstate_energy(&m);
        for _ in 0..samples {
            worst = worst.max((local_energy(&m, &m.random_configuration(&mut rng))? - e).abs() / e.abs().max(f64::MIN_POSITIVE));
        }
    }
    out.push(t, CheckRecord::bound("oscillator-local-energy", "local energy equals N tr(omega) / 2", worst, 1e-10));

    let t = Instant::now();
    let rho = c.params.intensity.unwrap_or(1.0);
    let per_length = cms_energy_per_length(10_000, 1.0, rho)?;
    let target = rational_energy_density(rho);
    out.push(t, CheckRecord::bound("thermodynamic-energy-density", "E_N / l tends to rho^3 / 3", (per_length - target).abs() / target, 1e-4));
    out.notes.push(format!("E_N / l at N = 1e4, l = N / (pi rho): {per_length:.8e}; rho^3 / 3 = {target:.8e}"));
    Ok(out)
}

fn poisson_functional(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let l = c.length_or(2.0);
    let rho = c.params.intensity.unwrap_or(1.5);
    let samples = c.params.samples.unwrap_or(100_000);
    let domain = BoxDomain::interval(0.0, l)?;
    let ens = PoissonEnsemble::new(rho, domain.clone(), c.seed)?;
    let mut table = Table::new("poisson-functional", &["function", "mc_re", "mc_im", "std_error", "exact_re", "exact_im", "sigmas"]);
    let family = reference_functions(&domain, 2049)?;
    for (k, (name, f)) in family.iter().enumerate() {
        let t = Instant::now();
        let e = ens.with_seed(c.seed.wrapping_add(k as u64));
        let exact = poisson_closed_form(&e, f)?;
        let mc = characteristic_functional_mc(&e, f, samples)?;
        let sig = mc.deviation_sigmas(exact);
        out.push(t, CheckRecord::bound(format!("functional-{name}"), "Monte Carlo L(f) equals exp(rho int(e^{if} - 1))", sig, 3.0));
        table.rows.push(vec![k as f64, mc.mean.re, mc.mean.im, mc.std_error, exact.re, exact.im, sig]);
    }
    out.tables.push(table);

    let t = Instant::now();
    let zero = TestFunctionGrid::constant(domain.clone(), 17, 0.0)?;
    let l0 = characteristic_functional_mc(&ens, &zero, samples.min(10_000))?;
    let c0 = poisson_closed_form(&ens, &zero)?;
    let one = Complex64::new(1.0, 0.0);
    out.push(t, CheckRecord::bound("functional-at-zero", "L(0) = 1", (l0.mean - one).norm().max((c0 - one).norm()), 0.0));

    let bump = TestFunctionGrid::from_fn(domain.clone(), 1025, |x| (-((x[0] - 0.5 * l) / (0.2 * l)).powi(2)).exp())?;
    let mut moments = Table::new("poisson-moments", &["order", "mc", "std_error", "exact", "sigmas"]);
    for n in 1..=4 {
        let t = Instant::now();
        let e = ens.with_seed(c.seed.wrapping_add(100 + n as u64));
        let exact = factorial_moment_closed_form(&e, &bump, n)?;
        let mc = normal_ordered_moment_mc(&e, &bump, n, samples)?;
        let sig = mc.deviation_sigmas(Complex64::new(exact, 0.0));
        out.push(t, CheckRecord::bound(format!("factorial-moment-{n}"), "normal-ordered moment equals (rho int f)^n", sig, 3.0));
        moments.rows.push(vec![n as f64, mc.mean.re, mc.std_error, exact, sig]);
    }
    out.tables.push(moments);

    let t = Instant::now();
    let fs: Vec<TestFunctionGrid> = [0.1, 0.3, 0.45, 0.7, 0.9]
        .iter()
        .map(|&a| TestFunctionGrid::from_fn(domain.clone(), 513, |x| 2.0 * (-((x[0] - a * l) / (0.07 * l)).powi(2)).exp()))
        .collect::<std::result::Result<_, _>>()?;
    let gram = positive_definiteness_check(&mut |f| Ok((poisson_closed_form(&ens, f)?, 0.0)), &fs)?;
    out.push(t, CheckRecord::bound("gram-positive", "L(f_k - f_j) is positive semi-definite", (-gram.min_eigenvalue).max(0.0), 1e-9));
    let mut eig = Table::new("poisson-gram-eigenvalues", &["index", "eigenvalue"]);
    eig.rows = gram.eigenvalues.iter().enumerate().map(|(i, v)| vec![i as f64, *v]).collect();
    out.tables.push(eig);
    out.notes.push(format!("finite box [0, {l}]; every test function is sampled on that box"));
    Ok(out)
}

/// Builds the model of a model suite on `n_sites` sites, for `spectrum`.
pub fn spectrum_model(c: &SuiteConfig, n_sites: usize) -> Result<ModelSpec> {
    let p = &c.params;
    let (kind, length, n) = match c.suite.as_str() {
        "oscillatory" => (ModelKind::Oscillatory { omega: p.omega.unwrap_or(1.0) }, c.length_or(20.0), c.particles_or(1)),
        "generalized-oscillatory" => {
            (ModelKind::GeneralizedOscillatory { omega_bar: p.omega_bar.unwrap_or(0.8) }, c.length_or(2.0 * PI), c.particles_or(2))
        }
        "cms" => {
            let l = c.length_or(2.0 * PI);
            (ModelKind::Cms { beta: p.beta.unwrap_or(1.0), length: l }, l, c.particles_or(2))
        }
        "delta-gas" => (ModelKind::DeltaGas { beta: p.beta.unwrap_or(1.0) }, c.length_or(2.0 * PI), c.particles_or(2)),
        "coulomb" => (
            ModelKind::Coulomb { alpha: p.alpha.unwrap_or(0.5), epsilon: p.epsilon.unwrap_or(0.25) },
            c.length_or(10.0),
            c.particles_or(2),
        ),
        other => return Err(CliError::Config(format!("suite {other:?} has no model Hamiltonian for spectrum"))),
    };
    model_on(kind, length, n, n_sites)
}
