//! One line per acceptance criterion. Every tolerance is pinned here; the
//! process exits nonzero when any criterion fails.

use std::error::Error;
use std::f64::consts::PI;
use std::process::ExitCode;

use current_algebra_checks::check_normal_ordering;
use factorized_operators::{
    check_coulomb_regularization, check_equivalence, check_hierarchy_commutation, coulomb_s, eigensolve,
    factorized_hamiltonian, groundstate_check, hhat_matrix, hierarchy_matrix, model_hamiltonian,
    separation_convergence, FactorSpec, KernelSpec, ModelKind, ModelSpec,
};
use fock_lattice::{
    build_sector, density_matrix, field_annihilation, field_creation, kinetic_matrix, ladder_annihilation,
    number_operator, permanent, permanent_naive, symmetrized_inner, symmetrized_inner_bruteforce, FieldSet,
    FockSector, LatticeGrid, SparseOperator, C64,
};
use functional_measure::{
    characteristic_functional_mc, factorial_moment_closed_form, normal_ordered_moment_mc, poisson_closed_form,
    positive_definiteness_check, reference_functions, BoxDomain, PoissonEnsemble, TestFunctionGrid,
};
use jastrow_analytic::{
    cms_energy_per_length, dunkl_apply, energy_statistics, groundstate_energy, local_energy, rational_energy_density,
    JastrowModel,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verification_acceptance::{detail_lines, Checks, Scoreboard};

type Res = Result<(), Box<dyn Error>>;

const SEED: u64 = 20_240_917;
const EXACT: f64 = 1e-12;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn model(kind: ModelKind, length: f64, n_particles: usize, n_sites: usize) -> Result<ModelSpec, Box<dyn Error>> {
    Ok(ModelSpec::new(kind, LatticeGrid::with_length(n_sites, length)?, n_particles)?)
}

fn all_kernels(grid: &LatticeGrid) -> Vec<KernelSpec> {
    vec![
        KernelSpec::Cotangent { beta: 2.0, length: grid.length() },
        KernelSpec::heaviside_on(grid, 1.0),
        KernelSpec::CoulombS { alpha: 0.5, epsilon: 0.25 },
        KernelSpec::LinearOmega { omega_bar: 0.8 },
    ]
}

fn field_commutator_residual(s: &FockSector) -> Res2 {
    let up = s.with_particles(s.particle_count() + 1)?;
    let dx = s.grid().spacing();
    let n = s.n_sites();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let comm = field_annihilation(&up, i)?
                .matmul(&field_creation(&up, j)?)
                .add_scaled(&field_creation(s, j)?.matmul(&field_annihilation(s, i)?), re(-1.0));
            let expect = if i == j { 1.0 / dx } else { 0.0 };
            worst = worst.max(comm.add_scaled(&SparseOperator::identity(s.dim()), re(-expect)).max_abs());
        }
    }
    Ok(worst)
}

type Res2 = Result<f64, Box<dyn Error>>;

fn ladder_residual(s: &FockSector) -> Res2 {
    let up = s.with_particles(s.particle_count() + 1)?;
    let n = s.n_sites();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = ladder_annihilation(&up, i)?.matmul(&ladder_annihilation(&up, j)?.adjoint());
            let b = ladder_annihilation(s, j)?.adjoint().matmul(&ladder_annihilation(s, i)?);
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max(a.add_scaled(&b, re(-1.0)).add_scaled(&SparseOperator::identity(s.dim()), re(-expect)).max_abs());
        }
    }
    Ok(worst)
}

/// [rho(i), psi(j)] = -delta_ij psi(j) and [rho(i), psi^+(j)] = delta_ij psi^+(j).
fn density_ladder_residual(s: &FockSector) -> Res2 {
    let lower = s.with_particles(s.particle_count() - 1)?;
    let n = s.n_sites();
    let dx = s.grid().spacing();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let rho_up = density_matrix(s, i)?;
        let rho_low = density_matrix(&lower, i)?;
        for j in 0..n {
            let d = if i == j { 1.0 / dx } else { 0.0 };
            let psi = field_annihilation(s, j)?;
            let c = rho_low.matmul(&psi).add_scaled(&psi.matmul(&rho_up), re(-1.0));
            worst = worst.max(c.add_scaled(&psi, re(d)).max_abs());
            let cre = field_creation(s, j)?;
            let c = rho_up.matmul(&cre).add_scaled(&cre.matmul(&rho_low), re(-1.0));
            worst = worst.max(c.add_scaled(&cre, re(-d)).max_abs());
        }
    }
    Ok(worst)
}

fn criterion_1(c: &mut Checks) -> Res {
    let l = 2.0 * PI;
    let mut canon: f64 = 0.0;
    let mut ladder: f64 = 0.0;
    let mut dens_ladder: f64 = 0.0;
    let mut dens_comm: f64 = 0.0;
    let mut k_stencil: f64 = 0.0;
    for n in [4usize, 8] {
        let grid = LatticeGrid::with_length(n, l)?;
        for np in 0..=3 {
            let s = build_sector(grid, np)?;
            canon = canon.max(field_commutator_residual(&s)?);
            ladder = ladder.max(ladder_residual(&s)?);
            if np >= 1 {
                dens_ladder = dens_ladder.max(density_ladder_residual(&s)?);
            }
            let rho: Vec<SparseOperator> = (0..n).map(|i| density_matrix(&s, i)).collect::<Result<_, _>>()?;
            for a in &rho {
                for b in &rho {
                    dens_comm = dens_comm.max(a.commutator(b).max_abs());
                }
            }
            let f = FieldSet::new(&s)?;
            for i in 0..n {
                let k = f.k(i);
                k_stencil = k_stencil.max(k.add_scaled(&f.psi_dag_dpsi(i), re(-1.0)).max_abs() / k.max_abs().max(1.0));
            }
        }
    }
    c.bound("canonical-commutators", canon, EXACT);
    c.bound("ladder-commutators", ladder, EXACT);
    c.bound("density-ladder-relations", dens_ladder, EXACT);
    c.bound("density-commutativity", dens_comm, EXACT);
    c.bound("k-stencil-identity", k_stencil, EXACT);

    let s = build_sector(LatticeGrid::with_length(8, l)?, 3)?;
    let (mut pair, mut triple): (f64, f64) = (0.0, 0.0);
    for x in 0..8 {
        for y in 0..8 {
            for z in 0..8 {
                let r = check_normal_ordering(&s, (x, y, z))?;
                pair = pair.max(r.pair);
                triple = triple.max(r.triple);
            }
        }
    }
    c.bound("pair-normal-ordering", pair, EXACT);
    c.bound("triple-normal-ordering", triple, EXACT);

    let kinds = [
        ModelKind::Oscillatory { omega: 1.0 },
        ModelKind::GeneralizedOscillatory { omega_bar: 0.8 },
        ModelKind::Cms { beta: 2.0, length: l },
        ModelKind::DeltaGas { beta: 1.0 },
        ModelKind::Coulomb { alpha: 0.5, epsilon: 0.25 },
    ];
    let mut number: f64 = 0.0;
    for np in 1..=3 {
        for kind in kinds {
            let m = model(kind, l, np, 8)?;
            let num = number_operator(&m.sector()?);
            number = number.max(model_hamiltonian(&m)?.commutator(&num).max_abs());
            number = number.max(factorized_hamiltonian(&m)?.commutator(&num).max_abs());
        }
        let s = build_sector(LatticeGrid::with_length(8, l)?, np)?;
        let num = number_operator(&s);
        number = number.max(kinetic_matrix(&s)?.commutator(&num).max_abs());
        for kernel in all_kernels(s.grid()) {
            number = number.max(hhat_matrix(&s, &kernel)?.commutator(&num).max_abs());
            for p in 2..=4 {
                number = number.max(hierarchy_matrix(&s, &kernel, p)?.commutator(&num).max_abs());
            }
        }
    }
    c.bound("hamiltonians-commute-with-number", number, EXACT);
    Ok(())
}

fn criterion_2(c: &mut Checks) -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (n, beta, l) in [(2usize, 1.0, PI), (3, 2.0, 2.0 * PI), (5, 0.5, 1.0)] {
        let m = JastrowModel::cms(beta, l, n)?;
        let mut energies = Vec::with_capacity(100);
        let mut dunkl: f64 = 0.0;
        for _ in 0..100 {
            let x = m.random_configuration(&mut rng);
            energies.push(local_energy(&m, &x)?);
            for j in 0..n {
                dunkl = dunkl.max(dunkl_apply(&m, &x, j)?.abs());
            }
        }
        let stats = energy_statistics(&energies, groundstate_energy(&m))?;
        c.bound(format!("local-energy-n{n}-beta{beta}"), stats.max_deviation, 1e-9);
        c.bound(format!("dunkl-n{n}-beta{beta}"), dunkl, 1e-10);
    }
    Ok(())
}

fn criterion_3(c: &mut Checks) -> Res {
    let mut errors = Vec::new();
    for n in [32usize, 64, 128] {
        let m = model(ModelKind::Oscillatory { omega: 1.0 }, 20.0, 1, n)?;
        let ground = eigensolve(&model_hamiltonian(&m)?, 1)?.eigenvalues[0];
        errors.push((ground - 0.5).abs());
    }
    c.bound("ground-energy-error-n128", errors[2], 1e-2);
    c.decreasing("ground-energy-refinement", &errors);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let omega3 = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 1.5, 0.1, 0.0, 0.1, 0.7]);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for m in [JastrowModel::oscillator_1d(1.0, n)?, JastrowModel::oscillator(omega3.clone(), n)?] {
            let e = groundstate_energy(&m);
            for _ in 0..100 {
                let x = m.random_configuration(&mut rng);
                worst = worst.max((local_energy(&m, &x)? - e).abs() / e.abs());
            }
        }
    }
    c.bound("analytic-local-energy", worst, 1e-10);
    Ok(())
}

fn criterion_4(c: &mut Checks) -> Res {
    let ladder = [16usize, 32, 64];
    let l = 2.0 * PI;
    for kind in [
        ModelKind::GeneralizedOscillatory { omega_bar: 0.8 },
        ModelKind::DeltaGas { beta: 1.0 },
        ModelKind::Cms { beta: 2.0, length: l },
    ] {
        let r = check_equivalence(&model(kind, l, 2, ladder[0])?, &ladder)?;
        c.at_least(format!("{}-order", kind.name()), r.weak.fitted_order, 1.0);
        c.decreasing(format!("{}-residuals", kind.name()), &r.weak.residuals);
    }
    let r = check_equivalence(&model(ModelKind::GeneralizedOscillatory { omega_bar: 0.0 }, l, 2, ladder[0])?, &ladder)?;
    let worst = r.weak.residuals.iter().chain(&r.entrywise.residuals).fold(0.0, |a: f64, &b| a.max(b));
    c.flag("uncoupled-oscillator-exact", worst == 0.0, format!("largest residual {worst:e} == 0"));
    Ok(())
}

fn criterion_5(c: &mut Checks) -> Res {
    let l = 6.0;
    let beta = 1.0;
    let spec_for = |g: &LatticeGrid| FactorSpec::from_kernel(KernelSpec::heaviside_on(g, beta));
    let grid = LatticeGrid::with_length(6, l)?;
    let sector = build_sector(grid, 3)?;
    c.flag("sector-dimension", sector.dim() == 56, format!("dim {} == 56", sector.dim()));
    let r = check_hierarchy_commutation(&sector, &spec_for(&grid), &[1, 2, 3])?;
    c.bound("global-commutators", r.worst_global(), 1e-9);
    c.bound("local-commutators-beyond-2dx", r.worst_local_beyond(2), 1e-10);
    let adj = separation_convergence(l, 3, &[6, 8, 12], 1, &spec_for)?;
    c.decreasing("adjacent-refinement", &adj.residuals);
    Ok(())
}

fn criterion_6(c: &mut Checks) -> Res {
    let grid = LatticeGrid::with_length(12, 2.0 * PI)?;
    let mut specs: Vec<(String, FactorSpec)> =
        all_kernels(&grid).into_iter().map(|k| (k.name().to_string(), FactorSpec::from_kernel(k))).collect();
    specs.push(("oscillator".into(), FactorSpec::oscillator(1.0)));
    for np in 1..=3 {
        let s = build_sector(grid, np)?;
        for (name, spec) in &specs {
            let g = groundstate_check(&s, spec)?;
            c.bound(format!("{name}-n{np}-positivity"), -g.min_eigenvalue, 1e-10 * g.norm);
            c.bound(format!("{name}-n{np}-annihilation"), g.max_local_defect, 1e-5 * g.norm.sqrt());
        }
    }
    Ok(())
}

fn criterion_7(c: &mut Checks) -> Res {
    let h = 1e-6;
    let points = [0.3, 0.7, 1.3, 2.9, -0.5, -1.7];
    for eps in [0.05, 0.1, 0.2] {
        let worst = points
            .iter()
            .map(|&x: &f64| ((coulomb_s(x + h, eps) - coulomb_s(x - h, eps)) / (2.0 * h) - x.abs().powf(eps - 1.0)).abs())
            .fold(0.0, f64::max);
        c.bound(format!("derivative-eps{eps}"), worst, 1e-6);
    }
    let m = model(ModelKind::Coulomb { alpha: 0.5, epsilon: 0.5 }, 10.0, 2, 64)?;
    let r = check_coulomb_regularization(&m, &[0.5, 0.25, 0.125, 0.0625])?;
    c.decreasing("equivalence-residual-as-eps-shrinks", &r.weak);
    Ok(())
}

fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn criterion_8(c: &mut Checks) -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 1 + trial % 6;
        let m = DMatrix::from_fn(n, n, |_, _| random_complex(&mut rng));
        let fast = permanent(&m)?;
        let naive = permanent_naive(&m)?;
        worst = worst.max((fast - naive).norm() / naive.norm().max(f64::MIN_POSITIVE));
    }
    c.bound("ryser-vs-naive", worst, 1e-12);

    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for _ in 0..20 {
            let family = |rng: &mut ChaCha8Rng| (0..n).map(|_| (0..4).map(|_| random_complex(rng)).collect()).collect();
            let alphas: Vec<Vec<C64>> = family(&mut rng);
            let betas: Vec<Vec<C64>> = family(&mut rng);
            let fast = symmetrized_inner(&alphas, &betas)?;
            let brute = symmetrized_inner_bruteforce(&alphas, &betas)?;
            worst = worst.max((fast - brute).norm() / brute.norm().max(1.0));
        }
    }
    c.bound("symmetrized-inner-vs-permutation-sum", worst, 1e-12);
    Ok(())
}

fn criterion_9(c: &mut Checks) -> Res {
    let l = 2.0;
    let samples = 100_000;
    let domain = BoxDomain::interval(0.0, l)?;
    let ens = PoissonEnsemble::new(1.5, domain.clone(), SEED)?;
    let family = reference_functions(&domain, 2049)?;
    c.flag("five-reference-functions", family.len() == 5, format!("{} functions", family.len()));
    for (k, (name, f)) in family.iter().enumerate() {
        let e = ens.with_seed(SEED + k as u64);
        let mc = characteristic_functional_mc(&e, f, samples)?;
        c.bound(format!("functional-{name}-sigmas"), mc.deviation_sigmas(poisson_closed_form(&e, f)?), 3.0);
    }

    let zero = TestFunctionGrid::constant(domain.clone(), 17, 0.0)?;
    let one = C64::new(1.0, 0.0);
    let mc0 = characteristic_functional_mc(&ens, &zero, samples)?;
    let closed0 = poisson_closed_form(&ens, &zero)?;
    c.flag("functional-at-zero", mc0.mean == one && closed0 == one, format!("mc {} closed {}", mc0.mean, closed0));

    let bump = TestFunctionGrid::from_fn(domain.clone(), 1025, |x| (-((x[0] - 0.5 * l) / (0.2 * l)).powi(2)).exp())?;
    for n in 1..=4 {
        let e = ens.with_seed(SEED + 100 + n as u64);
        let exact = factorial_moment_closed_form(&e, &bump, n)?;
        let mc = normal_ordered_moment_mc(&e, &bump, n, samples)?;
        c.bound(format!("moment-{n}-sigmas"), mc.deviation_sigmas(C64::new(exact, 0.0)), 3.0);
    }

    let fs: Vec<TestFunctionGrid> = [0.1, 0.3, 0.45, 0.7, 0.9]
        .iter()
        .map(|&a| TestFunctionGrid::from_fn(domain.clone(), 513, |x| 2.0 * (-((x[0] - a * l) / (0.07 * l)).powi(2)).exp()))
        .collect::<Result<_, _>>()?;
    let gram = positive_definiteness_check(&mut |f| Ok((poisson_closed_form(&ens, f)?, 0.0)), &fs)?;
    c.bound("gram-min-eigenvalue", -gram.min_eigenvalue, 1e-9);
    Ok(())
}

fn criterion_10(c: &mut Checks) -> Res {
    let per_length = cms_energy_per_length(10_000, 1.0, 1.0)?;
    let target = rational_energy_density(1.0);
    c.bound("energy-density-relative-error", (per_length - target).abs() / target, 1e-4);
    Ok(())
}

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--verbose") || std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let mut board = Scoreboard::new();
    let criteria: [(u32, &'static str, fn(&mut Checks) -> Res); 10] = [
        (1, "exact lattice identities", criterion_1),
        (2, "inverse-sine-square local energy and Dunkl annihilation", criterion_2),
        (3, "harmonic trap ground energy", criterion_3),
        (4, "factorized equivalences", criterion_4),
        (5, "commuting hierarchy", criterion_5),
        (6, "positivity and ground-vector annihilation", criterion_6),
        (7, "Coulomb-type regularization", criterion_7),
        (8, "permanents and symmetrized inner products", criterion_8),
        (9, "Poisson generating functional", criterion_9),
        (10, "thermodynamic energy density", criterion_10),
    ];
    for (id, title, body) in criteria {
        let r = board.run(id, title, body);
        if verbose {
            for line in detail_lines(r) {
                println!("{line}");
            }
        }
    }
    println!("{}", board.summary());
    if board.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
