use fock_lattice::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn grid(n: usize, dx: f64) -> LatticeGrid {
    LatticeGrid::new(n, dx).unwrap()
}

/// [psi_i, psi_j^+] acting on sector `s`: psi_i psi_j^+ - psi_j^+ psi_i.
fn field_commutator(s: &FockSector, i: usize, j: usize) -> SparseOperator {
    let up = s.with_particles(s.particle_count() + 1).unwrap();
    let a_i_up = field_annihilation(&up, i).unwrap();
    let c_j_up = field_creation(&up, j).unwrap();
    let a_i = field_annihilation(s, i).unwrap();
    let c_j = field_creation(s, j).unwrap();
    a_i_up.matmul(&c_j_up).add_scaled(&c_j.matmul(&a_i), re(-1.0))
}

#[test]
fn canonical_commutators_are_exact() {
    for (n, np, dx) in [(3usize, 1usize, 1.0), (4, 2, 0.5), (5, 3, 0.3)] {
        let s = build_sector(grid(n, dx), np).unwrap();
        for i in 0..n {
            for j in 0..n {
                let comm = field_commutator(&s, i, j);
                let expect = if i == j { 1.0 / dx } else { 0.0 };
                let diff = comm.add_scaled(&SparseOperator::identity(s.dim()), re(-expect));
                assert!(diff.max_abs() <= 1e-12, "n={n} N={np} i={i} j={j}: {}", diff.max_abs());
            }
        }
    }
}

#[test]
fn ladder_commutator_is_kronecker() {
    let s = build_sector(grid(4, 0.37), 2).unwrap();
    let up = s.with_particles(3).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let a = ladder_annihilation(&up, i).unwrap().matmul(&ladder_annihilation(&up, j).unwrap().adjoint());
            let b = ladder_annihilation(&s, j).unwrap().adjoint().matmul(&ladder_annihilation(&s, i).unwrap());
            let expect = if i == j { 1.0 } else { 0.0 };
            let diff = a.add_scaled(&b, re(-1.0)).add_scaled(&SparseOperator::identity(s.dim()), re(-expect));
            assert!(diff.max_abs() <= 1e-12);
        }
    }
}

#[test]
fn density_ladder_relations() {
    let dx = 0.4;
    let s = build_sector(grid(4, dx), 3).unwrap();
    let lower = s.with_particles(2).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let psi = field_annihilation(&s, j).unwrap();
            let rho_up = density_matrix(&s, i).unwrap();
            let rho_low = density_matrix(&lower, i).unwrap();
            let comm = rho_low.matmul(&psi).add_scaled(&psi.matmul(&rho_up), re(-1.0));
            let d = if i == j { 1.0 / dx } else { 0.0 };
            assert!(comm.add_scaled(&psi, re(d)).max_abs() <= 1e-12);

            let cre = field_creation(&s, j).unwrap();
            let comm = rho_up.matmul(&cre).add_scaled(&cre.matmul(&rho_low), re(-1.0));
            assert!(comm.add_scaled(&cre, re(-d)).max_abs() <= 1e-12);
        }
    }
}

#[test]
fn densities_commute() {
    let s = build_sector(grid(5, 0.2), 3).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let a = density_matrix(&s, i).unwrap();
            let b = density_matrix(&s, j).unwrap();
            assert_eq!(a.commutator(&b).max_abs(), 0.0);
        }
    }
}

#[test]
fn plane_wave_current_expectation() {
    let l = 2.0;
    let k_mode = 3.0;
    let k = 2.0 * std::f64::consts::PI * k_mode / l;
    let mut errors = Vec::new();
    for n in [16usize, 32, 64] {
        let g = LatticeGrid::with_length(n, l).unwrap();
        let s = build_sector(g, 1).unwrap();
        let dx = g.spacing();
        let mut v = vec![re(0.0); n];
        for j in 0..n {
            let mut occ = vec![0u8; n];
            occ[j] = 1;
            v[s.index_of(&occ).unwrap()] = C64::from_polar(1.0, k * g.coordinate(j));
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let fields = FieldSet::new(&s).unwrap();
        for i in 0..n {
            let e = fields.current(i).form(&v, &v) / norm;
            let oracle = (k * dx).sin() / dx / l;
            assert!((e.re - oracle).abs() < 1e-12 && e.im.abs() < 1e-12, "n={n} site {i}");
        }
        errors.push(((k * dx).sin() / dx / l - k / l).abs());
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2]);
}

#[test]
fn kinetic_spectrum_matches_laplacian_formula() {
    for (n, dx) in [(6usize, 1.0), (11, 0.2)] {
        let s = build_sector(grid(n, dx), 1).unwrap();
        let t = kinetic_matrix(&s).unwrap();
        let mut ev: Vec<f64> = t.to_dense().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut oracle: Vec<f64> = (0..n)
            .map(|k| (1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()) / (dx * dx))
            .collect();
        oracle.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(ev[0].abs() < 1e-12);
    }
}

#[test]
fn normal_ordering_identities() {
    let dx = 0.5;
    let s = build_sector(grid(4, dx), 3).unwrap();
    let rho: Vec<SparseOperator> = (0..4).map(|i| density_matrix(&s, i).unwrap()).collect();
    let delta = |a: usize, b: usize| if a == b { 1.0 / dx } else { 0.0 };
    for x in 0..4 {
        for y in 0..4 {
            let lhs = rho[x].matmul(&rho[y]);
            let rhs = normal_ordered_pair(&s, x, y).unwrap().add_scaled(&rho[y], re(delta(x, y)));
            assert!(lhs.add_scaled(&rhs, re(-1.0)).max_abs() <= 1e-12);
            for z in 0..4 {
                let lhs = rho[x].matmul(&rho[y]).matmul(&rho[z]);
                let rhs = normal_ordered_triple(&s, x, y, z)
                    .unwrap()
                    .add_scaled(&normal_ordered_pair(&s, x, y).unwrap(), re(delta(y, z)))
                    .add_scaled(&normal_ordered_pair(&s, y, z).unwrap(), re(delta(z, x)))
                    .add_scaled(&normal_ordered_pair(&s, z, x).unwrap(), re(delta(x, y)))
                    .add_scaled(&rho[x], re(delta(y, z) * delta(z, x)));
                assert!(lhs.add_scaled(&rhs, re(-1.0)).max_abs() <= 1e-12 * lhs.max_abs().max(1.0));
            }
        }
    }
}

#[test]
fn number_preserving_operators_commute_with_number() {
    let s = build_sector(grid(5, 0.3), 2).unwrap();
    let num = number_operator(&s);
    let f = FieldSet::new(&s).unwrap();
    let ops = [kinetic_matrix(&s).unwrap(), f.current(2), f.k(1)];
    for op in &ops {
        assert_eq!(op.commutator(&num).max_abs(), 0.0);
    }
    let vac = build_sector(grid(5, 0.3), 0).unwrap();
    assert_eq!(number_operator(&vac).max_abs(), 0.0);
}

fn tensor_symmetrize(vs: &[Vec<C64>]) -> Vec<C64> {
    let n = vs.len();
    let d = vs[0].len();
    let mut out = vec![re(0.0); d.pow(n as u32)];
    fock_lattice::permanent::for_each_permutation(n, |p| {
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rem = idx;
            let mut prod = re(1.0);
            for k in (0..n).rev() {
                prod *= vs[p[k]][rem % d];
                rem /= d;
            }
            *slot += prod;
        }
    });
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    out.iter().map(|z| z / fact.sqrt()).collect()
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ryser_matches_naive(n in 1usize..=6, seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36)) {
        let m = DMatrix::from_fn(n, n, |i, j| { let (a, b) = seed[i * 6 + j]; C64::new(a, b) });
        let r = permanent(&m).unwrap();
        let q = permanent_naive(&m).unwrap();
        prop_assert!((r - q).norm() <= 1e-12 * q.norm().max(1e-300) || (r - q).norm() < 1e-14);
    }

    #[test]
    fn symmetrized_inner_matches_tensor_oracle(n in 1usize..=4, a in complex_vec(12), b in complex_vec(12)) {
        let alphas: Vec<Vec<C64>> = (0..n).map(|i| a[i * 3..i * 3 + 3].to_vec()).collect();
        let betas: Vec<Vec<C64>> = (0..n).map(|i| b[i * 3..i * 3 + 3].to_vec()).collect();
        let ta = tensor_symmetrize(&alphas);
        let tb = tensor_symmetrize(&betas);
        let oracle: C64 = tb.iter().zip(&ta).map(|(x, y)| x.conj() * y).sum();
        let fast = symmetrized_inner(&alphas, &betas).unwrap();
        let brute = symmetrized_inner_bruteforce(&alphas, &betas).unwrap();
        prop_assert!((fast - oracle).norm() <= 1e-12 * oracle.norm().max(1.0));
        prop_assert!((brute - oracle).norm() <= 1e-12 * oracle.norm().max(1.0));
    }

    #[test]
    fn basis_rank_round_trip(n in 1usize..7, np in 0usize..5) {
        let s = build_sector(grid(n, 1.0), np).unwrap();
        prop_assert_eq!(s.dim() as u128, fock_lattice::sector::sector_dimension(n, np));
        for i in 0..s.dim() {
            prop_assert_eq!(s.index_of(s.occupation(i)), Some(i));
        }
    }

    #[test]
    fn density_sum_is_number(n in 2usize..6, np in 0usize..4, dx in 0.05f64..2.0) {
        let s = build_sector(grid(n, dx), np).unwrap();
        let mut acc = SparseOperator::zeros(s.dim(), s.dim());
        for i in 0..n {
            acc = acc.add_scaled(&density_matrix(&s, i).unwrap(), re(dx));
        }
        prop_assert!(acc.add_scaled(&number_operator(&s), re(-1.0)).max_abs() <= 1e-12);
    }

    #[test]
    fn k_stencil_identity_holds(n in 2usize..7, np in 0usize..4, dx in 0.05f64..2.0) {
        let s = build_sector(grid(n, dx), np).unwrap();
        let f = FieldSet::new(&s).unwrap();
        for i in 0..n {
            let d = f.k(i).add_scaled(&f.psi_dag_dpsi(i), re(-1.0)).max_abs();
            prop_assert!(d <= 1e-12 * f.k(i).max_abs().max(1.0));
            prop_assert_eq!(f.current(i).hermiticity_defect(), 0.0);
        }
    }
}
