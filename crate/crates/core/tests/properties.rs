use proptest::prelude::*;
use rand::Rng;

use qfactor::factor::{coupled_block, factor_block};
use qfactor::linalg::{
    block_positivity_witness, hermitian_eig, operator_norm, psd_check, svd, ComplexMatrix,
};
use qfactor::verify::{
    gaussian_matrix, hermitian_with_spectrum, random_psd_contraction, random_quadratic, random_unitary,
    random_unitary_with, seeded_rng, verify_certificate,
};
use qfactor::{
    assemble_from_canonical, canonicalize, detect_quadratic, factor_2x2, factor_quadratic, feasibility_bound, Error,
};

const TOL: f64 = 1e-9;

fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    gaussian_matrix(n, n, &mut rng).hermitian_part()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_decomposition_residuals(n in 1usize..=16, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let e = hermitian_eig(&h, TOL).unwrap();
        let w = &e.vectors;
        let gram = &w.adjoint() * w;
        prop_assert!(gram.distance(&ComplexMatrix::identity(n)) <= 1e-10);
        prop_assert!(e.assemble(&e.eigenvalues).distance(&h) <= 1e-9 * h.frobenius_norm());
        prop_assert!(e.eigenvalues.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn svd_reassembles(rows in 1usize..=16, cols in 1usize..=16, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let x = gaussian_matrix(rows, cols, &mut rng);
        let s = svd(&x).unwrap();
        prop_assert!(s.reconstruct().distance(&x) <= 1e-9 * x.frobenius_norm());
        prop_assert!(s.singular_values.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn operator_norm_is_unitarily_invariant(n in 1usize..=10, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = gaussian_matrix(n, n, &mut rng);
        let u = random_unitary_with(n, &mut rng);
        let v = random_unitary_with(n, &mut rng);
        let moved = &(&u * &a) * &v;
        prop_assert!((operator_norm(&moved).unwrap() - operator_norm(&a).unwrap()).abs() <= 1e-10 * operator_norm(&a).unwrap().max(1.0));
    }

    #[test]
    fn gram_matrices_are_psd(rows in 1usize..=12, cols in 1usize..=12, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let m = gaussian_matrix(rows, cols, &mut rng);
        prop_assert!(psd_check(&(&m.adjoint() * &m), TOL).unwrap());
    }

    #[test]
    fn detection_is_unitarily_invariant(
        d1 in 0usize..4, d2 in 0usize..4, r in 1usize..4,
        a in 0.0f64..1.0, b in 0.0f64..1.0, seed in any::<u64>(),
    ) {
        prop_assume!((a - b).abs() > 0.05);
        let p: Vec<f64> = (0..r).map(|k| 0.1 + 0.2 * k as f64).collect();
        let t = random_quadratic(d1, d2, r, a, b, &p, seed).unwrap();
        let u = random_unitary(t.rows(), seed ^ 0x5555);
        let moved = t.conjugate_by(&u).unwrap();
        let q1 = detect_quadratic(&t, TOL).unwrap();
        let q2 = detect_quadratic(&moved, TOL).unwrap();
        prop_assert!((q1.a - q2.a).norm() <= 1e-9 && (q1.b - q2.b).norm() <= 1e-9);
    }

    #[test]
    fn sign_convention(a in 0.0f64..=1.0, b in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
        let z = frac * feasibility_bound(a, b).unwrap();
        let f = factor_2x2(a, b, z, TOL).unwrap();
        if a <= b {
            prop_assert!(f.a_entries[1] >= 0.0 && f.b_entries[1] <= 0.0, "{f:?}");
        } else {
            prop_assert!(f.a_entries[1] <= 0.0 && f.b_entries[1] >= 0.0, "{f:?}");
        }
        prop_assert!(f.residual(a, b, z) <= 1e-10);
    }

    #[test]
    fn lifting_matches_scalar_factors(
        a in 0.0f64..=1.0, b in 0.0f64..=1.0,
        fracs in prop::collection::vec(0.0f64..=1.0, 1..6),
    ) {
        let bound = feasibility_bound(a, b).unwrap();
        let z: Vec<f64> = fracs.iter().map(|f| f * bound).collect();
        let r = z.len();
        let lifted = factor_block(a, b, &ComplexMatrix::from_diag(&z), TOL).unwrap();
        for (k, &zk) in z.iter().enumerate() {
            let s = factor_2x2(a, b, zk, TOL).unwrap();
            let idx = [k, r + k];
            let entries = |e: [f64; 3]| [e[0], e[1], e[1], e[2]];
            for (i, &ri) in idx.iter().enumerate() {
                for (j, &cj) in idx.iter().enumerate() {
                    prop_assert!((lifted.a[(ri, cj)].re - entries(s.a_entries)[2 * i + j]).abs() <= 1e-12);
                    prop_assert!((lifted.b[(ri, cj)].re - entries(s.b_entries)[2 * i + j]).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn lifting_commutes_with_unitaries(a in 0.0f64..=1.0, b in 0.0f64..=1.0, r in 1usize..6, seed in any::<u64>()) {
        let bound = feasibility_bound(a, b).unwrap();
        let mut rng = seeded_rng(seed);
        let spectrum: Vec<f64> = (0..r).map(|_| rng.gen::<f64>() * bound).collect();
        let diag = ComplexMatrix::from_diag(&spectrum);
        let w = random_unitary_with(r, &mut rng);
        let rotated = diag.conjugate_by(&w).unwrap().hermitian_part();
        let f1 = factor_block(a, b, &diag, TOL).unwrap();
        let f2 = factor_block(a, b, &rotated, TOL).unwrap();
        prop_assert!(f1.report.product_residual <= 1e-9 && f2.report.product_residual <= 1e-9);
        // (W ⊕ W) carries one factorization onto the other.
        let ww = ComplexMatrix::direct_sum(&[&w, &w]);
        let moved_a = f1.a.conjugate_by(&ww).unwrap();
        let moved_b = f1.b.conjugate_by(&ww).unwrap();
        let check = verify_certificate(&coupled_block(a, b, &rotated), &moved_a, &moved_b, TOL).unwrap();
        prop_assert!(check.pass && check.product_residual <= 1e-9);
    }

    #[test]
    fn certificate_is_unitarily_invariant(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_psd_contraction(n, &mut rng);
        let b = random_psd_contraction(n, &mut rng);
        let t = &a * &b;
        let u = random_unitary_with(n, &mut rng);
        let conj = |m: &ComplexMatrix| m.conjugate_by(&u).unwrap();
        let r1 = verify_certificate(&t, &a, &b, TOL).unwrap();
        let r2 = verify_certificate(&conj(&t), &conj(&a).hermitian_part(), &conj(&b).hermitian_part(), TOL).unwrap();
        prop_assert_eq!(r1.pass, r2.pass);
        prop_assert!((r1.product_residual - r2.product_residual).abs() <= 1e-10);
    }
}

#[test]
fn witness_agrees_with_block_positivity() {
    let mut rng = seeded_rng(11);
    let mut agreements = 0;
    for k in 0..400 {
        let n1 = rng.gen_range(1..=4);
        let n2 = rng.gen_range(1..=4);
        let n = n1 + n2;
        let rank = if k % 4 == 0 { rng.gen_range(1..=n) } else { n };
        let m = gaussian_matrix(rank, n, &mut rng);
        let mut h = &m.adjoint() * &m;
        if k >= 200 {
            // Inflate the off-diagonal block until the assembly is indefinite.
            let off = h.block(0, n1, n1, n2).scale_real(3.0);
            h.set_block(0, n1, &off);
            h.set_block(n1, 0, &off.adjoint());
            if psd_check(&h, TOL).unwrap() {
                continue;
            }
        }
        let psd = psd_check(&h, TOL).unwrap();
        let witness = block_positivity_witness(&h.block(0, 0, n1, n1), &h.block(0, n1, n1, n2), &h.block(n1, n1, n2, n2), TOL);
        assert_eq!(psd, witness.is_ok(), "instance {k}: psd {psd}, witness {witness:?}");
        if let Ok(d) = witness {
            assert!(operator_norm(&d).unwrap() <= 1.0 + TOL);
        }
        agreements += 1;
    }
    assert!(agreements >= 350, "only {agreements} usable instances");
}

#[test]
fn canonical_round_trip_on_random_quadratics() {
    let mut rng = seeded_rng(12);
    for k in 0..500u64 {
        let r = rng.gen_range(0..=6usize);
        let d1 = rng.gen_range(0..=(24 - 2 * r) / 2);
        let d2 = rng.gen_range(0..=(24 - 2 * r - d1));
        if d1 + d2 + 2 * r == 0 {
            continue;
        }
        let a = rng.gen_range(-1.0..2.0);
        let b = if rng.gen_range(0..10) == 0 { a } else { rng.gen_range(-1.0..2.0) };
        let mut p: Vec<f64> = (0..r).map(|_| rng.gen_range(0.01..2.0)).collect();
        let t = random_quadratic(d1, d2, r, a, b, &p, k).unwrap();
        let q = detect_quadratic(&t, TOL).unwrap();
        let form = canonicalize(&t, &q, TOL).unwrap_or_else(|e| panic!("instance {k}: {e}"));
        let scale = t.frobenius_norm();
        assert!(assemble_from_canonical(&form).distance(&t) <= 1e-9 * scale, "instance {k}");
        // Singular values of the coupling are unitarily invariant.
        p.sort_by(|x, y| y.total_cmp(x));
        assert_eq!(form.r, r, "instance {k}: {form:?}");
        for (got, want) in form.p_values.iter().zip(&p) {
            assert!((got - want).abs() <= 1e-9, "instance {k}");
        }
    }
}

#[test]
fn nilpotent_shift_is_canonicalized() {
    for (seed, r) in [(1u64, 1usize), (2, 3), (3, 5)] {
        let p: Vec<f64> = (0..r).map(|k| 0.2 + 0.1 * k as f64).collect();
        let t = random_quadratic(2, 1, r, 0.4, 0.4, &p, seed).unwrap();
        let q = detect_quadratic(&t, TOL).unwrap();
        assert!((q.a - q.b).norm() <= 1e-6);
        let form = canonicalize(&t, &q, TOL).unwrap();
        assert_eq!(form.r, r);
        // a = b leaves no room for coupling.
        assert!(matches!(factor_quadratic(&t, TOL), Err(Error::Infeasible(_))));
    }
}

#[test]
fn boundary_grid_is_exact() {
    for i in 0..=10 {
        for j in 0..=10 {
            let (a, b) = (i as f64 / 10.0, j as f64 / 10.0);
            let bound = feasibility_bound(a, b).unwrap();
            let f = factor_2x2(a, b, bound, TOL).unwrap();
            assert!(f.residual(a, b, bound) <= 1e-10, "({a}, {b})");
            let over = bound * (1.0 + 1e-6) + 1e-9 + 1e-15;
            let rejected = factor_2x2(a, b, over, TOL);
            assert!(matches!(rejected, Err(Error::Infeasible(_))) || bound * 1e-6 <= 0.0 && over <= bound + TOL, "({a}, {b})");
        }
    }
}

#[test]
fn degenerate_parameters_force_infeasibility() {
    for (a, b) in [(0.3, 0.3), (0.0, 1.0), (0.6, 1.0), (1.0, 0.2)] {
        assert!(matches!(factor_2x2(a, b, 1e-6, TOL), Err(Error::Infeasible(_))), "({a}, {b})");
    }
}

#[test]
fn factors_depend_continuously_on_coupling() {
    let h = 1e-6;
    for (a, b) in [(0.1, 0.9), (0.36, 0.64), (0.05, 0.3)] {
        let bound = feasibility_bound(a, b).unwrap();
        let steps = (bound / h).floor() as usize;
        let mut prev = factor_2x2(a, b, 0.0, TOL).unwrap();
        let mut worst = 0.0f64;
        for k in 1..=steps {
            let cur = factor_2x2(a, b, k as f64 * h, TOL).unwrap();
            for (x, y) in prev.a_entries.iter().chain(&prev.b_entries).zip(cur.a_entries.iter().chain(&cur.b_entries)) {
                worst = worst.max((x - y).abs());
            }
            prev = cur;
        }
        assert!(worst <= 100.0 * h.sqrt(), "({a}, {b}): jump {worst:.3e}");
    }
}

#[test]
fn spectrum_of_hermitian_instances() {
    let mut rng = seeded_rng(13);
    let spectrum = [0.0, 0.25, 0.5, 1.0];
    let h = hermitian_with_spectrum(&spectrum, &mut rng);
    let e = hermitian_eig(&h, TOL).unwrap();
    for (got, want) in e.eigenvalues.iter().zip(spectrum) {
        assert!((got - want).abs() <= 1e-12);
    }
}
