mod common;

use nalgebra::DVector;
use nblockade::blockade::{blockade_report, BlockadeModel};
use nblockade::eigen::eigenpairs;
use nblockade::hamiltonian::build_block;
use nblockade::manifold::Manifold;
use nblockade::spectra::{classify_active, diagonalize, DressedState, DEFAULT_ACTIVITY_THRESHOLD};
use nblockade::{ModelParams, C64};
use rand::Rng;

use common::*;

#[test]
fn one_quantum_eigenvalues_match_closed_form() {
    let mut rng = rng(21);
    for draw in 0..200 {
        let n = rng.gen_range(1..=4);
        let p = ModelParams {
            omega: rng.gen_range(0.1..20.0),
            g_ac: rng.gen_range(0.1..20.0),
            delta: rng.gen_range(-20.0..20.0),
            gamma_c: rng.gen_range(0.0..2.0),
            gamma_cav: 0.0,
            ..ModelParams::default()
        };
        let block = build_block(&p, &Manifold::new(n, 1).unwrap());
        let numeric: Vec<C64> = diagonalize(&block).unwrap().energies();
        let err = multiset_error(&numeric, &one_quantum_oracle(&p, n), block.frobenius_norm());
        assert!(err <= 1e-9, "draw {draw}: N={n} relative error {err:e}");
    }
}

#[test]
fn dark_state_has_no_excited_component() {
    let mut rng = rng(22);
    for _ in 0..50 {
        let p = ModelParams {
            omega: rng.gen_range(0.1..20.0),
            g_ac: rng.gen_range(0.1..20.0),
            delta: rng.gen_range(-20.0..20.0),
            gamma_c: rng.gen_range(0.0..2.0),
            ..ModelParams::default()
        };
        let spectrum = diagonalize(&build_block(&p, &Manifold::new(1, 1).unwrap())).unwrap();
        let dark = spectrum
            .states()
            .iter()
            .min_by(|a, b| a.energy.norm().total_cmp(&b.energy.norm()))
            .unwrap();
        let norm = p.omega.hypot(p.g_ac);
        let want = DVector::from_vec(vec![
            C64::new(p.omega / norm, 0.0),
            C64::new(-p.g_ac / norm, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let phase = inner(&dark.vector, &want);
        let aligned = &dark.vector * (phase / phase.norm());
        let err = (aligned - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-9, "{p:?}: component error {err:e}");
    }
}

#[test]
fn two_atoms_have_three_bright_one_quantum_states() {
    let mut rng = rng(23);
    let a_map =
        nblockade::manifold::annihilation_map(&Manifold::new(2, 1).unwrap(), &Manifold::new(2, 0).unwrap()).unwrap();
    for p in std::iter::once(ModelParams::ideal()).chain((0..20).map(|_| random_params(&mut rng))) {
        let spectrum = diagonalize(&build_block(&p, &Manifold::new(2, 1).unwrap())).unwrap();
        let flagged = classify_active(spectrum, &DressedState::ground(), &a_map, DEFAULT_ACTIVITY_THRESHOLD).unwrap();
        assert_eq!(flagged.states().iter().filter(|s| s.active).count(), 3, "{p:?}");
    }
}

/// ρ_exc^(1) and ρ_exc^(2) from raw eigenpairs and a dense â, enumerating
/// every transition.
fn brute_force(p: &ModelParams, n: usize) -> (f64, f64) {
    let m0 = Manifold::new(n, 0).unwrap();
    let m1 = Manifold::new(n, 1).unwrap();
    let m2 = Manifold::new(n, 2).unwrap();
    let a1 = annihilation_dense(&m1, &m0);
    let a2 = annihilation_dense(&m2, &m1);
    let ground = DVector::from_element(1, C64::new(1.0, 0.0));
    let unit = |v: DVector<C64>| {
        let n = v.norm();
        v / C64::new(n, 0.0)
    };
    let one: Vec<(C64, DVector<C64>)> = eigenpairs(build_block(p, &m1).matrix())
        .unwrap()
        .into_iter()
        .map(|(e, v)| (e, unit(v)))
        .collect();
    let rho1: Vec<f64> = one
        .iter()
        .map(|(e, v)| rho(p.beta * inner(&ground, &(&a1 * v)).norm(), e.re - p.drive_offset, -e.im))
        .collect();
    let best = rho1.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g1 = (0..one.len())
        .filter(|&k| rho1[k] >= best - 1e-12)
        .min_by(|&a, &b| one[a].0.re.abs().total_cmp(&one[b].0.re.abs()))
        .unwrap();
    let (e1, v1) = &one[g1];
    let rho2 = eigenpairs(build_block(p, &m2).matrix())
        .unwrap()
        .into_iter()
        .map(|(e, v)| {
            let v = unit(v);
            rho(
                p.beta * inner(v1, &(&a2 * &v)).norm(),
                e.re - e1.re - p.drive_offset,
                -e.im,
            )
        })
        .fold(0.0, f64::max);
    (best, rho2)
}

#[test]
fn blockade_metrics_match_brute_force() {
    let mut rng = rng(24);
    let mut points = vec![
        (ModelParams::ideal(), 1),
        (ModelParams::ideal().with_delta(-0.8).with_g(10.0), 2),
        (ModelParams::rubidium(), 3),
    ];
    for _ in 0..30 {
        let mut p = random_params(&mut rng);
        p.drive_offset = rng.gen_range(-5.0..5.0);
        points.push((p, rng.gen_range(1..=3)));
    }
    for (p, n) in points {
        let report = blockade_report(&p, n).unwrap();
        let (r1, r2) = brute_force(&p, n);
        assert!(
            (report.rho_exc_1 - r1).abs() <= 1e-10,
            "{p:?} N={n}: {} vs {r1}",
            report.rho_exc_1
        );
        assert!(
            (report.rho_exc_2 - r2).abs() <= 1e-10,
            "{p:?} N={n}: {} vs {r2}",
            report.rho_exc_2
        );
    }
}

#[test]
fn rubidium_point_values() {
    for (n, want) in [(1, 0.3099), (2, 0.3824), (3, 0.4148)] {
        let (rho1, _) = BlockadeModel::new(n)
            .unwrap()
            .rho_exc_1(&ModelParams::rubidium())
            .unwrap();
        assert!((rho1 - want).abs() <= 1e-3, "N={n}: {rho1}");
    }
}

#[test]
fn single_atom_blockade_improves_with_coupling() {
    let model = BlockadeModel::new(1).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..=99 {
        let g = 0.1 + 0.1 * k as f64;
        let r = model.evaluate(&ModelParams::ideal().with_g(g)).unwrap().rho_exc_2;
        assert!(r < last, "g={g}: {r} !< {last}");
        last = r;
    }
}

#[test]
fn blockade_is_a_resonance() {
    let model = BlockadeModel::new(1).unwrap();
    for g in [1.0, 5.0, 10.0] {
        let line: Vec<f64> = (0..=200)
            .map(|k| {
                let d = -10.0 + 0.1 * k as f64;
                model
                    .evaluate(&ModelParams::ideal().with_g(g).with_delta(d))
                    .unwrap()
                    .rho_exc_2
            })
            .collect();
        let min = line.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(line[0] > min && line[200] > min, "g={g}");
    }
}
