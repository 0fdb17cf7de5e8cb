//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use nblockade::manifold::{Manifold, ProductState};
use nblockade::{ModelParams, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generic draw with every rate non-zero.
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams {
        omega: rng.gen_range(0.1..20.0),
        g_ac: rng.gen_range(0.1..20.0),
        g_bd: rng.gen_range(0.1..20.0),
        delta: rng.gen_range(-20.0..20.0),
        delta_omega: rng.gen_range(-20.0..20.0),
        gamma_c: rng.gen_range(0.0..2.0),
        gamma_d: rng.gen_range(0.0..2.0),
        gamma_cav: rng.gen_range(0.0..2.0),
        beta: rng.gen_range(0.01..2.0),
        drive_offset: 0.0,
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn i() -> C64 {
    C64::i()
}

fn gc(p: &ModelParams) -> C64 {
    C64::new(p.gamma_c, p.delta)
}

fn gd(p: &ModelParams) -> C64 {
    C64::new(p.gamma_d, p.delta + p.delta_omega)
}

fn from_rows(rows: Vec<Vec<C64>>) -> DMatrix<C64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |r, k| rows[r][k])
}

/// One atom, one quantum, basis |a,1⟩, |b,0⟩, |c,0⟩.
pub fn h1_one_atom(p: &ModelParams) -> DMatrix<C64> {
    let z = c(0.0);
    from_rows(vec![
        vec![-i() * p.gamma_cav, z, c(p.g_ac)],
        vec![z, z, c(p.omega)],
        vec![c(p.g_ac), c(p.omega), -i() * gc(p)],
    ])
}

/// Two atoms, one quantum, basis |a,a,1⟩, |a,b,0⟩, |a,c,0⟩, |b,a,0⟩, |c,a,0⟩.
pub fn h1_two_atoms(p: &ModelParams) -> DMatrix<C64> {
    let z = c(0.0);
    let (g, w, gt) = (c(p.g_ac), c(p.omega), -i() * gc(p));
    from_rows(vec![
        vec![-i() * p.gamma_cav, z, g, z, g],
        vec![z, z, w, z, z],
        vec![g, w, gt, z, z],
        vec![z, z, z, z, w],
        vec![g, z, z, w, gt],
    ])
}

/// One atom, two quanta, basis |a,2⟩, |b,1⟩, |c,1⟩, |d,0⟩.
pub fn h2_one_atom(p: &ModelParams) -> DMatrix<C64> {
    let z = c(0.0);
    let s2g = c(2f64.sqrt() * p.g_ac);
    from_rows(vec![
        vec![-2.0 * i() * p.gamma_cav, z, s2g, z],
        vec![z, -i() * p.gamma_cav, c(p.omega), c(p.g_bd)],
        vec![s2g, c(p.omega), -i() * (p.gamma_cav + gc(p)), z],
        vec![z, c(p.g_bd), z, -i() * gd(p)],
    ])
}

/// Two atoms, two quanta, as printed: the |c,c,0⟩ diagonal reads −iΓ_t.
/// Basis |a,a,2⟩ |a,b,1⟩ |a,c,1⟩ |b,a,1⟩ |c,a,1⟩ |a,d,0⟩ |b,b,0⟩ |b,c,0⟩
/// |c,b,0⟩ |c,c,0⟩ |d,a,0⟩.
pub fn h2_two_atoms_printed(p: &ModelParams) -> DMatrix<C64> {
    let z = c(0.0);
    let s2g = c(2f64.sqrt() * p.g_ac);
    let (g, b, w) = (c(p.g_ac), c(p.g_bd), c(p.omega));
    let cav = -i() * p.gamma_cav;
    let gt = -i() * (p.gamma_cav + gc(p));
    let gcc = -i() * gc(p);
    let gdd = -i() * gd(p);
    from_rows(vec![
        vec![-2.0 * i() * p.gamma_cav, z, s2g, z, s2g, z, z, z, z, z, z],
        vec![z, cav, w, z, z, b, z, z, g, z, z],
        vec![s2g, w, gt, z, z, z, z, z, z, g, z],
        vec![z, z, z, cav, w, z, z, g, z, z, b],
        vec![s2g, z, z, w, gt, z, z, z, z, g, z],
        vec![z, b, z, z, z, gdd, z, z, z, z, z],
        vec![z, z, z, z, z, z, z, w, w, z, z],
        vec![z, z, z, g, z, z, w, gcc, z, w, z],
        vec![z, g, z, z, z, z, w, z, gcc, w, z],
        vec![z, z, g, z, g, z, z, w, w, gt, z],
        vec![z, z, z, b, z, z, z, z, z, z, gdd],
    ])
}

pub const CC0_INDEX: usize = 9;

/// Closed-form one-quantum eigenvalues for Γ_cav = 0, each repeated by its
/// multiplicity.
pub fn one_quantum_oracle(p: &ModelParams, n: usize) -> Vec<C64> {
    let g = gc(p);
    let branch = |k2: f64| {
        let root = (-g * g + 4.0 * k2).sqrt();
        [(-i() * g + root) / 2.0, (-i() * g - root) / 2.0]
    };
    let [p2, m2] = branch(p.omega * p.omega + n as f64 * p.g_ac * p.g_ac);
    let [p1, m1] = branch(p.omega * p.omega);
    let mut out = vec![p2, c(0.0), m2];
    for _ in 1..n {
        out.push(p1);
        out.push(m1);
    }
    out
}

/// Largest |a − b| / max(|b|, scale) over a greedy nearest-neighbour matching
/// of two multisets of equal size.
pub fn multiset_error(numeric: &[C64], oracle: &[C64], scale: f64) -> f64 {
    assert_eq!(numeric.len(), oracle.len(), "multiset sizes differ");
    let mut used = vec![false; numeric.len()];
    let mut worst: f64 = 0.0;
    for o in oracle {
        let (k, d) = numeric
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, e)| (k, (e - o).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d / o.norm().max(scale));
    }
    worst
}

/// Dense â from the `upper` manifold to the `lower` one, built directly from
/// the bare states.
pub fn annihilation_dense(upper: &Manifold, lower: &Manifold) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(lower.len(), upper.len());
    for (j, u) in upper.basis().iter().enumerate() {
        if u.photons == 0 {
            continue;
        }
        let target = ProductState::new(u.atoms.clone(), u.photons - 1);
        for (r, l) in lower.basis().iter().enumerate() {
            if *l == target {
                a[(r, j)] = c((u.photons as f64).sqrt());
            }
        }
    }
    a
}

pub fn inner(a: &DVector<C64>, b: &DVector<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn rho(omega_e: f64, delta_e: f64, gamma_u: f64) -> f64 {
    if omega_e == 0.0 {
        0.0
    } else {
        omega_e * omega_e / (2.0 * omega_e * omega_e + delta_e * delta_e + gamma_u * gamma_u)
    }
}
