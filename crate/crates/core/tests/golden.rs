mod common;

use nalgebra::DMatrix;
use nblockade::hamiltonian::{build_block, diagonal_element};
use nblockade::manifold::Manifold;
use nblockade::{ModelParams, C64};

use common::*;

fn block(p: &ModelParams, n: usize, q: usize) -> DMatrix<C64> {
    build_block(p, &Manifold::new(n, q).unwrap()).matrix().clone()
}

fn assert_exact(got: &DMatrix<C64>, want: &DMatrix<C64>, skip: &[(usize, usize)], label: &str) {
    assert_eq!(got.shape(), want.shape(), "{label}: shape");
    for r in 0..want.nrows() {
        for k in 0..want.ncols() {
            if !skip.contains(&(r, k)) {
                assert_eq!(got[(r, k)], want[(r, k)], "{label}: entry ({r}, {k})");
            }
        }
    }
}

#[test]
fn one_atom_one_quantum() {
    let mut rng = rng(11);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        assert_exact(&block(&p, 1, 1), &h1_one_atom(&p), &[], "H1(1)");
    }
}

#[test]
fn two_atoms_one_quantum() {
    let mut rng = rng(12);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        assert_exact(&block(&p, 2, 1), &h1_two_atoms(&p), &[], "H1(2)");
    }
}

#[test]
fn one_atom_two_quanta() {
    let mut rng = rng(13);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        assert_exact(&block(&p, 1, 2), &h2_one_atom(&p), &[], "H2(1)");
    }
}

#[test]
fn two_atoms_two_quanta_except_cc0() {
    let mut rng = rng(14);
    let cc0 = (CC0_INDEX, CC0_INDEX);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let got = block(&p, 2, 2);
        assert_exact(&got, &h2_two_atoms_printed(&p), &[cc0], "H2(2)");
        let two_in_c = -2.0 * C64::i() * C64::new(p.gamma_c, p.delta);
        assert!((got[cc0] - two_in_c).norm() <= 1e-15 * two_in_c.norm().max(1.0));
        assert_eq!(Manifold::new(2, 2).unwrap().basis()[CC0_INDEX].to_string(), "|c,c,0⟩");
    }
}

#[test]
fn blocks_are_symmetric_with_generated_diagonal() {
    let mut rng = rng(15);
    for n in 1..=4 {
        for q in 0..=2 {
            let p = random_params(&mut rng);
            let m = Manifold::new(n, q).unwrap();
            let h = build_block(&p, &m).matrix().clone();
            assert_eq!(h, h.transpose(), "N={n} q={q}");
            let diag: C64 = m.basis().iter().map(|s| diagonal_element(&p, s)).sum();
            assert_eq!(h.trace(), diag, "N={n} q={q}");
        }
    }
}
