//! Bare product-state bases of fixed total excitation.
//!
//! A product state is a tuple of atomic levels together with a cavity photon
//! number. The Hamiltonian conserves `photons + Σ weight(level)`, so each value
//! of that sum labels an invariant block (a "manifold"). Basis order is photon
//! number descending, then the atom tuple lexicographically; this matches the
//! column order of the hand-written blocks for one and two atoms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    A,
    B,
    C,
    D,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 4] = [AtomLevel::A, AtomLevel::B, AtomLevel::C, AtomLevel::D];

    /// Number of cavity-photon-equivalent quanta stored in the level.
    pub fn excitation_weight(self) -> usize {
        match self {
            AtomLevel::A => 0,
            AtomLevel::B | AtomLevel::C => 1,
            AtomLevel::D => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            AtomLevel::A => 'a',
            AtomLevel::B => 'b',
            AtomLevel::C => 'c',
            AtomLevel::D => 'd',
        }
    }
}

pub fn excitation_weight(level: AtomLevel) -> usize {
    level.excitation_weight()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub atoms: Vec<AtomLevel>,
    pub photons: usize,
}

impl ProductState {
    pub fn new(atoms: Vec<AtomLevel>, photons: usize) -> Self {
        ProductState { atoms, photons }
    }

    /// All atoms in `a`, `photons` photons in the cavity.
    pub fn ground(n_atoms: usize, photons: usize) -> Self {
        ProductState {
            atoms: vec![AtomLevel::A; n_atoms],
            photons,
        }
    }

    pub fn total_quanta(&self) -> usize {
        self.photons + self.atoms.iter().map(|l| l.excitation_weight()).sum::<usize>()
    }

    /// Copy with atom `j` moved to `level` and the photon number replaced.
    pub(crate) fn with_atom(&self, j: usize, level: AtomLevel, photons: usize) -> Self {
        let mut atoms = self.atoms.clone();
        atoms[j] = level;
        ProductState { atoms, photons }
    }
}

pub fn total_quanta(state: &ProductState) -> usize {
    state.total_quanta()
}

impl Ord for ProductState {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .photons
            .cmp(&self.photons)
            .then_with(|| self.atoms.cmp(&other.atoms))
    }
}

impl PartialOrd for ProductState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for level in &self.atoms {
            write!(f, "{},", level.symbol())?;
        }
        write!(f, "{}⟩", self.photons)
    }
}

/// Upper bounds on basis growth. The basis size grows roughly like 4^N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ManifoldLimits {
    pub max_atoms: usize,
    pub max_quanta: usize,
}

impl Default for ManifoldLimits {
    fn default() -> Self {
        ManifoldLimits {
            max_atoms: 6,
            max_quanta: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Manifold {
    n_atoms: usize,
    quanta: usize,
    basis: Vec<ProductState>,
    index: HashMap<ProductState, usize>,
}

impl PartialEq for Manifold {
    fn eq(&self, other: &Self) -> bool {
        self.n_atoms == other.n_atoms && self.quanta == other.quanta && self.basis == other.basis
    }
}

impl Manifold {
    pub fn new(n_atoms: usize, quanta: usize) -> Result<Self> {
        Self::with_limits(n_atoms, quanta, ManifoldLimits::default())
    }

    pub fn with_limits(n_atoms: usize, quanta: usize, limits: ManifoldLimits) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::NoAtoms);
        }
        if n_atoms > limits.max_atoms || quanta > limits.max_quanta {
            return Err(Error::ManifoldTooLarge {
                n_atoms,
                quanta,
                max_atoms: limits.max_atoms,
                max_quanta: limits.max_quanta,
            });
        }

        let mut basis = Vec::new();
        let mut atoms = vec![AtomLevel::A; n_atoms];
        // odometer over all 4^N atom tuples
        loop {
            let weight: usize = atoms.iter().map(|l| l.excitation_weight()).sum();
            if weight <= quanta {
                basis.push(ProductState::new(atoms.clone(), quanta - weight));
            }
            let mut pos = n_atoms;
            loop {
                if pos == 0 {
                    basis.sort();
                    let index = basis.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
                    return Ok(Manifold {
                        n_atoms,
                        quanta,
                        basis,
                        index,
                    });
                }
                pos -= 1;
                match atoms[pos] {
                    AtomLevel::D => atoms[pos] = AtomLevel::A,
                    level => {
                        atoms[pos] = AtomLevel::ALL[level as usize + 1];
                        break;
                    }
                }
            }
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn quanta(&self) -> usize {
        self.quanta
    }

    pub fn basis(&self) -> &[ProductState] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, state: &ProductState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

pub fn build_manifold(n_atoms: usize, quanta: usize) -> Result<Manifold> {
    Manifold::new(n_atoms, quanta)
}

/// Sparse matrix of the photon annihilation operator from an upper manifold
/// (q + 1 quanta) into the lower one (q quanta). Rows index the lower basis,
/// columns the upper basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationMap {
    rows: usize,
    cols: usize,
    // (lower index, upper index, √n)
    entries: Vec<(usize, usize, f64)>,
}

impl AnnihilationMap {
    pub fn new(upper: &Manifold, lower: &Manifold) -> Result<Self> {
        if upper.n_atoms() != lower.n_atoms() {
            return Err(Error::ManifoldMismatch(format!(
                "atom counts differ ({} vs {})",
                upper.n_atoms(),
                lower.n_atoms()
            )));
        }
        if upper.quanta() != lower.quanta() + 1 {
            return Err(Error::ManifoldMismatch(format!(
                "upper has {} quanta, lower has {}",
                upper.quanta(),
                lower.quanta()
            )));
        }
        let mut entries = Vec::new();
        for (j, state) in upper.basis().iter().enumerate() {
            if state.photons == 0 {
                continue;
            }
            let lowered = ProductState::new(state.atoms.clone(), state.photons - 1);
            if let Some(i) = lower.index_of(&lowered) {
                entries.push((i, j, (state.photons as f64).sqrt()));
            }
        }
        Ok(AnnihilationMap {
            rows: lower.len(),
            cols: upper.len(),
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// ⟨lower i| â |upper j⟩
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries
            .iter()
            .find(|&&(r, c, _)| r == i && c == j)
            .map_or(0.0, |&(_, _, v)| v)
    }
}

pub fn annihilation_map(upper: &Manifold, lower: &Manifold) -> Result<AnnihilationMap> {
    AnnihilationMap::new(upper, lower)
}
