//! Dressed states: eigenpairs of a Hamiltonian block, sorted and phase-fixed,
//! plus optical-activity classification against a lower state.
//!
//! The blocks are complex-symmetric rather than Hermitian, so left and right
//! eigenvectors differ. Everything here uses right eigenvectors normalised in
//! the Euclidean norm together with the ordinary conjugate-linear inner
//! product.

use std::cmp::Ordering;

use nalgebra::DVector;

use crate::eigen;
use crate::error::{Error, Result};
use crate::hamiltonian::{BlockMatrix, ModelParams, C64};
use crate::manifold::{AnnihilationMap, Manifold};

/// Relative overlap below which a state counts as optically inactive.
pub const DEFAULT_ACTIVITY_THRESHOLD: f64 = 1e-6;

/// Degeneracy tolerance relative to ‖H‖_F.
pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DressedState {
    /// Real part: energy shift in the rotating frame. Negative imaginary part: width.
    pub energy: C64,
    pub vector: DVector<C64>,
    pub active: bool,
}

impl DressedState {
    /// The bare ground state |a,…,a,0⟩, which is alone in its manifold.
    pub fn ground() -> Self {
        DressedState {
            energy: C64::new(0.0, 0.0),
            vector: DVector::from_element(1, C64::new(1.0, 0.0)),
            active: true,
        }
    }

    pub fn shift(&self) -> f64 {
        self.energy.re
    }

    pub fn width(&self) -> f64 {
        -self.energy.im
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    manifold: Manifold,
    states: Vec<DressedState>,
    norm: f64,
}

impl Spectrum {
    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn states(&self) -> &[DressedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Frobenius norm of the block this spectrum came from.
    pub fn block_norm(&self) -> f64 {
        self.norm
    }

    pub fn energies(&self) -> Vec<C64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn default_degeneracy_tol(&self) -> f64 {
        DEFAULT_DEGENERACY_REL_TOL * self.norm
    }

    /// Smallest |Re E| over the manifold.
    pub fn min_abs_shift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.energy.re.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

fn energy_order(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}

/// Rotates `v` so that its largest-modulus component is real and positive.
fn fix_phase(v: &mut DVector<C64>) {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            pivot = i;
        }
    }
    if best > 0.0 {
        let phase = v[pivot] / C64::new(best, 0.0);
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
        v[pivot] = C64::new(v[pivot].re, 0.0);
    }
}

pub fn diagonalize(block: &BlockMatrix) -> Result<Spectrum> {
    let pairs = eigen::eigenpairs(block.matrix())?;
    let mut states: Vec<DressedState> = pairs
        .into_iter()
        .map(|(energy, mut vector)| {
            fix_phase(&mut vector);
            DressedState {
                energy,
                vector,
                active: false,
            }
        })
        .collect();
    states.sort_by(|a, b| energy_order(&a.energy, &b.energy));
    Ok(Spectrum {
        manifold: block.manifold().clone(),
        states,
        norm: block.frobenius_norm(),
    })
}

/// ⟨lower| â |upper⟩ with `a_map` taking the upper manifold to the lower one.
pub fn annihilation_overlap(lower: &DVector<C64>, a_map: &AnnihilationMap, upper: &DVector<C64>) -> Result<C64> {
    if lower.len() != a_map.rows() || upper.len() != a_map.cols() {
        return Err(Error::ManifoldMismatch(format!(
            "annihilation map is {}x{}, states have lengths {} and {}",
            a_map.rows(),
            a_map.cols(),
            lower.len(),
            upper.len()
        )));
    }
    Ok(a_map
        .entries()
        .iter()
        .map(|&(i, j, amp)| lower[i].conj() * upper[j] * amp)
        .sum())
}

/// Flags each state active when |⟨lower|â|state⟩| exceeds `threshold` times
/// the largest such overlap in the spectrum.
pub fn classify_active(
    mut spectrum: Spectrum,
    lower: &DressedState,
    a_map: &AnnihilationMap,
    threshold: f64,
) -> Result<Spectrum> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let overlaps = spectrum
        .states
        .iter()
        .map(|s| annihilation_overlap(&lower.vector, a_map, &s.vector).map(|z| z.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let max = overlaps.iter().copied().fold(0.0, f64::max);
    for (state, overlap) in spectrum.states.iter_mut().zip(overlaps) {
        state.active = max > 0.0 && overlap > threshold * max;
    }
    Ok(spectrum)
}

/// Coefficients of the zero-energy one-atom state on |a,1⟩ and |b,0⟩:
/// (Ω, −g_ac)/√(Ω² + g_ac²). It has no |c,0⟩ component.
pub fn dark_state_coefficients(params: &ModelParams) -> (f64, f64) {
    let norm = params.omega.hypot(params.g_ac);
    (params.omega / norm, -params.g_ac / norm)
}

/// Single-linkage grouping of eigenvalues closer than `tol`, returned as
/// (mean energy, multiplicity) in spectrum order.
pub fn degeneracy_groups(spectrum: &Spectrum, tol: f64) -> Vec<(C64, usize)> {
    let energies = spectrum.energies();
    let n = energies.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (energies[i] - energies[j]).norm() <= tol {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for (i, e) in energies.iter().enumerate() {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += e;
                g.2 += 1;
            }
            None => groups.push((r, *e, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect()
}
