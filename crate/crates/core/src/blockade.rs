//! Photon-blockade figures of merit from a closed two-state excitation model.
//!
//! Each drive-induced transition |L⟩ → |U⟩ between adjacent manifolds is
//! treated as an isolated, damped two-level system with effective Rabi
//! frequency Ω_e = β|⟨L|â|U⟩|, detuning Δ_e of the drive from the transition
//! and upper-state width Γ_U = −Im E_U. Its steady-state upper population is
//! Ω_e² / (2Ω_e² + Δ_e² + Γ_U²).
//!
//! `rho_exc_1` maximises over one-quantum states driven from the ground state;
//! the maximiser is |G₁⟩. `rho_exc_2` maximises over two-quanta states driven
//! from |G₁⟩. Good blockade means the first is near 0.5 and the second near 0.
//!
//! The drive frequency may be offset from the cavity by `drive_offset` (zero
//! for a resonantly driven cavity). This extends the two-state model in the
//! simplest way: the offset is subtracted from every transition energy. It is
//! used to drive a side resonance of the single-atom spectrum so that the
//! response depends on the atom number.

use crate::error::{Error, Result};
use crate::hamiltonian::{build_block, ModelParams};
use crate::manifold::{AnnihilationMap, Manifold};
use crate::spectra::{annihilation_overlap, diagonalize, DressedState, Spectrum};

/// ρ values closer than this are treated as ties when picking |G₁⟩.
const G1_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionMetrics {
    pub omega_e: f64,
    pub delta_e: f64,
    pub gamma_u: f64,
    pub rho: f64,
}

impl TransitionMetrics {
    pub fn new(omega_e: f64, delta_e: f64, gamma_u: f64) -> Self {
        TransitionMetrics {
            omega_e,
            delta_e,
            gamma_u,
            rho: two_state_population(omega_e, delta_e, gamma_u),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockadeReport {
    pub rho_exc_1: f64,
    /// Index of |G₁⟩ in the one-quantum spectrum.
    pub g1_index: usize,
    pub rho_exc_2: f64,
    /// One entry per one-quantum dressed state, in spectrum order.
    pub one_quantum: Vec<TransitionMetrics>,
    /// One entry per two-quanta dressed state, in spectrum order.
    pub two_quanta: Vec<TransitionMetrics>,
}

/// Steady-state upper population of a damped, driven two-level system.
pub fn two_state_population(omega_e: f64, delta_e: f64, gamma_u: f64) -> f64 {
    if omega_e == 0.0 {
        return 0.0;
    }
    let o2 = omega_e * omega_e;
    o2 / (2.0 * o2 + delta_e * delta_e + gamma_u * gamma_u)
}

pub fn effective_rabi(beta: f64, lower: &DressedState, upper: &DressedState, a_map: &AnnihilationMap) -> Result<f64> {
    Ok(beta * annihilation_overlap(&lower.vector, a_map, &upper.vector)?.norm())
}

/// Manifolds and annihilation maps for a fixed atom number, reusable across
/// parameter points.
#[derive(Clone, Debug)]
pub struct BlockadeModel {
    n_atoms: usize,
    one: Manifold,
    two: Manifold,
    a_one: AnnihilationMap,
    a_two: AnnihilationMap,
}

impl BlockadeModel {
    pub fn new(n_atoms: usize) -> Result<Self> {
        let zero = Manifold::new(n_atoms, 0)?;
        let one = Manifold::new(n_atoms, 1)?;
        let two = Manifold::new(n_atoms, 2)?;
        let a_one = AnnihilationMap::new(&one, &zero)?;
        let a_two = AnnihilationMap::new(&two, &one)?;
        Ok(BlockadeModel {
            n_atoms,
            one,
            two,
            a_one,
            a_two,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn one_quantum_map(&self) -> &AnnihilationMap {
        &self.a_one
    }

    pub fn two_quanta_map(&self) -> &AnnihilationMap {
        &self.a_two
    }

    pub fn one_quantum_spectrum(&self, params: &ModelParams) -> Result<Spectrum> {
        diagonalize(&build_block(params, &self.one))
    }

    pub fn two_quanta_spectrum(&self, params: &ModelParams) -> Result<Spectrum> {
        diagonalize(&build_block(params, &self.two))
    }

    /// Ground → one-quantum transitions and the index of |G₁⟩.
    pub fn first_step(&self, params: &ModelParams, one: &Spectrum) -> Result<(Vec<TransitionMetrics>, usize)> {
        let ground = DressedState::ground();
        let metrics = one
            .states()
            .iter()
            .map(|upper| {
                let omega_e = effective_rabi(params.beta, &ground, upper, &self.a_one)?;
                Ok(TransitionMetrics::new(
                    omega_e,
                    upper.energy.re - params.drive_offset,
                    -upper.energy.im,
                ))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut best = 0;
        for (k, m) in metrics.iter().enumerate().skip(1) {
            let current = metrics[best].rho;
            let closer = one.states()[k].energy.re.abs() < one.states()[best].energy.re.abs();
            if m.rho > current + G1_TIE_TOL || ((m.rho - current).abs() <= G1_TIE_TOL && closer) {
                best = k;
            }
        }
        Ok((metrics, best))
    }

    /// |G₁⟩ → two-quanta transitions. The width of |G₁⟩ itself is ignored.
    pub fn second_step(
        &self,
        params: &ModelParams,
        g1: &DressedState,
        two: &Spectrum,
    ) -> Result<Vec<TransitionMetrics>> {
        two.states()
            .iter()
            .map(|upper| {
                let omega_e = effective_rabi(params.beta, g1, upper, &self.a_two)?;
                Ok(TransitionMetrics::new(
                    omega_e,
                    upper.energy.re - g1.energy.re - params.drive_offset,
                    -upper.energy.im,
                ))
            })
            .collect()
    }

    pub fn rho_exc_1(&self, params: &ModelParams) -> Result<(f64, DressedState)> {
        params.validate()?;
        let one = self.one_quantum_spectrum(params)?;
        let (metrics, g1) = self.first_step(params, &one)?;
        Ok((metrics[g1].rho, one.states()[g1].clone()))
    }

    pub fn rho_exc_2(&self, params: &ModelParams, g1: &DressedState) -> Result<f64> {
        params.validate()?;
        let two = self.two_quanta_spectrum(params)?;
        Ok(max_rho(&self.second_step(params, g1, &two)?))
    }

    pub fn evaluate(&self, params: &ModelParams) -> Result<BlockadeReport> {
        params.validate()?;
        let one = self.one_quantum_spectrum(params)?;
        let (one_quantum, g1_index) = self.first_step(params, &one)?;
        let two = self.two_quanta_spectrum(params)?;
        let two_quanta = self.second_step(params, &one.states()[g1_index], &two)?;
        Ok(BlockadeReport {
            rho_exc_1: one_quantum[g1_index].rho,
            g1_index,
            rho_exc_2: max_rho(&two_quanta),
            one_quantum,
            two_quanta,
        })
    }
}

fn max_rho(metrics: &[TransitionMetrics]) -> f64 {
    metrics.iter().map(|m| m.rho).fold(0.0, f64::max)
}

/// ρ_exc^(1) and the maximally coupled one-quantum state |G₁⟩.
pub fn rho_exc_1(params: &ModelParams, n_atoms: usize) -> Result<(f64, DressedState)> {
    BlockadeModel::new(n_atoms)?.rho_exc_1(params)
}

/// ρ_exc^(2) for transitions out of `g1`, which must be a one-quantum dressed
/// state computed with the same parameters.
pub fn rho_exc_2(params: &ModelParams, n_atoms: usize, g1: &DressedState) -> Result<f64> {
    let model = BlockadeModel::new(n_atoms)?;
    if g1.vector.len() != model.a_two.rows() {
        return Err(Error::ManifoldMismatch(format!(
            "|G1> has {} components, the one-quantum manifold of {} atoms has {}",
            g1.vector.len(),
            n_atoms,
            model.a_two.rows()
        )));
    }
    model.rho_exc_2(params, g1)
}

pub fn blockade_report(params: &ModelParams, n_atoms: usize) -> Result<BlockadeReport> {
    BlockadeModel::new(n_atoms)?.evaluate(params)
}

/// ρ_exc^(1) per atom number for a drive detuned by `drive_offset` from the
/// cavity. N = 0 is the empty cavity: a bare mode at −iΓ_cav with Ω_e = β.
pub fn atom_number_selectivity(
    params: &ModelParams,
    drive_offset: f64,
    n_range: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if !drive_offset.is_finite() {
        return Err(Error::InvalidParams(format!(
            "drive_offset is not finite ({drive_offset})"
        )));
    }
    let p = ModelParams {
        drive_offset,
        ..*params
    };
    p.validate()?;
    n_range
        .iter()
        .map(|&n| {
            let rho = if n == 0 {
                two_state_population(p.beta, -drive_offset, p.gamma_cav)
            } else {
                rho_exc_1(&p, n)?.0
            };
            Ok((n, rho))
        })
        .collect()
}
