//! Model parameters and assembly of the effective (non-Hermitian) Hamiltonian
//! blocks, in the frame rotating at the cavity frequency.
//!
//! Decay enters as `-iΓ` on the diagonal, so every block is complex-symmetric
//! (`H == H.transpose()`) and Hermitian only when all rates vanish.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::manifold::{AtomLevel, Manifold, ProductState};

pub type C64 = Complex64;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// All rates and detunings in one common angular-frequency unit.
///
/// `delta` is the mutual detuning of the coupling field from b–c and of the
/// cavity from a–c; `delta_omega = ω_ca − ω_db`, so the cavity detuning from
/// b–d is `delta + delta_omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub g_ac: f64,
    pub g_bd: f64,
    pub delta: f64,
    pub delta_omega: f64,
    pub gamma_c: f64,
    pub gamma_d: f64,
    pub gamma_cav: f64,
    pub beta: f64,
    pub drive_offset: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega: 1.0,
            g_ac: 0.0,
            g_bd: 0.0,
            delta: 0.0,
            delta_omega: 0.0,
            gamma_c: 0.0,
            gamma_d: 0.0,
            gamma_cav: 0.0,
            beta: 1.0,
            drive_offset: 0.0,
        }
    }
}

impl ModelParams {
    /// Idealised blockade regime in units of Ω: Γ_cav = 0.01, Γ_c = Γ_d = 0.1,
    /// δ_ω = 0, β = 1, g = 1.
    pub fn ideal() -> Self {
        ModelParams {
            omega: 1.0,
            g_ac: 1.0,
            g_bd: 1.0,
            delta: 0.0,
            delta_omega: 0.0,
            gamma_c: 0.1,
            gamma_d: 0.1,
            gamma_cav: 0.01,
            beta: 1.0,
            drive_offset: 0.0,
        }
    }

    /// ⁸⁷Rb D₂ line in a high-finesse cavity, in units of Ω (Ω = 10 MHz):
    /// g = 12, Γ_c = Γ_d = 1.78, Γ_cav = 4, δ_ω = 660, β = 0.3.
    pub fn rubidium() -> Self {
        ModelParams {
            omega: 1.0,
            g_ac: 12.0,
            g_bd: 12.0,
            delta: 0.0,
            delta_omega: 660.0,
            gamma_c: 1.78,
            gamma_d: 1.78,
            gamma_cav: 4.0,
            beta: 0.3,
            drive_offset: 0.0,
        }
    }

    /// Sets both cavity couplings to the same value.
    pub fn with_g(mut self, g: f64) -> Self {
        self.g_ac = g;
        self.g_bd = g;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Cavity detuning from the b–d transition, Δ = δ + δ_ω.
    pub fn big_delta(&self) -> f64 {
        self.delta + self.delta_omega
    }

    /// Fixes Δ by adjusting δ_ω (for scans at constant Δ).
    pub fn with_big_delta(mut self, big_delta: f64) -> Self {
        self.delta_omega = big_delta - self.delta;
        self
    }

    /// Γ̃_c = Γ_c + iδ
    pub fn gamma_c_tilde(&self) -> C64 {
        C64::new(self.gamma_c, self.delta)
    }

    /// Γ̃_d = Γ_d + iΔ
    pub fn gamma_d_tilde(&self) -> C64 {
        C64::new(self.gamma_d, self.big_delta())
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("g_ac", self.g_ac),
            ("g_bd", self.g_bd),
            ("delta", self.delta),
            ("delta_omega", self.delta_omega),
            ("gamma_c", self.gamma_c),
            ("gamma_d", self.gamma_d),
            ("gamma_cav", self.gamma_cav),
            ("beta", self.beta),
            ("drive_offset", self.drive_offset),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} is not finite ({v})")));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        for (name, v) in [
            ("gamma_c", self.gamma_c),
            ("gamma_d", self.gamma_d),
            ("gamma_cav", self.gamma_cav),
            ("beta", self.beta),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Coupling {
    Omega,
    Gac,
    Gbd,
}

/// Bare states reached from `state` by one interaction term, with the
/// coupling type and its photon-number factor.
pub(crate) fn neighbours(state: &ProductState) -> Vec<(ProductState, Coupling, f64)> {
    let n = state.photons;
    let mut out = Vec::new();
    for (j, &level) in state.atoms.iter().enumerate() {
        match level {
            AtomLevel::A => {
                if n > 0 {
                    out.push((
                        state.with_atom(j, AtomLevel::C, n - 1),
                        Coupling::Gac,
                        (n as f64).sqrt(),
                    ));
                }
            }
            AtomLevel::B => {
                out.push((state.with_atom(j, AtomLevel::C, n), Coupling::Omega, 1.0));
                if n > 0 {
                    out.push((
                        state.with_atom(j, AtomLevel::D, n - 1),
                        Coupling::Gbd,
                        (n as f64).sqrt(),
                    ));
                }
            }
            AtomLevel::C => {
                out.push((state.with_atom(j, AtomLevel::B, n), Coupling::Omega, 1.0));
                out.push((
                    state.with_atom(j, AtomLevel::A, n + 1),
                    Coupling::Gac,
                    ((n + 1) as f64).sqrt(),
                ));
            }
            AtomLevel::D => {
                out.push((
                    state.with_atom(j, AtomLevel::B, n + 1),
                    Coupling::Gbd,
                    ((n + 1) as f64).sqrt(),
                ));
            }
        }
    }
    out
}

/// Diagonal element for a bare state: −iΓ̃_c per atom in c, −iΓ̃_d per atom
/// in d, −inΓ_cav for n photons.
pub fn diagonal_element(params: &ModelParams, state: &ProductState) -> C64 {
    let i = C64::i();
    let n_c = state.atoms.iter().filter(|&&l| l == AtomLevel::C).count() as f64;
    let n_d = state.atoms.iter().filter(|&&l| l == AtomLevel::D).count() as f64;
    -i * params.gamma_c_tilde() * n_c - i * params.gamma_d_tilde() * n_d - i * (state.photons as f64 * params.gamma_cav)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    manifold: Manifold,
    matrix: DMatrix<C64>,
}

impl BlockMatrix {
    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn into_parts(self) -> (Manifold, DMatrix<C64>) {
        (self.manifold, self.matrix)
    }
}

pub fn build_block(params: &ModelParams, manifold: &Manifold) -> BlockMatrix {
    let dim = manifold.len();
    let mut matrix = DMatrix::<C64>::zeros(dim, dim);
    for (col, state) in manifold.basis().iter().enumerate() {
        matrix[(col, col)] = diagonal_element(params, state);
        for (target, kind, factor) in neighbours(state) {
            let row = manifold
                .index_of(&target)
                .expect("interaction conserves the excitation number");
            let strength = match kind {
                Coupling::Omega => params.omega,
                Coupling::Gac => params.g_ac,
                Coupling::Gbd => params.g_bd,
            };
            matrix[(row, col)] += C64::new(strength * factor, 0.0);
        }
    }
    BlockMatrix {
        manifold: manifold.clone(),
        matrix,
    }
}

/// Closed-form one-quantum eigenvalues for Γ_cav = 0, as (energy, multiplicity)
/// in the order E₊₂, E₊₁, E₀, E₋₁, E₋₂. The E±₁ pair is (N−1)-fold degenerate
/// and absent for a single atom.
pub fn analytic_one_quantum(params: &ModelParams, n_atoms: usize) -> Result<Vec<(C64, usize)>> {
    if params.gamma_cav != 0.0 {
        return Err(Error::OracleDomain(format!(
            "closed form requires gamma_cav = 0, got {}",
            params.gamma_cav
        )));
    }
    if n_atoms == 0 {
        return Err(Error::NoAtoms);
    }
    let gt = params.gamma_c_tilde();
    let i = C64::i();
    let omega2 = params.omega * params.omega;
    let pair = |coupling2: f64| {
        let root = (-gt * gt + 4.0 * coupling2).sqrt();
        ((-i * gt + root) / 2.0, (-i * gt - root) / 2.0)
    };
    let (e_p2, e_m2) = pair(omega2 + n_atoms as f64 * params.g_ac * params.g_ac);
    let mut out = vec![(e_p2, 1)];
    if n_atoms > 1 {
        let (e_p1, e_m1) = pair(omega2);
        out.push((e_p1, n_atoms - 1));
        out.push((C64::new(0.0, 0.0), 1));
        out.push((e_m1, n_atoms - 1));
    } else {
        out.push((C64::new(0.0, 0.0), 1));
    }
    out.push((e_m2, 1));
    Ok(out)
}

/// Laboratory quantities from which g and β are derived (SI units, angular
/// frequencies in rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Drive power, W.
    pub power: f64,
    /// Mirror transmittance.
    pub transmittance: f64,
    /// Mode volume, m³.
    pub cavity_volume: f64,
    /// Dipole moments, C·m.
    pub mu_ac: f64,
    pub mu_bd: f64,
    pub omega_ca: f64,
    pub omega_db: f64,
    pub omega_cav: f64,
    pub omega_class: f64,
}

impl PhysicalParams {
    fn check_non_negative(&self) -> Result<()> {
        let fields = [
            ("power", self.power),
            ("transmittance", self.transmittance),
            ("cavity_volume", self.cavity_volume),
            ("mu_ac", self.mu_ac),
            ("mu_bd", self.mu_bd),
            ("omega_ca", self.omega_ca),
            ("omega_db", self.omega_db),
            ("omega_cav", self.omega_cav),
            ("omega_class", self.omega_class),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidPhysical(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// g = (ω / 2ħε₀V)^½ · μ for the a–c and b–d transitions, in rad/s.
pub fn coupling_from_physical(phys: &PhysicalParams) -> Result<(f64, f64)> {
    phys.check_non_negative()?;
    if phys.cavity_volume == 0.0 {
        return Err(Error::InvalidPhysical("cavity volume must be positive".into()));
    }
    let g = |omega: f64, mu: f64| (omega / (2.0 * HBAR * EPSILON_0 * phys.cavity_volume)).sqrt() * mu;
    Ok((g(phys.omega_ca, phys.mu_ac), g(phys.omega_db, phys.mu_bd)))
}

/// β = (P Γ_cav T² / 4ħω_cav)^½, in the unit of `gamma_cav`'s square root
/// times s^-½ (rad/s when `gamma_cav` is in rad/s).
pub fn beta_from_physical(phys: &PhysicalParams, gamma_cav: f64) -> Result<f64> {
    phys.check_non_negative()?;
    if phys.omega_cav == 0.0 {
        return Err(Error::InvalidPhysical("cavity frequency must be positive".into()));
    }
    if !gamma_cav.is_finite() || gamma_cav < 0.0 {
        return Err(Error::InvalidPhysical(format!(
            "gamma_cav must be finite and >= 0, got {gamma_cav}"
        )));
    }
    let t = phys.transmittance;
    Ok((phys.power * gamma_cav * t * t / (4.0 * HBAR * phys.omega_cav)).sqrt())
}
