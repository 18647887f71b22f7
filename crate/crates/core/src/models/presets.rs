//! Named model builders.
//!
//! Three-state models are expressed in the rotated basis
//! `|0> = |a>, |1> = i|b>, |2> = i|c>`, in which the effective generator is
//! real. Two-qubit models use the product basis
//! `(|uu>, |ud>, |du>, |dd>)` with qubit 1 first and `u` = spin up.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::CMatrix;
use crate::qme::LindbladModel;
use crate::scalar::{cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "three_state_1j")]
    ThreeState1j,
    #[serde(rename = "three_state_2j")]
    ThreeState2j,
    #[serde(rename = "three_state_merged")]
    ThreeStateMerged,
    #[serde(rename = "two_qubit_dfs")]
    TwoQubitDfs,
    #[serde(rename = "two_qubit_superposed")]
    TwoQubitSuperposed,
}

impl PresetName {
    pub const ALL: [PresetName; 5] = [
        PresetName::ThreeState1j,
        PresetName::ThreeState2j,
        PresetName::ThreeStateMerged,
        PresetName::TwoQubitDfs,
        PresetName::TwoQubitSuperposed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::ThreeState1j => "three_state_1j",
            PresetName::ThreeState2j => "three_state_2j",
            PresetName::ThreeStateMerged => "three_state_merged",
            PresetName::TwoQubitDfs => "two_qubit_dfs",
            PresetName::TwoQubitSuperposed => "two_qubit_superposed",
        }
    }

    /// Parameters the preset requires, and optional ones with defaults.
    pub fn parameters(self) -> (&'static [&'static str], &'static [(&'static str, f64)]) {
        match self {
            PresetName::ThreeState1j => (&["omega1", "omega2", "kappa1"], &[]),
            PresetName::ThreeState2j | PresetName::ThreeStateMerged => (&["omega1", "omega2", "kappa1", "kappa2"], &[]),
            PresetName::TwoQubitDfs | PresetName::TwoQubitSuperposed => {
                (&["gamma1", "gamma2", "omega1", "omega2"], &[("omega_r", 0.0)])
            }
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetName::ALL.into_iter().find(|p| p.as_str() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Preset name plus its rate parameters (`omega1`, `omega2`, `kappa1`,
/// `kappa2`, `gamma1`, `gamma2`, `omega_r`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    pub name: PresetName,
    pub params: BTreeMap<String, f64>,
}

impl PresetParams {
    pub fn new(name: PresetName, params: &[(&str, f64)]) -> Self {
        Self { name, params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        let (required, optional) = self.name.parameters();
        if let Some(v) = self.params.get(key) {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidInput(format!("parameter {key} must be finite and non-negative")));
            }
            return Ok(*v);
        }
        if let Some((_, d)) = optional.iter().find(|(k, _)| *k == key) {
            return Ok(*d);
        }
        debug_assert!(required.contains(&key));
        Err(Error::MissingParam { preset: self.name.to_string(), param: key.to_string() })
    }

    /// Single-jump three-state model, `Omega1 = 1, Omega2 = 0.05, kappa1 = 4`.
    pub fn three_state_reference() -> Self {
        Self::new(PresetName::ThreeState1j, &[("omega1", 1.0), ("omega2", 0.05), ("kappa1", 4.0)])
    }

    /// Two-jump three-state model, reference rates plus `kappa2 = 1`.
    pub fn three_state_two_jump_reference() -> Self {
        Self::new(PresetName::ThreeState2j, &[("omega1", 1.0), ("omega2", 0.05), ("kappa1", 4.0), ("kappa2", 1.0)])
    }

    /// Two-qubit DFS model, `gamma = (4, 1)`, `Omega = (0.02, 0.01)`.
    pub fn two_qubit_reference() -> Self {
        Self::new(PresetName::TwoQubitDfs, &[("gamma1", 4.0), ("gamma2", 1.0), ("omega1", 0.02), ("omega2", 0.01)])
    }

    /// Two-qubit model in the two-gap regime, `Omega = (5e-4, 1e-2)`.
    pub fn two_qubit_two_gap_reference() -> Self {
        Self::new(PresetName::TwoQubitDfs, &[("gamma1", 4.0), ("gamma2", 1.0), ("omega1", 5e-4), ("omega2", 1e-2)])
    }
}

fn ket_bra<T: Real>(d: usize, i: usize, j: usize, amp: T) -> CMatrix<T> {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = cx(amp, T::zero());
    m
}

fn three_state_hamiltonian<T: Real>(omega1: T, omega2: T) -> CMatrix<T> {
    // rotated basis: <0|H|1> = i Omega1, <0|H|2> = i Omega2
    let mut h = CMatrix::zeros(3, 3);
    h[(0, 1)] = cx(T::zero(), omega1);
    h[(1, 0)] = cx(T::zero(), -omega1);
    h[(0, 2)] = cx(T::zero(), omega2);
    h[(2, 0)] = cx(T::zero(), -omega2);
    h
}

/// Single-jump three-state model, `J = sqrt(kappa1) |0><1|`.
pub fn three_state_1j<T: Real>(omega1: T, omega2: T, kappa1: T) -> LindbladModel<T> {
    let j1 = ket_bra(3, 0, 1, kappa1.sqrt());
    LindbladModel::new(three_state_hamiltonian(omega1, omega2), vec![j1], "three_state_1j").expect("valid preset")
}

/// Two-jump three-state model, adding `J2 = sqrt(kappa2) |2><2|`.
pub fn three_state_2j<T: Real>(omega1: T, omega2: T, kappa1: T, kappa2: T) -> LindbladModel<T> {
    let j1 = ket_bra(3, 0, 1, kappa1.sqrt());
    let j2 = ket_bra(3, 2, 2, kappa2.sqrt());
    LindbladModel::new(three_state_hamiltonian(omega1, omega2), vec![j1, j2], "three_state_2j").expect("valid preset")
}

/// Three-state model with the single merged jump `J1 + J2`.
pub fn three_state_merged<T: Real>(omega1: T, omega2: T, kappa1: T, kappa2: T) -> LindbladModel<T> {
    let j = &ket_bra(3, 0, 1, kappa1.sqrt()) + &ket_bra(3, 2, 2, kappa2.sqrt());
    LindbladModel::new(three_state_hamiltonian(omega1, omega2), vec![j], "three_state_merged").expect("valid preset")
}

/// Pauli matrices in the `(|u>, |d>)` basis.
fn pauli<T: Real>() -> (CMatrix<T>, CMatrix<T>) {
    let o = T::one();
    let z = T::zero();
    let sx = CMatrix::from_row_major(2, 2, vec![cx(z, z), cx(o, z), cx(o, z), cx(z, z)]);
    let sy = CMatrix::from_row_major(2, 2, vec![cx(z, z), cx(z, -o), cx(z, o), cx(z, z)]);
    (sx, sy)
}

fn two_qubit_hamiltonian<T: Real>(omega1: T, omega2: T, omega_r: T) -> CMatrix<T> {
    let (sx, sy) = pauli::<T>();
    let id = CMatrix::identity(2);
    let mut h = sy.kron(&id).scale_real(omega1);
    h += &id.kron(&sy).scale_real(omega2);
    h += &sx.kron(&sy).scale_real(omega_r);
    h
}

/// Index of `|uu>, |ud>, |du>, |dd>`.
pub const UU: usize = 0;
pub const UD: usize = 1;
pub const DU: usize = 2;
pub const DD: usize = 3;

/// `J1 = sqrt(gamma1) n_1 sigma_2^-`, `J2 = sqrt(gamma2) (1 - n_1) sigma_2^+`.
fn two_qubit_jumps<T: Real>(gamma1: T, gamma2: T) -> (CMatrix<T>, CMatrix<T>) {
    (ket_bra(4, UD, UU, gamma1.sqrt()), ket_bra(4, DU, DD, gamma2.sqrt()))
}

pub fn two_qubit_dfs<T: Real>(gamma1: T, gamma2: T, omega1: T, omega2: T, omega_r: T) -> LindbladModel<T> {
    let (j1, j2) = two_qubit_jumps(gamma1, gamma2);
    LindbladModel::new(two_qubit_hamiltonian(omega1, omega2, omega_r), vec![j1, j2], "two_qubit_dfs").expect("valid preset")
}

/// Single jump `J1 - J2` superposing the two reset channels.
pub fn two_qubit_superposed<T: Real>(gamma1: T, gamma2: T, omega1: T, omega2: T, omega_r: T) -> LindbladModel<T> {
    let (j1, j2) = two_qubit_jumps(gamma1, gamma2);
    LindbladModel::new(two_qubit_hamiltonian(omega1, omega2, omega_r), vec![&j1 - &j2], "two_qubit_superposed")
        .expect("valid preset")
}

pub fn build_preset<T: Real>(params: &PresetParams) -> Result<LindbladModel<T>> {
    let g = |k: &str| params.get(k).map(T::lit);
    Ok(match params.name {
        PresetName::ThreeState1j => three_state_1j(g("omega1")?, g("omega2")?, g("kappa1")?),
        PresetName::ThreeState2j => three_state_2j(g("omega1")?, g("omega2")?, g("kappa1")?, g("kappa2")?),
        PresetName::ThreeStateMerged => three_state_merged(g("omega1")?, g("omega2")?, g("kappa1")?, g("kappa2")?),
        PresetName::TwoQubitDfs => two_qubit_dfs(g("gamma1")?, g("gamma2")?, g("omega1")?, g("omega2")?, g("omega_r")?),
        PresetName::TwoQubitSuperposed => {
            two_qubit_superposed(g("gamma1")?, g("gamma2")?, g("omega1")?, g("omega2")?, g("omega_r")?)
        }
    })
}

/// Three-state Hamiltonian and jump in the physical basis `(|a>, |b>, |c>)`.
pub fn three_state_physical<T: Real>(omega1: T, omega2: T, kappa1: T) -> (CMatrix<T>, CMatrix<T>) {
    let mut h = CMatrix::zeros(3, 3);
    h[(0, 1)] = cx(omega1, T::zero());
    h[(1, 0)] = cx(omega1, T::zero());
    h[(0, 2)] = cx(omega2, T::zero());
    h[(2, 0)] = cx(omega2, T::zero());
    (h, ket_bra(3, 0, 1, kappa1.sqrt()))
}

/// The basis change `|0> = |a>, |1> = i|b>, |2> = i|c>` as the unitary
/// whose columns are the new basis vectors.
pub fn three_state_rotation<T: Real>() -> CMatrix<T> {
    CMatrix::diagonal(&[cx(T::one(), T::zero()), cx(T::zero(), T::one()), cx(T::zero(), T::one())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotated_three_state_matches_physical() {
        let (h, j) = three_state_physical(1.0_f64, 0.05, 4.0);
        let u = three_state_rotation::<f64>();
        let m = three_state_1j(1.0_f64, 0.05, 4.0);
        let h_rot = u.adjoint().matmul(&h).matmul(&u);
        assert!((&h_rot - m.hamiltonian()).max_abs() < 1e-15);
        // jump agrees up to a global phase
        let j_rot = u.adjoint().matmul(&j).matmul(&u);
        let ratio = j_rot[(0, 1)] / m.jumps()[0][(0, 1)];
        assert!((ratio.norm() - 1.0).abs() < 1e-15);
        assert!((&j_rot - &m.jumps()[0].scale(ratio)).max_abs() < 1e-15);
    }

    #[test]
    fn missing_parameter_reported() {
        let p = PresetParams::new(PresetName::ThreeState1j, &[("omega1", 1.0)]);
        assert!(matches!(build_preset::<f64>(&p), Err(Error::MissingParam { .. })));
    }

    #[test]
    fn unknown_preset_name() {
        assert!(matches!("four_state".parse::<PresetName>(), Err(Error::UnknownPreset(_))));
    }
}
