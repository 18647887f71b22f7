use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::CVector;
use crate::{Matrix, C64};

/// Populations and coherence of a density matrix restricted to a
/// two-state subspace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DfsCoordinates {
    pub p1: f64,
    pub p2: f64,
    pub z: C64,
}

/// `p1 = <b1|rho|b1>`, `p2 = <b2|rho|b2>`, `z = <b1|rho|b2>`.
pub fn dfs_coordinates(rho: &Matrix, b1: &CVector<f64>, b2: &CVector<f64>) -> Result<DfsCoordinates> {
    if (b1.norm() - 1.0).abs() > 1e-10 || (b2.norm() - 1.0).abs() > 1e-10 || b1.dot(b2).norm() > 1e-10 {
        return Err(Error::InvalidInput("DFS basis states must be orthonormal".into()));
    }
    Ok(DfsCoordinates { p1: rho.sandwich(b1, b1).re, p2: rho.sandwich(b2, b2).re, z: rho.sandwich(b1, b2) })
}
