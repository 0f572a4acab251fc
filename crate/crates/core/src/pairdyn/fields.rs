use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::unwrap_phases;
use crate::error::{Error, Result};
use crate::grid::SpaceTimeGrid;

/// Relative amplitude below which the phase is treated as undefined.
pub const PHASE_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitField {
    pub rho: Vec<f64>,
    /// arg Δ unwrapped along x.
    pub beta: Vec<f64>,
    /// |Δ| < PHASE_EPS · max|Δ|.
    pub undefined: Vec<bool>,
    /// Indices i where β jumps by more than π/2 between i−1 and i after
    /// unwrapping (sign changes through a zero produce a jump of π).
    pub jumps: Vec<usize>,
}

pub fn density_phase_split(values: &[Complex64]) -> SplitField {
    let rho: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let max = rho.iter().cloned().fold(0.0, f64::max);
    let undefined: Vec<bool> = rho.iter().map(|&r| r <= PHASE_EPS * max || r == 0.0).collect();
    let beta = unwrap_phases(&values.iter().map(|z| z.arg()).collect::<Vec<_>>());
    let jumps = (1..beta.len())
        .filter(|&i| (beta[i] - beta[i - 1]).abs() > std::f64::consts::FRAC_PI_2)
        .collect();
    SplitField {
        rho,
        beta,
        undefined,
        jumps,
    }
}

/// ∂_t(ρ ∂_tβ) − ∂_x(ρ ∂_xβ), the density-weighted current as written for
/// the density/phase equations.
pub fn continuity_residual(rho: &SpaceTimeGrid, beta: &SpaceTimeGrid) -> Result<SpaceTimeGrid> {
    weighted_divergence(rho, beta, |r| r)
}

/// ∂_t(ρ² ∂_tβ) − ∂_x(ρ² ∂_xβ), the Noether current of the complex field.
pub fn current_residual(rho: &SpaceTimeGrid, beta: &SpaceTimeGrid) -> Result<SpaceTimeGrid> {
    weighted_divergence(rho, beta, |r| r * r)
}

fn weighted_divergence(rho: &SpaceTimeGrid, beta: &SpaceTimeGrid, w: fn(f64) -> f64) -> Result<SpaceTimeGrid> {
    rho.check_same_lattice(beta)?;
    rho.check_min_size(3)?;
    let wr = rho.map(w);
    let jt = wr.zip_with(&beta.d_dt()?, |a, b| a * b)?;
    let jx = wr.zip_with(&beta.d_dx()?, |a, b| a * b)?;
    jt.d_dt()?.zip_with(&jx.d_dx()?, |a, b| a - b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfieldCoupling {
    /// ∂_μ L ∂^μ β with L = −ln(1 + ρ/ρ₀).
    pub full: SpaceTimeGrid,
    /// −(1/ρ₀) ∂_μ ρ ∂^μ β.
    pub asymptotic: SpaceTimeGrid,
}

pub fn efield_coupling(rho: &SpaceTimeGrid, beta: &SpaceTimeGrid, rho0: f64) -> Result<EfieldCoupling> {
    rho.check_same_lattice(beta)?;
    rho.check_min_size(3)?;
    if !(rho0 != 0.0) || rho.data.iter().any(|r| !(1.0 + r / rho0 > 0.0)) {
        return Err(Error::param("rho0", "need 1 + ρ/ρ₀ > 0 everywhere"));
    }
    let l = rho.map(|r| -(1.0 + r / rho0).ln());
    let (bt, bx) = (beta.d_dt()?, beta.d_dx()?);
    let contract = |f: &SpaceTimeGrid| -> Result<SpaceTimeGrid> {
        let a = f.d_dt()?.zip_with(&bt, |p, q| p * q)?;
        let b = f.d_dx()?.zip_with(&bx, |p, q| p * q)?;
        a.zip_with(&b, |p, q| p - q)
    };
    Ok(EfieldCoupling {
        full: contract(&l)?,
        asymptotic: contract(rho)?.map(|v| -v / rho0),
    })
}
