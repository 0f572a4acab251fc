//! Composite gauge potential built from the number phase θ_N and the
//! difermion phase β_Δ (unit charge).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{first_derivative, second_derivative, SpaceTimeGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePair {
    pub theta_n: SpaceTimeGrid,
    pub beta_delta: SpaceTimeGrid,
}

impl PhasePair {
    pub fn new(theta_n: SpaceTimeGrid, beta_delta: SpaceTimeGrid) -> Result<Self> {
        theta_n.check_same_lattice(&beta_delta)?;
        Ok(Self { theta_n, beta_delta })
    }
}

/// Plane-wave phase modes: θ_N = k_N x − ω_N t, β_Δ = k_Δ x − ω_Δ t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseModes {
    pub omega_n: f64,
    pub k_n: f64,
    pub omega_delta: f64,
    pub k_delta: f64,
}

impl PhaseModes {
    pub fn sample(&self, nt: usize, nx: usize, dt: f64, dx: f64) -> PhasePair {
        let m = *self;
        PhasePair {
            theta_n: SpaceTimeGrid::from_fn(nt, nx, dt, dx, 0.0, 0.0, move |t, x| m.k_n * x - m.omega_n * t),
            beta_delta: SpaceTimeGrid::from_fn(nt, nx, dt, dx, 0.0, 0.0, move |t, x| {
                m.k_delta * x - m.omega_delta * t
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugePotential {
    pub a0: SpaceTimeGrid,
    pub a1: SpaceTimeGrid,
}

impl GaugePotential {
    pub fn zeros_like(g: &SpaceTimeGrid) -> Self {
        let z = g.map(|_| 0.0);
        Self { a0: z.clone(), a1: z }
    }
}

/// A₀ → A₀ − (∂_t θ_N + ∂_x β_Δ), A₁ → A₁ − (∂_x θ_N + ∂_t β_Δ)
pub fn gauge_transform(a: &GaugePotential, phases: &PhasePair) -> Result<GaugePotential> {
    a.a0.check_same_lattice(&a.a1)?;
    a.a0.check_same_lattice(&phases.theta_n)?;
    phases.theta_n.check_same_lattice(&phases.beta_delta)?;
    let s0 = phases.theta_n.d_dt()?.zip_with(&phases.beta_delta.d_dx()?, |u, v| u + v)?;
    let s1 = phases.theta_n.d_dx()?.zip_with(&phases.beta_delta.d_dt()?, |u, v| u + v)?;
    Ok(GaugePotential {
        a0: a.a0.zip_with(&s0, |u, v| u - v)?,
        a1: a.a1.zip_with(&s1, |u, v| u - v)?,
    })
}

/// Pure-gauge potential generated from zero.
pub fn pure_gauge(phases: &PhasePair) -> Result<GaugePotential> {
    gauge_transform(&GaugePotential::zeros_like(&phases.theta_n), phases)
}

/// E = (∂_t² − ∂_x²) β_Δ.
pub fn field_strength(beta: &SpaceTimeGrid) -> Result<SpaceTimeGrid> {
    beta.check_min_size(3)?;
    beta.d2_dt2()?.zip_with(&beta.d2_dx2()?, |a, b| a - b)
}

/// F^{01} = ∂_t A₁ − ∂_x A₀ (equal to −E for a pure-gauge potential).
pub fn field_strength_from_potential(a: &GaugePotential) -> Result<SpaceTimeGrid> {
    a.a0.check_same_lattice(&a.a1)?;
    a.a0.check_min_size(3)?;
    a.a1.d_dt()?.zip_with(&a.a0.d_dx()?, |u, v| u - v)
}

/// Components F^{μν} at one lattice point, from E: F^{01} = −E, F^{10} = E.
pub fn field_tensor(e: f64) -> [[f64; 2]; 2] {
    [[0.0, -e], [e, 0.0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChemPotentials {
    pub mu1: f64,
    pub mu2: f64,
    pub mu5: f64,
    pub mu_bar: f64,
}

impl ChemPotentials {
    pub fn from_components(mu1: f64, mu2: f64) -> Self {
        Self {
            mu1,
            mu2,
            mu5: (mu1 - mu2) / 2.0,
            mu_bar: (mu1 + mu2) / 2.0,
        }
    }

    pub fn from_chiral(mu5: f64, mu_bar: f64) -> Self {
        Self {
            mu1: mu_bar + mu5,
            mu2: mu_bar - mu5,
            mu5,
            mu_bar,
        }
    }

    /// μ₁ = μ − (A₀ − A₁), μ₂ = μ − (A₀ + A₁).
    pub fn from_potential(mu: f64, a0: f64, a1: f64) -> Self {
        Self::from_components(mu - (a0 - a1), mu - (a0 + a1))
    }
}

/// μ₅ = ω_Δ − k_N, μ̄ = μ − ω_N + k_Δ.
pub fn chemical_potentials(mu: f64, omega_delta: f64, k_delta: f64, omega_n: f64, k_n: f64) -> ChemPotentials {
    ChemPotentials::from_chiral(omega_delta - k_n, mu - omega_n + k_delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeLabel {
    InVacuum,
    InMediumManifest,
    BrokenLowEnergy,
    BrokenHighEnergy,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::InVacuum => "in_vacuum",
            Self::InMediumManifest => "in_medium_manifest",
            Self::BrokenLowEnergy => "broken_low_energy",
            Self::BrokenHighEnergy => "broken_high_energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeInputs {
    pub rho0: f64,
    pub condensate_fraction: f64,
    pub p: f64,
    pub q_beta: f64,
    pub q_delta: f64,
    pub mu: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// A quantity counts as ≈ 0 below this fraction of the dominant scale.
    pub negligible: f64,
    /// Large condensate fraction.
    pub broken_fraction: f64,
    /// p / q_Δ above this is the molecular (high-energy) scale.
    pub molecular_ratio: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            negligible: 0.05,
            broken_fraction: 0.5,
            molecular_ratio: 1.0,
        }
    }
}

pub fn classify_regime(inputs: &RegimeInputs) -> RegimeLabel {
    classify_regime_with(inputs, &RegimeThresholds::default())
}

/// Total classifier. A large condensate fraction selects the broken phase,
/// split at the molecular scale. Otherwise density and chemical potential
/// both negligible against the dominant scale give the vacuum.
pub fn classify_regime_with(inputs: &RegimeInputs, th: &RegimeThresholds) -> RegimeLabel {
    let RegimeInputs {
        rho0,
        condensate_fraction,
        p,
        q_beta,
        q_delta,
        mu,
        m,
    } = *inputs;
    let f = |v: f64| if v.is_finite() { v.abs() } else { 0.0 };
    if f(condensate_fraction) >= th.broken_fraction {
        let qd = f(q_delta);
        let high = if qd > 0.0 {
            f(p) / qd > th.molecular_ratio
        } else {
            f(p) > 0.0 || f(q_beta) > 0.0
        };
        return if high {
            RegimeLabel::BrokenHighEnergy
        } else {
            RegimeLabel::BrokenLowEnergy
        };
    }
    let scale = [m, p, q_beta, q_delta, mu, rho0]
        .into_iter()
        .map(f)
        .fold(0.0, f64::max);
    let small = |v: f64| f(v) <= th.negligible * scale;
    if scale == 0.0 || (small(rho0) && small(mu)) {
        RegimeLabel::InVacuum
    } else {
        RegimeLabel::InMediumManifest
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GaugeCondition {
    Lorentz,
    Coulomb,
    Weyl,
    Dirac(f64),
}

/// Pointwise residual of a gauge condition on the pure-gauge potential.
pub fn gauge_residual(condition: GaugeCondition, phases: &PhasePair) -> Result<SpaceTimeGrid> {
    let a = pure_gauge(phases)?;
    match condition {
        GaugeCondition::Lorentz => a.a0.d_dt()?.zip_with(&a.a1.d_dx()?, |u, v| u - v),
        GaugeCondition::Coulomb => a.a1.d_dx(),
        GaugeCondition::Weyl => Ok(a.a0.map(|v| -v)),
        GaugeCondition::Dirac(k) => a.a0.zip_with(&a.a1, |u, v| u * u - v * v - k * k),
    }
}

/// E = (∂_x u_bg) θ_N and ρ_E = (∂_x² u_bg) θ_N + (∂_x u_bg)(∂_x θ_N).
pub fn highenergy_efield(u_bg: &[f64], theta_n: &[f64], dx: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if u_bg.len() != theta_n.len() {
        return Err(crate::Error::GridMismatch(format!(
            "u_bg has {} points, theta_N has {}",
            u_bg.len(),
            theta_n.len()
        )));
    }
    if u_bg.len() < 3 {
        return Err(crate::Error::GridTooSmall {
            axis: "x",
            min: 3,
            got: u_bg.len(),
        });
    }
    let du = first_derivative(u_bg, dx);
    let d2u = second_derivative(u_bg, dx);
    let dth = first_derivative(theta_n, dx);
    let e = du.iter().zip(theta_n).map(|(a, b)| a * b).collect();
    let rho = (0..u_bg.len()).map(|i| d2u[i] * theta_n[i] + du[i] * dth[i]).collect();
    Ok((e, rho))
}
