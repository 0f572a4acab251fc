//! Quasiparticle solutions of the spinor equations on a pairing background
//! Δ = ρ_Δ e^{iβ_Δ}, with components written as ψ_j = ρ_j e^{iφ_j}.
//!
//! Traveling backgrounds are functions of u = k x ∓ ω t ([`ArgConvention`]).
//! Under `Minus` the equation-consistent x-coefficients are
//! ρ₁: 1/(s+1), φ₁: −1/(s+1), ρ₂: 1/(1−s), φ₂: −1/(1−s) with s = ω/k;
//! under `Plus` swap s → −s. [`FROZEN_CONVENTION`] is the one that wins the
//! residual comparison in [`select_convention`] on the closed-form background.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{unwrap_phases, Spinor};
use crate::error::{Error, Result};
use crate::grid::{first_derivative4, SpaceTimeGrid};

/// Amplitudes at or below this fraction of the largest one are excluded from
/// the phase-equation norms.
pub const AMPLITUDE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposedState {
    pub rho1: SpaceTimeGrid,
    pub rho2: SpaceTimeGrid,
    pub phi1: SpaceTimeGrid,
    pub phi2: SpaceTimeGrid,
}

impl DecomposedState {
    pub fn new(rho1: SpaceTimeGrid, rho2: SpaceTimeGrid, phi1: SpaceTimeGrid, phi2: SpaceTimeGrid) -> Result<Self> {
        rho1.check_same_lattice(&rho2)?;
        rho1.check_same_lattice(&phi1)?;
        rho1.check_same_lattice(&phi2)?;
        if rho1.data.iter().chain(&rho2.data).any(|r| !(*r >= 0.0)) {
            return Err(Error::param("rho", "amplitudes must be non-negative"));
        }
        Ok(Self { rho1, rho2, phi1, phi2 })
    }

    /// Sample a spinor field `f(x, t)` and split it into moduli and phases.
    /// Phases are unwrapped along x in every row and along t in the first
    /// column.
    #[allow(clippy::too_many_arguments)]
    pub fn from_spinor_fn(
        nt: usize,
        nx: usize,
        dt: f64,
        dx: f64,
        t0: f64,
        x0: f64,
        f: impl Fn(f64, f64) -> Spinor,
    ) -> Self {
        let samples: Vec<Spinor> = (0..nt)
            .flat_map(|i| (0..nx).map(move |j| (t0 + i as f64 * dt, x0 + j as f64 * dx)))
            .map(|(t, x)| f(x, t))
            .collect();
        let grid = |data: Vec<f64>| SpaceTimeGrid {
            nt,
            nx,
            dt,
            dx,
            t0,
            x0,
            data,
        };
        let unwrap2d = |arg: &dyn Fn(&Spinor) -> f64| {
            let mut data = Vec::with_capacity(nt * nx);
            for row in samples.chunks(nx) {
                data.extend(unwrap_phases(&row.iter().map(arg).collect::<Vec<_>>()));
            }
            let col = unwrap_phases(&(0..nt).map(|i| data[i * nx]).collect::<Vec<_>>());
            for i in 0..nt {
                let shift = col[i] - data[i * nx];
                for v in &mut data[i * nx..(i + 1) * nx] {
                    *v += shift;
                }
            }
            grid(data)
        };
        Self {
            rho1: grid(samples.iter().map(|s| s.psi1.norm()).collect()),
            rho2: grid(samples.iter().map(|s| s.psi2.norm()).collect()),
            phi1: unwrap2d(&|s| s.psi1.arg()),
            phi2: unwrap2d(&|s| s.psi2.arg()),
        }
    }

    /// ψ at lattice point (t index, x index).
    pub fn spinor(&self, i: usize, j: usize) -> Spinor {
        Spinor::new(
            Complex64::from_polar(self.rho1.get(i, j), self.phi1.get(i, j)),
            Complex64::from_polar(self.rho2.get(i, j), self.phi2.get(i, j)),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposedResiduals {
    /// The four component equations in order: ρ₁, φ₁, ρ₂, φ₂.
    pub r: [SpaceTimeGrid; 4],
    /// Points where ρ₁ or ρ₂ vanishes; the φ residuals there are NaN.
    pub excluded: Vec<bool>,
}

impl DecomposedResiduals {
    /// Max |residual| per equation, skipping excluded points in the φ equations.
    pub fn norms(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (k, grid) in self.r.iter().enumerate() {
            let phase_eq = k % 2 == 1;
            out[k] = grid
                .data
                .iter()
                .zip(&self.excluded)
                .filter(|(_, &ex)| !(phase_eq && ex))
                .fold(0.0f64, |m, (v, _)| m.max(v.abs()));
        }
        out
    }

    pub fn max(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }
}

/// Pointwise residuals of
///
/// (∂t − ∂x)ρ₁ + cosβ ρ_Δ ρ₁ + m ρ₂ sin(φ₂−φ₁)
/// (∂t − ∂x)φ₁ − sinβ ρ_Δ − m (ρ₂/ρ₁) cos(φ₂−φ₁) + μ
/// (∂t + ∂x)ρ₂ − cosβ ρ_Δ ρ₂ − m ρ₁ sin(φ₂−φ₁)
/// (∂t + ∂x)φ₂ + sinβ ρ_Δ − m (ρ₁/ρ₂) cos(φ₂−φ₁) + μ
///
/// with fourth-order differences; grids need five points per axis.
pub fn decomposed_residuals(
    state: &DecomposedState,
    rho_delta: &SpaceTimeGrid,
    beta_delta: &SpaceTimeGrid,
    m: f64,
    mu: f64,
) -> Result<DecomposedResiduals> {
    let s = state;
    s.rho1.check_same_lattice(rho_delta)?;
    s.rho1.check_same_lattice(beta_delta)?;
    s.rho1.check_min_size(5)?;
    let d = |g: &SpaceTimeGrid| -> Result<(Vec<f64>, Vec<f64>)> { Ok((g.d_dt4()?.data, g.d_dx4()?.data)) };
    let (r1t, r1x) = d(&s.rho1)?;
    let (r2t, r2x) = d(&s.rho2)?;
    let (p1t, p1x) = d(&s.phi1)?;
    let (p2t, p2x) = d(&s.phi2)?;
    let scale = s.rho1.data.iter().chain(&s.rho2.data).fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = AMPLITUDE_EPS * scale;

    let n = s.rho1.data.len();
    let mut out: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut excluded = Vec::with_capacity(n);
    for k in 0..n {
        let (rho1, rho2) = (s.rho1.data[k], s.rho2.data[k]);
        let dphi = s.phi2.data[k] - s.phi1.data[k];
        let (sd, cd) = dphi.sin_cos();
        let (sb, cb) = beta_delta.data[k].sin_cos();
        let rd = rho_delta.data[k];
        let ex = rho1 <= floor || rho2 <= floor;
        excluded.push(ex);
        out[0].push(r1t[k] - r1x[k] + cb * rd * rho1 + m * rho2 * sd);
        out[2].push(r2t[k] + r2x[k] - cb * rd * rho2 - m * rho1 * sd);
        if ex {
            out[1].push(f64::NAN);
            out[3].push(f64::NAN);
        } else {
            out[1].push(p1t[k] - p1x[k] - sb * rd - m * (rho2 / rho1) * cd + mu);
            out[3].push(p2t[k] + p2x[k] + sb * rd - m * (rho1 / rho2) * cd + mu);
        }
    }
    let r = out.map(|data| SpaceTimeGrid {
        data,
        ..s.rho1.clone()
    });
    Ok(DecomposedResiduals { r, excluded })
}

/// Sign convention of the traveling argument u = k x ∓ ω t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArgConvention {
    /// u = k x − ω t
    Minus,
    /// u = k x + ω t
    Plus,
}

impl ArgConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArgConvention::Minus => "kx-wt",
            ArgConvention::Plus => "kx+wt",
        }
    }

    /// ∂_t u / ∂_x u in units of ω/k.
    fn time_sign(&self) -> f64 {
        match self {
            ArgConvention::Minus => -1.0,
            ArgConvention::Plus => 1.0,
        }
    }
}

pub const FROZEN_CONVENTION: ArgConvention = ArgConvention::Minus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientForm {
    /// ρ₁, φ₁: (ω/k − 1)⁻¹; ρ₂, φ₂: −(ω/k + 1)⁻¹.
    Printed,
    /// Coefficients that make the quadrature an exact solution for a
    /// background traveling in the chosen convention.
    Consistent,
}

/// Multipliers of ∫dx cosβ ρ_Δ (for ln ρ_j) and ∫dx sinβ ρ_Δ (for φ_j).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub rho1: f64,
    pub phi1: f64,
    pub rho2: f64,
    pub phi2: f64,
}

impl Coefficients {
    pub fn new(form: CoefficientForm, conv: ArgConvention, ratio1: f64, ratio2: f64) -> Result<Self> {
        let inv = |d: f64, which: &'static str| {
            if d == 0.0 {
                Err(Error::LightLike { which })
            } else {
                Ok(1.0 / d)
            }
        };
        Ok(match form {
            CoefficientForm::Printed => {
                let a = inv(ratio1 - 1.0, "psi1")?;
                let b = -inv(ratio2 + 1.0, "psi2")?;
                Self {
                    rho1: a,
                    phi1: a,
                    rho2: b,
                    phi2: b,
                }
            }
            CoefficientForm::Consistent => {
                let sg = conv.time_sign();
                let a = inv(1.0 - sg * ratio1, "psi1")?;
                let b = inv(1.0 + sg * ratio2, "psi2")?;
                Self {
                    rho1: a,
                    phi1: -a,
                    rho2: b,
                    phi2: -b,
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// ω/k of each component.
    pub ratio1: f64,
    pub ratio2: f64,
    pub convention: ArgConvention,
    pub form: CoefficientForm,
    /// ρ_j at the grid origin.
    pub c1: f64,
    pub c2: f64,
    /// φ_j at the grid origin.
    pub phi1_0: f64,
    pub phi2_0: f64,
}

impl QuadratureSpec {
    pub fn new(ratio1: f64, ratio2: f64, convention: ArgConvention, form: CoefficientForm) -> Self {
        Self {
            ratio1,
            ratio2,
            convention,
            form,
            c1: 1.0,
            c2: 1.0,
            phi1_0: 0.0,
            phi2_0: 0.0,
        }
    }
}

/// Cumulative trapezoid with the leading end correction −h²/12 (f'(b) − f'(a)),
/// anchored to zero at the first sample.
fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let d = first_derivative4(f, h);
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for j in 1..f.len() {
        acc += 0.5 * h * (f[j - 1] + f[j]);
        out.push(acc - h * h / 12.0 * (d[j] - d[0]));
    }
    out
}

/// Antiderivative in x of a field traveling with ∂_t = `tshift` ∂_x: the row
/// integral from x₀ plus the column integral along x₀ from t₀.
fn traveling_antiderivative(f: &SpaceTimeGrid, tshift: f64) -> SpaceTimeGrid {
    let col: Vec<f64> = (0..f.nt).map(|i| f.get(i, 0)).collect();
    let tcol = cumulative_integral(&col, f.dt);
    let mut data = Vec::with_capacity(f.data.len());
    for (i, row) in f.data.chunks(f.nx).enumerate() {
        let base = tshift * tcol[i];
        data.extend(cumulative_integral(row, f.dx).into_iter().map(|v| v + base));
    }
    SpaceTimeGrid { data, ..f.clone() }
}

/// ρ_j = c_j exp(a_j ∫dx cosβ ρ_Δ), φ_j = φ_j⁰ + b_j ∫dx sinβ ρ_Δ, with the
/// integrals anchored at the grid origin and continued in t along the
/// traveling direction of each component.
pub fn quadrature_solution(
    beta_delta: &SpaceTimeGrid,
    rho_delta: &SpaceTimeGrid,
    spec: &QuadratureSpec,
) -> Result<DecomposedState> {
    beta_delta.check_same_lattice(rho_delta)?;
    beta_delta.check_min_size(5)?;
    let co = Coefficients::new(spec.form, spec.convention, spec.ratio1, spec.ratio2)?;
    let cf = rho_delta.zip_with(beta_delta, |r, b| r * b.cos())?;
    let sf = rho_delta.zip_with(beta_delta, |r, b| r * b.sin())?;
    let sg = spec.convention.time_sign();
    let (pc1, ps1) = (
        traveling_antiderivative(&cf, sg * spec.ratio1),
        traveling_antiderivative(&sf, sg * spec.ratio1),
    );
    let (pc2, ps2) = (
        traveling_antiderivative(&cf, sg * spec.ratio2),
        traveling_antiderivative(&sf, sg * spec.ratio2),
    );
    Ok(DecomposedState {
        rho1: pc1.map(|v| spec.c1 * (co.rho1 * v).exp()),
        rho2: pc2.map(|v| spec.c2 * (co.rho2 * v).exp()),
        phi1: ps1.map(|v| spec.phi1_0 + co.phi1 * v),
        phi2: ps2.map(|v| spec.phi2_0 + co.phi2 * v),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConventionChoice {
    pub convention: ArgConvention,
    pub residual_minus: f64,
    pub residual_plus: f64,
}

/// Build the consistent-form quadrature under both conventions (m = μ = 0)
/// and keep the one with the smaller decomposed residual.
pub fn select_convention(
    rho_delta: &SpaceTimeGrid,
    beta_delta: &SpaceTimeGrid,
    ratio1: f64,
    ratio2: f64,
) -> Result<ConventionChoice> {
    let residual = |conv| -> Result<f64> {
        let spec = QuadratureSpec::new(ratio1, ratio2, conv, CoefficientForm::Consistent);
        let st = quadrature_solution(beta_delta, rho_delta, &spec)?;
        Ok(decomposed_residuals(&st, rho_delta, beta_delta, 0.0, 0.0)?.max())
    };
    let (rm, rp) = (residual(ArgConvention::Minus)?, residual(ArgConvention::Plus)?);
    Ok(ConventionChoice {
        convention: if rp < rm { ArgConvention::Plus } else { ArgConvention::Minus },
        residual_minus: rm,
        residual_plus: rp,
    })
}

/// Parameters of the closed-form quasiparticle. The background is
/// ρ_Δ = A_ρ cos θ + B_ρ sin θ, β_Δ = C_β with θ = κ(k_ρ x − ω_ρ t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiParams {
    pub c1: f64,
    pub c2: f64,
    pub k_phi1: f64,
    pub k_phi2: f64,
    pub a_rho: f64,
    pub b_rho: f64,
    pub kappa: f64,
    pub k_rho: f64,
    pub omega_rho: f64,
    pub c_beta: f64,
    /// ω/k entering the component prefactors; defaults to ω_ρ/k_ρ.
    pub ratio1: f64,
    pub ratio2: f64,
}

impl QuasiParams {
    /// κ = (m² + gρ₀²/2)/(ω_ρ² − k_ρ²).
    pub fn kappa_for(m_delta: f64, g_delta: f64, rho0: f64, omega_rho: f64, k_rho: f64) -> Result<f64> {
        let den = omega_rho * omega_rho - k_rho * k_rho;
        if den == 0.0 {
            return Err(Error::LightLike { which: "rho" });
        }
        Ok((m_delta * m_delta + 0.5 * g_delta * rho0 * rho0) / den)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c1: f64,
        c2: f64,
        k_phi1: f64,
        k_phi2: f64,
        a_rho: f64,
        b_rho: f64,
        k_rho: f64,
        omega_rho: f64,
        c_beta: f64,
        m_delta: f64,
        g_delta: f64,
        rho0: f64,
    ) -> Result<Self> {
        if k_rho == 0.0 {
            return Err(Error::param("k_rho", "must be nonzero"));
        }
        let kappa = Self::kappa_for(m_delta, g_delta, rho0, omega_rho, k_rho)?;
        if !(kappa.is_finite() && kappa != 0.0) {
            return Err(Error::param("kappa", "must be finite and nonzero"));
        }
        let p = Self {
            c1,
            c2,
            k_phi1,
            k_phi2,
            a_rho,
            b_rho,
            kappa,
            k_rho,
            omega_rho,
            c_beta,
            ratio1: omega_rho / k_rho,
            ratio2: omega_rho / k_rho,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_rho == 0.0 || !(self.kappa.is_finite() && self.kappa != 0.0) {
            return Err(Error::param("kappa", "need k_rho ≠ 0 and finite nonzero κ"));
        }
        for (r, which) in [(self.ratio1, "psi1"), (self.ratio2, "psi2")] {
            if r.abs() == 1.0 {
                return Err(Error::LightLike { which });
            }
        }
        Ok(())
    }

    fn theta(&self, x: f64, t: f64) -> f64 {
        self.kappa * (self.k_rho * x - self.omega_rho * t)
    }

    /// (ρ_Δ, β_Δ) at (x, t).
    pub fn background(&self, x: f64, t: f64) -> (f64, f64) {
        let (s, c) = self.theta(x, t).sin_cos();
        (self.a_rho * c + self.b_rho * s, self.c_beta)
    }

    /// (κ k_ρ)⁻¹ [A_ρ sin θ − B_ρ cos θ], the x-antiderivative of ρ_Δ.
    pub fn bracket(&self, x: f64, t: f64) -> f64 {
        let (s, c) = self.theta(x, t).sin_cos();
        (self.a_rho * s - self.b_rho * c) / (self.kappa * self.k_rho)
    }
}

/// Closed-form two-component quasiparticle. `Printed` evaluates the displayed
/// form: plane-wave phases k_{φ1}(x+t), k_{φ2}(x−t) and amplitude exponents
/// ±(ω/k ∓ 1)⁻¹ × bracket. `Consistent` uses the `Minus` coefficients and
/// keeps the cos C_β and sin C_β weights, which solves the m = μ = 0
/// equations exactly when the ratios equal ω_ρ/k_ρ.
pub fn quasiparticle_spinor(params: &QuasiParams, form: CoefficientForm, x: f64, t: f64) -> Result<Spinor> {
    params.validate()?;
    let co = Coefficients::new(form, ArgConvention::Minus, params.ratio1, params.ratio2)?;
    let br = params.bracket(x, t);
    let (sc, cc) = match form {
        CoefficientForm::Printed => (0.0, 1.0),
        CoefficientForm::Consistent => params.c_beta.sin_cos(),
    };
    let comp = |c: f64, k: f64, arg: f64, a: f64, b: f64| {
        Complex64::from_polar(c * (a * cc * br).exp(), k * arg + b * sc * br)
    };
    Ok(Spinor::new(
        comp(params.c1, params.k_phi1, x + t, co.rho1, co.phi1),
        comp(params.c2, params.k_phi2, x - t, co.rho2, co.phi2),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderPhases {
    /// β_Δ = beta_slope (x + t) + c_beta.
    pub beta_slope: f64,
    pub c_beta: f64,
    /// θ_N = theta_k (x + t) + theta_drift t.
    pub theta_k: f64,
    pub theta_drift: f64,
    /// Coefficient of t in θ_N's bracket; `None` when k_{φ1} + k_{φ2} = 0.
    pub theta_velocity: Option<f64>,
    /// (∂t² − ∂x²) β_Δ.
    pub efield: f64,
    /// Rate in t of β_Δ − ½(φ₁ − φ₂) with φ₁ = k_{φ1}(x+t), φ₂ = k_{φ2}(x−t).
    pub component_mismatch_rate: f64,
}

impl FirstOrderPhases {
    pub fn beta(&self, x: f64, t: f64) -> f64 {
        self.beta_slope * (x + t) + self.c_beta
    }

    pub fn theta(&self, x: f64, t: f64) -> f64 {
        self.theta_k * (x + t) + self.theta_drift * t
    }
}

pub fn first_order_phases(params: &QuasiParams) -> FirstOrderPhases {
    let ksum = params.k_phi1 + params.k_phi2;
    let drift = params.c_beta.sin() * params.a_rho;
    FirstOrderPhases {
        beta_slope: 0.5 * (params.k_phi1 - params.k_phi2),
        c_beta: params.c_beta,
        theta_k: 0.5 * ksum,
        theta_drift: drift,
        theta_velocity: (ksum != 0.0).then(|| 1.0 + 2.0 * drift / ksum),
        // affine in (x, t): both second derivatives vanish identically
        efield: 0.0,
        component_mismatch_rate: -params.k_phi2,
    }
}

/// Λ⁻¹ applied to (x, t) for rapidity η.
fn pull_back(eta: f64, x: f64, t: f64) -> (f64, f64) {
    let (c, s) = (eta.cosh(), eta.sinh());
    (c * x - s * t, c * t - s * x)
}

/// ψ_j(x) → e^{(−1)^j η_j} ψ_j(Λ_j⁻¹ x), independently for j = 1, 2.
pub fn component_boost<F>(f: F, eta1: f64, eta2: f64) -> impl Fn(f64, f64) -> Spinor
where
    F: Fn(f64, f64) -> Spinor,
{
    move |x, t| {
        let (x1, t1) = pull_back(eta1, x, t);
        let (x2, t2) = pull_back(eta2, x, t);
        Spinor::new(
            f(x1, t1).psi1 * (-eta1).exp(),
            f(x2, t2).psi2 * eta2.exp(),
        )
    }
}

/// Background seen by component `j` after [`component_boost`]: pulled back
/// through Λ_j, with ρ_Δ scaled by e^{+η} (j = 1) or e^{−η} (j = 2), the
/// factor picked up by ∂t ∓ ∂x.
pub fn boosted_background<B>(bg: B, eta: f64, component: usize) -> Result<impl Fn(f64, f64) -> (f64, f64)>
where
    B: Fn(f64, f64) -> (f64, f64),
{
    let weight = match component {
        1 => eta.exp(),
        2 => (-eta).exp(),
        _ => return Err(Error::param("component", "must be 1 or 2")),
    };
    Ok(move |x, t| {
        let (xp, tp) = pull_back(eta, x, t);
        let (rho, beta) = bg(xp, tp);
        (weight * rho, beta)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakLimitFields {
    pub r: f64,
    /// 1/(2r), the exponent of ρ_Δ.
    pub exponent: f64,
    /// 2r (1 − 2r)^{−1/2} S^{1/2} with S = (ω_β² − k_β²)/(ω_ρ² − k_ρ²).
    pub k: f64,
    pub rho: Vec<f64>,
    pub beta: Vec<f64>,
    pub rho_prime: Vec<f64>,
    pub beta_prime: Vec<f64>,
    /// k_β β' cosβ ρ + sinβ ρ'.
    pub efield: Vec<f64>,
    /// False where C K u ≤ 0 or u ≤ 0; the fields there are NaN.
    pub valid: Vec<bool>,
}

/// ρ_Δ = (C K u)^{1/(2r)}, β_Δ = K⁻¹ ln u on a single traveling coordinate u.
pub fn weak_limit_fields(
    omega_rho: f64,
    k_rho: f64,
    omega_beta: f64,
    k_beta: f64,
    c: f64,
    u: &[f64],
) -> Result<WeakLimitFields> {
    let wb = omega_beta * omega_beta - k_beta * k_beta;
    let wr = omega_rho * omega_rho - k_rho * k_rho;
    if wb == 0.0 {
        return Err(Error::LightLike { which: "beta" });
    }
    if wr == 0.0 {
        return Err(Error::LightLike { which: "rho" });
    }
    let r = (omega_beta * omega_rho - k_beta * k_rho) / wb;
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::NotClassicallyAllowed { r });
    }
    let s = wb / wr;
    if !(s > 0.0) {
        return Err(Error::NoRealBranch(format!("(ω_β² − k_β²)/(ω_ρ² − k_ρ²) = {s} ≤ 0")));
    }
    if c == 0.0 {
        return Err(Error::DegenerateLimit("C = 0 leaves β_Δ undefined".into()));
    }
    let k = 2.0 * r / (1.0 - 2.0 * r).sqrt() * s.sqrt();
    let exponent = 1.0 / (2.0 * r);
    let n = u.len();
    let mut out = WeakLimitFields {
        r,
        exponent,
        k,
        rho: Vec::with_capacity(n),
        beta: Vec::with_capacity(n),
        rho_prime: Vec::with_capacity(n),
        beta_prime: Vec::with_capacity(n),
        efield: Vec::with_capacity(n),
        valid: Vec::with_capacity(n),
    };
    for &ui in u {
        let base = c * k * ui;
        if !(base > 0.0 && ui > 0.0) {
            for v in [&mut out.rho, &mut out.beta, &mut out.rho_prime, &mut out.beta_prime, &mut out.efield] {
                v.push(f64::NAN);
            }
            out.valid.push(false);
            continue;
        }
        let rho = base.powf(exponent);
        let beta = ui.ln() / k;
        let rp = exponent * rho / ui;
        let bp = 1.0 / (k * ui);
        let (sb, cb) = beta.sin_cos();
        out.rho.push(rho);
        out.beta.push(beta);
        out.rho_prime.push(rp);
        out.beta_prime.push(bp);
        out.efield.push(k_beta * bp * cb * rho + sb * rp);
        out.valid.push(true);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lorentz_matrix, GammaRepresentation};
    use crate::kinematics::{plane_wave, KinematicState};

    fn grid(nt: usize, nx: usize, h: f64, f: impl Fn(f64, f64) -> f64) -> SpaceTimeGrid {
        SpaceTimeGrid::from_fn(nt, nx, h, h, 0.0, 0.0, f)
    }

    fn sample_params(c_beta: f64) -> QuasiParams {
        QuasiParams::new(1.2, 0.7, 0.4, -0.9, 0.3, 0.2, 1.5, 2.0, c_beta, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn constant_state_without_coupling() {
        let c = |v: f64| grid(7, 7, 0.1, move |_, _| v);
        let st = DecomposedState::new(c(1.3), c(0.4), c(0.2), c(-1.0)).unwrap();
        let res = decomposed_residuals(&st, &c(0.0), &c(0.8), 0.0, 0.0).unwrap();
        assert!(res.max() < 1e-13);
    }

    #[test]
    fn vacuum_plane_wave_reduces() {
        let (m, mu, p) = (1.3, 0.4, 0.7);
        // the free equations carry +μ in the decomposed form, so the
        // kinematic state takes −μ and ψ₂ flips sign to make φ₂ − φ₁ = π
        let state = KinematicState::on_shell(p, m, -mu);
        let pw = plane_wave(&state, GammaRepresentation::Hyperbolic).unwrap();
        let st = DecomposedState::from_spinor_fn(21, 21, 0.05, 0.05, 0.0, -0.5, |x, t| {
            let s = pw(x, t);
            Spinor::new(s.psi1, -s.psi2)
        });
        let z = grid(21, 21, 0.05, |_, _| 0.0);
        let res = decomposed_residuals(&st, &z, &z, m, mu).unwrap();
        assert!(res.max() < 1e-10, "{:?}", res.norms());
    }

    #[test]
    fn quadrature_constant_when_cos_vanishes() {
        let b = grid(6, 9, 0.1, |_, _| std::f64::consts::FRAC_PI_2);
        let r = grid(6, 9, 0.1, |t, x| 1.0 + x * t);
        let spec = QuadratureSpec::new(0.3, 0.3, ArgConvention::Minus, CoefficientForm::Printed);
        let st = quadrature_solution(&b, &r, &spec).unwrap();
        assert!(st.rho1.data.iter().chain(&st.rho2.data).all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn quadrature_matches_analytic_integral() {
        let (a, kap, k) = (0.6, 1.7, 1.0);
        let b = grid(5, 401, 0.005, |_, _| 0.0);
        let r = grid(5, 401, 0.005, |_, x| a * (kap * k * x).cos());
        let spec = QuadratureSpec::new(0.0, 0.0, ArgConvention::Minus, CoefficientForm::Printed);
        let st = quadrature_solution(&b, &r, &spec).unwrap();
        // ρ₁ exponent: (0 − 1)⁻¹ × A sin(κkx)/(κk)
        for j in 0..401 {
            let x = j as f64 * 0.005;
            let want = (-a * (kap * k * x).sin() / (kap * k)).exp();
            assert!((st.rho1.get(0, j) - want).abs() < 1e-11);
        }
    }

    #[test]
    fn quadrature_solves_equations() {
        let p = sample_params(0.3);
        let h = 0.004;
        let (nt, nx) = (101, 101);
        let rd = SpaceTimeGrid::from_fn(nt, nx, h, h, 0.0, 0.0, |t, x| p.background(x, t).0);
        let bd = SpaceTimeGrid::from_fn(nt, nx, h, h, 0.0, 0.0, |t, x| p.background(x, t).1);
        let s = p.omega_rho / p.k_rho;
        let choice = select_convention(&rd, &bd, s, s).unwrap();
        assert_eq!(choice.convention, FROZEN_CONVENTION);
        assert!(choice.residual_minus < 1e-8, "{choice:?}");
        assert!(choice.residual_plus > 1e-2);
        // the printed coefficients do not solve the amplitude equations
        let spec = QuadratureSpec::new(s, s, FROZEN_CONVENTION, CoefficientForm::Printed);
        let st = quadrature_solution(&bd, &rd, &spec).unwrap();
        let n = decomposed_residuals(&st, &rd, &bd, 0.0, 0.0).unwrap().norms();
        assert!(n[0] > 1e-2 && n[2] > 1e-2);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for form in [CoefficientForm::Printed, CoefficientForm::Consistent] {
            let p = sample_params(if form == CoefficientForm::Printed { 0.0 } else { 0.3 });
            let h = 0.01;
            let (t0, x0) = (0.2, -0.4);
            let rd = SpaceTimeGrid::from_fn(41, 81, h, h, t0, x0, |t, x| p.background(x, t).0);
            let bd = SpaceTimeGrid::from_fn(41, 81, h, h, t0, x0, |t, x| p.background(x, t).1);
            let origin = quasiparticle_spinor(&p, form, x0, t0).unwrap();
            let mut spec = QuadratureSpec::new(p.ratio1, p.ratio2, ArgConvention::Minus, form);
            spec.c1 = origin.psi1.norm();
            spec.c2 = origin.psi2.norm();
            let co = Coefficients::new(form, ArgConvention::Minus, p.ratio1, p.ratio2).unwrap();
            spec.phi1_0 = co.phi1 * p.c_beta.sin() * p.bracket(x0, t0);
            spec.phi2_0 = co.phi2 * p.c_beta.sin() * p.bracket(x0, t0);
            let st = quadrature_solution(&bd, &rd, &spec).unwrap();
            for i in 0..41 {
                for j in 0..81 {
                    let (t, x) = (rd.t(i), rd.x(j));
                    let cf = quasiparticle_spinor(&p, form, x, t).unwrap();
                    assert!((st.rho1.get(i, j) - cf.psi1.norm()).abs() < 1e-10);
                    assert!((st.rho2.get(i, j) - cf.psi2.norm()).abs() < 1e-10);
                    if form == CoefficientForm::Consistent {
                        let plane1 = Complex64::from_polar(1.0, p.k_phi1 * (x + t));
                        let plane2 = Complex64::from_polar(1.0, p.k_phi2 * (x - t));
                        let q = st.spinor(i, j);
                        assert!((q.psi1 * plane1 - cf.psi1).norm() < 1e-10);
                        assert!((q.psi2 * plane2 - cf.psi2).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_pure_phase_without_background() {
        let mut p = sample_params(0.5);
        p.a_rho = 0.0;
        p.b_rho = 0.0;
        let s = quasiparticle_spinor(&p, CoefficientForm::Printed, 0.3, 0.8).unwrap();
        assert!((s.psi1 - Complex64::from_polar(1.2, 0.4 * 1.1)).norm() < 1e-15);
        assert!((s.psi2 - Complex64::from_polar(0.7, -0.9 * -0.5)).norm() < 1e-15);
    }

    #[test]
    fn first_order_examples() {
        let mut p = sample_params(0.6);
        p.k_phi1 = 0.8;
        p.k_phi2 = 0.8;
        let f = first_order_phases(&p);
        assert_eq!(f.beta(3.0, -2.0), 0.6);
        let v = 1.0 + 2.0 * 0.6f64.sin() * p.a_rho / 1.6;
        assert!((f.theta(0.7, 1.1) - 0.8 * (0.7 + v * 1.1)).abs() < 1e-14);
        assert_eq!(f.efield, 0.0);
        p.a_rho = 0.0;
        assert_eq!(first_order_phases(&p).theta_velocity, Some(1.0));
        p.k_phi2 = -0.8;
        assert_eq!(first_order_phases(&p).theta_velocity, None);
    }

    #[test]
    fn diagonal_boost_is_spinor_boost() {
        let p = sample_params(0.2);
        let f = |x, t| quasiparticle_spinor(&p, CoefficientForm::Consistent, x, t).unwrap();
        let eta = 0.35;
        let b = component_boost(f, eta, eta);
        let s = lorentz_matrix(GammaRepresentation::Hyperbolic, -eta);
        let (x, t) = (0.4, -0.3);
        let (xp, tp) = pull_back(eta, x, t);
        assert!(b(x, t).dist(&s.apply(f(xp, tp))) < 1e-14);
        let only1 = component_boost(f, eta, 0.0);
        assert_eq!(only1(x, t).psi2, f(x, t).psi2);
    }

    #[test]
    fn boosted_solution_keeps_zero_residual() {
        let p = sample_params(0.3);
        let f = |x, t| quasiparticle_spinor(&p, CoefficientForm::Consistent, x, t).unwrap();
        let (e1, e2) = (0.4, -0.25);
        let boosted = component_boost(f, e1, e2);
        let h = 0.004;
        let st = DecomposedState::from_spinor_fn(61, 61, h, h, 0.0, 0.0, boosted);
        let bg = |x, t| p.background(x, t);
        let mut norms = [0.0; 4];
        for (comp, eta) in [(1, e1), (2, e2)] {
            let b = boosted_background(bg, eta, comp).unwrap();
            let rd = SpaceTimeGrid::from_fn(61, 61, h, h, 0.0, 0.0, |t, x| b(x, t).0);
            let bd = SpaceTimeGrid::from_fn(61, 61, h, h, 0.0, 0.0, |t, x| b(x, t).1);
            let n = decomposed_residuals(&st, &rd, &bd, 0.0, 0.0).unwrap().norms();
            let k = 2 * (comp - 1);
            norms[k] = n[k];
            norms[k + 1] = n[k + 1];
        }
        assert!(norms.iter().all(|v| *v < 1e-8), "{norms:?}");
    }

    #[test]
    fn weak_limit_exponent() {
        // r = (2·0.5 − 1·0.25)/(4 − 1) = 1/4
        let w = weak_limit_fields(0.5, 0.25, 2.0, 1.0, 0.3, &[1.0]).unwrap();
        assert!((w.r - 0.25).abs() < 1e-15);
        assert!((w.exponent - 2.0).abs() < 1e-15);
        assert!(matches!(
            weak_limit_fields(0.5, 0.25, 2.0, 1.0, 0.0, &[1.0]),
            Err(Error::DegenerateLimit(_))
        ));
        let w = weak_limit_fields(0.5, 0.25, 2.0, 1.0, 0.3, &[-1.0, 0.0, 2.0]).unwrap();
        assert_eq!(w.valid, vec![false, false, true]);
    }

    #[test]
    fn weak_limit_values_against_direct_formula() {
        let (wr, kr, wb, kb, c) = (0.8, 0.5, 2.0, 1.0, 0.3);
        let u = [0.5, 3.0, 40.0];
        let w = weak_limit_fields(wr, kr, wb, kb, c, &u).unwrap();
        let r: f64 = (wb * wr - kb * kr) / (wb * wb - kb * kb);
        let lead = 2.0 * r / (1.0 - 2.0 * r).sqrt() * ((wb * wb - kb * kb) / (wr * wr - kr * kr)).sqrt();
        let pw = (wb * wb - kb * kb) / (2.0 * (wb * wr - kb * kr));
        for (i, &ui) in u.iter().enumerate() {
            assert!((w.rho[i] - (c * lead * ui).powf(pw)).abs() < 1e-12 * w.rho[i]);
            assert!((w.beta[i] - ui.ln() / lead).abs() < 1e-14);
            let h = 1e-5 * ui;
            let f = |v: f64| (c * lead * v).powf(pw);
            let g = |v: f64| v.ln() / lead;
            let rp = (f(ui + h) - f(ui - h)) / (2.0 * h);
            let bp = (g(ui + h) - g(ui - h)) / (2.0 * h);
            let e = kb * bp * w.beta[i].cos() * w.rho[i] + w.beta[i].sin() * rp;
            assert!((w.efield[i] - e).abs() < 1e-6 * w.rho[i]);
        }
    }
}
