//! In-medium Dirac problem with uniform condensates.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexMatrix2, Spinor, SpinorField};
use crate::error::{Error, Result};
use crate::kinematics::KinematicState;

pub type Matrix4 = [[f64; 4]; 4];

/// Mean-field background values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensateSet {
    pub rho: f64,
    pub sigma: f64,
    pub delta: Complex64,
    pub delta_bar: Complex64,
}

impl CondensateSet {
    /// Build a set with `delta_bar = -conj(delta)`.
    pub fn new(rho: f64, sigma: f64, delta: Complex64) -> Self {
        Self {
            rho,
            sigma,
            delta,
            delta_bar: -delta.conj(),
        }
    }

    /// Build a set from a real conjugate difermion value.
    pub fn with_real_delta_bar(rho: f64, sigma: f64, delta_bar: f64) -> Self {
        Self::new(rho, sigma, Complex64::new(-delta_bar, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EPair {
    pub e_plus: f64,
    pub e_minus: f64,
}

impl EPair {
    pub fn new(energy: f64, momentum: f64, mu: f64) -> Self {
        Self {
            e_plus: energy + mu + momentum,
            e_minus: energy + mu - momentum,
        }
    }

    pub fn from_state(state: &KinematicState) -> Self {
        Self::new(state.energy, state.momentum, state.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedBoost {
    pub eta: f64,
    pub zeta: f64,
    pub eta_prime: f64,
}

/// Entries of the Fourier system: s = σ − m, a = E₋ + ReΔ, b = E₊ − ReΔ, c = ImΔ.
#[derive(Debug, Clone, Copy)]
struct Entries {
    s: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl Entries {
    fn new(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> Self {
        let ep = EPair::new(energy, p, mu);
        Self {
            s: sigma - m,
            a: ep.e_minus + delta.re,
            b: ep.e_plus - delta.re,
            c: delta.im,
        }
    }

    /// The complex 2×2 whose realification is the 4×4 system.
    fn complex_block(&self) -> ComplexMatrix2 {
        ComplexMatrix2::new(
            self.s.into(),
            Complex64::new(self.a, -self.c),
            Complex64::new(self.b, self.c),
            self.s.into(),
        )
    }

    /// Re det of the complex block; changes sign across every real root.
    fn signed_det(&self) -> f64 {
        self.s * self.s - self.a * self.b - self.c * self.c
    }

    fn scale(&self) -> f64 {
        self.s.abs().max(self.a.abs()).max(self.b.abs()).max(self.c.abs()).max(1.0)
    }
}

/// Real 4×4 system acting on (Re ψ̃₁, Im ψ̃₁, Re ψ̃₂, Im ψ̃₂).
pub fn fourier_matrix(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> Matrix4 {
    let Entries { s, a, b, c } = Entries::new(energy, p, mu, sigma, m, delta);
    [
        [s, 0.0, a, c],
        [0.0, s, -c, a],
        [b, -c, s, 0.0],
        [c, b, 0.0, s],
    ]
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant4(m: &Matrix4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for k in 0..4 {
        let pivot = (k..4)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap_or(k);
        if a[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

pub fn apply4(m: &Matrix4, v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
    out
}

/// The displayed scalar dispersion condition, evaluated literally.
pub fn printed_dispersion_condition(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> f64 {
    let Entries { s, a, b, c } = Entries::new(energy, p, mu, sigma, m, delta);
    let (s2, c2) = (s * s, c * c);
    s2 - 2.0 * s2 * c2 + a * a * c2 + c2 * c2 - 2.0 * s2 * a * b + a * a * b * b + c2 * b * b
}

/// Matrix determinant and the printed condition at the same point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionReport {
    pub determinant: f64,
    pub printed_condition: f64,
}

pub fn dispersion_report(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> DispersionReport {
    DispersionReport {
        determinant: determinant4(&fourier_matrix(energy, p, mu, sigma, m, delta)),
        printed_condition: printed_dispersion_condition(energy, p, mu, sigma, m, delta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    /// Explicit E-window; `None` selects the default around −μ.
    pub window: Option<(f64, f64)>,
    pub brackets: usize,
    pub dedup_tol: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self {
            window: None,
            brackets: 4096,
            dedup_tol: 1e-9,
        }
    }
}

impl RootSearch {
    pub fn default_window(p: f64, mu: f64, m: f64, delta: Complex64) -> (f64, f64) {
        let w = 10.0 * m.abs().max(delta.norm()).max(p.abs()) + 1.0;
        (-mu - w, -mu + w)
    }
}

/// Real roots of det fourier_matrix in E with the default search settings.
pub fn dispersion_solve(p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> Vec<f64> {
    dispersion_solve_with(p, mu, sigma, m, delta, &RootSearch::default())
}

pub fn dispersion_solve_with(p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64, search: &RootSearch) -> Vec<f64> {
    let (lo, hi) = search
        .window
        .unwrap_or_else(|| RootSearch::default_window(p, mu, m, delta));
    let n = search.brackets.max(1);
    let h = (hi - lo) / n as f64;
    let g = |e: f64| Entries::new(e, p, mu, sigma, m, delta).signed_det();

    let mut roots: Vec<f64> = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let e0 = lo + h * i as f64;
            let e1 = if i + 1 == n { hi } else { lo + h * (i + 1) as f64 };
            let (g0, g1) = (g(e0), g(e1));
            if g0 == 0.0 {
                return Some(e0);
            }
            if i + 1 == n && g1 == 0.0 {
                return Some(e1);
            }
            (g0 * g1 < 0.0).then(|| bisect(g, e0, e1, g0))
        })
        .filter(|&e| {
            let en = Entries::new(e, p, mu, sigma, m, delta);
            let det = determinant4(&fourier_matrix(e, p, mu, sigma, m, delta));
            det.abs() <= 1e-9 * en.scale().powi(4).min(1e6)
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= search.dedup_tol);
    roots
}

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Closed-form Fourier components (ψ̃₁, ψ̃₂) with ψ̃₂ normalized to start at 1.
///
/// At real dispersion roots the common denominator vanishes together with
/// the numerators (roots require ImΔ = 0 or E₋ + ReΔ = E₊ − ReΔ); there the
/// limiting value ψ̃₁ = −(E₋ + ReΔ − i ImΔ)/(σ − m), ψ̃₂ = 1 is returned.
pub fn fourier_components(
    energy: f64,
    p: f64,
    mu: f64,
    sigma: f64,
    m: f64,
    delta: Complex64,
) -> Result<(Complex64, Complex64)> {
    let en = Entries::new(energy, p, mu, sigma, m, delta);
    let Entries { s, a, b, c } = en;
    let scale = en.scale();
    if s.abs() <= 1e-14 * scale {
        return Err(Error::DegenerateComponents { denominator: s });
    }
    let d = en.signed_det();
    let tol = 1e-10 * scale * scale;
    if d.abs() <= tol {
        let removable = c.abs() <= 1e-12 * scale || (a - b).abs() <= 1e-12 * scale;
        if removable {
            return Ok((Complex64::new(-a, c) / s, Complex64::new(1.0, 0.0)));
        }
        return Err(Error::DegenerateComponents { denominator: s * d });
    }
    let den = s * d;
    let re1 = (-s * s * a + a * a * b + c * c * b) / den;
    let im1 = c * (s * s - b * b - c * c) / den;
    let im2 = c * (a - b) / d;
    Ok((Complex64::new(re1, im1), Complex64::new(1.0, im2)))
}

/// ‖M·v‖ for the realified component vector.
pub fn kernel_residual(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64, comps: (Complex64, Complex64)) -> f64 {
    let v = [comps.0.re, comps.0.im, comps.1.re, comps.1.im];
    let r = apply4(&fourier_matrix(energy, p, mu, sigma, m, delta), v);
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// The complex 2×2 form of the Fourier system.
pub fn fourier_block(energy: f64, p: f64, mu: f64, sigma: f64, m: f64, delta: Complex64) -> ComplexMatrix2 {
    Entries::new(energy, p, mu, sigma, m, delta).complex_block()
}

pub fn dressed_boost(state: &KinematicState, delta_bar: f64) -> Result<DressedBoost> {
    let ep = EPair::from_state(state);
    let num = ep.e_plus + delta_bar;
    let den = ep.e_minus - delta_bar;
    if num <= 0.0 || den <= 0.0 || ep.e_plus <= 0.0 || ep.e_minus <= 0.0 {
        return Err(Error::BoostDomain(format!(
            "need E+ + Δ̄ > 0 and E- − Δ̄ > 0, got {num} and {den}"
        )));
    }
    let eta = 0.5 * (ep.e_plus / ep.e_minus).ln();
    let eta_prime = 0.5 * (num / den).ln();
    let zeta = 0.5 * ((1.0 + delta_bar / ep.e_plus) / (1.0 - delta_bar / ep.e_minus)).ln();
    Ok(DressedBoost { eta, zeta, eta_prime })
}

/// Plane wave dressed by a uniform real conjugate difermion background.
pub fn dressed_plane_wave(state: &KinematicState, delta_bar: f64) -> Result<SpinorField> {
    let boost = dressed_boost(state, delta_bar)?;
    let amp = dressed_amplitude(boost.eta_prime);
    let (p, e) = (state.momentum, state.energy);
    Ok(Box::new(move |x, t| amp.scale(Complex64::from_polar(1.0, p * x - e * t))))
}

pub fn dressed_amplitude(eta_prime: f64) -> Spinor {
    Spinor::real((-eta_prime / 2.0).exp(), (eta_prime / 2.0).exp())
}

/// Momentum-space operator of the mean-field Dirac equation (hyperbolic
/// representation, real Δ̄) acting on the plane-wave amplitude.
pub fn modified_dirac_operator(state: &KinematicState, sigma: f64, delta_bar: f64) -> ComplexMatrix2 {
    let w = state.energy + state.mu;
    let pp = state.momentum + delta_bar;
    let me = state.mass - sigma;
    ComplexMatrix2::from_real(-me, w - pp, w + pp, -me)
}

/// ρ = 2|φ|² cosh ζ', σ = 2|φ|², Δ = −2φ² sinh ζ', Δ̄ = 2φ*² sinh ζ'.
pub fn condensates_from_parameters(phi: Complex64, zeta_prime: f64) -> CondensateSet {
    let mag2 = phi.norm_sqr();
    let sh = zeta_prime.sinh();
    CondensateSet {
        rho: 2.0 * mag2 * zeta_prime.cosh(),
        sigma: 2.0 * mag2,
        delta: -2.0 * phi * phi * sh,
        delta_bar: 2.0 * phi.conj() * phi.conj() * sh,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CondensateInversion {
    pub phi_magnitude: f64,
    pub zeta_prime: f64,
    /// Both signs of φ = ±sqrt(σ/2).
    pub phi_branches: [f64; 2],
}

pub fn invert_condensates(set: &CondensateSet) -> Result<CondensateInversion> {
    let CondensateSet {
        rho,
        sigma,
        delta_bar,
        ..
    } = *set;
    let scale = rho.abs().max(delta_bar.norm()).max(sigma.abs()).max(1e-300);
    if delta_bar.im.abs() > 1e-12 * scale {
        return Err(Error::NoRealBranch(format!("Δ̄ = {delta_bar} is not real")));
    }
    let db = delta_bar.re;
    if rho <= db.abs() {
        return Err(Error::NoRealBranch(format!("ρ = {rho} ≤ |Δ̄| = {}", db.abs())));
    }
    if sigma <= 0.0 {
        return Err(Error::param("sigma", "must be positive"));
    }
    let mismatch = rho * rho - db * db - sigma * sigma;
    if mismatch.abs() > 1e-10 * scale * scale {
        return Err(Error::param("sigma", format!("ρ² − Δ̄² − σ² = {mismatch:e} ≠ 0")));
    }
    let phi = (sigma / 2.0).sqrt();
    Ok(CondensateInversion {
        phi_magnitude: phi,
        zeta_prime: ((rho + db) / sigma).ln(),
        phi_branches: [phi, -phi],
    })
}
