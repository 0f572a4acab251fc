//! Spin-charge factorization of the dressed boost.
//!
//! The dressed boost `e^{η'} = sqrt((E₊ + Δ̄)/(E₋ − Δ̄))` splits into a
//! kinematic rapidity, a background rapidity shift, a magnitude factor and a
//! phase: `e^{η'} = e^η · e^ζ · φ · e^{iβ}`. With `R = Re Δ̄`, `I = Im Δ̄`,
//!
//! ```text
//! β = ½ [atan(I/(E₊ + R)) + atan(I/(E₋ − R))]
//! ```
//!
//! which is the half-argument of the quotient. [`beta_as_printed`] returns the
//! variant with a minus between the two arctangents; it reconstructs the
//! quotient only when `I = 0` or `E₊ + R = −(E₋ − R)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{unwrap_phases, Spinor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizedBoost {
    pub eta: f64,
    pub zeta: f64,
    pub phi_mag: f64,
    pub beta: f64,
}

impl FactorizedBoost {
    pub const IDENTITY: Self = Self {
        eta: 0.0,
        zeta: 0.0,
        phi_mag: 1.0,
        beta: 0.0,
    };

    /// e^η · e^ζ · φ · e^{iβ}
    pub fn product(&self) -> Complex64 {
        Complex64::from_polar((self.eta + self.zeta).exp() * self.phi_mag, self.beta)
    }
}

fn check_domain(e_plus: f64, e_minus: f64, delta_bar: Complex64) -> Result<()> {
    if !(e_plus > 0.0 && e_minus > 0.0) {
        return Err(Error::FactorizationDomain(format!(
            "need E+ > 0 and E- > 0, got {e_plus} and {e_minus}"
        )));
    }
    if !(e_minus - delta_bar.re > 0.0 && e_plus + delta_bar.re > 0.0) {
        return Err(Error::FactorizationDomain(format!(
            "need E- − ReΔ̄ > 0 and E+ + ReΔ̄ > 0, got {} and {}",
            e_minus - delta_bar.re,
            e_plus + delta_bar.re
        )));
    }
    Ok(())
}

pub fn factorize(e_plus: f64, e_minus: f64, delta_bar: Complex64) -> Result<FactorizedBoost> {
    check_domain(e_plus, e_minus, delta_bar)?;
    let (r, i) = (delta_bar.re, delta_bar.im);
    let up = e_plus + r;
    let dn = e_minus - r;
    let eta = 0.5 * (e_plus / e_minus).ln();
    let zeta = 0.5 * ((1.0 + r / e_plus) / (1.0 - r / e_minus)).ln();
    let (phi_mag, beta) = if i == 0.0 {
        (1.0, 0.0)
    } else {
        let ratio = (1.0 + (i / up).powi(2)) / (1.0 + (i / dn).powi(2));
        (ratio.sqrt().sqrt(), 0.5 * ((i / up).atan() + (i / dn).atan()))
    };
    Ok(FactorizedBoost {
        eta,
        zeta,
        phi_mag,
        beta,
    })
}

/// Half-difference of the arctangents (the alternative sign convention).
pub fn beta_as_printed(e_plus: f64, e_minus: f64, delta_bar: Complex64) -> f64 {
    let (r, i) = (delta_bar.re, delta_bar.im);
    0.5 * ((i / (e_plus + r)).atan() - (i / (e_minus - r)).atan())
}

/// Principal complex square root of (E₊ + Δ̄)/(E₋ − Δ̄).
pub fn direct_dressed_boost(e_plus: f64, e_minus: f64, delta_bar: Complex64) -> Complex64 {
    ((e_plus + delta_bar) / (e_minus - delta_bar)).sqrt()
}

/// |product of factors − direct square root|.
pub fn reconstruction_error(e_plus: f64, e_minus: f64, delta_bar: Complex64, f: &FactorizedBoost) -> f64 {
    (f.product() - direct_dressed_boost(e_plus, e_minus, delta_bar)).norm()
}

/// Continuous β along a parameter sweep.
pub fn unwrap_betas(betas: &[f64]) -> Vec<f64> {
    unwrap_phases(betas)
}

/// ψ'_± = e^{∓ζ/2} e^{∓iβ/2} φ^{∓1/2} ψ_±
pub fn dressed_components(f: &FactorizedBoost, base: Spinor) -> Spinor {
    let up = Complex64::from_polar((-f.zeta / 2.0).exp() / f.phi_mag.sqrt(), -f.beta / 2.0);
    let dn = Complex64::from_polar((f.zeta / 2.0).exp() * f.phi_mag.sqrt(), f.beta / 2.0);
    Spinor::new(up * base.psi1, dn * base.psi2)
}

/// Deep-material, large-momentum form √ρ e^{iθ_N} (Δ̄/E₊)^{±1/2}.
pub fn large_p_limit(delta_bar: Complex64, e_plus: f64, rho: f64, theta_n: f64) -> Result<Spinor> {
    if delta_bar.norm() == 0.0 {
        return Err(Error::DegenerateLimit("Δ̄ = 0 has no large-momentum limit".into()));
    }
    if e_plus <= 0.0 || rho < 0.0 {
        return Err(Error::param("e_plus", "need E+ > 0 and ρ ≥ 0"));
    }
    let z = (delta_bar / e_plus).sqrt();
    let g = Complex64::from_polar(rho.sqrt(), theta_n);
    Ok(Spinor::new(g * z, g / z))
}

/// Leading small-momentum form of the dressed components.
pub fn small_p_expansion(d1: f64, q_delta: f64, a1: f64, q_beta: f64, rho0: f64, c1: f64, p: f64) -> Result<Spinor> {
    let x = d1 * q_delta / rho0;
    if !(rho0 > 0.0) || x.abs() >= 1.0 {
        return Err(Error::param("q_delta", format!("need |d1 q_Δ / ρ₀| < 1, got {x}")));
    }
    let k = ((1.0 + x) / (1.0 - x)).sqrt();
    let g = Complex64::from_polar(rho0.sqrt(), c1 * p);
    let ph = a1 * q_beta / 2.0;
    Ok(Spinor::new(
        g * Complex64::from_polar(1.0 / k, -ph),
        g * Complex64::from_polar(k, ph),
    ))
}

/// Φ = e^{iθ} · diag(e^{−η/2}, e^{η/2}) · diag(φ^{1/2}, φ^{−1/2}) · diag(e^{−iβ/2}, e^{iβ/2}) · (1,1)/√2
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeField {
    pub phi1: Complex64,
    pub phi2: Complex64,
}

/// χ = (e^{−ζ/2}, e^{ζ/2})/√2, optionally carrying part of the internal
/// SU(2) phase as diag(e^{−iα/2}, e^{iα/2}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinField {
    pub chi1: f64,
    pub chi2: f64,
    pub internal_phase: f64,
}

pub fn charge_field(theta: f64, eta: f64, phi_mag: f64, beta: f64) -> Result<ChargeField> {
    if !(phi_mag > 0.0) {
        return Err(Error::param("phi_mag", "must be positive"));
    }
    let n = std::f64::consts::FRAC_1_SQRT_2;
    let u = Complex64::from_polar(1.0, theta);
    let s = phi_mag.sqrt();
    Ok(ChargeField {
        phi1: u * (-eta / 2.0).exp() * s * Complex64::from_polar(n, -beta / 2.0),
        phi2: u * (eta / 2.0).exp() / s * Complex64::from_polar(n, beta / 2.0),
    })
}

pub fn spin_field(zeta: f64) -> SpinField {
    spin_field_with_phase(zeta, 0.0)
}

pub fn spin_field_with_phase(zeta: f64, internal_phase: f64) -> SpinField {
    let n = std::f64::consts::FRAC_1_SQRT_2;
    SpinField {
        chi1: (-zeta / 2.0).exp() * n,
        chi2: (zeta / 2.0).exp() * n,
        internal_phase,
    }
}

/// ψ = diag(√2 χ) Φ
pub fn compose(spin: &SpinField, charge: &ChargeField) -> Spinor {
    let r2 = std::f64::consts::SQRT_2;
    let a = spin.internal_phase / 2.0;
    Spinor::new(
        Complex64::from_polar(r2 * spin.chi1, -a) * charge.phi1,
        Complex64::from_polar(r2 * spin.chi2, a) * charge.phi2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_limit() {
        let f = factorize(2.0, 0.5, c(0.0, 0.0)).unwrap();
        assert_eq!((f.zeta, f.phi_mag, f.beta), (0.0, 1.0, 0.0));
        assert_eq!(f.eta, 0.5 * 4f64.ln());
    }

    #[test]
    fn real_gap_example() {
        let f = factorize(2.0, 0.5, c(0.25, 0.0)).unwrap();
        assert!((f.eta.exp() - 2.0).abs() < 1e-15);
        assert!((f.zeta.exp() - 1.5).abs() < 1e-15);
        assert_eq!((f.phi_mag, f.beta), (1.0, 0.0));
    }

    #[test]
    fn complex_gap_reconstructs_principal_root() {
        let d = c(0.25, 0.1);
        let f = factorize(2.0, 0.5, d).unwrap();
        let direct = (c(2.25, 0.1) / c(0.25, -0.1)).sqrt();
        assert!((f.product() - direct).norm() < 1e-12);
        let mut printed = f;
        printed.beta = beta_as_printed(2.0, 0.5, d);
        assert!((printed.product() - direct).norm() > 1e-3);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(factorize(2.0, 0.5, c(0.6, 0.0)), Err(Error::FactorizationDomain(_))));
        assert!(matches!(factorize(-1.0, 0.5, c(0.0, 0.0)), Err(Error::FactorizationDomain(_))));
    }

    #[test]
    fn dressed_component_examples() {
        let base = Spinor::real(1.0, 1.0);
        assert_eq!(dressed_components(&FactorizedBoost::IDENTITY, base), base);
        let f = FactorizedBoost {
            zeta: 2.0 * 2f64.ln(),
            ..FactorizedBoost::IDENTITY
        };
        let d = dressed_components(&f, base);
        assert!(d.dist(&Spinor::real(0.5, 2.0)) < 1e-15);
    }

    #[test]
    fn large_p_examples() {
        let s = large_p_limit(c(2.0, 0.0), 100.0, 3.0, 0.0).unwrap();
        assert_eq!(s.psi1.im, 0.0);
        assert!(((s.psi1 * s.psi2).norm() - 3.0).abs() < 1e-14);
        assert!(matches!(large_p_limit(c(0.0, 0.0), 1.0, 1.0, 0.0), Err(Error::DegenerateLimit(_))));
    }

    #[test]
    fn small_p_examples() {
        let s = small_p_expansion(1.0, 0.0, 1.0, 0.0, 2.0, 0.5, 0.0).unwrap();
        assert_eq!(s.psi1, s.psi2);
        assert!((s.psi1.re - 2f64.sqrt()).abs() < 1e-15);
        let s = small_p_expansion(0.6, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(s.dist(&Spinor::real(0.5, 2.0)) < 1e-15);
        assert!(((s.psi1 * s.psi2).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn group_product_trivial_and_global_phase() {
        let n = std::f64::consts::FRAC_1_SQRT_2;
        let phi = charge_field(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!((phi.phi1, phi.phi2), (c(n, 0.0), c(n, 0.0)));
        let chi = spin_field(0.0);
        assert_eq!((chi.chi1, chi.chi2), (n, n));
        let psi = compose(&chi, &phi);
        assert!(psi.dist(&Spinor::real(n, n)) < 1e-15);
        let rot = charge_field(std::f64::consts::FRAC_PI_2, 0.0, 1.0, 0.0).unwrap();
        assert!((rot.phi1 - c(0.0, n)).norm() < 1e-15);
        let psi_rot = compose(&chi, &rot);
        assert!((psi_rot.psi1.norm() - psi.psi1.norm()).abs() < 1e-15);
    }

    #[test]
    fn beta_sweep_unwraps() {
        let raw = [3.0, -3.0, -2.9];
        let u = unwrap_betas(&raw);
        assert!((u[1] - (2.0 * std::f64::consts::PI - 3.0)).abs() < 1e-12);
    }
}
