//! Free-particle kinematics: dispersion, boost parametrizations, the
//! momentum-space Dirac operator and plane-wave solutions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexMatrix2, GammaRepresentation, Spinor, SpinorField};
use crate::error::{Error, Result};

/// Relative tolerance for the mass-shell check.
pub const ON_SHELL_TOL: f64 = 1e-9;

/// Single-particle momentum-space configuration (natural units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub energy: f64,
    pub momentum: f64,
    pub mass: f64,
    pub mu: f64,
}

impl KinematicState {
    pub fn new(energy: f64, momentum: f64, mass: f64, mu: f64) -> Self {
        Self {
            energy,
            momentum,
            mass,
            mu,
        }
    }

    /// Positive-energy on-shell state.
    pub fn on_shell(momentum: f64, mass: f64, mu: f64) -> Self {
        let (_, e) = free_dispersion(momentum, mass, mu);
        Self::new(e, momentum, mass, mu)
    }

    /// State with rapidity η: E + μ = m cosh η, p = m sinh η.
    pub fn from_rapidity(eta: f64, mass: f64, mu: f64) -> Self {
        Self::new(mass * eta.cosh() - mu, mass * eta.sinh(), mass, mu)
    }

    /// E₊ = E + μ + p.
    pub fn e_plus(&self) -> f64 {
        self.energy + self.mu + self.momentum
    }

    /// E₋ = E + μ − p.
    pub fn e_minus(&self) -> f64 {
        self.energy + self.mu - self.momentum
    }

    /// (E + μ)² − p² − m²
    pub fn shell_residual(&self) -> f64 {
        let w = self.energy + self.mu;
        w * w - self.momentum * self.momentum - self.mass * self.mass
    }

    /// (E − μ)² − p² − m², the shell of the complex representation.
    pub fn complex_shell_residual(&self) -> f64 {
        let w = self.energy - self.mu;
        w * w - self.momentum * self.momentum - self.mass * self.mass
    }

    fn shell_scale(&self) -> f64 {
        let w = (self.energy.abs() + self.mu.abs()).powi(2);
        w.max(self.momentum * self.momentum)
            .max(self.mass * self.mass)
            .max(1.0)
    }

    fn check_shell(&self, residual: f64) -> Result<()> {
        if residual.abs() > ON_SHELL_TOL * self.shell_scale() {
            return Err(Error::OffShell { residual });
        }
        Ok(())
    }
}

/// E = −μ ± sqrt(p² + m²), ascending.
pub fn free_dispersion(p: f64, m: f64, mu: f64) -> (f64, f64) {
    let w = p.hypot(m);
    (-mu - w, -mu + w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParametrizationKind {
    Rapidity,
    TrigAngle,
    ComplexAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoostParametrization {
    /// cosh η = (E+μ)/m, sinh η = p/m.
    Rapidity(f64),
    /// cos φ = m/(E+μ), sin φ = p/(E+μ).
    TrigAngle(f64),
    /// cos φ = m/(E−μ), sin φ = p/(E−μ).
    ComplexAngle(f64),
}

impl BoostParametrization {
    pub fn value(&self) -> f64 {
        match *self {
            Self::Rapidity(v) | Self::TrigAngle(v) | Self::ComplexAngle(v) => v,
        }
    }
}

pub fn parametrize(state: &KinematicState, which: ParametrizationKind) -> Result<BoostParametrization> {
    let KinematicState {
        energy: e,
        momentum: p,
        mass: m,
        mu,
    } = *state;
    match which {
        ParametrizationKind::Rapidity => {
            state.check_shell(state.shell_residual())?;
            if m <= 0.0 {
                return Err(Error::MassNormalizedUndefined { mass: m });
            }
            if e + mu <= 0.0 {
                return Err(Error::param("energy", "rapidity needs the positive branch E + μ > 0"));
            }
            Ok(BoostParametrization::Rapidity(
                0.5 * (state.e_plus() / state.e_minus()).ln(),
            ))
        }
        ParametrizationKind::TrigAngle => {
            state.check_shell(state.shell_residual())?;
            if m <= 0.0 {
                return Err(Error::MassNormalizedUndefined { mass: m });
            }
            Ok(BoostParametrization::TrigAngle(p.atan2(m)))
        }
        ParametrizationKind::ComplexAngle => {
            state.check_shell(state.complex_shell_residual())?;
            if m <= 0.0 {
                return Err(Error::MassNormalizedUndefined { mass: m });
            }
            Ok(BoostParametrization::ComplexAngle(p.atan2(m)))
        }
    }
}

/// Rebuild (E, p) from a rapidity at fixed m and μ.
pub fn reconstruct(eta: f64, mass: f64, mu: f64) -> KinematicState {
    KinematicState::from_rapidity(eta, mass, mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorForm {
    /// [[E+μ+p, −m], [−m, E+μ−p]]
    Linear,
    /// Linear / m = [[e^η, −1], [−1, e^−η]]
    Hyperbolic,
    /// Linear / (E+μ) = [[1+sin φ, −cos φ], [−cos φ, 1−sin φ]]
    Trigonometric,
    /// Complex-representation operator [[−(m−ip), E−μ], [E−μ, −(m+ip)]]
    ComplexLinear,
    /// ComplexLinear / (−(E−μ)) = [[e^−iφ, −1], [−1, e^iφ]]
    ComplexTrig,
}

pub fn dirac_operator(state: &KinematicState, form: OperatorForm) -> Result<ComplexMatrix2> {
    let KinematicState {
        energy: e,
        momentum: p,
        mass: m,
        mu,
    } = *state;
    match form {
        OperatorForm::Linear => Ok(ComplexMatrix2::from_real(e + mu + p, -m, -m, e + mu - p)),
        OperatorForm::Hyperbolic => {
            let eta = match parametrize(state, ParametrizationKind::Rapidity) {
                Err(Error::MassNormalizedUndefined { mass }) => {
                    return Err(Error::MassNormalizedUndefined { mass })
                }
                other => other?.value(),
            };
            Ok(ComplexMatrix2::from_real(eta.exp(), -1.0, -1.0, (-eta).exp()))
        }
        OperatorForm::Trigonometric => {
            let phi = parametrize(state, ParametrizationKind::TrigAngle)?.value();
            // on shell cos φ = m/(E+μ) needs E+μ > 0 for the angle branch
            if e + mu <= 0.0 {
                return Err(Error::param("energy", "trigonometric form needs E + μ > 0"));
            }
            let (s, c) = phi.sin_cos();
            Ok(ComplexMatrix2::from_real(1.0 + s, -c, -c, 1.0 - s))
        }
        OperatorForm::ComplexLinear => Ok(ComplexMatrix2::new(
            Complex64::new(-m, p),
            (e - mu).into(),
            (e - mu).into(),
            Complex64::new(-m, -p),
        )),
        OperatorForm::ComplexTrig => {
            let phi = parametrize(state, ParametrizationKind::ComplexAngle)?.value();
            if e - mu <= 0.0 {
                return Err(Error::param("energy", "complex trigonometric form needs E − μ > 0"));
            }
            Ok(ComplexMatrix2::new(
                Complex64::from_polar(1.0, -phi),
                (-1.0).into(),
                (-1.0).into(),
                Complex64::from_polar(1.0, phi),
            ))
        }
    }
}

/// Momentum-space amplitude of the plane wave (the factor multiplying
/// e^{i(px − Et)}), unnormalized.
pub fn plane_wave_amplitude(state: &KinematicState, rep: GammaRepresentation) -> Result<Spinor> {
    let m = state.mass;
    if m <= 0.0 {
        return Err(Error::MassNormalizedUndefined { mass: m });
    }
    match rep {
        GammaRepresentation::Hyperbolic => {
            state.check_shell(state.shell_residual())?;
            let em = state.e_minus();
            if em <= 0.0 {
                return Err(Error::param("energy", "E + μ − p must be positive"));
            }
            Ok(Spinor::real((em / m).sqrt(), (m / em).sqrt()))
        }
        GammaRepresentation::Complex => {
            state.check_shell(state.complex_shell_residual())?;
            // kernel of the complex-representation operator
            let w = state.energy - state.mu;
            if w <= 0.0 {
                return Err(Error::param("energy", "E − μ must be positive"));
            }
            let z = Complex64::new(m, -state.momentum);
            Ok(Spinor::new((Complex64::from(w) / z).sqrt(), (z / w).sqrt()))
        }
    }
}

/// ψ(x, t) = e^{i(px − Et)} · amplitude.
pub fn plane_wave(state: &KinematicState, rep: GammaRepresentation) -> Result<SpinorField> {
    let amp = plane_wave_amplitude(state, rep)?;
    let (p, e) = (state.momentum, state.energy);
    Ok(Box::new(move |x, t| amp.scale(Complex64::from_polar(1.0, p * x - e * t))))
}

/// Residuals of the two printed position-space equations of the complex
/// representation, `(m − ∂x)ψ₁ + (i∂t + μ)ψ₂` and `(i∂t + μ)ψ₂ + (m + ∂x)ψ₁`,
/// evaluated on a plane wave with the given amplitude.
pub fn complex_component_residuals(state: &KinematicState, amp: Spinor) -> (Complex64, Complex64) {
    let ip = Complex64::new(0.0, state.momentum);
    let dt_term = Complex64::from(state.energy + state.mu) * amp.psi2;
    (
        (Complex64::from(state.mass) - ip) * amp.psi1 + dt_term,
        dt_term + (Complex64::from(state.mass) + ip) * amp.psi1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lorentz_matrix, Spinor};
    use std::f64::consts::LN_2;

    #[test]
    fn dispersion_examples() {
        assert_eq!(free_dispersion(0.0, 1.0, 0.0), (-1.0, 1.0));
        assert_eq!(free_dispersion(0.75, 1.0, 0.0), (-1.25, 1.25));
        assert_eq!(free_dispersion(0.75, 1.0, 0.25), (-1.5, 1.0));
    }

    #[test]
    fn rapidity_examples() {
        let s = KinematicState::new(1.25, 0.75, 1.0, 0.0);
        let eta = parametrize(&s, ParametrizationKind::Rapidity).unwrap().value();
        assert!((eta - LN_2).abs() < 1e-15);
        let rest = KinematicState::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(parametrize(&rest, ParametrizationKind::Rapidity).unwrap().value(), 0.0);
        let phi = parametrize(&s, ParametrizationKind::TrigAngle).unwrap().value();
        assert!((phi - 0.75f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn off_shell_reports_residual() {
        let s = KinematicState::new(2.0, 0.0, 1.0, 0.0);
        match parametrize(&s, ParametrizationKind::Rapidity) {
            Err(Error::OffShell { residual }) => assert!((residual - 3.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn operator_examples() {
        let rest = KinematicState::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(
            dirac_operator(&rest, OperatorForm::Linear).unwrap(),
            ComplexMatrix2::from_real(1.0, -1.0, -1.0, 1.0)
        );
        let s = KinematicState::new(1.25, 0.75, 1.0, 0.0);
        let h = dirac_operator(&s, OperatorForm::Hyperbolic).unwrap();
        assert!(h.approx_eq(&ComplexMatrix2::from_real(2.0, -1.0, -1.0, 0.5), 1e-15));
        let massless = KinematicState::new(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            dirac_operator(&massless, OperatorForm::Hyperbolic),
            Err(Error::MassNormalizedUndefined { .. })
        ));
    }

    #[test]
    fn plane_wave_examples() {
        let rest = KinematicState::new(1.0, 0.0, 1.0, 0.0);
        let f = plane_wave(&rest, GammaRepresentation::Hyperbolic).unwrap();
        assert_eq!(f(0.0, 0.0), Spinor::real(1.0, 1.0));
        let s = KinematicState::new(1.25, 0.75, 1.0, 0.0);
        let a = plane_wave_amplitude(&s, GammaRepresentation::Hyperbolic).unwrap();
        assert!((a.psi1.re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a.psi2.re - 2f64.sqrt()).abs() < 1e-15);
        assert!((a.psi1.re - (-LN_2 / 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn complex_plane_wave_in_operator_kernel() {
        let s = KinematicState::new(1.3 + 0.2, 0.4, 1.1, 0.2);
        let s = KinematicState::new(0.2 + 0.4f64.hypot(1.1), s.momentum, s.mass, s.mu);
        let a = plane_wave_amplitude(&s, GammaRepresentation::Complex).unwrap();
        let d = dirac_operator(&s, OperatorForm::ComplexLinear).unwrap();
        assert!(d.apply(a).norm() < 1e-14);
        let t = dirac_operator(&s, OperatorForm::ComplexTrig).unwrap();
        let scaled = d.scale((-1.0 / (s.energy - s.mu)).into());
        assert!(t.approx_eq(&scaled, 1e-14));
    }

    #[test]
    fn half_rapidity_boost_shifts_plane_wave() {
        let (m, mu, eta, d) = (1.3, 0.2, 0.4, 0.35);
        let a = plane_wave_amplitude(&KinematicState::from_rapidity(eta, m, mu), GammaRepresentation::Hyperbolic).unwrap();
        let b = plane_wave_amplitude(&KinematicState::from_rapidity(eta + d, m, mu), GammaRepresentation::Hyperbolic).unwrap();
        let boosted = lorentz_matrix(GammaRepresentation::Hyperbolic, -d / 2.0).apply(a);
        assert!(boosted.dist(&b) < 1e-12);
    }
}
