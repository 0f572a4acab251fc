//! Exact 2×2 Clifford algebra for (1+1)d Dirac fermions.
//!
//! Two gamma-matrix representations are supported. In the hyperbolic one
//! boosts act as real diagonal matrices `diag(e^η, e^-η)`; in the complex one
//! they act as phases `diag(e^-iφ, e^iφ)`. All matrices built here have
//! entries in `{0, ±1, ±i}` and are constructed without rounding, so algebraic
//! identities can be checked with exact equality.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let e = &self.entries;
        Self::new(e[0][0] * s, e[0][1] * s, e[1][0] * s, e[1][1] * s)
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new(e[0][0], e[1][0], e[0][1], e[1][1])
    }

    pub fn conj(&self) -> Self {
        let e = &self.entries;
        Self::new(e[0][0].conj(), e[0][1].conj(), e[1][0].conj(), e[1][1].conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn determinant(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn apply(&self, psi: Spinor) -> Spinor {
        let e = &self.entries;
        Spinor::new(
            e[0][0] * psi.psi1 + e[0][1] * psi.psi2,
            e[1][0] * psi.psi1 + e[1][1] * psi.psi2,
        )
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.is_finite())
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { entries: out }
    }
}

impl Mul<Spinor> for ComplexMatrix2 {
    type Output = Spinor;
    fn mul(self, rhs: Spinor) -> Spinor {
        self.apply(rhs)
    }
}

/// Choice of gamma matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaRepresentation {
    /// γ⁰ = σ₁, γ¹ = −iσ₂, γ⁵ = σ₃; ψ_C = γ⁵ψ*.
    Hyperbolic,
    /// γ⁰ = −σ₁, γ¹ = iσ₃, γ⁵ = −σ₂; C = γ⁰.
    Complex,
}

impl GammaRepresentation {
    pub const ALL: [GammaRepresentation; 2] =
        [GammaRepresentation::Hyperbolic, GammaRepresentation::Complex];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaIndex {
    G0,
    G1,
    G5,
    /// Charge-conjugation matrix.
    C,
}

pub fn gamma(rep: GammaRepresentation, index: GammaIndex) -> ComplexMatrix2 {
    use GammaIndex::*;
    use GammaRepresentation::*;
    match (rep, index) {
        (Hyperbolic, G0) => ComplexMatrix2::new(ZERO, ONE, ONE, ZERO),
        (Hyperbolic, G1) => ComplexMatrix2::new(ZERO, -ONE, ONE, ZERO),
        (Hyperbolic, G5) | (Hyperbolic, C) => ComplexMatrix2::new(ONE, ZERO, ZERO, -ONE),
        (Complex, G0) | (Complex, C) => ComplexMatrix2::new(ZERO, -ONE, -ONE, ZERO),
        (Complex, G1) => ComplexMatrix2::new(I, ZERO, ZERO, -I),
        (Complex, G5) => ComplexMatrix2::new(ZERO, I, -I, ZERO),
    }
}

/// γ^μ for μ ∈ {0, 1}.
pub fn gamma_mu(rep: GammaRepresentation, mu: usize) -> ComplexMatrix2 {
    match mu {
        0 => gamma(rep, GammaIndex::G0),
        1 => gamma(rep, GammaIndex::G1),
        _ => panic!("spacetime index {mu} out of range for 1+1 dimensions"),
    }
}

/// Minkowski metric diag(1, −1).
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (1, 1) => -1.0,
        (0, 1) | (1, 0) => 0.0,
        _ => panic!("spacetime index out of range for 1+1 dimensions"),
    }
}

pub fn anticommutator(a: ComplexMatrix2, b: ComplexMatrix2) -> ComplexMatrix2 {
    a * b + b * a
}

pub fn commutator(a: ComplexMatrix2, b: ComplexMatrix2) -> ComplexMatrix2 {
    a * b - b * a
}

/// Spinor Lorentz transformation S[Λ]: `e^{ηγ⁵}` in the hyperbolic
/// representation, `diag(e^{-iφ}, e^{iφ})` in the complex one.
pub fn lorentz_matrix(rep: GammaRepresentation, parameter: f64) -> ComplexMatrix2 {
    match rep {
        GammaRepresentation::Hyperbolic => ComplexMatrix2::diag(
            Complex64::new(parameter.exp(), 0.0),
            Complex64::new((-parameter).exp(), 0.0),
        ),
        GammaRepresentation::Complex => ComplexMatrix2::diag(
            Complex64::from_polar(1.0, -parameter),
            Complex64::from_polar(1.0, parameter),
        ),
    }
}

/// Two-component spinor amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Spinor {
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl Spinor {
    pub const fn new(psi1: Complex64, psi2: Complex64) -> Self {
        Self { psi1, psi2 }
    }

    pub fn real(psi1: f64, psi2: f64) -> Self {
        Self::new(psi1.into(), psi2.into())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.psi1.conj(), self.psi2.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.psi1 * s, self.psi2 * s)
    }

    pub fn norm(&self) -> f64 {
        (self.psi1.norm_sqr() + self.psi2.norm_sqr()).sqrt()
    }

    /// Unit-L2 copy; `None` for the zero spinor.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn dist(&self, other: &Self) -> f64 {
        Spinor::new(self.psi1 - other.psi1, self.psi2 - other.psi2).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.psi1.is_finite() && self.psi2.is_finite()
    }

    /// Relative phase β = arg ψ₁ − arg ψ₂ in (−π, π]; `None` when either
    /// component vanishes.
    pub fn relative_phase(&self) -> Option<f64> {
        if self.psi1 == ZERO || self.psi2 == ZERO {
            return None;
        }
        Some(wrap_phase((self.psi1 * self.psi2.conj()).arg()))
    }

    /// Distance after removing the best overall complex factor, relative to
    /// the norm of `self`. Zero when the spinors are parallel.
    pub fn projective_dist(&self, other: &Self) -> f64 {
        let inner = self.psi1.conj() * other.psi1 + self.psi2.conj() * other.psi2;
        let n2 = self.psi1.norm_sqr() + self.psi2.norm_sqr();
        if n2 == 0.0 {
            return other.norm();
        }
        let factor = inner / n2;
        let fitted = self.scale(factor);
        fitted.dist(other) / other.norm().max(f64::MIN_POSITIVE)
    }
}

/// Wrap an angle into (−π, π].
pub fn wrap_phase(a: f64) -> f64 {
    let mut w = a % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Remove 2π jumps from a sequence of wrapped angles.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let d = p - phases[i - 1];
            offset -= 2.0 * PI * (d / (2.0 * PI)).round();
        }
        out.push(p + offset);
    }
    out
}

/// Dirac adjoint ψ̄ = ψ†γ⁰ as a row vector.
pub fn dirac_adjoint(rep: GammaRepresentation, psi: Spinor) -> [Complex64; 2] {
    let g0 = gamma(rep, GammaIndex::G0);
    let c = psi.conj();
    [
        c.psi1 * g0.get(0, 0) + c.psi2 * g0.get(1, 0),
        c.psi1 * g0.get(0, 1) + c.psi2 * g0.get(1, 1),
    ]
}

/// ψ_C: γ⁵ψ* (hyperbolic) or Cψ* with C = γ⁰ (complex).
pub fn charge_conjugate(rep: GammaRepresentation, psi: Spinor) -> Spinor {
    gamma(rep, GammaIndex::C).apply(psi.conj())
}

fn sandwich(rep: GammaRepresentation, m: ComplexMatrix2, psi: Spinor) -> Complex64 {
    let bar = dirac_adjoint(rep, psi);
    let v = m.apply(psi);
    bar[0] * v.psi1 + bar[1] * v.psi2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilinearKind {
    Scalar,
    Pseudoscalar,
    Vector0,
    Vector1,
    AxialVector0,
    AxialVector1,
    Difermion,
    Density,
}

/// The six pairing-interaction families whose squares expand in terms of
/// |ψ₁|, |ψ₂| and the relative phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilinearFamily {
    Scalar,
    Pseudoscalar,
    Vector,
    AxialVector,
    Difermion,
    Density,
}

impl BilinearFamily {
    pub const ALL: [BilinearFamily; 6] = [
        BilinearFamily::Scalar,
        BilinearFamily::Pseudoscalar,
        BilinearFamily::Vector,
        BilinearFamily::AxialVector,
        BilinearFamily::Difermion,
        BilinearFamily::Density,
    ];
}

pub fn bilinear(rep: GammaRepresentation, kind: BilinearKind, psi: Spinor) -> Complex64 {
    use GammaIndex::*;
    let g5 = gamma(rep, G5);
    match kind {
        BilinearKind::Scalar => sandwich(rep, ComplexMatrix2::identity(), psi),
        BilinearKind::Pseudoscalar => sandwich(rep, g5, psi),
        BilinearKind::Vector0 => sandwich(rep, gamma(rep, G0), psi),
        BilinearKind::Vector1 => sandwich(rep, gamma(rep, G1), psi),
        BilinearKind::AxialVector0 => sandwich(rep, g5 * gamma(rep, G0), psi),
        BilinearKind::AxialVector1 => sandwich(rep, g5 * gamma(rep, G1), psi),
        BilinearKind::Difermion => {
            let cpsi = gamma(rep, C).apply(psi);
            psi.psi1 * cpsi.psi1 + psi.psi2 * cpsi.psi2
        }
        BilinearKind::Density => sandwich(rep, gamma(rep, G0), psi),
    }
}

/// Squared bilinear of a family; vector-like families are contracted with
/// the metric, the difermion family uses the modulus squared.
pub fn squared_bilinear(rep: GammaRepresentation, family: BilinearFamily, psi: Spinor) -> Complex64 {
    let b = |k| bilinear(rep, k, psi);
    match family {
        BilinearFamily::Scalar => b(BilinearKind::Scalar).powi(2),
        BilinearFamily::Pseudoscalar => b(BilinearKind::Pseudoscalar).powi(2),
        BilinearFamily::Vector => {
            b(BilinearKind::Vector0).powi(2) - b(BilinearKind::Vector1).powi(2)
        }
        BilinearFamily::AxialVector => {
            b(BilinearKind::AxialVector0).powi(2) - b(BilinearKind::AxialVector1).powi(2)
        }
        BilinearFamily::Difermion => b(BilinearKind::Difermion).norm_sqr().into(),
        BilinearFamily::Density => b(BilinearKind::Density).powi(2),
    }
}

/// Closed-form expansion of [`squared_bilinear`] in terms of |ψ₁|, |ψ₂| and
/// the relative phase β (hyperbolic representation).
pub fn squared_bilinear_expansion(family: BilinearFamily, psi: Spinor) -> f64 {
    let a2 = psi.psi1.norm_sqr();
    let b2 = psi.psi2.norm_sqr();
    let cos2b = psi.relative_phase().map_or(1.0, |beta| (2.0 * beta).cos());
    let cross = a2 * b2;
    match family {
        BilinearFamily::Scalar => 2.0 * (cos2b + 1.0) * cross,
        BilinearFamily::Pseudoscalar => 2.0 * (cos2b - 1.0) * cross,
        BilinearFamily::Vector => 4.0 * cross,
        BilinearFamily::AxialVector => -4.0 * cross,
        BilinearFamily::Difermion => -2.0 * cos2b * cross + a2 * a2 + b2 * b2,
        BilinearFamily::Density => 2.0 * cross + a2 * a2 + b2 * b2,
    }
}

/// Space-time dependent spinor ψ(x, t).
pub type SpinorField = Box<dyn Fn(f64, f64) -> Spinor + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscreteSymmetry {
    /// ψ(x,t) → γ⁰ψ(−x,t)
    ParityG0,
    /// ψ(x,t) → γ¹ψ(−x,t)
    ParityG1,
    /// ψ(x,t) → γ⁰ψ*(x,−t)
    TimeReversal,
}

pub fn apply_discrete_symmetry<F>(
    rep: GammaRepresentation,
    kind: DiscreteSymmetry,
    field: F,
) -> SpinorField
where
    F: Fn(f64, f64) -> Spinor + Send + Sync + 'static,
{
    let g0 = gamma(rep, GammaIndex::G0);
    let g1 = gamma(rep, GammaIndex::G1);
    match kind {
        DiscreteSymmetry::ParityG0 => Box::new(move |x, t| g0.apply(field(-x, t))),
        DiscreteSymmetry::ParityG1 => Box::new(move |x, t| g1.apply(field(-x, t))),
        DiscreteSymmetry::TimeReversal => Box::new(move |x, t| g0.apply(field(x, -t).conj())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GammaIndex::*;
    use GammaRepresentation::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn printed_gamma_entries() {
        assert_eq!(gamma(Hyperbolic, G0), ComplexMatrix2::from_real(0.0, 1.0, 1.0, 0.0));
        assert_eq!(gamma(Hyperbolic, G5), ComplexMatrix2::from_real(1.0, 0.0, 0.0, -1.0));
        assert_eq!(
            gamma(Complex, G1),
            ComplexMatrix2::new(c(0.0, 1.0), ZERO, ZERO, c(0.0, -1.0))
        );
    }

    #[test]
    fn dirac_algebra_is_exact() {
        for rep in GammaRepresentation::ALL {
            for mu in 0..2 {
                for nu in 0..2 {
                    let ac = anticommutator(gamma_mu(rep, mu), gamma_mu(rep, nu));
                    let expected = ComplexMatrix2::identity().scale((2.0 * metric(mu, nu)).into());
                    assert_eq!(ac, expected, "{rep:?} mu={mu} nu={nu}");
                }
            }
            let g5 = gamma(rep, G5);
            assert_eq!(g5 * g5, ComplexMatrix2::identity());
            assert_eq!(gamma(rep, G0) * gamma(rep, G1), g5);
        }
        // complex representation: γ⁵ = −σ₂
        let minus_sigma2 = ComplexMatrix2::new(ZERO, c(0.0, 1.0), c(0.0, -1.0), ZERO);
        assert_eq!(gamma(Complex, G5), minus_sigma2);
    }

    #[test]
    fn lorentz_matrices() {
        assert_eq!(lorentz_matrix(Hyperbolic, 0.0), ComplexMatrix2::identity());
        let m = lorentz_matrix(Hyperbolic, 2f64.ln());
        assert!(m.approx_eq(&ComplexMatrix2::from_real(2.0, 0.0, 0.0, 0.5), 1e-15));
        for rep in GammaRepresentation::ALL {
            let lhs = lorentz_matrix(rep, 0.3) * lorentz_matrix(rep, 0.4);
            assert!(lhs.approx_eq(&lorentz_matrix(rep, 0.7), 1e-12));
        }
    }

    #[test]
    fn hyperbolic_boost_is_exponential_of_gamma5() {
        // e^{ηγ⁵} = cosh η + γ⁵ sinh η because (γ⁵)² = 1
        let eta: f64 = 0.83;
        let g5 = gamma(Hyperbolic, G5);
        let series = ComplexMatrix2::identity().scale(eta.cosh().into()) + g5.scale(eta.sinh().into());
        assert!(series.approx_eq(&lorentz_matrix(Hyperbolic, eta), 1e-14));
    }

    #[test]
    fn bilinear_examples() {
        let psi = Spinor::real(1.0, 1.0);
        assert_eq!(bilinear(Hyperbolic, BilinearKind::Scalar, psi), c(2.0, 0.0));
        assert_eq!(bilinear(Hyperbolic, BilinearKind::Difermion, psi), ZERO);
        let sq = squared_bilinear(Hyperbolic, BilinearFamily::Pseudoscalar, Spinor::real(0.7, 1.9));
        assert_eq!(sq.norm(), 0.0);
    }

    #[test]
    fn relative_phase_undefined_for_vanishing_component() {
        assert_eq!(Spinor::real(0.0, 1.0).relative_phase(), None);
        let psi = Spinor::new(Complex64::from_polar(1.0, 0.5), Complex64::from_polar(2.0, -0.25));
        assert!((psi.relative_phase().unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parity_g1_is_order_four() {
        let field = |x: f64, t: f64| Spinor::new(c(x, t), c(1.0 + x * x, -t));
        let twice = apply_discrete_symmetry(
            Hyperbolic,
            DiscreteSymmetry::ParityG1,
            apply_discrete_symmetry(Hyperbolic, DiscreteSymmetry::ParityG1, field),
        );
        let v = twice(0.3, 0.7);
        let orig = field(0.3, 0.7);
        assert_eq!(v, orig.scale(-ONE));
        let four = apply_discrete_symmetry(
            Hyperbolic,
            DiscreteSymmetry::ParityG1,
            apply_discrete_symmetry(Hyperbolic, DiscreteSymmetry::ParityG1, twice),
        );
        assert_eq!(four(0.3, 0.7), orig);
    }

    #[test]
    fn time_reversal_of_real_static_field() {
        let field = |x: f64, _t: f64| Spinor::real(x, 2.0 * x);
        let tr = apply_discrete_symmetry(Hyperbolic, DiscreteSymmetry::TimeReversal, field);
        assert_eq!(tr(1.5, 3.0), Spinor::real(3.0, 1.5));
    }
}
