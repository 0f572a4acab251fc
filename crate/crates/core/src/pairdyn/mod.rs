//! Dynamics of the complex pairing field Δ.
//!
//! The field obeys `Δ_tt − Δ_xx ± m²Δ + (g/6)|Δ|²Δ = J`, with `+` for the
//! manifest-symmetry sign and `−` for the broken sign. `J` is an optional
//! uniform real source used to hold a background density at rest.

mod evolve;
mod fields;
mod kink;
mod traveling;

pub use evolve::{evolve, Boundary, Diagnostics, Evolver, FieldGrid, MassSign, SolverConfig, Trajectory};
pub use fields::{
    continuity_residual, current_residual, density_phase_split, efield_coupling, EfieldCoupling, SplitField,
};
pub use kink::{
    kink_asymptote, kink_profile, kink_profile_residual, kink_vacuum, static_kink_oracle, KinkDirection, StaticKink,
};
pub use traveling::{
    allowedness, traveling_closed_form_c0, traveling_integrate, traveling_integrate_log, Allowedness, TravelingParams,
    TravelingSolution,
};

/// ω = sqrt(k² + m² + gρ₀²/2), the density branch linearized over ρ₀.
pub fn linearized_dispersion(rho0: f64, m_delta: f64, g_delta: f64, k: f64) -> f64 {
    (k * k + m_delta * m_delta + 0.5 * g_delta * rho0 * rho0).sqrt()
}

/// Uniform source that holds a real background ρ₀ at rest under the manifest sign.
pub fn background_source(rho0: f64, m_delta: f64, g_delta: f64) -> f64 {
    m_delta * m_delta * rho0 + g_delta / 6.0 * rho0.powi(3)
}

/// β(x, t) = f(k_β (x + s t)) + c with s = ±1.
pub fn phase_mode<F>(k_beta: f64, sign: f64, constant: f64, f: F) -> impl Fn(f64, f64) -> f64
where
    F: Fn(f64) -> f64,
{
    move |x, t| f(k_beta * (x + sign * t)) + constant
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_examples() {
        assert!((linearized_dispersion(1.0, 1.0, 2.0, 0.0) - 2f64.sqrt()).abs() < 1e-15);
        let w = linearized_dispersion(0.5, 1.0, 1.0, 1e6);
        assert!((w / 1e6 - 1.0).abs() < 1e-11);
    }

    #[test]
    fn phase_mode_is_light_like() {
        let b = phase_mode(2.0, -1.0, 0.5, f64::sin);
        assert_eq!(b(1.0, 1.0), b(0.0, 0.0));
        assert_eq!(b(0.0, 0.0), 0.5);
    }
}
