use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Traveling-wave forms ρ(k_ρ x ± ω_ρ t), β(k_β x ± ω_β t) in the weakly
/// nonlinear limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingParams {
    pub omega_rho: f64,
    pub k_rho: f64,
    pub omega_beta: f64,
    pub k_beta: f64,
    pub c: f64,
    pub rho_init: f64,
    pub m_delta: f64,
}

impl TravelingParams {
    /// r = (ω_βω_ρ − k_βk_ρ)/(ω_β² − k_β²)
    pub fn r(&self) -> Result<f64> {
        let den = self.omega_beta.powi(2) - self.k_beta.powi(2);
        if den == 0.0 {
            return Err(Error::LightLike { which: "beta" });
        }
        Ok((self.omega_beta * self.omega_rho - self.k_beta * self.k_rho) / den)
    }

    fn rho_mass(&self) -> Result<f64> {
        let den = self.omega_rho.powi(2) - self.k_rho.powi(2);
        if den == 0.0 {
            return Err(Error::LightLike { which: "rho" });
        }
        Ok(den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Allowedness {
    pub allowed: bool,
    pub r: f64,
}

/// Classically allowed iff 0 < r < ½.
pub fn allowedness(params: &TravelingParams) -> Result<Allowedness> {
    let r = params.r()?;
    Ok(Allowedness {
        allowed: r > 0.0 && r < 0.5,
        r,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TravelingSolution {
    pub u: Vec<f64>,
    pub rho: Vec<f64>,
    pub beta: Vec<f64>,
    pub efield: Vec<f64>,
    /// Set when ρ reached zero or the radicand turned negative.
    pub halted_at: Option<f64>,
}

struct System {
    a: f64,
    b: f64,
    /// exponent of ρ in the C² term (generic case)
    p: f64,
    c: f64,
    r: f64,
    log_case: bool,
    e_coef: f64,
}

impl System {
    fn radicand(&self, rho: f64) -> f64 {
        if self.log_case {
            self.a * rho * rho + self.b * (rho * rho).ln()
        } else {
            self.a * rho * rho + self.b * rho.powf(self.p)
        }
    }

    fn beta_rate(&self, rho: f64) -> f64 {
        if self.log_case {
            self.c / rho
        } else {
            self.c * rho.powf(-2.0 * self.r)
        }
    }

    /// (ρ', β'), or None outside the allowed region.
    fn rhs(&self, rho: f64) -> Option<(f64, f64)> {
        if !(rho > 0.0) {
            return None;
        }
        let q = self.radicand(rho);
        if !(q >= 0.0) {
            return None;
        }
        Some((q.sqrt(), self.beta_rate(rho)))
    }
}

/// RK4 on ρ' = sqrt(m²ρ²/(ω_ρ² − k_ρ²) + C²(1−2r)^{−1} S ρ^{2−4r}), β' = Cρ^{−2r},
/// with S = (ω_β² − k_β²)/(ω_ρ² − k_ρ²), from u = 0 to `u_max`.
pub fn traveling_integrate(params: &TravelingParams, u_max: f64, du: f64) -> Result<TravelingSolution> {
    let al = allowedness(params)?;
    if !al.allowed {
        return Err(Error::NotClassicallyAllowed { r: al.r });
    }
    let wr = params.rho_mass()?;
    let wb = params.omega_beta.powi(2) - params.k_beta.powi(2);
    let sys = System {
        a: params.m_delta.powi(2) / wr,
        b: params.c * params.c / (1.0 - 2.0 * al.r) * (wb / wr),
        p: 2.0 - 4.0 * al.r,
        c: params.c,
        r: al.r,
        log_case: false,
        e_coef: -(params.omega_rho * params.omega_beta - params.k_rho * params.k_beta),
    };
    integrate(&sys, params, u_max, du)
}

/// The special case ω_β = 2ω_ρ, k_β = 2k_ρ (r = ½ exactly):
/// ρ' = sqrt(m²ρ²/(ω_ρ² − k_ρ²) + C² ln ρ²), β' = C/ρ.
pub fn traveling_integrate_log(params: &TravelingParams, u_max: f64, du: f64) -> Result<TravelingSolution> {
    let wr = params.rho_mass()?;
    let special = params.omega_beta == 2.0 * params.omega_rho && params.k_beta == 2.0 * params.k_rho;
    if !special {
        return Err(Error::param("omega_beta", "logarithmic case needs ω_β = 2ω_ρ and k_β = 2k_ρ"));
    }
    let sys = System {
        a: params.m_delta.powi(2) / wr,
        b: params.c * params.c,
        p: 0.0,
        c: params.c,
        r: 0.5,
        log_case: true,
        e_coef: -2.0 * wr,
    };
    integrate(&sys, params, u_max, du)
}

fn integrate(sys: &System, params: &TravelingParams, u_max: f64, du: f64) -> Result<TravelingSolution> {
    if !(params.rho_init > 0.0) {
        return Err(Error::param("rho_init", "must be positive"));
    }
    if !(du > 0.0) || !(u_max >= 0.0) {
        return Err(Error::param("du", "need du > 0 and u_max ≥ 0"));
    }
    let q0 = sys.radicand(params.rho_init);
    if !(q0 >= 0.0) {
        let r = if sys.log_case { 0.5 } else { sys.r };
        return Err(Error::NotClassicallyAllowed { r });
    }
    let n = (u_max / du).round() as usize;
    let mut sol = TravelingSolution {
        u: Vec::with_capacity(n + 1),
        rho: Vec::with_capacity(n + 1),
        beta: Vec::with_capacity(n + 1),
        efield: Vec::with_capacity(n + 1),
        halted_at: None,
    };
    let (mut rho, mut beta) = (params.rho_init, 0.0);
    let record = |sol: &mut TravelingSolution, u: f64, rho: f64, beta: f64| {
        let (dr, db) = sys.rhs(rho).unwrap_or((f64::NAN, f64::NAN));
        sol.u.push(u);
        sol.rho.push(rho);
        sol.beta.push(beta);
        sol.efield.push(sys.e_coef * dr * db / rho);
    };
    record(&mut sol, 0.0, rho, beta);
    for i in 0..n {
        let u = i as f64 * du;
        let step = (|| {
            let k1 = sys.rhs(rho)?;
            let k2 = sys.rhs(rho + 0.5 * du * k1.0)?;
            let k3 = sys.rhs(rho + 0.5 * du * k2.0)?;
            let k4 = sys.rhs(rho + du * k3.0)?;
            Some((
                rho + du / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                beta + du / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            ))
        })();
        match step {
            Some((r, b)) if r > 0.0 && r.is_finite() && b.is_finite() => {
                rho = r;
                beta = b;
                record(&mut sol, (i + 1) as f64 * du, rho, beta);
            }
            _ => {
                sol.halted_at = Some(u);
                break;
            }
        }
    }
    Ok(sol)
}

/// ρ(u) = ρ_init exp(|m| u / sqrt(ω_ρ² − k_ρ²)), the C = 0 solution.
pub fn traveling_closed_form_c0(params: &TravelingParams, u: f64) -> Result<f64> {
    let wr = params.rho_mass()?;
    if wr < 0.0 {
        return Err(Error::NotClassicallyAllowed { r: params.r().unwrap_or(f64::NAN) });
    }
    Ok(params.rho_init * (params.m_delta.abs() * u / wr.sqrt()).exp())
}
