//! Dimensionless parameterization and dressed-state geometry.
//!
//! Momenta are measured in units of κ (κ² = 2mg/ħ), frequencies and energies
//! in units of g (ħg), lengths in units of 1/κ. With that choice the mass,
//! ħ and both optical frequencies drop out and a scattering problem is fixed
//! by `(n, k/κ, δ/g, κL)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{MazerError, Result};

/// Ratio used to turn "much smaller/larger than" into a number.
pub const REGIME_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MazerParams {
    /// Photon number of the initial Fock state.
    pub n: u32,
    pub k_over_kappa: f64,
    pub delta_over_g: f64,
    pub kappa_l: f64,
}

impl MazerParams {
    pub fn new(n: u32, k_over_kappa: f64, delta_over_g: f64, kappa_l: f64) -> Result<Self> {
        let params = MazerParams {
            n,
            k_over_kappa,
            delta_over_g,
            kappa_l,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_over_kappa.is_finite() && self.k_over_kappa > 0.0) {
            return Err(MazerError::InvalidParams(format!(
                "k/kappa must be finite and > 0, got {}",
                self.k_over_kappa
            )));
        }
        if !self.delta_over_g.is_finite() {
            return Err(MazerError::InvalidParams(format!(
                "delta/g must be finite, got {}",
                self.delta_over_g
            )));
        }
        if !(self.kappa_l.is_finite() && self.kappa_l >= 0.0) {
            return Err(MazerError::InvalidParams(format!(
                "kappa*L must be finite and >= 0, got {}",
                self.kappa_l
            )));
        }
        Ok(())
    }

    /// Incident kinetic energy ħ²k²/2m in units of ħg.
    pub fn kinetic_energy(&self) -> f64 {
        self.k_over_kappa * self.k_over_kappa
    }

    /// κn/κ = (n+1)^(1/4).
    pub fn kappa_n(&self) -> f64 {
        kappa_n(self.n)
    }

    /// Classical transit time gτ = (κL)(κ/k)/2.
    pub fn transit_time_g(&self) -> f64 {
        0.5 * self.kappa_l / self.k_over_kappa
    }

    /// Whether the lower-state channel can carry flux away from the cavity.
    pub fn emission_allowed(&self) -> bool {
        b_channel_open(self.k_over_kappa, self.delta_over_g)
    }

    pub fn with_kappa_l(mut self, kappa_l: f64) -> Self {
        self.kappa_l = kappa_l;
        self
    }

    pub fn with_delta(mut self, delta_over_g: f64) -> Self {
        self.delta_over_g = delta_over_g;
        self
    }

    pub fn with_k(mut self, k_over_kappa: f64) -> Self {
        self.k_over_kappa = k_over_kappa;
        self
    }
}

pub fn kappa_n(n: u32) -> f64 {
    (n as f64 + 1.0).powf(0.25)
}

/// Photon emission needs ħ²k²/2m > ħδ, i.e. k/κ > √(δ/g).
fn b_channel_open(k: f64, delta: f64) -> bool {
    if delta > 0.0 && k <= delta.sqrt() {
        return false;
    }
    k * k - delta > 0.0
}

/// Square root on the physical branch: Re ≥ 0 and Im ≥ 0.
///
/// Outgoing waves e^{iqz} then either propagate to the right or decay.
pub fn branch_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedFrame {
    /// Mixing angle θn in (0, π/2).
    pub theta_n: f64,
    /// Ωn/g = 2√(n+1).
    pub omega_n: f64,
    /// Λn/g = √(δ² + Ωn²).
    pub lambda_n: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    pub tan_theta: f64,
    pub cot_theta: f64,
}

impl DressedFrame {
    /// sin 2θn = Ωn/Λn.
    pub fn sin_2theta(&self) -> f64 {
        self.omega_n / self.lambda_n
    }

    /// cos 2θn = −δ/Λn.
    pub fn cos_2theta(&self) -> f64 {
        self.cos_theta * self.cos_theta - self.sin_theta * self.sin_theta
    }
}

/// Dressed-state angle and companions for `n` photons at detuning `δ/g`.
///
/// Λn ± δ are both formed without cancellation, so the result stays accurate
/// for |δ| ≫ Ωn.
pub fn dressed_frame(n: u32, delta_over_g: f64) -> DressedFrame {
    let omega_n = 2.0 * (n as f64 + 1.0).sqrt();
    let delta = delta_over_g;
    let lambda_n = delta.hypot(omega_n);
    let (plus, minus) = lambda_pm(lambda_n, delta, omega_n);

    let sin_theta = (plus / (2.0 * lambda_n)).sqrt();
    let cos_theta = (minus / (2.0 * lambda_n)).sqrt();
    let tan_theta = (plus / minus).sqrt();
    let cot_theta = (minus / plus).sqrt();
    let theta_n = sin_theta.atan2(cos_theta).clamp(f64::MIN_POSITIVE, FRAC_PI_2);

    DressedFrame {
        theta_n,
        omega_n,
        lambda_n,
        sin_theta,
        cos_theta,
        tan_theta,
        cot_theta,
    }
}

/// (Λ + δ, Λ − δ), using (Λ + δ)(Λ − δ) = Ω² for the small one.
fn lambda_pm(lambda: f64, delta: f64, omega: f64) -> (f64, f64) {
    if delta >= 0.0 {
        let plus = lambda + delta;
        (plus, omega * omega / plus)
    } else {
        let minus = lambda - delta;
        (omega * omega / minus, minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelWavenumbers {
    pub k: f64,
    pub k_b: Complex64,
    pub k_plus: Complex64,
    pub k_minus: Complex64,
    pub kappa_n: f64,
    /// True when k_b is real and strictly positive.
    pub b_propagating: bool,
}

pub fn channel_wavenumbers(params: &MazerParams) -> ChannelWavenumbers {
    let frame = dressed_frame(params.n, params.delta_over_g);
    let k = params.k_over_kappa;
    let kappa_n = params.kappa_n();
    let kn2 = kappa_n * kappa_n;
    let k2 = k * k;

    ChannelWavenumbers {
        k,
        k_b: branch_sqrt(k2 - params.delta_over_g),
        k_plus: branch_sqrt(k2 - kn2 * frame.tan_theta),
        k_minus: branch_sqrt(k2 + kn2 * frame.cot_theta),
        kappa_n,
        b_propagating: params.emission_allowed(),
    }
}

/// Internal energies of the |±,n⟩ components inside the cavity, in units of ħg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepEnergies {
    pub v_plus: f64,
    pub v_minus: f64,
}

pub fn step_energies(n: u32, delta_over_g: f64) -> StepEnergies {
    let frame = dressed_frame(n, delta_over_g);
    let root = (n as f64 + 1.0).sqrt();
    StepEnergies {
        v_plus: root * frame.tan_theta,
        v_minus: -root * frame.cot_theta,
    }
}

/// Critical ratio k/κn = √(tan θn) at which the kinetic energy equals V⁺n.
pub fn critical_k_ratio(n: u32, delta_over_g: f64) -> f64 {
    let omega_n = 2.0 * (n as f64 + 1.0).sqrt();
    let lambda_n = delta_over_g.hypot(omega_n);
    let (plus, minus) = lambda_pm(lambda_n, delta_over_g, omega_n);
    (plus / minus).powf(0.25)
}

/// Detuning at which `k_over_kappa` sits exactly on the hot/cold frontier.
pub fn critical_detuning(n: u32, k_over_kappa: f64) -> f64 {
    let ratio = k_over_kappa / kappa_n(n);
    let r2 = ratio * ratio;
    (n as f64 + 1.0).sqrt() * (r2 - 1.0 / r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// k/κ ≤ √(δ/g): the lower-state channel is closed.
    Blocked,
    Cold,
    Intermediate,
    Hot,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Blocked => "blocked",
            Regime::Cold => "cold",
            Regime::Intermediate => "intermediate",
            Regime::Hot => "hot",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Advisory label only; no computation is gated on it.
pub fn classify_regime(params: &MazerParams) -> Regime {
    if !params.emission_allowed() {
        return Regime::Blocked;
    }
    let ratio = params.k_over_kappa / params.kappa_n();
    let critical = critical_k_ratio(params.n, params.delta_over_g);
    if ratio <= critical / REGIME_FACTOR {
        Regime::Cold
    } else if ratio >= critical * REGIME_FACTOR {
        Regime::Hot
    } else {
        Regime::Intermediate
    }
}
