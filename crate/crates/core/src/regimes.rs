//! Asymptotic forms of the emission probability and cold-atom peak analysis.
//!
//! These are approximations with limited domains. Rather than refusing input
//! outside them, the cold-atom forms report which of their validity
//! conditions hold and leave the decision to the caller.

use std::f64::consts::PI;

use crate::error::Result;
use crate::mesa::step_factors;
use crate::model::{channel_wavenumbers, dressed_frame, kappa_n, MazerParams};

/// |δ|/Ωn below this counts as a small detuning.
pub const SMALL_DETUNING: f64 = 0.2;
/// κnL above this counts as exp(κnL) ≫ 1.
pub const LONG_CAVITY: f64 = 5.0;
/// Grid step (in κL) used when locating maxima numerically.
pub const PEAK_GRID_STEP: f64 = 0.01;

/// Hot-atom Rabi formula with transit time gτ = (κL)(κ/k)/2.
pub fn rabi_emission(params: &MazerParams) -> f64 {
    let omega_n = 2.0 * (params.n as f64 + 1.0).sqrt();
    let delta = params.delta_over_g;
    let g_tau = params.transit_time_g();
    let ratio = delta / omega_n;
    let phase = 0.5 * g_tau * omega_n.hypot(delta);
    phase.sin().powi(2) / (1.0 + ratio * ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColdValidity {
    /// |δ|/Ωn < 0.2
    pub small_detuning: bool,
    /// κnL > 5
    pub long_cavity: bool,
    /// κnL < (κn/k)²
    pub short_cavity: bool,
}

impl ColdValidity {
    pub fn all(&self) -> bool {
        self.small_detuning && self.long_cavity && self.short_cavity
    }
}

pub fn cold_validity(params: &MazerParams) -> ColdValidity {
    let omega_n = 2.0 * (params.n as f64 + 1.0).sqrt();
    let kn = params.kappa_n();
    let kn_l = kn * params.kappa_l;
    ColdValidity {
        small_detuning: params.delta_over_g.abs() / omega_n < SMALL_DETUNING,
        long_cavity: kn_l > LONG_CAVITY,
        short_cavity: kn_l < (kn / params.k_over_kappa).powi(2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColdApprox {
    pub value: f64,
    pub validity: ColdValidity,
}

/// κn √(cot θn) L, the phase of the propagating dressed component.
fn cold_phase(params: &MazerParams) -> f64 {
    let frame = dressed_frame(params.n, params.delta_over_g);
    params.kappa_n() * frame.cot_theta.sqrt() * params.kappa_l
}

/// Cold-atom approximation including the step factor ℬ(L).
pub fn cold_emission_approx(params: &MazerParams) -> Result<ColdApprox> {
    params.validate()?;
    let validity = cold_validity(params);
    if !params.emission_allowed() {
        return Ok(ColdApprox { value: 0.0, validity });
    }
    let frame = dressed_frame(params.n, params.delta_over_g);
    let waves = channel_wavenumbers(params);
    let k = params.k_over_kappa;
    let kn = params.kappa_n();

    let (fc, ft) = step_factors(params)?;
    let b_factor = (waves.k_b.re / k) / (fc.norm_sqr() * ft.norm_sqr());

    let x = cold_phase(params);
    let num = 1.0 + 0.5 * frame.cot_theta * (2.0 * x).sin();
    let den = 1.0 + (kn / (2.0 * k)).powi(2) * frame.cot_theta * x.sin().powi(2);
    Ok(ColdApprox {
        value: 0.5 * b_factor * num / den,
        validity,
    })
}

/// Airy-like fit of the cold-atom emission probability; zero when blocked.
pub fn cold_emission_fit(params: &MazerParams) -> f64 {
    if !params.emission_allowed() {
        return 0.0;
    }
    let k = params.k_over_kappa;
    let k_b = (k * k - params.delta_over_g).sqrt();
    let r = k_b / k;
    let kn = params.kappa_n();
    let x = cold_phase(params);
    let prefactor = 2.0 * r / (1.0 + r).powi(2);
    let finesse = (kn / (k_b + k)).powi(2);
    prefactor * (1.0 + 0.5 * (2.0 * x).sin()) / (1.0 + finesse * x.sin().powi(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    /// κL of the first resonances, m = 1, 2, …
    pub positions_kappa_l: Vec<f64>,
    pub amplitude: f64,
    pub finesse: f64,
    /// λ_dB of the propagating dressed component, in units of 1/κ.
    pub de_broglie_kappa: f64,
}

/// Cold-regime resonance positions, amplitude and finesse.
///
/// When the lower channel is closed the amplitude is zero and the finesse is
/// evaluated at k_b = 0.
pub fn peak_report(n: u32, delta_over_g: f64, k_over_kappa: f64, m_max: u32) -> PeakReport {
    let frame = dressed_frame(n, delta_over_g);
    let kn = kappa_n(n);
    let wavenumber = kn * frame.cot_theta.sqrt();
    let de_broglie = 2.0 * PI / wavenumber;
    let k = k_over_kappa;
    let open = delta_over_g <= 0.0 || k > delta_over_g.sqrt();
    let k_b = if open {
        (k * k - delta_over_g).max(0.0).sqrt()
    } else {
        0.0
    };
    let r = k_b / k;
    let amplitude = if open { 0.5 * 4.0 * r / (1.0 + r).powi(2) } else { 0.0 };
    PeakReport {
        positions_kappa_l: (1..=m_max).map(|m| m as f64 * PI / wavenumber).collect(),
        amplitude,
        finesse: (kn / (k_b + k)).powi(2),
        de_broglie_kappa: de_broglie,
    }
}

/// Detuning window of the cold regime for `k/κ` ≪ 1: below the lower bound
/// V⁺n drops under the kinetic energy, at and above the upper one emission
/// is blocked.
pub fn cold_detuning_bounds(n: u32, k_over_kappa: f64) -> (f64, f64) {
    let kn = kappa_n(n);
    let lower = -(n as f64 + 1.0).sqrt() * (kn / k_over_kappa).powi(2);
    (lower, k_over_kappa * k_over_kappa)
}

/// Local maxima of `f` on [lo, hi]: grid scan with step `step`, then
/// golden-section refinement inside each bracketing pair of grid cells.
/// Non-finite samples are skipped.
pub fn find_maxima<F>(f: F, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let count = ((hi - lo) / step).round() as usize;
    if count < 2 {
        return Vec::new();
    }
    let xs: Vec<f64> = (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut peaks = Vec::new();
    for i in 1..count {
        let (a, b, c) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            continue;
        }
        if b > a && b >= c {
            peaks.push(golden_max(&f, xs[i - 1], xs[i + 1]));
        }
    }
    peaks
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-10 * (1.0 + a.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
