//! Exact scattering amplitudes for the mesa mode, u(z) = 1 on [0, L].
//!
//! Inside the cavity the dressed components |±,n⟩ decouple and propagate with
//! k±n; matching at both interfaces gives closed forms for the four outgoing
//! amplitudes in terms of single-barrier kernels (τ, ρ, Σ, Δ and relatives)
//! evaluated at the two asymptotic momenta k and k_b. All trigonometric
//! kernels take complex arguments, so the same expressions cover propagating
//! and tunneling dressed channels.

use num_complex::Complex64;

use crate::error::{MazerError, Result};
use crate::model::{channel_wavenumbers, dressed_frame, kappa_n, ChannelWavenumbers, MazerParams};

/// Relative size below which a denominator is treated as a pole.
pub const KERNEL_GUARD: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// ρᵃn, τᵃn, ρᵇn+1, τᵇn+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub rho_a: Complex64,
    pub tau_a: Complex64,
    pub rho_b: Complex64,
    pub tau_b: Complex64,
}

impl ScatteringAmplitudes {
    /// Atom passes through an empty region unchanged.
    pub fn free() -> Self {
        ScatteringAmplitudes {
            rho_a: Complex64::new(0.0, 0.0),
            tau_a: ONE,
            rho_b: Complex64::new(0.0, 0.0),
            tau_b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.rho_a, self.tau_a, self.rho_b, self.tau_b]
    }

    /// Componentwise max-norm distance.
    pub fn max_abs_diff(&self, other: &ScatteringAmplitudes) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelProbabilities {
    pub r_a: f64,
    pub t_a: f64,
    pub r_b: f64,
    pub t_b: f64,
}

impl ChannelProbabilities {
    pub fn total(&self) -> f64 {
        self.r_a + self.t_a + self.r_b + self.t_b
    }

    /// Induced emission probability R^b + T^b.
    pub fn emission(&self) -> f64 {
        self.r_b + self.t_b
    }
}

/// Flux-weighted channel probabilities.
///
/// The lower-state channel carries the factor k_b/k and contributes nothing
/// unless k_b is real and positive.
pub fn probabilities(amps: &ScatteringAmplitudes, waves: &ChannelWavenumbers) -> ChannelProbabilities {
    let (r_b, t_b) = if waves.b_propagating {
        let flux = waves.k_b.re / waves.k;
        (flux * amps.rho_b.norm_sqr(), flux * amps.tau_b.norm_sqr())
    } else {
        (0.0, 0.0)
    };
    ChannelProbabilities {
        r_a: amps.rho_a.norm_sqr(),
        t_a: amps.tau_a.norm_sqr(),
        r_b,
        t_b,
    }
}

/// Induced emission probability for the mesa mode.
///
/// Exactly zero when k/κ ≤ √(δ/g); the amplitudes are not evaluated then.
pub fn emission_probability(params: &MazerParams) -> Result<f64> {
    params.validate()?;
    if !params.emission_allowed() {
        return Ok(0.0);
    }
    let waves = channel_wavenumbers(params);
    let amps = mesa_amplitudes(params)?;
    Ok(probabilities(&amps, &waves).emission())
}

fn guarded_inv(kernel: &'static str, value: Complex64, scale: f64) -> Result<Complex64> {
    let magnitude = value.norm();
    if !magnitude.is_finite() || magnitude <= KERNEL_GUARD * scale {
        return Err(MazerError::SingularKernel { kernel, magnitude });
    }
    Ok(value.inv())
}

fn guarded_div(kernel: &'static str, num: Complex64, den: Complex64, scale: f64) -> Result<Complex64> {
    Ok(num * guarded_inv(kernel, den, scale)?)
}

/// One dressed channel inside the cavity: k±n with cos and sin of k±n·L.
#[derive(Debug, Clone, Copy)]
struct DressedChannel {
    q: Complex64,
    cos: Complex64,
    sin: Complex64,
}

impl DressedChannel {
    fn new(q: Complex64, length: f64) -> Self {
        let phase = q * length;
        DressedChannel {
            q,
            cos: phase.cos(),
            sin: phase.sin(),
        }
    }

    /// Σ(x) = (q/x + x/q)/2.
    fn sigma(&self, x: Complex64, scale: f64) -> Result<Complex64> {
        let q_over_x = guarded_div("q/x", self.q, x, scale)?;
        let x_over_q = guarded_div("x/q", x, self.q, scale)?;
        Ok(0.5 * (q_over_x + x_over_q))
    }

    /// Δ(x) = (q/x − x/q)/2.
    fn delta(&self, x: Complex64, scale: f64) -> Result<Complex64> {
        let q_over_x = guarded_div("q/x", self.q, x, scale)?;
        let x_over_q = guarded_div("x/q", x, self.q, scale)?;
        Ok(0.5 * (q_over_x - x_over_q))
    }

    /// cos(qL) − i·X·sin(qL); every τ-type kernel is the reciprocal of this.
    fn barrier_denominator(&self, factor: Complex64) -> Complex64 {
        self.cos - I * factor * self.sin
    }

    fn barrier_scale(&self, factor: Complex64) -> f64 {
        self.cos.norm() + (factor * self.sin).norm()
    }

    fn invert(&self, kernel: &'static str, factor: Complex64) -> Result<Complex64> {
        guarded_inv(kernel, self.barrier_denominator(factor), self.barrier_scale(factor))
    }

    /// τ(x) = [cos(qL) − iΣ(x) sin(qL)]⁻¹.
    fn tau(&self, x: Complex64, scale: f64) -> Result<Complex64> {
        self.invert("tau", self.sigma(x, scale)?)
    }

    /// ρ(x) = iΔ(x) sin(qL) τ(x).
    fn rho(&self, x: Complex64, scale: f64) -> Result<Complex64> {
        Ok(I * self.delta(x, scale)? * self.sin * self.tau(x, scale)?)
    }

    /// tan(qL/2), guarded at the half-angle cosine zeros.
    fn half_tan(&self, length: f64) -> Result<Complex64> {
        let half = self.q * (0.5 * length);
        let (s, c) = (half.sin(), half.cos());
        guarded_div("tan(qL/2)", s, c, s.norm() + c.norm())
    }

    /// cot(qL/2), guarded at the half-angle sine zeros.
    fn half_cot(&self, length: f64) -> Result<Complex64> {
        let half = self.q * (0.5 * length);
        let (s, c) = (half.sin(), half.cos());
        guarded_div("cot(qL/2)", c, s, s.norm() + c.norm())
    }
}

/// Every helper kernel of the detuned mesa problem for one parameter point.
///
/// Naming follows the role each kernel plays: `tau_*` are barrier-type
/// transmission kernels of a dressed channel, `k_c`/`k_t` are the two
/// effective interface momenta that carry the detuning-induced step.
struct MesaKernels {
    k: Complex64,
    k_b: Complex64,
    plus: DressedChannel,
    minus: DressedChannel,
    cos2: f64,
    sin2: f64,
    sin_2theta: f64,
    cos_2theta: f64,
    length: f64,
    /// Momentum scale for relative guards.
    scale: f64,
}

impl MesaKernels {
    fn new(params: &MazerParams) -> Self {
        let frame = dressed_frame(params.n, params.delta_over_g);
        let waves = channel_wavenumbers(params);
        let length = params.kappa_l;
        let scale = waves
            .k
            .max(waves.k_b.norm())
            .max(waves.k_plus.norm())
            .max(waves.k_minus.norm());
        MesaKernels {
            k: Complex64::new(waves.k, 0.0),
            k_b: waves.k_b,
            plus: DressedChannel::new(waves.k_plus, length),
            minus: DressedChannel::new(waves.k_minus, length),
            cos2: frame.cos_theta * frame.cos_theta,
            sin2: frame.sin_theta * frame.sin_theta,
            sin_2theta: frame.sin_2theta(),
            cos_2theta: frame.cos_2theta(),
            length,
            scale,
        }
    }

    fn ratio(&self, kernel: &'static str, num: Complex64, den: Complex64) -> Result<Complex64> {
        guarded_div(kernel, num, den, self.scale)
    }

    /// Inverse of τ′(k, k_b): cos(qL) − i (k_b/k) Σ(k) sin(qL).
    fn tau_prime_inv(&self, ch: &DressedChannel) -> Result<Complex64> {
        let factor = self.ratio("k_b/k", self.k_b, self.k)? * ch.sigma(self.k, self.scale)?;
        Ok(ch.barrier_denominator(factor))
    }

    /// Inverse of τ″(k, k_b): cos(qL) − i (k/k_b) Σ(k) sin(qL).
    fn tau_dprime_inv(&self, ch: &DressedChannel) -> Result<Complex64> {
        let factor = self.ratio("k/k_b", self.k, self.k_b)? * ch.sigma(self.k, self.scale)?;
        Ok(ch.barrier_denominator(factor))
    }

    /// Σ̃(k, k_b) = q/(k + k_b) + (k_b/(k + k_b))(k/q).
    fn sigma_tilde(&self, ch: &DressedChannel) -> Result<Complex64> {
        let sum = self.k + self.k_b;
        let a = self.ratio("q/(k+k_b)", ch.q, sum)?;
        let b = self.ratio("k_b/(k+k_b)", self.k_b, sum)? * self.ratio("k/q", self.k, ch.q)?;
        Ok(a + b)
    }

    /// Inverse of τ̃(k, k_b).
    fn tau_tilde_inv(&self, ch: &DressedChannel) -> Result<Complex64> {
        Ok(ch.barrier_denominator(self.sigma_tilde(ch)?))
    }

    /// Inverse of τ̄(k, k_b): cos(qL) − i ((k + k_b)/2k_b) Σ(k) sin(qL).
    fn tau_bar_inv(&self, ch: &DressedChannel) -> Result<Complex64> {
        let factor = self.ratio("(k+k_b)/2k_b", self.k + self.k_b, 2.0 * self.k_b)? * ch.sigma(self.k, self.scale)?;
        Ok(ch.barrier_denominator(factor))
    }

    /// S⁺⁻ = sin₊ sin₋ (k₋/k₊ + k₊/k₋) + 2(cos₋ cos₊ − 1).
    fn s_pm(&self) -> Result<Complex64> {
        let (p, m) = (&self.plus, &self.minus);
        let mix = self.ratio("k-/k+", m.q, p.q)? + self.ratio("k+/k-", p.q, m.q)?;
        Ok(p.sin * m.sin * mix + 2.0 * (m.cos * p.cos - ONE))
    }

    /// u_n ρ⁻(k) ρ⁺(k_b) / (Δ⁻(k) Δ⁺(k_b)), using ρ(x) = iΔ(x) sin(qL) τ(x) so
    /// that neither the sines in u_n nor the Δ factors are divided out.
    fn u_rho_rho_over_delta(&self, s_pm: Complex64, tau_m_k: Complex64, tau_p_kb: Complex64) -> Result<Complex64> {
        let (p, m) = (&self.plus, &self.minus);
        let prod = m.q * p.q;
        let k2 = self.k * self.k;
        let second = self.ratio("k-k+/k^2", prod, k2)? - self.ratio("k^2/k-k+", k2, prod)?;
        Ok(-(self.sin2 * s_pm + second * m.sin * p.sin) * tau_m_k * tau_p_kb)
    }

    fn v_kernel(&self, s_pm: Complex64) -> Result<Complex64> {
        let (p, m) = (&self.plus, &self.minus);
        let a = self.ratio("k+/k", p.q, self.k)? * p.sin * m.cos;
        let b = self.ratio("k-/k", m.q, self.k)? * m.sin * p.cos;
        Ok(I * (a - b) - 0.5 * self.cos_2theta * s_pm)
    }

    /// k^c_n(L).
    fn k_c(&self) -> Result<Complex64> {
        let cm = self.minus.half_cot(self.length)? * self.minus.q;
        let cp = self.plus.half_cot(self.length)? * self.plus.q;
        let num = I * (self.k + I * cm) * (self.k_b + I * cp);
        let den = cm - cp;
        guarded_div("k_c", num, den, cm.norm() + cp.norm())
    }

    /// k^t_n(L).
    fn k_t(&self) -> Result<Complex64> {
        let tm = self.minus.half_tan(self.length)? * self.minus.q;
        let tp = self.plus.half_tan(self.length)? * self.plus.q;
        let num = I * (self.k - I * tm) * (self.k_b - I * tp);
        let den = tp - tm;
        guarded_div("k_t", num, den, tm.norm() + tp.norm())
    }

    /// The two factors (cos²θ (k − k_b)/k^c − 1) and (cos²θ (k − k_b)/k^t − 1).
    ///
    /// At resonance k = k_b and both are −1 without touching k^c, k^t.
    fn step_factors(&self) -> Result<(Complex64, Complex64)> {
        let gap = self.k - self.k_b;
        if gap == Complex64::new(0.0, 0.0) {
            return Ok((-ONE, -ONE));
        }
        let c = self.cos2 * gap;
        let fc = self.ratio("1/k_c", c, self.k_c()?)? - ONE;
        let ft = self.ratio("1/k_t", c, self.k_t()?)? - ONE;
        Ok((fc, ft))
    }

    fn amplitudes(&self) -> Result<ScatteringAmplitudes> {
        let (k, k_b) = (self.k, self.k_b);
        let (p, m) = (&self.plus, &self.minus);
        let s = self.scale;

        let tau_m_k = m.tau(k, s)?;
        let tau_m_kb = m.tau(k_b, s)?;
        let tau_p_kb = p.tau(k_b, s)?;
        let rho_m_k = m.rho(k, s)?;
        // Δ⁺(k)/Δ⁺(k_b) · ρ⁺(k_b)
        let rho_p_kb_scaled = I * p.delta(k, s)? * p.sin * tau_p_kb;

        let (fc, ft) = self.step_factors()?;
        let common = fc * ft;
        let common_scale = (self.cos2 * (k - k_b)).norm().max(1.0);
        let inv_common = guarded_inv("step denominator", common, common_scale * common_scale)?;

        // τᵃ
        let tau_a = (self.cos2 * self.ratio("tau-(k)/tau-(k_b)", tau_m_k, tau_m_kb)? * tau_p_kb + self.sin2 * tau_m_k)
            * inv_common;

        // ρᵃ
        let s_pm = self.s_pm()?;
        let k_ratio = self.ratio("k_b/k", k_b, k)? - self.ratio("k/k_b", k, k_b)?;
        let rho_a = (self.cos2 * tau_m_k * self.tau_prime_inv(m)? * rho_p_kb_scaled
            + (ONE - self.cos2 * tau_p_kb * self.tau_dprime_inv(p)?) * rho_m_k
            + 0.25 * self.cos2 * k_ratio * self.u_rho_rho_over_delta(s_pm, tau_m_k, tau_p_kb)?)
            * inv_common;

        // τᵇ
        let prefactor = 0.25 * self.sin_2theta * (ONE + self.ratio("k/k_b", k, k_b)?);
        let tau_b = prefactor
            * (tau_m_k * self.tau_tilde_inv(m)? * tau_p_kb - tau_p_kb * self.tau_tilde_inv(p)? * tau_m_k)
            * inv_common;

        // ρᵇ
        let v = self.v_kernel(s_pm)?;
        let rho_b = self.sin_2theta
            * (0.5 * tau_m_k * self.tau_bar_inv(m)? * rho_p_kb_scaled
                - 0.5 * tau_p_kb * self.tau_bar_inv(p)? * rho_m_k
                + 0.25 * (self.ratio("k/k_b", k, k_b)? - ONE) * v * tau_m_k * tau_p_kb)
            * inv_common;

        let amps = ScatteringAmplitudes {
            rho_a,
            tau_a,
            rho_b,
            tau_b,
        };
        if !amps.is_finite() {
            return Err(MazerError::SingularKernel {
                kernel: "non-finite amplitude",
                magnitude: f64::NAN,
            });
        }
        Ok(amps)
    }
}

/// Closed-form mesa amplitudes for any detuning.
pub fn mesa_amplitudes(params: &MazerParams) -> Result<ScatteringAmplitudes> {
    params.validate()?;
    if params.kappa_l == 0.0 {
        return Ok(ScatteringAmplitudes::free());
    }
    MesaKernels::new(params).amplitudes()
}

/// The two step-induced factors that enter ℬ(L) and every amplitude's
/// denominator: (cos²θn (k − k_b)/k^c_n(L) − 1, cos²θn (k − k_b)/k^t_n(L) − 1).
pub fn step_factors(params: &MazerParams) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    MesaKernels::new(params).step_factors()
}

/// Resonant amplitudes from half-sums of the two dressed single-barrier
/// problems. Deliberately shares no code with [`mesa_amplitudes`]; used to
/// cross-check it at δ = 0.
pub fn resonant_amplitudes(params: &MazerParams) -> Result<ScatteringAmplitudes> {
    params.validate()?;
    if params.delta_over_g != 0.0 {
        return Err(MazerError::Precondition(format!(
            "resonant amplitudes need delta/g = 0, got {}",
            params.delta_over_g
        )));
    }
    let k = params.k_over_kappa;
    let length = params.kappa_l;
    // At resonance tan θ = cot θ = 1, so the dressed channels see ±κn².
    let kn2 = kappa_n(params.n).powi(2);

    let barrier = |q2: f64| -> Result<(Complex64, Complex64)> {
        let q = if q2 >= 0.0 {
            Complex64::new(q2.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-q2).sqrt())
        };
        if length == 0.0 {
            return Ok((ONE, Complex64::new(0.0, 0.0)));
        }
        let kk = Complex64::new(k, 0.0);
        if q.norm() <= KERNEL_GUARD * k {
            return Err(MazerError::SingularKernel {
                kernel: "resonant q",
                magnitude: q.norm(),
            });
        }
        let (c, s) = ((q * length).cos(), (q * length).sin());
        let sigma = 0.5 * (q / kk + kk / q);
        let delta = 0.5 * (q / kk - kk / q);
        let den = c - I * sigma * s;
        let tau = guarded_inv("resonant tau", den, c.norm() + (sigma * s).norm())?;
        Ok((tau, I * delta * s * tau))
    };

    let (tau_p, rho_p) = barrier(k * k - kn2)?;
    let (tau_m, rho_m) = barrier(k * k + kn2)?;
    Ok(ScatteringAmplitudes {
        rho_a: 0.5 * (rho_p + rho_m),
        tau_a: 0.5 * (tau_p + tau_m),
        rho_b: 0.5 * (rho_p - rho_m),
        tau_b: 0.5 * (tau_p - tau_m),
    })
}
