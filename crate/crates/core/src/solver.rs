//! Coupled-channel solver for an arbitrary cavity mode profile u(z).
//!
//! Works in the bare basis (|a,n⟩, |b,n+1⟩), where the two stationary
//! components obey φ'' = −K(u) φ with
//!
//! ```text
//! K(u) = [[ k²,          −√(n+1)·u ],
//!         [ −√(n+1)·u,   k² − δ/g  ]]        (units of κ)
//! ```
//!
//! [0, L] is cut into slices of constant u. Inside a slice K is diagonalised
//! exactly, so each slice is solved without discretisation error; a mesa mode
//! is a single slice.
//!
//! Two routes are provided. [`slice_transfer`] gives the 4×4 propagator of
//! (φᵃ, φᵃ', φᵇ, φᵇ') and [`transfer_matrix_amplitudes`] multiplies them up
//! and solves the boundary system directly. That product mixes e^{±|q|L} for
//! closed channels and loses the decaying half, so [`solve_scattering`]
//! instead sweeps the slices with forward/backward amplitudes normalised at
//! the slice edge they decay away from, which keeps every intermediate
//! quantity bounded.

use std::path::Path;

use nalgebra::{Matrix2, Matrix4, Matrix4x2};
use num_complex::Complex64;

use crate::error::{MazerError, Result};
use crate::mesa::ScatteringAmplitudes;
use crate::model::{branch_sqrt, MazerParams};

/// Largest admissible condition number of a boundary/interface system.
pub const MAX_CONDITION: f64 = 1e12;
/// Smooth profiles default to this many slices.
pub const DEFAULT_SLICES: usize = 256;
pub const CONVERGE_START: usize = 16;
pub const CONVERGE_CAP: usize = 1 << 14;

/// Half-width of the sech² profile as a fraction of L; u(0) = u(L) = sech²(4).
pub const SECH2_WIDTH_FRACTION: f64 = 0.125;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// u ≡ 1 on [0, L].
    Mesa,
    /// u = sech²((z − L/2)/w), w = L/8.
    Sech2,
    /// u = sin²(πz/L).
    Sine2,
    /// Linear interpolation between (z/L, u) samples.
    Sampled(Vec<(f64, f64)>),
}

/// Cavity mode shape on [0, L]; zero outside. The length itself comes from
/// the scattering parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub kind: ProfileKind,
}

impl ModeProfile {
    pub fn mesa() -> Self {
        ModeProfile {
            kind: ProfileKind::Mesa,
        }
    }

    pub fn sech2() -> Self {
        ModeProfile {
            kind: ProfileKind::Sech2,
        }
    }

    pub fn sine2() -> Self {
        ModeProfile {
            kind: ProfileKind::Sine2,
        }
    }

    pub fn sampled(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(MazerError::InvalidParams(
                "sampled profile needs at least one sample".into(),
            ));
        }
        for (i, &(z, u)) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(&z) || !u.is_finite() || u < 0.0 {
                return Err(MazerError::InvalidParams(format!(
                    "sample {i}: need z in [0,1] and u >= 0, got ({z}, {u})"
                )));
            }
            if i > 0 && z <= samples[i - 1].0 {
                return Err(MazerError::InvalidParams(format!(
                    "sample {i}: z fractions must be strictly increasing"
                )));
            }
        }
        Ok(ModeProfile {
            kind: ProfileKind::Sampled(samples),
        })
    }

    /// Parses the two-column text format: `z_fraction u` per line,
    /// whitespace separated, `#` starts a comment.
    pub fn parse_samples(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(MazerError::ProfileParse {
                    line: idx + 1,
                    message: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| MazerError::ProfileParse {
                    line: idx + 1,
                    message: format!("`{s}`: {e}"),
                })
            };
            samples.push((parse(fields[0])?, parse(fields[1])?));
        }
        ModeProfile::sampled(samples)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ModeProfile::parse_samples(&text)
    }

    /// Mode function at fractional position s = z/L ∈ [0, 1].
    pub fn value_at(&self, s: f64) -> f64 {
        if !(0.0..=1.0).contains(&s) {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::Mesa => 1.0,
            ProfileKind::Sech2 => {
                let x = (s - 0.5) / SECH2_WIDTH_FRACTION;
                let c = x.cosh();
                1.0 / (c * c)
            }
            ProfileKind::Sine2 => (std::f64::consts::PI * s).sin().powi(2),
            ProfileKind::Sampled(samples) => interpolate(samples, s),
        }
    }

    pub fn default_slices(&self) -> usize {
        match self.kind {
            ProfileKind::Mesa => 1,
            _ => DEFAULT_SLICES,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ProfileKind::Mesa => "mesa",
            ProfileKind::Sech2 => "sech2",
            ProfileKind::Sine2 => "sine2",
            ProfileKind::Sampled(_) => "sampled",
        }
    }

    /// Midpoint value of each of `n_slices` equal slices.
    pub fn slice_values(&self, n_slices: usize) -> Vec<f64> {
        let h = 1.0 / n_slices as f64;
        (0..n_slices).map(|j| self.value_at((j as f64 + 0.5) * h)).collect()
    }
}

fn interpolate(samples: &[(f64, f64)], s: f64) -> f64 {
    let first = samples[0];
    let last = samples[samples.len() - 1];
    if s <= first.0 {
        return first.1;
    }
    if s >= last.0 {
        return last.1;
    }
    let idx = samples.partition_point(|&(z, _)| z <= s);
    let (z0, u0) = samples[idx - 1];
    let (z1, u1) = samples[idx];
    u0 + (u1 - u0) * (s - z0) / (z1 - z0)
}

/// K(u) such that φ'' = −K φ in the bare basis.
pub fn stationary_coupling_matrix(u: f64, params: &MazerParams) -> [[f64; 2]; 2] {
    let k2 = params.kinetic_energy();
    let coupling = (params.n as f64 + 1.0).sqrt() * u;
    [[k2, -coupling], [-coupling, k2 - params.delta_over_g]]
}

/// Eigen-decomposition of K(u): rotation angle of the upper eigenvector and
/// the two local squared wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalChannels {
    /// Eigenvectors are (cos φ, sin φ) and (−sin φ, cos φ).
    pub angle: f64,
    /// Squared wavenumbers of the two eigenchannels, matching the vectors above.
    pub q2: [f64; 2],
}

impl LocalChannels {
    pub fn new(u: f64, params: &MazerParams) -> Self {
        let k2 = params.kinetic_energy();
        let d = params.delta_over_g;
        let c = (params.n as f64 + 1.0).sqrt() * u;
        // eigenvalues of the potential [[0, c], [c, d]], product = −c²
        let r = d.hypot(2.0 * c);
        let (upper, lower) = if d >= 0.0 {
            let upper = 0.5 * (d + r);
            let lower = if upper == 0.0 { 0.0 } else { -c * c / upper };
            (upper, lower)
        } else {
            let lower = 0.5 * (d - r);
            (-c * c / lower, lower)
        };
        let angle = 0.5 * (2.0 * c).atan2(-d);
        LocalChannels {
            angle,
            q2: [k2 - upper, k2 - lower],
        }
    }

    fn rotation(&self) -> Matrix2<C> {
        let (s, c) = self.angle.sin_cos();
        Matrix2::new(C::new(c, 0.0), C::new(-s, 0.0), C::new(s, 0.0), C::new(c, 0.0))
    }

    fn wavenumbers(&self) -> [C; 2] {
        [branch_sqrt(self.q2[0]), branch_sqrt(self.q2[1])]
    }
}

/// (cos(q dz), sin(q dz)/q, −q sin(q dz)).
fn free_blocks(q: C, dz: f64) -> (C, C, C) {
    let x = q * dz;
    let cos = x.cos();
    let sinc_dz = if x.norm() < 1e-4 {
        let x2 = x * x;
        dz * (ONE - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / q
    };
    (cos, sinc_dz, -q * x.sin())
}

/// Exact propagator of (φᵃ, φᵃ', φᵇ, φᵇ') across one constant-u slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceTransfer {
    pub matrix: Matrix4<C>,
}

impl SliceTransfer {
    pub fn identity() -> Self {
        SliceTransfer {
            matrix: Matrix4::identity(),
        }
    }

    pub fn determinant(&self) -> C {
        self.matrix.determinant()
    }

    /// This slice followed by `next`.
    pub fn then(&self, next: &SliceTransfer) -> SliceTransfer {
        SliceTransfer {
            matrix: next.matrix * self.matrix,
        }
    }
}

pub fn slice_transfer(u: f64, dz: f64, params: &MazerParams) -> SliceTransfer {
    let local = LocalChannels::new(u, params);
    let (s, c) = local.angle.sin_cos();
    let vectors = [[c, s], [-s, c]];
    let mut m = Matrix4::<C>::zeros();
    for (channel, q) in local.wavenumbers().into_iter().enumerate() {
        let (cos, sinc, qsin) = free_blocks(q, dz);
        let block = [[cos, sinc], [qsin, cos]];
        let e = vectors[channel];
        for a in 0..2 {
            for b in 0..2 {
                let w = e[a] * e[b];
                for x in 0..2 {
                    for y in 0..2 {
                        m[(2 * a + x, 2 * b + y)] += block[x][y] * w;
                    }
                }
            }
        }
    }
    SliceTransfer { matrix: m }
}

fn check_slices(n_slices: usize) -> Result<()> {
    if n_slices == 0 {
        return Err(MazerError::InvalidParams("n_slices must be >= 1".into()));
    }
    Ok(())
}

fn condition_number(m: &Matrix4<C>) -> Result<(f64, Matrix4<C>)> {
    let norm1 = |a: &Matrix4<C>| {
        (0..4)
            .map(|j| (0..4).map(|i| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let inv = m.try_inverse().ok_or(MazerError::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(MazerError::IllConditioned { condition: cond });
    }
    Ok((cond, inv))
}

/// Direct route: multiply the slice propagators and solve the 4×4 boundary
/// system for (ρᵃ, ρᵇ, τᵃ, τᵇ). Accurate while no channel is deeply closed.
pub fn transfer_matrix_amplitudes(
    profile: &ModeProfile,
    params: &MazerParams,
    n_slices: usize,
) -> Result<ScatteringAmplitudes> {
    params.validate()?;
    check_slices(n_slices)?;
    let length = params.kappa_l;
    if length == 0.0 {
        return Ok(ScatteringAmplitudes::free());
    }
    let dz = length / n_slices as f64;
    let total = profile
        .slice_values(n_slices)
        .into_iter()
        .fold(SliceTransfer::identity(), |acc, u| {
            acc.then(&slice_transfer(u, dz, params))
        });
    let m = total.matrix;

    let k = C::new(params.k_over_kappa, 0.0);
    let k_b = branch_sqrt(params.kinetic_energy() - params.delta_over_g);
    let v = |a: C, b: C, c: C, d: C| nalgebra::Vector4::new(a, b, c, d);
    let incoming = m * v(ONE, I * k, ZERO, ZERO);
    let cols = [
        m * v(ONE, -I * k, ZERO, ZERO),
        m * v(ZERO, ZERO, ONE, -I * k_b),
        -v(ONE, I * k, ZERO, ZERO),
        -v(ZERO, ZERO, ONE, I * k_b),
    ];
    let system = Matrix4::from_columns(&cols);
    let (_, inv) = condition_number(&system)?;
    let x = inv * (-incoming);
    Ok(ScatteringAmplitudes {
        rho_a: x[0],
        rho_b: x[1],
        tau_a: x[2],
        tau_b: x[3],
    })
}

/// A region between two interfaces, in its own eigenchannel basis.
struct Region {
    rotation: Matrix2<C>,
    q: [C; 2],
    /// e^{iq·width}; identity for the semi-infinite exteriors.
    phase: Matrix2<C>,
}

impl Region {
    fn exterior(params: &MazerParams) -> Self {
        Region {
            rotation: Matrix2::identity(),
            q: [
                C::new(params.k_over_kappa, 0.0),
                branch_sqrt(params.kinetic_energy() - params.delta_over_g),
            ],
            phase: Matrix2::identity(),
        }
    }

    fn slice(u: f64, width: f64, params: &MazerParams) -> Self {
        let local = LocalChannels::new(u, params);
        let q = local.wavenumbers();
        Region {
            rotation: local.rotation(),
            q,
            phase: Matrix2::from_diagonal(&nalgebra::Vector2::new(
                (I * q[0] * width).exp(),
                (I * q[1] * width).exp(),
            )),
        }
    }

    fn q_diag(&self) -> Matrix2<C> {
        Matrix2::from_diagonal(&nalgebra::Vector2::new(I * self.q[0], I * self.q[1]))
    }
}

/// Matching across one interface.
///
/// `gamma_right` maps the forward to the backward amplitude at the left edge
/// of the right region. Returns (G, W): backward = G·forward on the left
/// side, and right-side forward = W·left-side forward.
fn match_interface(left: &Region, right: &Region, gamma_right: &Matrix2<C>) -> Result<(Matrix2<C>, Matrix2<C>)> {
    let overlap = left.rotation.transpose() * right.rotation;
    let id = Matrix2::<C>::identity();
    let value = overlap * (id + gamma_right);
    let slope = overlap * right.q_diag() * (id - gamma_right);
    let ql = left.q_diag();

    // unknowns (b_L, a_R):  b_L − value·a_R = −a_L,  −Q_L b_L − slope·a_R = −Q_L a_L
    let mut system = Matrix4::<C>::zeros();
    let mut rhs = Matrix4x2::<C>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            system[(i, j)] = id[(i, j)];
            system[(i, j + 2)] = -value[(i, j)];
            system[(i + 2, j)] = -ql[(i, j)];
            system[(i + 2, j + 2)] = -slope[(i, j)];
            rhs[(i, j)] = -id[(i, j)];
            rhs[(i + 2, j)] = -ql[(i, j)];
        }
    }
    let (_, inv) = condition_number(&system)?;
    let x = inv * rhs;
    let g = x.fixed_view::<2, 2>(0, 0).into_owned();
    let w = x.fixed_view::<2, 2>(2, 0).into_owned();
    Ok((g, w))
}

/// Scattering amplitudes for `profile` cut into `n_slices` constant slices.
///
/// Incoming unit wave in |a,n⟩ from the left; outgoing or decaying waves in
/// both channels on either side.
pub fn solve_scattering(profile: &ModeProfile, params: &MazerParams, n_slices: usize) -> Result<ScatteringAmplitudes> {
    params.validate()?;
    check_slices(n_slices)?;
    if params.kappa_l == 0.0 {
        return Ok(ScatteringAmplitudes::free());
    }
    let width = params.kappa_l / n_slices as f64;
    let mut regions = Vec::with_capacity(n_slices + 2);
    regions.push(Region::exterior(params));
    regions.extend(
        profile
            .slice_values(n_slices)
            .into_iter()
            .map(|u| Region::slice(u, width, params)),
    );
    regions.push(Region::exterior(params));

    // Backward sweep: reflection seen at each region's left edge.
    let interfaces = regions.len() - 1;
    let mut gamma = Matrix2::<C>::zeros();
    let mut forward_maps = vec![Matrix2::<C>::zeros(); interfaces];
    let mut reflection_left = Matrix2::<C>::zeros();
    for j in (0..interfaces).rev() {
        let (g, w) = match_interface(&regions[j], &regions[j + 1], &gamma)?;
        forward_maps[j] = w;
        let e = regions[j].phase;
        gamma = e * g * e;
        if j == 0 {
            reflection_left = g;
        }
    }

    // Forward sweep: transmitted amplitudes.
    let incident = nalgebra::Vector2::new(ONE, ZERO);
    let reflected = reflection_left * incident;
    let mut amplitude = forward_maps[0] * incident;
    for j in 1..interfaces {
        amplitude = forward_maps[j] * (regions[j].phase * amplitude);
    }

    let amps = ScatteringAmplitudes {
        rho_a: reflected[0],
        rho_b: reflected[1],
        tau_a: amplitude[0],
        tau_b: amplitude[1],
    };
    if !amps.is_finite() {
        return Err(MazerError::IllConditioned {
            condition: f64::INFINITY,
        });
    }
    Ok(amps)
}

/// Doubles the slice count from 16 until two successive solutions differ by
/// less than `tol` in max-norm. Returns the finer solution and its slice count.
pub fn converge(profile: &ModeProfile, params: &MazerParams, tol: f64) -> Result<(ScatteringAmplitudes, usize)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(MazerError::InvalidParams(format!("tolerance must be > 0, got {tol}")));
    }
    let mut slices = CONVERGE_START;
    let mut previous = solve_scattering(profile, params, slices)?;
    loop {
        if slices >= CONVERGE_CAP {
            let change = previous.max_abs_diff(&solve_scattering(profile, params, slices / 2)?);
            return Err(MazerError::NoConvergence { slices, change });
        }
        slices *= 2;
        let current = solve_scattering(profile, params, slices)?;
        if current.max_abs_diff(&previous) < tol {
            return Ok((current, slices));
        }
        previous = current;
    }
}
