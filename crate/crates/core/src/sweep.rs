//! Parameter sweeps, engine comparison and peak tables behind the `mazer` CLI.
//!
//! Grid points are independent and evaluated on the rayon pool; rows are
//! collected in grid order, so output is identical regardless of scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{MazerError, Result};
use crate::mesa::{mesa_amplitudes, probabilities, ChannelProbabilities};
use crate::model::{channel_wavenumbers, MazerParams};
use crate::regimes::{cold_emission_approx, cold_emission_fit, find_maxima, peak_report, rabi_emission, PeakReport};
use crate::solver::{solve_scattering, ModeProfile};

/// Share of failed grid points above which a sweep counts as a numerical failure.
pub const FAILURE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    KOverKappa,
    DeltaOverG,
    KappaL,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::KOverKappa => "k_over_kappa",
            Axis::DeltaOverG => "delta_over_g",
            Axis::KappaL => "kappa_l",
        }
    }

    pub fn get(&self, p: &MazerParams) -> f64 {
        match self {
            Axis::KOverKappa => p.k_over_kappa,
            Axis::DeltaOverG => p.delta_over_g,
            Axis::KappaL => p.kappa_l,
        }
    }

    pub fn set(&self, p: MazerParams, value: f64) -> MazerParams {
        match self {
            Axis::KOverKappa => p.with_k(value),
            Axis::DeltaOverG => p.with_delta(value),
            Axis::KappaL => p.with_kappa_l(value),
        }
    }

    const ALL: [Axis; 3] = [Axis::KOverKappa, Axis::DeltaOverG, Axis::KappaL];
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "k_over_kappa" | "k" => Ok(Axis::KOverKappa),
            "delta_over_g" | "delta" => Ok(Axis::DeltaOverG),
            "kappa_l" | "kappa_L" | "L" => Ok(Axis::KappaL),
            other => Err(format!("unknown axis `{other}` (k_over_kappa, delta_over_g, kappa_l)")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    ClosedForm,
    Oracle,
    Rabi,
    ColdApprox,
    ColdFit,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::ClosedForm => "closed_form",
            Engine::Oracle => "oracle",
            Engine::Rabi => "rabi",
            Engine::ColdApprox => "cold_approx",
            Engine::ColdFit => "cold_fit",
        }
    }

    /// Engines that only know the mesa mode.
    fn mesa_only(&self) -> bool {
        !matches!(self, Engine::Oracle)
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "closed_form" => Ok(Engine::ClosedForm),
            "oracle" => Ok(Engine::Oracle),
            "rabi" => Ok(Engine::Rabi),
            "cold_approx" => Ok(Engine::ColdApprox),
            "cold_fit" => Ok(Engine::ColdFit),
            other => Err(format!(
                "unknown engine `{other}` (closed_form, oracle, rabi, cold_approx, cold_fit)"
            )),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(axis: Axis, min: f64, max: f64, steps: usize) -> Self {
        AxisRange { axis, min, max, steps }
    }

    /// `steps` evenly spaced values including both ends.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / last)
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(MazerError::InvalidParams(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(MazerError::InvalidParams(format!(
                "need finite min < max on axis {}, got [{}, {}]",
                self.axis, self.min, self.max
            )));
        }
        match self.axis {
            Axis::KOverKappa if self.min <= 0.0 => {
                Err(MazerError::InvalidParams("k_over_kappa range must be > 0".into()))
            }
            Axis::KappaL if self.min < 0.0 => Err(MazerError::InvalidParams("kappa_l range must be >= 0".into())),
            _ => Ok(()),
        }
    }
}

/// Fixed values applied on top of the base parameters for one curve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    pub k_over_kappa: Option<f64>,
    pub delta_over_g: Option<f64>,
    pub kappa_l: Option<f64>,
}

impl Overrides {
    pub fn single(axis: Axis, value: f64) -> Self {
        let mut o = Overrides::default();
        o.set(axis, value);
        o
    }

    pub fn set(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::KOverKappa => self.k_over_kappa = Some(value),
            Axis::DeltaOverG => self.delta_over_g = Some(value),
            Axis::KappaL => self.kappa_l = Some(value),
        }
    }

    pub fn get(&self, axis: Axis) -> Option<f64> {
        match axis {
            Axis::KOverKappa => self.k_over_kappa,
            Axis::DeltaOverG => self.delta_over_g,
            Axis::KappaL => self.kappa_l,
        }
    }

    pub fn apply(&self, mut p: MazerParams) -> MazerParams {
        for axis in Axis::ALL {
            if let Some(v) = self.get(axis) {
                p = axis.set(p, v);
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Preset name, or "custom".
    pub label: String,
    pub base: MazerParams,
    /// Inner (fastest varying) axis.
    pub axis: AxisRange,
    /// Outer loop: one entry per curve. Empty means a single curve at `base`.
    pub series: Vec<Overrides>,
    pub engine: Engine,
    pub profile: ModeProfile,
    pub slices: Option<usize>,
    /// Pin κL to the m-th predicted cold-regime resonance at every point.
    pub peak_order: Option<u32>,
}

impl SweepSpec {
    pub fn new(base: MazerParams, axis: AxisRange, engine: Engine) -> Self {
        SweepSpec {
            label: "custom".into(),
            base,
            axis,
            series: Vec::new(),
            engine,
            profile: ModeProfile::mesa(),
            slices: None,
            peak_order: None,
        }
    }

    /// Outer series from a second axis range (a 2D sweep).
    pub fn with_second_axis(mut self, range: AxisRange) -> Self {
        self.series = range
            .values()
            .into_iter()
            .map(|v| Overrides::single(range.axis, v))
            .collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.axis.validate()?;
        if self.engine.mesa_only() && self.profile != ModeProfile::mesa() {
            return Err(MazerError::InvalidParams(format!(
                "engine {} only supports the mesa profile",
                self.engine
            )));
        }
        if self.slices == Some(0) {
            return Err(MazerError::InvalidParams("slices must be >= 1".into()));
        }
        if self.peak_order == Some(0) {
            return Err(MazerError::InvalidParams("peak order must be >= 1".into()));
        }
        if self.peak_order.is_some() && (self.axis.axis == Axis::KappaL || self.series_axes().contains(&Axis::KappaL)) {
            return Err(MazerError::InvalidParams(
                "kappa_l cannot be swept while pinned to a peak".into(),
            ));
        }
        if self.series_axes().contains(&self.axis.axis) {
            return Err(MazerError::InvalidParams(format!(
                "axis {} appears in both the sweep and the series",
                self.axis.axis
            )));
        }
        for p in self.points() {
            p.validate()?;
        }
        Ok(())
    }

    /// Axes set by at least one series entry, in canonical order.
    pub fn series_axes(&self) -> Vec<Axis> {
        Axis::ALL
            .into_iter()
            .filter(|a| self.series.iter().any(|s| s.get(*a).is_some()))
            .collect()
    }

    /// Every grid point, outer series major.
    pub fn points(&self) -> Vec<MazerParams> {
        let single = [Overrides::default()];
        let series: &[Overrides] = if self.series.is_empty() { &single } else { &self.series };
        let values = self.axis.values();
        let mut out = Vec::with_capacity(series.len() * values.len());
        for s in series {
            let curve = s.apply(self.base);
            for &v in &values {
                let mut p = self.axis.axis.set(curve, v);
                if let Some(m) = self.peak_order {
                    let report = peak_report(p.n, p.delta_over_g, p.k_over_kappa, m);
                    p = p.with_kappa_l(report.positions_kappa_l[m as usize - 1]);
                }
                out.push(p);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.series.len().max(1) * self.axis.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn describe(&self) -> String {
        let series = self
            .series
            .iter()
            .map(|s| {
                Axis::ALL
                    .into_iter()
                    .filter_map(|a| s.get(a).map(|v| format!("{}={}", a, v)))
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "preset={} engine={} profile={} slices={} n={} k_over_kappa={} delta_over_g={} kappa_l={} axis={} min={} max={} steps={} series=[{}] peak_order={}",
            self.label,
            self.engine,
            self.profile.name(),
            self.slices.map_or("default".to_string(), |s| s.to_string()),
            self.base.n,
            self.base.k_over_kappa,
            self.base.delta_over_g,
            self.base.kappa_l,
            self.axis.axis,
            self.axis.min,
            self.axis.max,
            self.axis.steps,
            series,
            self.peak_order.map_or("none".to_string(), |m| m.to_string()),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub params: MazerParams,
    /// Present for engines that resolve individual channels.
    pub probabilities: Option<ChannelProbabilities>,
    pub p_em: f64,
    pub error: Option<MazerError>,
}

impl Row {
    fn failed(params: MazerParams, err: MazerError) -> Self {
        Row {
            params,
            probabilities: None,
            p_em: f64::NAN,
            error: Some(err),
        }
    }
}

/// One grid point with the chosen engine.
pub fn evaluate_point(engine: Engine, profile: &ModeProfile, slices: Option<usize>, params: &MazerParams) -> Row {
    let channel_row = |amps: Result<crate::mesa::ScatteringAmplitudes>| match amps {
        Ok(a) => {
            let pr = probabilities(&a, &channel_wavenumbers(params));
            Row {
                params: *params,
                probabilities: Some(pr),
                p_em: pr.emission(),
                error: None,
            }
        }
        Err(e) => Row::failed(*params, e),
    };
    let scalar_row = |value: Result<f64>| match value {
        Ok(v) => Row {
            params: *params,
            probabilities: None,
            p_em: v,
            error: None,
        },
        Err(e) => Row::failed(*params, e),
    };
    match engine {
        Engine::ClosedForm => {
            if !params.emission_allowed() && params.kappa_l > 0.0 {
                // emission is exactly zero; amplitudes may still be refused at k_b = 0
                let mut row = channel_row(mesa_amplitudes(params));
                if row.error.is_some() {
                    row = scalar_row(Ok(0.0));
                }
                row
            } else {
                channel_row(mesa_amplitudes(params))
            }
        }
        Engine::Oracle => {
            let n = slices.unwrap_or_else(|| profile.default_slices());
            channel_row(solve_scattering(profile, params, n))
        }
        Engine::Rabi => scalar_row(Ok(rabi_emission(params))),
        Engine::ColdApprox => scalar_row(cold_emission_approx(params).map(|c| c.value)),
        Engine::ColdFit => scalar_row(Ok(cold_emission_fit(params))),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let points = spec.points();
    Ok(points
        .par_iter()
        .map(|p| evaluate_point(spec.engine, &spec.profile, spec.slices, p))
        .collect())
}

/// Rows whose evaluation failed numerically.
pub fn numerical_failures(rows: &[Row]) -> usize {
    rows.iter()
        .filter(|r| r.error.as_ref().is_some_and(|e| e.is_numerical()))
        .count()
}

pub fn exceeds_failure_budget(rows: &[Row]) -> bool {
    !rows.is_empty() && numerical_failures(rows) as f64 > FAILURE_FRACTION * rows.len() as f64
}

/// Twelve significant digits, fixed formatting.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.11e}", x)
    }
}

pub fn error_tag(err: &MazerError) -> &'static str {
    match err {
        MazerError::SingularKernel { .. } => "singular_kernel",
        MazerError::IllConditioned { .. } => "ill_conditioned",
        MazerError::NoConvergence { .. } => "no_convergence",
        MazerError::InvalidParams(_) => "invalid_params",
        MazerError::Precondition(_) => "precondition",
        MazerError::ProfileParse { .. } => "profile_parse",
        MazerError::Io(_) => "io",
    }
}

fn metadata_header(w: &mut impl Write, kind: &str, spec: &SweepSpec) -> io::Result<()> {
    writeln!(w, "# mazer {} {}", env!("CARGO_PKG_VERSION"), kind)?;
    writeln!(w, "# {}", spec.describe())
}

fn coordinate_columns(spec: &SweepSpec) -> Vec<Axis> {
    let mut cols = spec.series_axes();
    cols.push(spec.axis.axis);
    cols
}

/// CSV with a `#` metadata header, LF line endings.
pub fn write_csv(w: &mut impl Write, spec: &SweepSpec, rows: &[Row]) -> io::Result<()> {
    metadata_header(w, "sweep", spec)?;
    let coords = coordinate_columns(spec);
    let mut header: Vec<&str> = coords.iter().map(|a| a.name()).collect();
    if spec.peak_order.is_some() {
        header.push("kappa_l");
    }
    header.extend(["r_a", "t_a", "r_b", "t_b", "p_em", "error"]);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let mut fields: Vec<String> = coords.iter().map(|a| fmt_num(a.get(&row.params))).collect();
        if spec.peak_order.is_some() {
            fields.push(fmt_num(row.params.kappa_l));
        }
        match &row.probabilities {
            Some(p) => fields.extend([p.r_a, p.t_a, p.r_b, p.t_b].map(fmt_num)),
            None => fields.extend(std::iter::repeat_n("nan".to_string(), 4)),
        }
        fields.push(fmt_num(row.p_em));
        fields.push(row.error.as_ref().map_or(String::new(), |e| error_tag(e).to_string()));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn sweep_to_string(spec: &SweepSpec) -> Result<String> {
    let rows = run_sweep(spec)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, spec, &rows)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub engines: Vec<Engine>,
    pub points: Vec<MazerParams>,
    /// deviations[i][j]: engine j+1 against engine 0 at point i; None if either failed.
    pub deviations: Vec<Vec<Option<f64>>>,
    pub max: Vec<f64>,
    pub mean: Vec<f64>,
    pub failures: Vec<usize>,
}

/// Largest difference over the quantities both rows resolve.
fn row_deviation(a: &Row, b: &Row) -> Option<f64> {
    if a.error.is_some() || b.error.is_some() {
        return None;
    }
    let mut dev = (a.p_em - b.p_em).abs();
    if let (Some(x), Some(y)) = (a.probabilities, b.probabilities) {
        for (u, v) in [(x.r_a, y.r_a), (x.t_a, y.t_a), (x.r_b, y.r_b), (x.t_b, y.t_b)] {
            dev = dev.max((u - v).abs());
        }
    }
    Some(dev)
}

/// Runs `spec` under each engine and measures deviations from the first.
pub fn compare(engines: &[Engine], spec: &SweepSpec) -> Result<CompareReport> {
    if engines.len() < 2 {
        return Err(MazerError::InvalidParams("compare needs at least two engines".into()));
    }
    let runs: Vec<Vec<Row>> = engines
        .iter()
        .map(|&engine| {
            let mut s = spec.clone();
            s.engine = engine;
            if engine.mesa_only() {
                s.profile = ModeProfile::mesa();
            }
            run_sweep(&s)
        })
        .collect::<Result<_>>()?;

    let points = spec.points();
    let others = engines.len() - 1;
    let deviations: Vec<Vec<Option<f64>>> = (0..points.len())
        .map(|i| {
            (1..engines.len())
                .map(|j| row_deviation(&runs[0][i], &runs[j][i]))
                .collect()
        })
        .collect();
    let mut max = vec![0.0; others];
    let mut mean = vec![0.0; others];
    for j in 0..others {
        let vals: Vec<f64> = deviations.iter().filter_map(|d| d[j]).collect();
        max[j] = vals.iter().copied().fold(0.0, f64::max);
        mean[j] = if vals.is_empty() {
            f64::NAN
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        };
    }
    let failures = runs.iter().map(|r| numerical_failures(r)).collect();
    Ok(CompareReport {
        engines: engines.to_vec(),
        points,
        deviations,
        max,
        mean,
        failures,
    })
}

pub fn write_compare(w: &mut impl Write, spec: &SweepSpec, report: &CompareReport) -> io::Result<()> {
    metadata_header(w, "compare", spec)?;
    let reference = report.engines[0];
    for (j, engine) in report.engines[1..].iter().enumerate() {
        writeln!(
            w,
            "# {} vs {}: max_dev={} mean_dev={}",
            engine,
            reference,
            fmt_num(report.max[j]),
            fmt_num(report.mean[j])
        )?;
    }
    for (engine, failed) in report.engines.iter().zip(&report.failures) {
        writeln!(w, "# {} failures={}", engine, failed)?;
    }
    let coords = coordinate_columns(spec);
    let mut header: Vec<String> = coords.iter().map(|a| a.name().to_string()).collect();
    if spec.peak_order.is_some() {
        header.push("kappa_l".into());
    }
    header.extend(report.engines[1..].iter().map(|e| format!("dev_{}", e)));
    writeln!(w, "{}", header.join(","))?;
    for (p, devs) in report.points.iter().zip(&report.deviations) {
        let mut fields: Vec<String> = coords.iter().map(|a| fmt_num(a.get(p))).collect();
        if spec.peak_order.is_some() {
            fields.push(fmt_num(p.kappa_l));
        }
        fields.extend(devs.iter().map(|d| d.map_or("nan".to_string(), fmt_num)));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakRow {
    pub order: u32,
    pub predicted_kappa_l: f64,
    /// Nearest numerically located maximum of the exact curve.
    pub located_kappa_l: Option<f64>,
    pub located_height: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakTable {
    pub report: PeakReport,
    pub rows: Vec<PeakRow>,
}

/// Predicted resonances side by side with maxima of the exact mesa curve.
pub fn peaks(n: u32, k_over_kappa: f64, delta_over_g: f64, m_max: u32) -> Result<PeakTable> {
    let base = MazerParams::new(n, k_over_kappa, delta_over_g, 0.0)?;
    if m_max == 0 {
        return Err(MazerError::InvalidParams("m_max must be >= 1".into()));
    }
    let report = peak_report(n, delta_over_g, k_over_kappa, m_max);
    let half = report.de_broglie_kappa / 2.0;
    let hi = (m_max as f64 + 0.5) * half;
    let exact = |l: f64| crate::mesa::emission_probability(&base.with_kappa_l(l)).unwrap_or(f64::NAN);
    let located = find_maxima(exact, 0.0, hi, crate::regimes::PEAK_GRID_STEP.min(half / 20.0));
    let rows = report
        .positions_kappa_l
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let nearest = located
                .iter()
                .filter(|(l, _)| (l - x).abs() < 0.5 * half)
                .min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()));
            PeakRow {
                order: i as u32 + 1,
                predicted_kappa_l: x,
                located_kappa_l: nearest.map(|p| p.0),
                located_height: nearest.map(|p| p.1),
            }
        })
        .collect();
    Ok(PeakTable { report, rows })
}

pub fn write_peaks(w: &mut impl Write, n: u32, k: f64, delta: f64, table: &PeakTable) -> io::Result<()> {
    writeln!(w, "# mazer {} peaks", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# n={} k_over_kappa={} delta_over_g={}", n, k, delta)?;
    writeln!(
        w,
        "# amplitude={} finesse={} de_broglie_kappa={}",
        fmt_num(table.report.amplitude),
        fmt_num(table.report.finesse),
        fmt_num(table.report.de_broglie_kappa)
    )?;
    writeln!(
        w,
        "m,predicted_kappa_l,located_kappa_l,offset,located_p_em,predicted_amplitude"
    )?;
    for row in &table.rows {
        let offset = row.located_kappa_l.map(|l| l - row.predicted_kappa_l);
        writeln!(
            w,
            "{},{},{},{},{},{}",
            row.order,
            fmt_num(row.predicted_kappa_l),
            row.located_kappa_l.map_or("nan".into(), fmt_num),
            offset.map_or("nan".into(), fmt_num),
            row.located_height.map_or("nan".into(), fmt_num),
            fmt_num(table.report.amplitude)
        )?;
    }
    Ok(())
}

pub const PRESETS: [&str; 6] = ["fig3", "fig4", "fig5", "fig6", "fig7", "peakamp"];

/// Named parameter grids for the standard emission curves.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let base = |k: f64, d: f64, l: f64| MazerParams {
        n: 0,
        k_over_kappa: k,
        delta_over_g: d,
        kappa_l: l,
    };
    let list = |axis: Axis, values: &[f64]| values.iter().map(|&v| Overrides::single(axis, v)).collect();
    let mut spec = match name {
        // emission against k/κ at κL = 10π, resonant and δ/g = 0.5
        "fig3" => {
            let mut s = SweepSpec::new(
                base(1.0, 0.0, 10.0 * PI),
                AxisRange::new(Axis::KOverKappa, 0.01, 3.0, 1000),
                Engine::ClosedForm,
            );
            s.series = list(Axis::DeltaOverG, &[0.0, 0.5]);
            s
        }
        // emission against δ/g in the intermediate regime
        "fig4" => SweepSpec::new(
            base(1.01, 0.0, 100.0),
            AxisRange::new(Axis::DeltaOverG, -1.0, 1.1, 1000),
            Engine::ClosedForm,
        ),
        // detuned atoms versus resonant atoms with the same k² − V⁺
        "fig5" => {
            let mut s = SweepSpec::new(
                base(1.0, 0.0, 0.0),
                AxisRange::new(Axis::KappaL, 0.0, 100.0, 1000),
                Engine::ClosedForm,
            );
            s.series = vec![
                Overrides {
                    k_over_kappa: Some(1.0),
                    delta_over_g: Some(-0.1),
                    kappa_l: None,
                },
                Overrides {
                    k_over_kappa: Some(1.02411),
                    delta_over_g: Some(0.0),
                    kappa_l: None,
                },
            ];
            s
        }
        // cold atoms, emission against κL for several detunings
        "fig6" => {
            let mut s = SweepSpec::new(
                base(0.1, 0.0, 0.0),
                AxisRange::new(Axis::KappaL, 0.0, 40.0, 2001),
                Engine::ClosedForm,
            );
            s.series = list(Axis::DeltaOverG, &[-0.1, -0.05, 0.0, 0.005]);
            s
        }
        // cold atoms, 2D map over (δ/g, κL)
        "fig7" => SweepSpec::new(
            base(0.1, 0.0, 0.0),
            AxisRange::new(Axis::KappaL, 0.0, 40.0, 401),
            Engine::ClosedForm,
        )
        .with_second_axis(AxisRange::new(Axis::DeltaOverG, -1.0, 0.01, 102)),
        // first-resonance amplitude against δ/g for two cold momenta
        "peakamp" => {
            let mut s = SweepSpec::new(
                base(0.1, 0.0, 0.0),
                AxisRange::new(Axis::DeltaOverG, -0.5, 0.05, 1101),
                Engine::ColdApprox,
            );
            s.series = list(Axis::KOverKappa, &[0.1, 0.2]);
            s.peak_order = Some(1);
            s
        }
        other => {
            return Err(MazerError::InvalidParams(format!(
                "unknown preset `{other}` (one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    spec.label = name.to_string();
    Ok(spec)
}

/// Parses a number that may carry a `pi` factor: `10pi`, `-pi/2`, `2.5*pi`, `pi`.
pub fn parse_pi_expr(text: &str) -> std::result::Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{text}` as a number");
    let Some(idx) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&s[..idx], &s[idx + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    let value = coef * PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
