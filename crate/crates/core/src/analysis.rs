//! Scans over `(lambda, t)` and the observables extracted from them.
//!
//! Grid evaluations are independent and run on the ambient rayon pool; each
//! result lands in a pre-indexed slot, so output does not depend on the
//! number of workers. Wrap calls in `ThreadPool::install` to control it.

use std::fmt;

use rayon::prelude::*;

use crate::density::concurrence_at;
use crate::model::ModelParams;
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Evenly spaced `min, min + step, ...` up to and including `max` (within a
/// small relative slack). Values are `min + i * step`, never accumulated.
pub fn axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(Error::InvalidScan(format!("non-finite axis {min}..{max} step {step}")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidScan(format!("step must be positive, got {step}")));
    }
    if max < min {
        return Err(Error::InvalidScan(format!("axis maximum {max} is below minimum {min}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count > MAX_GRID_POINTS {
        return Err(Error::InvalidScan(format!("{count} axis points exceed the limit")));
    }
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
}

impl ScanGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min < self.lambda_max) || !(self.t_min < self.t_max) {
            return Err(Error::InvalidScan("grid minimum must be below maximum".into()));
        }
        if self.lambda_min < 0.0 || self.t_min < 0.0 {
            return Err(Error::InvalidScan("lambda and t must be nonnegative".into()));
        }
        let size = self.lambdas()?.len().saturating_mul(self.times()?.len());
        if size > MAX_GRID_POINTS {
            return Err(Error::InvalidScan(format!("{size} grid points exceed the limit")));
        }
        Ok(())
    }

    pub fn lambdas(&self) -> Result<Vec<f64>> {
        axis(self.lambda_min, self.lambda_max, self.lambda_step)
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        axis(self.t_min, self.t_max, self.t_step)
    }
}

/// Concurrence on a `lambdas x times` grid, stored row-major by `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub lambdas: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Surface {
    pub fn get(&self, i_lambda: usize, i_t: usize) -> f64 {
        self.values[i_lambda * self.times.len() + i_t]
    }

    /// `(lambda, t, C)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let nt = self.times.len();
        self.values.iter().enumerate().map(move |(idx, &c)| (self.lambdas[idx / nt], self.times[idx % nt], c))
    }
}

fn params(lambda: f64) -> Result<ModelParams> {
    Ok(ModelParams::new(lambda)?)
}

fn concurrence_point(lambda: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    params(lambda).and_then(|p| concurrence_at(p, t, cfg)).map_err(|e| e.at(lambda, t))
}

/// Concurrence over arbitrary axes.
pub fn concurrence_table(lambdas: &[f64], times: &[f64], cfg: &QuadratureConfig) -> Result<Surface> {
    let nt = times.len();
    let size = lambdas.len().saturating_mul(nt);
    if size > MAX_GRID_POINTS {
        return Err(Error::InvalidScan(format!("{size} grid points exceed the limit")));
    }
    let results: Vec<Result<f64>> =
        (0..size).into_par_iter().map(|idx| concurrence_point(lambdas[idx / nt], times[idx % nt], cfg)).collect();
    let values = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Surface { lambdas: lambdas.to_vec(), times: times.to_vec(), values })
}

pub fn concurrence_surface(grid: &ScanGrid, cfg: &QuadratureConfig) -> Result<Surface> {
    grid.validate()?;
    concurrence_table(&grid.lambdas()?, &grid.times()?, cfg)
}

/// Parameters of the time-axis search for concurrence maxima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub t_max: f64,
    pub coarse_dt: f64,
    /// Concurrence at or below this counts as no entanglement.
    pub epsilon: f64,
    /// Final bracket width of the golden-section refinement.
    pub t_tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { t_max: 10.0, coarse_dt: 0.01, epsilon: 1e-6, t_tolerance: 1e-5 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.t_max > 0.0
            && self.coarse_dt > 0.0
            && self.coarse_dt < self.t_max
            && self.epsilon >= 0.0
            && self.t_tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidScan(format!("invalid search configuration {self:?}")))
        }
    }

    fn steps(&self) -> usize {
        (self.t_max / self.coarse_dt + 1e-9).floor() as usize
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`, down to a bracket
/// of width `tol`. Returns the best point evaluated.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// The first concurrence maximum after the quench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmPoint {
    pub lambda: f64,
    pub t_m: f64,
    pub c_m: f64,
}

/// Refines a coarse maximum at sample `t_mid` bracketed by `t_mid +- dt`.
fn refine_max(
    lambda: f64,
    cfg: &QuadratureConfig,
    search: &SearchConfig,
    t_mid: f64,
    c_mid: f64,
) -> Result<(f64, f64)> {
    let lo = (t_mid - search.coarse_dt).max(0.0);
    let hi = t_mid + search.coarse_dt;
    let (t, c) = golden_section_max(|t| concurrence_point(lambda, t, cfg), lo, hi, search.t_tolerance)?;
    Ok(if c >= c_mid { (t, c) } else { (t_mid, c_mid) })
}

/// Smallest `t > 0` at which the concurrence has a strict local maximum above
/// `search.epsilon`, refined by golden section.
pub fn first_max_time(lambda: f64, cfg: &QuadratureConfig, search: &SearchConfig) -> Result<TmPoint> {
    search.validate()?;
    params(lambda)?;
    let dt = search.coarse_dt;
    let n = search.steps();
    let mut before = concurrence_point(lambda, 0.0, cfg)?;
    let mut mid = concurrence_point(lambda, dt, cfg)?;
    for i in 2..=n + 1 {
        let after = concurrence_point(lambda, i as f64 * dt, cfg)?;
        if mid > search.epsilon && mid > before && mid > after {
            let (t_m, c_m) = refine_max(lambda, cfg, search, (i - 1) as f64 * dt, mid)?;
            return Ok(TmPoint { lambda, t_m, c_m });
        }
        before = mid;
        mid = after;
    }
    Err(Error::NoEntanglement { lambda, t_max: search.t_max })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmCurve {
    pub points: Vec<TmPoint>,
    /// Central differences `(lambda_i, dT_m/dlambda)` at interior points.
    pub derivative: Vec<(f64, f64)>,
    /// Grid point with the smallest derivative.
    pub argmin_lambda: f64,
    pub min_derivative: f64,
    /// Vertex of the parabola through the minimum and its neighbours.
    pub argmin_refined: f64,
}

pub fn tm_curve(lambdas: &[f64], cfg: &QuadratureConfig, search: &SearchConfig) -> Result<TmCurve> {
    if lambdas.len() < 3 {
        return Err(Error::InvalidScan("T_m curve needs at least three lambda values".into()));
    }
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidScan("lambda grid must be strictly increasing".into()));
    }
    let points = lambdas
        .par_iter()
        .map(|&l| first_max_time(l, cfg, search))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let derivative: Vec<(f64, f64)> =
        points.windows(3).map(|w| (w[1].lambda, (w[2].t_m - w[0].t_m) / (w[2].lambda - w[0].lambda))).collect();
    let (imin, &(argmin_lambda, min_derivative)) =
        derivative.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).expect("at least one interior point");
    let argmin_refined = if imin > 0 && imin + 1 < derivative.len() {
        parabola_vertex(derivative[imin - 1], derivative[imin], derivative[imin + 1]).unwrap_or(argmin_lambda)
    } else {
        argmin_lambda
    };
    Ok(TmCurve { points, derivative, argmin_lambda, min_derivative, argmin_refined })
}

fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> Option<f64> {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature <= 0.0 || !curvature.is_finite() {
        return None;
    }
    // Newton form: y = y0 + d01 (x - x0) + curvature (x - x0)(x - x1)
    let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    (x0..=x2).contains(&vertex).then_some(vertex)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeadBandReport {
    pub max_concurrence: f64,
    pub at_lambda: f64,
    pub at_t: f64,
}

/// Sample times strictly inside `(lo, hi)`: `lo + j step` for `j >= 1`.
pub fn interior_times(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    (1..).map(|j| lo + j as f64 * step).take_while(|&t| t < hi - 1e-9 * step).collect()
}

/// Largest concurrence over `lambdas x (band.0, band.1)`.
pub fn dead_band_check(
    lambdas: &[f64],
    band: (f64, f64),
    t_step: f64,
    cfg: &QuadratureConfig,
) -> Result<DeadBandReport> {
    if !(t_step > 0.0) || !(band.0 < band.1) {
        return Err(Error::InvalidScan(format!("invalid band {band:?} with step {t_step}")));
    }
    let times = interior_times(band.0, band.1, t_step);
    let surface = concurrence_table(lambdas, &times, cfg)?;
    let mut report = DeadBandReport { max_concurrence: 0.0, at_lambda: f64::NAN, at_t: f64::NAN };
    for (lambda, t, c) in surface.iter() {
        if c > report.max_concurrence || report.at_lambda.is_nan() {
            report = DeadBandReport { max_concurrence: c, at_lambda: lambda, at_t: t };
        }
    }
    Ok(report)
}

/// Largest concurrence on `(0, t_end]`: every coarse local maximum is refined
/// and compared with the endpoint.
pub fn max_concurrence(lambda: f64, t_end: f64, cfg: &QuadratureConfig, search: &SearchConfig) -> Result<(f64, f64)> {
    let local = SearchConfig { t_max: t_end, ..*search };
    local.validate()?;
    let dt = local.coarse_dt;
    let n = local.steps();
    let samples = (0..=n).map(|i| concurrence_point(lambda, i as f64 * dt, cfg)).collect::<Result<Vec<_>>>()?;
    let mut best = (n as f64 * dt, samples[n]);
    for i in 1..n {
        if samples[i] > samples[i - 1] && samples[i] > samples[i + 1] {
            let (t, c) = refine_max(lambda, cfg, &local, i as f64 * dt, samples[i])?;
            if t <= t_end && c > best.1 {
                best = (t, c);
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Several maxima separated by an entanglement-free stretch, with
    /// entanglement persisting afterwards.
    MultiMax,
    /// One maximum followed by permanent disentanglement.
    SingleMax,
    /// Repeated rise and collapse to exactly zero.
    Oscillatory,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::MultiMax => "multi_max",
            Regime::SingleMax => "single_max",
            Regime::Oscillatory => "oscillatory",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub lambda: f64,
    pub regime: Regime,
    /// Set when the classification rests on weak secondary maxima or an
    /// unfinished collapse, i.e. near a regime boundary.
    pub boundary: bool,
    /// Coarse `(t, C)` of every strict local maximum above the threshold.
    pub maxima: Vec<(f64, f64)>,
}

/// Secondary maxima weaker than this fraction of the first one are treated
/// as marginal when deciding the boundary flag.
pub const WEAK_MAXIMUM_FRACTION: f64 = 0.05;

/// `(regime, ambiguous)` from the indices of the maxima: each maximum either
/// collapses to zero before the next one (or the window end) or not.
fn classify_structure(samples: &[f64], maxima: &[usize], epsilon: f64) -> Option<(Regime, bool)> {
    let collapses: Vec<bool> = maxima
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let end = maxima.get(j + 1).copied().unwrap_or(samples.len());
            samples[m + 1..end].iter().any(|&c| c <= epsilon)
        })
        .collect();
    match collapses.as_slice() {
        [] => None,
        [only] => Some((Regime::SingleMax, !only)),
        [first, ..] if collapses.iter().all(|&c| c) => Some((Regime::Oscillatory, !first)),
        [first, ..] => Some((Regime::MultiMax, !first)),
    }
}

/// Collapse cycles are only read as oscillation above the critical point;
/// below it they count as separated maxima.
fn critical_side(regime: Regime, lambda: f64) -> Regime {
    match regime {
        Regime::Oscillatory if lambda <= 1.0 => Regime::MultiMax,
        other => other,
    }
}

pub fn regime_classify(lambda: f64, cfg: &QuadratureConfig, search: &SearchConfig) -> Result<RegimeReport> {
    search.validate()?;
    params(lambda)?;
    let dt = search.coarse_dt;
    let n = search.steps();
    let samples = (0..=n)
        .into_par_iter()
        .map(|i| concurrence_point(lambda, i as f64 * dt, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let maxima: Vec<usize> = (1..n)
        .filter(|&i| samples[i] > search.epsilon && samples[i] > samples[i - 1] && samples[i] > samples[i + 1])
        .collect();
    let (regime, ambiguous) = classify_structure(&samples, &maxima, search.epsilon)
        .ok_or(Error::NoEntanglement { lambda, t_max: search.t_max })?;
    let (regime, ambiguous) = (critical_side(regime, lambda), ambiguous || critical_side(regime, lambda) != regime);

    let first = samples[maxima[0]];
    let strong: Vec<usize> = maxima
        .iter()
        .copied()
        .enumerate()
        .filter(|&(j, m)| j == 0 || samples[m] >= WEAK_MAXIMUM_FRACTION * first)
        .map(|(_, m)| m)
        .collect();
    let robust = classify_structure(&samples, &strong, search.epsilon).map(|(r, _)| critical_side(r, lambda));

    Ok(RegimeReport {
        lambda,
        regime,
        boundary: ambiguous || robust != Some(regime),
        maxima: maxima.iter().map(|&i| (i as f64 * dt, samples[i])).collect(),
    })
}
