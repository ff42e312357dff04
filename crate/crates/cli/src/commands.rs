use rayon::prelude::*;
use serde_json::json;

use tfim_quench::analysis::{
    axis, concurrence_table, interior_times, regime_classify, tm_curve, ScanGrid, SearchConfig,
};
use tfim_quench::oracle::{wootters_generic, DensityMatrix4, EdEvolution, SpinChainSpec};
use tfim_quench::{assemble_rho, concurrence, correlator_set, x_spectrum, ModelParams, QuadratureConfig};

use crate::format::Report;
use crate::{usage, Cli, CliError, Command, Panel};

pub const SLICE_TIMES_A: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const SLICE_TIMES_B: [f64; 4] = [4.0, 5.0, 6.0, 7.0];
pub const TRACE_LAMBDAS_A: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
pub const TRACE_LAMBDAS_B: [f64; 2] = [1.5, 3.0];

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = cli.quadrature.config()?;
    match &cli.command {
        Command::Correlators(a) => correlators(a, &cfg),
        Command::Rho(a) => rho(a, &cfg),
        Command::Surface(a) => surface(a, &cfg),
        Command::Slices(a) => slices(a, &cfg),
        Command::Traces(a) => traces(a, &cfg),
        Command::Tm(a) => tm(a, &cfg),
        Command::Deadband(a) => deadband(a, &cfg),
        Command::Regime(a) => regime(a, &cfg),
        Command::Oracle(a) => oracle(a, &cfg),
    }
}

fn lambda_param(lambda: f64) -> Result<ModelParams, CliError> {
    ModelParams::new(lambda).map_err(usage)
}

fn time_axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if min < 0.0 {
        return Err(usage(format!("times must be nonnegative, got {min}")));
    }
    axis(min, max, step).map_err(usage)
}

fn check_lambdas(lambdas: &[f64]) -> Result<(), CliError> {
    if lambdas.is_empty() {
        return Err(usage("at least one lambda value is required"));
    }
    lambdas.iter().try_for_each(|&l| lambda_param(l).map(|_| ()))
}

/// Evaluates `f` at every item on the current pool, keeping input order.
fn ordered<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> tfim_quench::Result<R> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    let results: Vec<_> = items.par_iter().map(f).collect();
    Ok(results.into_iter().collect::<tfim_quench::Result<Vec<R>>>()?)
}

fn correlators(a: &crate::SeriesArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let params = lambda_param(a.lambda)?;
    let times = time_axis(a.t_min, a.t_max, a.dt)?;
    let sets = ordered(&times, |&t| correlator_set(params, t, cfg).map_err(|e| e.at(a.lambda, t)))?;
    let mut report = Report::new(vec!["t", "g11", "g12", "re_f12", "im_f12"]);
    for (t, s) in times.iter().zip(sets) {
        report.push(vec![(*t).into(), s.g11.into(), s.g12.into(), s.f12.re.into(), s.f12.im.into()]);
    }
    Ok(report)
}

fn rho(a: &crate::SeriesArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let params = lambda_param(a.lambda)?;
    let times = time_axis(a.t_min, a.t_max, a.dt)?;
    let states = ordered(&times, |&t| {
        let point = || -> tfim_quench::Result<_> {
            let x = correlator_set(params, t, cfg).and_then(|s| assemble_rho(&s))?;
            let c = concurrence(&x_spectrum(&x)?);
            Ok((x, c))
        };
        point().map_err(|e| e.at(a.lambda, t))
    })?;
    let mut report = Report::new(vec!["t", "r11", "r22", "r44", "re_r14", "im_r14", "r23", "concurrence"]);
    for (t, (x, c)) in times.iter().zip(states) {
        report.push(vec![
            (*t).into(),
            x.r11.into(),
            x.r22.into(),
            x.r44.into(),
            x.r14.re.into(),
            x.r14.im.into(),
            x.r23.into(),
            c.into(),
        ]);
    }
    Ok(report)
}

fn surface(a: &crate::SurfaceArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let grid = ScanGrid {
        lambda_min: a.lambda_min,
        lambda_max: a.lambda_max,
        lambda_step: a.lambda_step,
        t_min: a.t_min,
        t_max: a.t_max,
        t_step: a.dt,
    };
    grid.validate().map_err(usage)?;
    let table = concurrence_table(&grid.lambdas().map_err(usage)?, &grid.times().map_err(usage)?, cfg)?;
    let mut report = Report::new(vec!["lambda", "t", "concurrence"]);
    for (lambda, t, c) in table.iter() {
        report.push(vec![lambda.into(), t.into(), c.into()]);
    }
    report.resolved = json!({ "n_lambda": table.lambdas.len(), "n_t": table.times.len() });
    Ok(report)
}

fn slices(a: &crate::SlicesArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let times = match (a.times.is_empty(), a.panel) {
        (false, _) => a.times.clone(),
        (true, Panel::A) => SLICE_TIMES_A.to_vec(),
        (true, Panel::B) => SLICE_TIMES_B.to_vec(),
    };
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(usage(format!("times must be finite and nonnegative, got {t}")));
    }
    let lambdas = axis(a.lambda_min, a.lambda_max, a.lambda_step).map_err(usage)?;
    check_lambdas(&lambdas)?;
    let table = concurrence_table(&lambdas, &times, cfg)?;
    let mut report = Report::new(vec!["t", "lambda", "concurrence"]);
    for (j, &t) in times.iter().enumerate() {
        for (i, &lambda) in lambdas.iter().enumerate() {
            report.push(vec![t.into(), lambda.into(), table.get(i, j).into()]);
        }
    }
    report.resolved = json!({ "times": times });
    Ok(report)
}

fn traces(a: &crate::TracesArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let lambdas = match (a.lambdas.is_empty(), a.panel) {
        (false, _) => a.lambdas.clone(),
        (true, Panel::A) => TRACE_LAMBDAS_A.to_vec(),
        (true, Panel::B) => TRACE_LAMBDAS_B.to_vec(),
    };
    check_lambdas(&lambdas)?;
    let times = time_axis(a.t_min, a.t_max, a.dt)?;
    let table = concurrence_table(&lambdas, &times, cfg)?;
    let mut report = Report::new(vec!["lambda", "t", "concurrence"]);
    for (lambda, t, c) in table.iter() {
        report.push(vec![lambda.into(), t.into(), c.into()]);
    }
    report.resolved = json!({ "lambdas": lambdas });
    Ok(report)
}

fn tm(a: &crate::TmArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let search = a.search.config()?;
    let lambdas = axis(a.lambda_min, a.lambda_max, a.lambda_step).map_err(usage)?;
    check_lambdas(&lambdas)?;
    if lambdas.len() < 3 {
        return Err(usage("the lambda range must contain at least three points"));
    }
    let curve = tm_curve(&lambdas, cfg, &search)?;
    let mut report = Report::new(vec!["lambda", "t_m", "c_m", "dtm_dlambda"]);
    for (i, p) in curve.points.iter().enumerate() {
        // derivative[j] belongs to point j + 1
        let d = i.checked_sub(1).and_then(|j| curve.derivative.get(j)).map(|&(_, d)| d);
        report.push(vec![p.lambda.into(), p.t_m.into(), p.c_m.into(), d.into()]);
    }
    report.summary = Some(json!({
        "argmin_lambda": curve.argmin_lambda,
        "argmin_refined": curve.argmin_refined,
        "min_derivative": curve.min_derivative,
    }));
    Ok(report)
}

fn deadband(a: &crate::DeadbandArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    if !(a.band_lo < a.band_hi) || a.band_lo < 0.0 {
        return Err(usage(format!("invalid band ({}, {})", a.band_lo, a.band_hi)));
    }
    if !(a.dt > 0.0) {
        return Err(usage(format!("dt must be positive, got {}", a.dt)));
    }
    let lambdas = axis(a.lambda_min, a.lambda_max, a.lambda_step).map_err(usage)?;
    check_lambdas(&lambdas)?;
    let times = interior_times(a.band_lo, a.band_hi, a.dt);
    if times.is_empty() {
        return Err(usage("no sample time falls inside the band"));
    }
    let table = concurrence_table(&lambdas, &times, cfg)?;
    let mut report = Report::new(vec!["lambda", "max_concurrence", "at_t"]);
    let mut overall = (f64::NEG_INFINITY, f64::NAN, f64::NAN);
    for (i, &lambda) in lambdas.iter().enumerate() {
        let (j, c) = (0..times.len()).map(|j| (j, table.get(i, j))).fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
        report.push(vec![lambda.into(), c.into(), times[j].into()]);
        if c > overall.0 {
            overall = (c, lambda, times[j]);
        }
    }
    report.summary = Some(json!({
        "max_concurrence": overall.0,
        "at_lambda": overall.1,
        "at_t": overall.2,
        "threshold": a.threshold,
        "within_threshold": overall.0 <= a.threshold,
    }));
    Ok(report)
}

fn regime(a: &crate::RegimeArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    check_lambdas(&a.lambdas)?;
    let search = SearchConfig { t_max: a.window, coarse_dt: a.coarse_dt, epsilon: a.epsilon, ..Default::default() };
    search.validate().map_err(usage)?;
    let reports =
        a.lambdas.iter().map(|&l| regime_classify(l, cfg, &search)).collect::<tfim_quench::Result<Vec<_>>>()?;
    let mut report = Report::new(vec!["lambda", "regime", "boundary", "n_maxima", "first_max_t", "first_max_c"]);
    for r in reports {
        let (t, c) = r.maxima[0];
        report.push(vec![
            r.lambda.into(),
            r.regime.as_str().into(),
            r.boundary.into(),
            r.maxima.len().into(),
            t.into(),
            c.into(),
        ]);
    }
    Ok(report)
}

/// One analytic-versus-ED comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub n_sites: usize,
    pub lambda: f64,
    pub t: f64,
    pub rho_deviation: f64,
    pub c_analytic: f64,
    pub c_ed: f64,
    pub non_x: f64,
}

pub fn oracle_rows(
    n_sites: usize,
    lambdas: &[f64],
    times: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<OracleRow>, CliError> {
    let specs =
        lambdas.iter().map(|&l| SpinChainSpec::new(n_sites, l).map_err(usage)).collect::<Result<Vec<_>, _>>()?;
    check_lambdas(lambdas)?;
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(usage(format!("times must be finite and nonnegative, got {t}")));
    }
    let per_lambda = ordered(&specs, |&spec| {
        let evolution = EdEvolution::new(spec);
        let params = ModelParams::new(spec.lambda())?;
        times
            .iter()
            .map(|&t| {
                let point = || -> tfim_quench::Result<_> {
                    let x = correlator_set(params, t, cfg).and_then(|s| assemble_rho(&s))?;
                    let analytic = DensityMatrix4::from_xstate(&x);
                    let ed = evolution.reduce_at(t);
                    Ok(OracleRow {
                        n_sites,
                        lambda: spec.lambda(),
                        t,
                        rho_deviation: ed.max_deviation(&analytic),
                        c_analytic: concurrence(&x_spectrum(&x)?),
                        c_ed: wootters_generic(&ed)?,
                        non_x: ed.max_non_x(),
                    })
                };
                point().map_err(|e| e.at(spec.lambda(), t))
            })
            .collect::<tfim_quench::Result<Vec<_>>>()
    })?;
    Ok(per_lambda.into_iter().flatten().collect())
}

fn oracle(a: &crate::OracleArgs, cfg: &QuadratureConfig) -> Result<Report, CliError> {
    let rows = oracle_rows(a.oracle_n, &a.lambdas, &a.times, cfg)?;
    let mut report =
        Report::new(vec!["n_sites", "lambda", "t", "rho_deviation", "c_analytic", "c_ed", "c_deviation", "non_x"]);
    for r in rows {
        report.push(vec![
            r.n_sites.into(),
            r.lambda.into(),
            r.t.into(),
            r.rho_deviation.into(),
            r.c_analytic.into(),
            r.c_ed.into(),
            (r.c_ed - r.c_analytic).abs().into(),
            r.non_x.into(),
        ]);
    }
    Ok(report)
}
