//! Per-kind drivers. Each turns a validated configuration into result tables
//! using the library routines only.

use num_complex::Complex64;

use super::config::{ExperimentConfig, Kind, Params, Values};
use super::table::ResultTable;
use super::ExperimentError;
use crate::channel::{analytic_states_on, evolve_ensemble, transform_basis, DephasingParams};
use crate::coherence::{alpha_crit_scan, coherence_xy_traces, coherence_z_trace, l1_coherence, time_avg_coherence, time_avg_curve, default_horizon, AlphaCrit, DEFAULT_AVG_TOL};
use crate::decoherence::{critical_omega0, gamma_exact_on, gamma_fitted};
use crate::grape::{self, CMatrix, GrapeOptions, GrapeProblem};
use crate::grid::{TimeGrid, Trace};
use crate::noise::NoiseSpec;
use crate::nonmarkov::{blp_measure, find_critical_omega0};
use crate::revival::{detect_revivals, predict_xy_revivals, predict_z_revivals, verify_prediction, DEFAULT_PROMINENCE, DEFAULT_TIME_TOL, FULL_REVIVAL_FLOOR};
use crate::state::Basis;

type Out<T> = Result<T, ExperimentError>;

/// Runs one experiment and returns its tables.
pub fn run(config: &ExperimentConfig) -> Out<Vec<ResultTable>> {
    let ctx = Ctx { config, p: &config.params, kind: config.experiment.kind };
    let mut tables = match ctx.kind {
        Kind::Gamma => gamma(&ctx)?,
        Kind::NonmarkovScan => nonmarkov_scan(&ctx)?,
        Kind::Coherence => coherence(&ctx)?,
        Kind::RevivalVerify => revival_verify(&ctx)?,
        Kind::Longterm => longterm(&ctx)?,
        Kind::Grape => grape_run(&ctx)?,
    };
    for t in &mut tables {
        let mut meta = vec![
            ("tool".to_string(), format!("qdephase {}", env!("CARGO_PKG_VERSION"))),
            ("kind".to_string(), ctx.kind.as_str().to_string()),
        ];
        if let Some(seed) = ctx.p.seed {
            meta.push(("seed".to_string(), seed.to_string()));
        }
        meta.extend(config.echo());
        meta.append(&mut t.metadata);
        t.metadata = meta;
    }
    Ok(tables)
}

struct Ctx<'a> {
    config: &'a ExperimentConfig,
    p: &'a Params,
    kind: Kind,
}

impl Ctx<'_> {
    fn missing(&self, key: &str) -> ExperimentError {
        ExperimentError::Config(format!("missing [params].{key} (required by kind \"{}\")", self.kind.as_str()))
    }

    fn need<T: Clone>(&self, v: &Option<T>, key: &str) -> Out<T> {
        v.clone().ok_or_else(|| self.missing(key))
    }

    fn scalar(&self, v: &Option<Values>, key: &str) -> Out<f64> {
        match self.need(v, key)? {
            Values::One(x) => Ok(x),
            Values::Many(v) if v.len() == 1 => Ok(v[0]),
            Values::Many(_) => Err(ExperimentError::Config(format!(
                "[params].{key} must be a single value for kind \"{}\"",
                self.kind.as_str()
            ))),
        }
    }

    fn scalar_or(&self, v: &Option<Values>, key: &str, default: f64) -> Out<f64> {
        match v {
            None => Ok(default),
            Some(_) => self.scalar(v, key),
        }
    }

    fn list(&self, v: &Option<Values>, key: &str) -> Out<Vec<f64>> {
        let v = self.need(v, key)?.to_vec();
        if v.is_empty() {
            return Err(ExperimentError::Config(format!("[params].{key} must not be empty")));
        }
        Ok(v)
    }

    fn t_max(&self) -> Out<f64> {
        self.need(&self.p.t_max, "t_max")
    }

    /// Window `[0, t_max]`; 20 points per ms plus one unless `points` is given.
    fn grid(&self) -> Out<TimeGrid> {
        let t_max = self.t_max()?;
        let points = self.p.points.unwrap_or_else(|| ((20.0 * t_max).round() as usize + 1).max(2));
        Ok(TimeGrid::new(t_max, points)?)
    }

    fn spec(&self, alpha: f64, omega0: f64, omega_j: f64) -> Out<NoiseSpec> {
        Ok(NoiseSpec::new(alpha, omega0, omega_j, self.p.p.unwrap_or(0.0))?)
    }

    fn name(&self, suffix: &str) -> String {
        match suffix {
            "" => self.config.label().to_string(),
            s => format!("{}_{s}", self.config.label()),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// `[k=v k=v]` over the parameters that vary, or an empty string.
fn tag(parts: &[(&str, f64, bool)]) -> String {
    let inner: Vec<String> = parts
        .iter()
        .filter(|p| p.2)
        .map(|(k, v, _)| format!("{k}={}", num(*v)))
        .collect();
    match inner.is_empty() {
        true => String::new(),
        false => format!("[{}]", inner.join(" ")),
    }
}

fn columns_to_table(name: String, grid: &TimeGrid, columns: Vec<(String, Vec<f64>)>) -> ResultTable {
    let mut table = ResultTable::new(name, std::iter::once("t".to_string()).chain(columns.iter().map(|c| c.0.clone())));
    for (k, t) in grid.times().enumerate() {
        table.push(std::iter::once(t).chain(columns.iter().map(|c| c.1[k])).collect());
    }
    table
}

fn list_times(ts: impl IntoIterator<Item = f64>) -> String {
    ts.into_iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>().join(" ")
}

fn gamma(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let alpha = ctx.scalar(&ctx.p.alpha, "alpha")?;
    let w0s = ctx.list(&ctx.p.omega0, "omega0")?;
    let wjs = ctx.list(&ctx.p.omega_j, "omega_j")?;
    let fitted = ctx.p.fitted.unwrap_or(false);
    let grid = ctx.grid()?;
    let mut columns = Vec::new();
    let mut meta = Vec::new();
    for &wj in &wjs {
        for &w0 in &w0s {
            let spec = ctx.spec(alpha, w0, wj)?;
            let tg = tag(&[("w0", w0, w0s.len() > 1), ("wj", wj, wjs.len() > 1)]);
            let g = gamma_exact_on(&spec, &grid);
            meta.push((format!("modes{tg}"), spec.mode_count().to_string()));
            meta.push((format!("peak{tg}"), num(g.iter().copied().fold(0.0, f64::max))));
            columns.push((format!("gamma{tg}"), g));
            if fitted {
                columns.push((format!("fitted{tg}"), grid.times().map(|t| gamma_fitted(alpha, w0, t)).collect()));
            }
        }
    }
    let mut table = columns_to_table(ctx.name(""), &grid, columns);
    for (k, v) in meta {
        table.meta(k, v);
    }
    Ok(vec![table])
}

fn nonmarkov_scan(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let alpha = ctx.scalar(&ctx.p.alpha, "alpha")?;
    let wj = ctx.scalar(&ctx.p.omega_j, "omega_j")?;
    let grid = ctx.grid()?;
    let predicted = critical_omega0(grid.t_max())?;
    let lo = ctx.p.omega0_min.unwrap_or(0.5 * predicted);
    let hi = ctx.p.omega0_max.unwrap_or(2.0 * predicted);
    let step = ctx.p.omega0_step.unwrap_or(predicted / 400.0);
    if !(lo > 0.0 && hi >= lo && step > 0.0) {
        return Err(ExperimentError::Config("need 0 < omega0_min <= omega0_max and omega0_step > 0".into()));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let mut table = ResultTable::new(ctx.name(""), ["omega0", "measure", "intervals"]);
    let mut first = None;
    for i in 0..count {
        let w0 = lo + i as f64 * step;
        let report = blp_measure(&ctx.spec(alpha, w0, wj)?, &grid);
        if report.measure > 0.0 && first.is_none() {
            first = Some(w0);
        }
        table.push(vec![w0, report.measure, report.increasing_intervals.len() as f64]);
    }
    let crit = find_critical_omega0(alpha, wj, &grid, 1e-7)?;
    table.meta("omega0_crit_predicted", num(predicted));
    table.meta("omega0_crit_numeric", num(crit.numeric));
    table.meta("first_nonmarkovian_omega0", first.map_or("none".to_string(), num));
    Ok(vec![table])
}

fn coherence(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let alphas = ctx.list(&ctx.p.alpha, "alpha")?;
    let w0 = ctx.scalar(&ctx.p.omega0, "omega0")?;
    let wj = ctx.scalar(&ctx.p.omega_j, "omega_j")?;
    let basis = ctx.p.basis.unwrap_or(Basis::Z);
    let wk = match basis {
        Basis::Z => ctx.scalar_or(&ctx.p.omega_k, "omega_k", 0.0)?,
        _ => ctx.scalar(&ctx.p.omega_k, "omega_k")?,
    };
    let members = ctx.p.members.unwrap_or(0);
    let seed = match members {
        0 => None,
        _ => Some(ctx.p.seed.ok_or_else(|| ExperimentError::Config("[params].seed is required when members > 0".into()))?),
    };
    let grid = ctx.grid()?;
    let params = DephasingParams::new(wk)?;
    let rho0 = basis.canonical_state();
    let mut columns = Vec::new();
    let mut meta = Vec::new();
    if basis != Basis::Z {
        columns.push(("osc".to_string(), Trace::from_fn(grid, |t| (wk * t).cos().abs()).values().to_vec()));
    }
    for &alpha in &alphas {
        let spec = ctx.spec(alpha, w0, wj)?;
        let tg = tag(&[("alpha", alpha, alphas.len() > 1)]);
        let states: Vec<_> = analytic_states_on(&spec, params, &rho0, &grid)
            .iter()
            .map(|r| transform_basis(r, basis))
            .collect();
        let coh: Vec<f64> = states.iter().map(l1_coherence).collect();
        let closed = match basis {
            Basis::Z => coherence_z_trace(&spec, &grid),
            _ => {
                let (_, decay, coh) = coherence_xy_traces(&spec, wk, &grid);
                columns.push((format!("decay{tg}"), decay.values().to_vec()));
                coh
            }
        };
        let dev = coh.iter().zip(closed.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        meta.push((format!("closed_form_deviation{tg}"), format!("{dev:e}")));
        let peaks = detect_revivals(&Trace::new(grid, coh.clone()), 0.0, DEFAULT_PROMINENCE);
        meta.push((format!("peaks{tg}"), list_times(peaks.iter().map(|p| p.time))));
        columns.push((format!("rho01_re{tg}"), states.iter().map(|r| r.rho01().re).collect()));
        columns.push((format!("rho01_im{tg}"), states.iter().map(|r| r.rho01().im).collect()));
        if let Some(seed) = seed {
            let mc: Vec<_> = evolve_ensemble(&spec, params, &rho0, &grid, members, seed)?
                .iter()
                .map(|r| transform_basis(r, basis))
                .collect();
            let coh_mc: Vec<f64> = mc.iter().map(l1_coherence).collect();
            let gap = coh_mc.iter().zip(&coh).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            meta.push((format!("mc_sup_gap{tg}"), num(gap)));
            columns.push((format!("rho01_mc_re{tg}"), mc.iter().map(|r| r.rho01().re).collect()));
            columns.push((format!("rho01_mc_im{tg}"), mc.iter().map(|r| r.rho01().im).collect()));
            columns.push((format!("coh_analytic{tg}"), coh));
            columns.push((format!("coh_mc{tg}"), coh_mc));
        } else {
            columns.push((format!("coh_analytic{tg}"), coh));
        }
    }
    let mut table = columns_to_table(ctx.name(""), &grid, columns);
    table.meta("basis", basis);
    table.meta("members", members);
    for (k, v) in meta {
        table.meta(k, v);
    }
    Ok(vec![table])
}

fn revival_verify(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let alpha = ctx.scalar(&ctx.p.alpha, "alpha")?;
    let w0 = ctx.scalar(&ctx.p.omega0, "omega0")?;
    let wj = ctx.scalar(&ctx.p.omega_j, "omega_j")?;
    let basis = ctx.need(&ctx.p.basis, "basis")?;
    let grid = ctx.grid()?;
    let spec = ctx.spec(alpha, w0, wj)?;
    let (prediction, trace) = match basis {
        Basis::Z => (predict_z_revivals(w0, grid.t_max())?, coherence_z_trace(&spec, &grid)),
        _ => {
            let wk = ctx.scalar(&ctx.p.omega_k, "omega_k")?;
            (predict_xy_revivals(basis, w0, wk, grid.t_max())?, coherence_xy_traces(&spec, wk, &grid).2)
        }
    };
    let report = verify_prediction(
        &prediction,
        &trace,
        ctx.p.time_tol.unwrap_or(DEFAULT_TIME_TOL),
        ctx.p.value_floor.unwrap_or(FULL_REVIVAL_FLOOR),
    );
    let mut matches = ResultTable::new(
        ctx.name(""),
        ["predicted_t", "value_at_prediction", "has_peak", "detected_t", "peak_value", "passed"],
    );
    for m in &report.matches {
        let (has, t, v) = m.peak.map_or((0.0, 0.0, 0.0), |p| (1.0, p.time, p.value));
        matches.push(vec![m.predicted, m.value_at_prediction, has, t, v, f64::from(u8::from(m.passed))]);
    }
    matches.meta("basis", basis);
    matches.meta("period", num(prediction.period));
    matches.meta("revival_kind", format!("{:?}", prediction.kind).to_lowercase());
    matches.meta("matched", format!("{}/{}", report.matched(), report.matches.len()));
    matches.meta("passed", report.passed);
    matches.meta("degenerate", report.degenerate);
    matches.meta("endpoint_counted", report.endpoint_counted);
    let prominence = ctx.p.prominence.unwrap_or(DEFAULT_PROMINENCE);
    let mut peaks = ResultTable::new(ctx.name("peaks"), ["t", "value", "prominence", "endpoint"]);
    for p in detect_revivals(&trace, 0.0, prominence) {
        peaks.push(vec![p.time, p.value, p.prominence, f64::from(u8::from(p.endpoint))]);
    }
    Ok(vec![matches, peaks])
}

fn longterm(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let w0s = ctx.list(&ctx.p.omega0, "omega0")?;
    let wks = ctx.list(&ctx.p.omega_k, "omega_k")?;
    let wj = ctx.scalar(&ctx.p.omega_j, "omega_j")?;
    let lo = ctx.p.alpha_min.unwrap_or(0.0);
    let hi = ctx.p.alpha_max.unwrap_or(4.0);
    let step = ctx.p.alpha_step.unwrap_or(0.05);
    let tol = ctx.p.tolerance.unwrap_or(DEFAULT_AVG_TOL);
    if !(lo >= 0.0 && hi > lo && step > 0.0) {
        return Err(ExperimentError::Config("need 0 <= alpha_min < alpha_max and alpha_step > 0".into()));
    }
    let alphas: Vec<f64> = (0..=((hi - lo) / step + 1e-9).floor() as usize)
        .map(|i| lo + i as f64 * step)
        .collect();
    let conv_alpha = ctx.scalar_or(&ctx.p.alpha, "alpha", 0.5)?;

    let series: Vec<(f64, f64, String)> = w0s
        .iter()
        .flat_map(|&w0| wks.iter().map(move |&wk| (w0, wk)))
        .map(|(w0, wk)| (w0, wk, tag(&[("w0", w0, w0s.len() > 1), ("wk", wk, wks.len() > 1)])))
        .collect();

    let mut average = ResultTable::new(
        ctx.name(""),
        std::iter::once("alpha".to_string()).chain(series.iter().map(|s| format!("C{}", s.2))),
    );
    let mut threshold = ResultTable::new(ctx.name("threshold"), ["omega0", "omega_k", "found", "alpha_crit"]);
    let mut curves = Vec::new();
    for (w0, wk, tg) in &series {
        let curve = time_avg_curve(*w0, *wk, wj, &alphas, ctx.p.horizon, tol)?;
        let unconverged = curve.iter().filter(|a| !a.converged).count();
        average.meta(format!("unconverged{tg}"), unconverged);
        curves.push(curve);
        let found = alpha_crit_scan(*w0, *wk, wj, ctx.p.horizon, (lo, hi), step)?;
        if let AlphaCrit::Found { monotone, .. } = &found {
            threshold.meta(format!("monotone{tg}"), monotone);
        }
        let value = found.value();
        threshold.push(vec![*w0, *wk, f64::from(u8::from(value.is_some())), value.unwrap_or(0.0)]);
    }
    for (i, &a) in alphas.iter().enumerate() {
        average.push(std::iter::once(a).chain(curves.iter().map(|c| c[i].value)).collect());
    }

    let mut convergence = ResultTable::new(
        ctx.name("convergence"),
        std::iter::once("doubling".to_string())
            .chain(series.iter().flat_map(|s| [format!("horizon{}", s.2), format!("C{}", s.2)])),
    );
    convergence.meta("alpha", num(conv_alpha));
    let mut cols = Vec::new();
    for (w0, wk, _) in &series {
        let spec = NoiseSpec::white(conv_alpha, *w0, wj)?;
        let base = ctx.p.horizon.unwrap_or_else(|| default_horizon(*w0, *wk));
        let mut col = Vec::new();
        for k in 0..6 {
            let h = base * f64::from(1u32 << k);
            col.push((h, time_avg_coherence(&spec, *wk, h, tol)?.value));
        }
        cols.push(col);
    }
    for k in 0..6 {
        let mut row = vec![k as f64];
        for col in &cols {
            row.extend([col[k].0, col[k].1]);
        }
        convergence.push(row);
    }
    Ok(vec![average, threshold, convergence])
}

fn grape_target(ctx: &Ctx, n_qubits: usize) -> Out<CMatrix> {
    let name = ctx.p.target.as_deref().unwrap_or("haar");
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one_qubit = match name {
        "identity" => Some(CMatrix::identity(2, 2)),
        "x" => Some(grape::paulis()[0].clone()),
        "h" => Some(CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])),
        "rz" => Some(grape::rotation(ctx.need(&ctx.p.angle, "angle")? / 2.0, [0.0, 0.0, 1.0])),
        "haar" => Some(grape::haar_unitary_1q(ctx.need(&ctx.p.seed, "seed")?)),
        _ => None,
    };
    match (name, n_qubits, one_qubit) {
        (_, 1, Some(u)) => Ok(u),
        (_, 2, Some(u)) => Ok(u.kronecker(&CMatrix::identity(2, 2))),
        ("cnot", 2, None) => {
            let mut u = CMatrix::zeros(4, 4);
            for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                u[(r, col)] = c(1.0, 0.0);
            }
            Ok(u)
        }
        _ => Err(ExperimentError::Config(format!("unknown grape target `{name}` for {n_qubits} qubit(s)"))),
    }
}

fn grape_run(ctx: &Ctx) -> Out<Vec<ResultTable>> {
    let n_qubits = ctx.p.n_qubits.unwrap_or(1);
    let target = grape_target(ctx, n_qubits)?;
    let segments = ctx.p.segments.unwrap_or(50);
    let dt = ctx.p.dt.unwrap_or(0.1);
    let bound = ctx.p.bound.unwrap_or(5.0);
    let mut problem = GrapeProblem::with_pauli_controls(target, segments, dt, bound)?;
    if let Some(z) = ctx.p.drift_z {
        let sz = &grape::paulis()[2];
        let drift = (0..n_qubits).fold(CMatrix::zeros(problem.dim(), problem.dim()), |acc, s| {
            acc + grape::embed(sz, s, n_qubits) * Complex64::new(z, 0.0)
        });
        problem = problem.with_drift(drift)?;
    }
    let defaults = GrapeOptions::default();
    let options = GrapeOptions {
        step: ctx.p.step.unwrap_or(defaults.step),
        max_iter: ctx.p.max_iter.unwrap_or(defaults.max_iter),
        df_tol: ctx.p.df_tol.unwrap_or(defaults.df_tol),
        target_fidelity: ctx.p.target_fidelity.unwrap_or(defaults.target_fidelity),
    };
    let init = match ctx.p.seed {
        Some(seed) => grape::random_controls(&problem, seed),
        None => vec![vec![0.0; problem.n_controls()]; segments],
    };
    let result = grape::optimize(&problem, &init, &options)?;

    let mut history = ResultTable::new(ctx.name(""), ["iteration", "fidelity"]);
    for (i, f) in result.history.iter().enumerate() {
        history.push(vec![i as f64, *f]);
    }
    history.meta("fidelity", num(result.fidelity));
    history.meta("iterations", result.iterations);
    history.meta("converged", result.converged);
    history.meta("termination", format!("{:?}", result.termination));

    let names = (0..n_qubits).flat_map(|s| [format!("u_x{s}"), format!("u_y{s}")]);
    let mut controls = ResultTable::new(ctx.name("controls"), std::iter::once("segment".to_string()).chain(names));
    controls.meta("dt", num(dt));
    for (j, row) in result.controls.iter().enumerate() {
        controls.push(std::iter::once(j as f64).chain(row.iter().copied()).collect());
    }
    Ok(vec![history, controls])
}
