//! Predictor-corrector tracing of the homotopy path from `t = 1` to
//! `t < t_end`.
//!
//! Each step takes an Euler predictor of length `c_p * t^{e_p}` along the unit
//! tangent of the path (the null direction of the Jacobian, oriented toward
//! decreasing `t`), then corrects with Newton steps orthogonal to that tangent
//! (the tangent is appended as a normalization row) until the residual sup
//! norm drops below `c_c * t^{e_c} * tol_scale`. Failed corrections halve the
//! step; fast ones regrow it toward the rule length. Accepted `t` values must
//! decrease strictly.

use crate::error::{Error, Result};
use crate::homotopy::{HomotopyPoint, HomotopySystem, Variant};
use crate::seqform::{dual_bounds, epsilon_gap, RealizationProfile, SequenceFormGame};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Step-rule and termination parameters of the tracer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TracerParams {
    /// Predictor step rule `c_p * t^{e_p}`.
    pub c_p: f64,
    pub e_p: f64,
    /// Corrector tolerance rule `c_c * t^{e_c}` (times the payoff scale).
    pub c_c: f64,
    pub e_c: f64,
    /// Terminate at the first accepted point with `t < t_end`.
    pub t_end: f64,
    pub max_steps: usize,
    pub max_wall: Duration,
    pub max_corrector_iters: usize,
    pub step_shrink: f64,
    pub step_grow: f64,
}

impl Default for TracerParams {
    fn default() -> Self {
        TracerParams {
            c_p: 0.05,
            e_p: 0.3,
            c_c: 0.5,
            e_c: 0.3,
            t_end: 1e-4,
            max_steps: 100_000,
            max_wall: Duration::from_secs(600),
            max_corrector_iters: 20,
            step_shrink: 0.5,
            step_grow: 1.2,
        }
    }
}

impl TracerParams {
    pub fn validate(&self) -> Result<()> {
        if self.c_p <= 0.0 || self.c_c <= 0.0 {
            return Err(Error::InvalidParameter("c_p and c_c must be > 0".into()));
        }
        if !(self.t_end > 0.0 && self.t_end < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "t_end must lie in (0, 1), got {}",
                self.t_end
            )));
        }
        Ok(())
    }
}

/// One accepted point of the trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathPoint {
    pub point: HomotopyPoint,
    /// Predictor step length that produced this point (0 for the start).
    pub step: f64,
    pub corrector_iters: usize,
    /// Residual sup norm at acceptance.
    pub residual: f64,
    /// Recovered realization plans at this point.
    pub gamma: Vec<Vec<f64>>,
}

/// Ordered record of accepted points plus labels for export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathTrace {
    pub variant: Variant,
    /// Per player, labels of all sequences (position 0 is the empty sequence).
    pub seq_labels: Vec<Vec<String>>,
    pub points: Vec<PathPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    StepLimit,
    TimeLimit,
    NumericalFailure,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Termination::Converged => "converged",
            Termination::StepLimit => "step_limit",
            Termination::TimeLimit => "time_limit",
            Termination::NumericalFailure => "numerical_failure",
        };
        write!(f, "{s}")
    }
}

/// Result of a trace. `final_plan` is the polished recovered plan at the
/// first accepted point with `t < t_end` (or at the last accepted point when
/// the run did not converge).
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub final_plan: RealizationProfile,
    pub final_gap: f64,
    pub termination: Termination,
    pub trace: PathTrace,
    pub accepted_steps: usize,
    pub total_corrector_iters: usize,
    pub wall: Duration,
}

/// Solve the bordered square system `[J; border^T] d = rhs`.
fn bordered_solve(
    jac: &DMatrix<f64>,
    border: &DVector<f64>,
    rhs: &DVector<f64>,
) -> Option<DVector<f64>> {
    let n = jac.ncols();
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, 0), (jac.nrows(), n)).copy_from(jac);
    m.row_mut(n - 1).copy_from(&border.transpose());
    let lu = m.lu();
    let sol = lu.solve(rhs)?;
    if sol.iter().all(|v| v.is_finite()) {
        Some(sol)
    } else {
        None
    }
}

/// Unit tangent of the path at `p`: the null direction of the Jacobian,
/// normalized, oriented by positive inner product with `orient` (for the
/// first point pass the negative t-axis).
pub fn tangent(
    sys: &HomotopySystem,
    p: &HomotopyPoint,
    orient: &DVector<f64>,
) -> Result<DVector<f64>> {
    let jac = sys.jacobian(p);
    let n = sys.n_unknowns();
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let d = bordered_solve(&jac, orient, &rhs).ok_or(Error::InvalidParameter(
        "rank-deficient Jacobian in tangent computation".into(),
    ))?;
    let mut d = d.normalize();
    if d.dot(orient) < 0.0 {
        d = -d;
    }
    Ok(d)
}

fn flat(p: &HomotopyPoint) -> DVector<f64> {
    let mut v = DVector::zeros(p.x.len() + p.nu.len() + 1);
    for (k, &x) in p.x.iter().enumerate() {
        v[k] = x;
    }
    for (k, &nu) in p.nu.iter().enumerate() {
        v[p.x.len() + k] = nu;
    }
    v[p.x.len() + p.nu.len()] = p.t;
    v
}

fn unflat(v: &DVector<f64>, n0: usize, m0: usize) -> HomotopyPoint {
    HomotopyPoint {
        x: v.as_slice()[..n0].to_vec(),
        nu: v.as_slice()[n0..n0 + m0].to_vec(),
        t: v[n0 + m0],
    }
}

/// Newton correction at fixed border direction. Returns the corrected point,
/// iterations used, and the final residual, or `None` on failure.
fn correct(
    sys: &HomotopySystem,
    start: &DVector<f64>,
    border: &DVector<f64>,
    tol: impl Fn(f64) -> f64,
    max_iters: usize,
) -> Option<(DVector<f64>, usize, f64)> {
    let n0 = sys.coords().n0();
    let m0 = sys.coords().m0();
    let mut z = start.clone();
    for it in 1..=max_iters {
        let p = unflat(&z, n0, m0);
        if p.t <= 0.0 || p.t > 1.0 + 1e-9 {
            return None;
        }
        let f = sys.residual(&p);
        let jac = sys.jacobian(&p);
        let mut rhs = DVector::zeros(sys.n_unknowns());
        rhs.rows_mut(0, sys.n_equations()).copy_from(&(-&f));
        let delta = bordered_solve(&jac, border, &rhs)?;
        z += &delta;
        let pnew = unflat(&z, n0, m0);
        if pnew.t <= 0.0 || pnew.t > 1.0 + 1e-9 {
            return None;
        }
        let r = sys.residual(&pnew).amax();
        if !r.is_finite() {
            return None;
        }
        if r <= tol(pnew.t) {
            return Some((z, it, r));
        }
    }
    None
}

/// Trace the path from the `t = 1` start point until `t < t_end`.
pub fn trace(sys: &HomotopySystem, params: &TracerParams) -> Result<SolveResult> {
    params.validate()?;
    let sf = sys.game();
    let clock = Instant::now();
    let bounds = dual_bounds(sf);
    let tol_scale = 1.0
        + bounds
            .per_player
            .iter()
            .map(|b| b.u_max - b.u_min)
            .fold(0.0f64, f64::max);
    let tol = |t: f64| params.c_c * t.powf(params.e_c) * tol_scale;

    let n0 = sys.coords().n0();
    let m0 = sys.coords().m0();
    let t_idx = n0 + m0;
    let start = sys.start_point();
    let start_res = sys.residual(&start).amax();
    if start_res > 1e-10 {
        return Err(Error::BadStartPoint {
            residual: start_res,
        });
    }

    let seq_labels = sf.players().iter().map(|p| p.seq_label.clone()).collect();
    let mut trace = PathTrace {
        variant: sys.config().variant,
        seq_labels,
        points: Vec::new(),
    };
    let push_point =
        |trace: &mut PathTrace, sys: &HomotopySystem, p: &HomotopyPoint, step, iters, res| {
            trace.points.push(PathPoint {
                point: p.clone(),
                step,
                corrector_iters: iters,
                residual: res,
                gamma: sys.recover_primal_dual(p).gamma.plans,
            });
        };
    push_point(&mut trace, sys, &start, 0.0, 0, start_res);

    let mut z = flat(&start);
    // Leave t = 1 in the decreasing-t direction.
    let mut t_axis = DVector::zeros(sys.n_unknowns());
    t_axis[t_idx] = -1.0;
    let mut tang = tangent(sys, &start, &t_axis)?;

    let mut adapt: f64 = 1.0;
    let mut rejections = 0usize;
    let mut total_corr = 0usize;
    let mut termination = None;

    while termination.is_none() {
        if trace.points.len() > params.max_steps {
            termination = Some(Termination::StepLimit);
            break;
        }
        if clock.elapsed() > params.max_wall {
            termination = Some(Termination::TimeLimit);
            break;
        }
        let t = z[t_idx];
        let rule = params.c_p * t.powf(params.e_p);
        let mut h = adapt * rule;
        if tang[t_idx] < 0.0 {
            // Aim the crossing step just below t_end rather than far past it.
            let h_cross = (t - 0.5 * params.t_end) / (-tang[t_idx]);
            if t - h * (-tang[t_idx]) < params.t_end {
                h = h_cross;
            }
        }
        let predicted = &z + h * &tang;
        let corrected = correct(
            sys,
            &predicted,
            &tang,
            |tc| tol(tc),
            params.max_corrector_iters,
        );
        let mut accepted = false;
        if let Some((znew, iters, res)) = corrected {
            total_corr += iters;
            let pnew = unflat(&znew, n0, m0);
            // Monotone progress in t and interior recovered plans.
            let interior = sys
                .recover_primal_dual(&pnew)
                .gamma
                .plans
                .iter()
                .flatten()
                .all(|&v| v > 0.0);
            if pnew.t < t && pnew.t > 0.0 && interior {
                accepted = true;
                rejections = 0;
                if iters <= 4 {
                    adapt = (adapt * params.step_grow).min(1.0);
                }
                z = znew;
                if pnew.t < params.t_end {
                    // Terminal point: tighten the solve at fixed t before
                    // reporting (still within the acceptance tolerance).
                    let mut fixed_t = DVector::zeros(sys.n_unknowns());
                    fixed_t[t_idx] = 1.0;
                    let tight = correct(
                        sys,
                        &z,
                        &fixed_t,
                        |_| (1e-12 * tol_scale).max(1e-13),
                        30,
                    );
                    let (res_final, iters_final) = match tight {
                        Some((zt, it2, r2)) => {
                            z = zt;
                            (r2, iters + it2)
                        }
                        None => (res, iters),
                    };
                    let pfinal = unflat(&z, n0, m0);
                    push_point(&mut trace, sys, &pfinal, h, iters_final, res_final);
                    termination = Some(Termination::Converged);
                } else {
                    push_point(&mut trace, sys, &pnew, h, iters, res);
                    match tangent(sys, &pnew, &tang) {
                        Ok(d) => tang = d,
                        Err(_) => termination = Some(Termination::NumericalFailure),
                    }
                }
            }
        }
        if !accepted && termination.is_none() {
            adapt *= params.step_shrink;
            rejections += 1;
            if adapt < 1e-10 || rejections > 80 {
                termination = Some(Termination::NumericalFailure);
            }
        }
    }

    let termination = termination.unwrap();
    let last = trace.points.last().unwrap();
    let raw = RealizationProfile {
        plans: last.gamma.clone(),
    };
    let final_plan = polish(sf, &raw);
    let final_gap = epsilon_gap(sf, &final_plan)?.max_gap;
    Ok(SolveResult {
        final_plan,
        final_gap,
        termination,
        accepted_steps: trace.points.len() - 1,
        total_corrector_iters: total_corr,
        wall: clock.elapsed(),
        trace,
    })
}

/// Project a near-feasible plan onto the flow constraints: clip negatives,
/// renormalize each infoset top-down to its parent mass (equal split when the
/// children carry no mass), never increasing the violation.
pub fn polish(sf: &SequenceFormGame, gamma: &RealizationProfile) -> RealizationProfile {
    let mut out = gamma.clone();
    for (i, p) in sf.players().iter().enumerate() {
        out.plans[i][0] = 1.0;
        for is in &p.infosets {
            let parent = out.plans[i][is.parent_seq];
            let mut sum = 0.0;
            for &c in &is.child_seqs {
                if out.plans[i][c] < 0.0 {
                    out.plans[i][c] = 0.0;
                }
                sum += out.plans[i][c];
            }
            if sum > 0.0 {
                let scale = parent / sum;
                for &c in &is.child_seqs {
                    out.plans[i][c] *= scale;
                }
            } else {
                let share = parent / is.child_seqs.len() as f64;
                for &c in &is.child_seqs {
                    out.plans[i][c] = share;
                }
            }
        }
    }
    out
}

/// Numerical rank of a matrix: singular values above `threshold * sigma_max`.
/// Returns the rank and the ratio `sigma_min / sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, threshold: f64) -> (usize, f64) {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return (0, 0.0);
    }
    let rank = sv.iter().filter(|&&s| s > threshold * smax).count();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    (rank, smin / smax)
}

/// SVD rank threshold used by the diagnostics.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// One sampled rank measurement along a trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSample {
    pub t: f64,
    pub rank: usize,
    pub sigma_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankReport {
    pub expected_rank: usize,
    pub samples: Vec<RankSample>,
    pub full_rank: bool,
}

/// SVD-based rank check of the Jacobian at up to `sample_count` points of the
/// trace (evenly spaced, always including the first and last).
pub fn rank_diagnostic(
    sys: &HomotopySystem,
    trace: &PathTrace,
    sample_count: usize,
) -> Result<RankReport> {
    if trace.points.is_empty() {
        return Err(Error::InvalidParameter("empty trace".into()));
    }
    let expected = sys.n_equations();
    let count = sample_count.max(1).min(trace.points.len());
    let mut samples = Vec::with_capacity(count);
    for k in 0..count {
        let idx = if count == 1 {
            0
        } else {
            k * (trace.points.len() - 1) / (count - 1)
        };
        let p = &trace.points[idx].point;
        let (rank, ratio) = numerical_rank(&sys.jacobian(p), RANK_THRESHOLD);
        samples.push(RankSample {
            t: p.t,
            rank,
            sigma_ratio: ratio,
        });
    }
    let full_rank = samples.iter().all(|s| s.rank == expected);
    Ok(RankReport {
        expected_rank: expected,
        samples,
        full_rank,
    })
}

/// CSV export of a trace: one row per accepted point with the recovered
/// plans, strictly decreasing in `t`.
pub fn path_csv(trace: &PathTrace) -> String {
    let mut out = String::from("t,step,corrector_iters,residual");
    for (i, labels) in trace.seq_labels.iter().enumerate() {
        for label in labels {
            out.push_str(&format!(",gamma:{}:{}", i + 1, label));
        }
    }
    out.push('\n');
    for pt in &trace.points {
        out.push_str(&format!(
            "{},{},{},{}",
            pt.point.t, pt.step, pt.corrector_iters, pt.residual
        ));
        for plan in &pt.gamma {
            for v in plan {
                out.push_str(&format!(",{v}"));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::HomotopyOptions;
    use crate::seqform::testutil::{fig1, fig2};
    use approx::assert_abs_diff_eq;

    fn solve(
        sf: &SequenceFormGame,
        variant: Variant,
        seed: u64,
        random_start: bool,
    ) -> SolveResult {
        let mut opts = HomotopyOptions::new(variant);
        opts.seed = seed;
        if random_start {
            opts.gamma0 = crate::homotopy::GammaInit::Mode("random".into());
        }
        let cfg = opts.materialize(sf).unwrap();
        let sys = HomotopySystem::new(sf, cfg).unwrap();
        trace(&sys, &TracerParams::default()).unwrap()
    }

    #[test]
    fn fig1_lgne_converges_to_a_known_equilibrium_type() {
        let sf = fig1();
        let result = solve(&sf, Variant::Lgne, 1, false);
        assert_eq!(result.termination, Termination::Converged);
        assert!(result.final_gap <= 1e-3, "gap = {:e}", result.final_gap);
        let u = crate::seqform::expected_payoffs(&sf, &result.final_plan);
        let types = [(11.0, 3.0), (4.0, 7.0 / 3.0), (4.0, 1.5)];
        assert!(
            types
                .iter()
                .any(|t| (u[0] - t.0).abs() < 1e-2 && (u[1] - t.1).abs() < 1e-2),
            "payoffs {u:?}"
        );
    }

    #[test]
    fn fig2_lbne_converges() {
        let sf = fig2();
        let result = solve(&sf, Variant::Lbne, 2, true);
        assert_eq!(result.termination, Termination::Converged);
        assert!(result.final_gap <= 1e-3, "gap = {:e}", result.final_gap);
        let t_last = result.trace.points.last().unwrap().point.t;
        assert!(t_last < 1e-4);
    }

    #[test]
    fn traced_t_is_strictly_decreasing_and_residuals_bounded() {
        let sf = fig1();
        let result = solve(&sf, Variant::Lbne, 3, false);
        let pts = &result.trace.points;
        let bounds = dual_bounds(&sf);
        let tol_scale = 1.0
            + bounds
                .per_player
                .iter()
                .map(|b| b.u_max - b.u_min)
                .fold(0.0f64, f64::max);
        for w in pts.windows(2) {
            assert!(w[1].point.t < w[0].point.t);
        }
        for pt in &pts[1..] {
            assert!(pt.residual <= 0.5 * pt.point.t.powf(0.3) * tol_scale + 1e-12);
            assert!(pt.gamma.iter().flatten().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn tangent_leaves_start_toward_decreasing_t() {
        let sf = fig1();
        let opts = HomotopyOptions::new(Variant::Lgne);
        let cfg = opts.materialize(&sf).unwrap();
        let sys = HomotopySystem::new(&sf, cfg).unwrap();
        let start = sys.start_point();
        let n = sys.n_unknowns();
        let mut t_axis = DVector::zeros(n);
        t_axis[n - 1] = -1.0;
        let d = tangent(&sys, &start, &t_axis).unwrap();
        assert!(d[n - 1] < 0.0);
        assert_abs_diff_eq!(d.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn consecutive_tangents_stay_aligned() {
        let sf = fig1();
        let opts = HomotopyOptions::new(Variant::Lgne);
        let cfg = opts.materialize(&sf).unwrap();
        let sys = HomotopySystem::new(&sf, cfg).unwrap();
        let result = trace(&sys, &TracerParams::default()).unwrap();
        let pts = &result.trace.points;
        let n = sys.n_unknowns();
        let mut t_axis = DVector::zeros(n);
        t_axis[n - 1] = -1.0;
        let mut prev = tangent(&sys, &pts[0].point, &t_axis).unwrap();
        for pt in &pts[1..] {
            let d = tangent(&sys, &pt.point, &prev).unwrap();
            assert!(d.dot(&prev) > 0.0);
            prev = d;
        }
    }

    #[test]
    fn constant_payoff_game_stays_at_anchor() {
        // On a constant game the path is gamma = gamma0 for every t; any
        // interior plan is an equilibrium and the final gap is 0.
        let g = crate::game::parse_game(
            r#"{"players":2,
                "infosets":[{"id":"A","owner":1,"actions":["x","y"]},
                             {"id":"B","owner":2,"actions":["u","v"]}],
                "root":{"kind":"decision","infoset":"A","children":{
                    "x":{"kind":"decision","infoset":"B","children":{
                        "u":{"kind":"terminal","payoffs":[3,1]},
                        "v":{"kind":"terminal","payoffs":[3,1]}}},
                    "y":{"kind":"decision","infoset":"B","children":{
                        "u":{"kind":"terminal","payoffs":[3,1]},
                        "v":{"kind":"terminal","payoffs":[3,1]}}}}}}"#,
        )
        .unwrap();
        let sf = crate::seqform::build_sequence_form(&g).unwrap();
        let mut opts = HomotopyOptions::new(Variant::Lgne);
        opts.alpha_bound = 0.0;
        opts.gamma0 = crate::homotopy::GammaInit::Mode("random".into());
        opts.seed = 5;
        let cfg = opts.materialize(&sf).unwrap();
        let gamma0 = cfg.gamma0.clone();
        let sys = HomotopySystem::new(&sf, cfg).unwrap();
        let result = trace(&sys, &TracerParams::default()).unwrap();
        assert_eq!(result.termination, Termination::Converged);
        assert!(result.final_gap.abs() <= 1e-9);
        for pt in &result.trace.points {
            for (plan, plan0) in pt.gamma.iter().zip(&gamma0.plans) {
                for (a, b) in plan.iter().zip(plan0) {
                    assert_abs_diff_eq!(*a, *b, epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn polish_restores_flow_and_keeps_feasible_plans() {
        let sf = fig1();
        let mut drifted = RealizationProfile::uniform(&sf);
        drifted.plans[0][1] += 1e-6;
        let polished = polish(&sf, &drifted);
        assert!(polished.flow_drift(&sf) <= 1e-14);
        let clean = RealizationProfile::uniform(&sf);
        let same = polish(&sf, &clean);
        assert_eq!(clean, same);
    }

    #[test]
    fn polish_does_not_worsen_traced_gap_much() {
        let sf = fig1();
        let result = solve(&sf, Variant::Lgne, 7, true);
        let raw = RealizationProfile {
            plans: result.trace.points.last().unwrap().gamma.clone(),
        };
        let raw_gap = epsilon_gap(&sf, &raw).unwrap().max_gap;
        assert!(result.final_gap <= raw_gap + 1e-6);
    }

    #[test]
    fn rank_diagnostic_full_rank_along_fig1_path() {
        let sf = fig1();
        let opts = HomotopyOptions::new(Variant::Lgne);
        let cfg = opts.materialize(&sf).unwrap();
        let sys = HomotopySystem::new(&sf, cfg).unwrap();
        let result = trace(&sys, &TracerParams::default()).unwrap();
        let report = rank_diagnostic(&sys, &result.trace, 10).unwrap();
        assert!(report.full_rank, "{report:?}");
        assert_eq!(report.expected_rank, sf.n0() + sf.m0());
    }

    #[test]
    fn duplicated_row_is_rank_deficient() {
        let mut m = DMatrix::from_row_slice(3, 4, &[
            1.0, 2.0, 0.0, 1.0, //
            0.0, 1.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 0.0,
        ]);
        m.set_row(2, &m.row(0).clone_owned());
        let (rank, _) = numerical_rank(&m, RANK_THRESHOLD);
        assert_eq!(rank, 2);
    }

    #[test]
    fn csv_has_header_and_decreasing_t() {
        let sf = fig1();
        let result = solve(&sf, Variant::Lgne, 11, false);
        let csv = path_csv(&result.trace);
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("t,step,corrector_iters,residual"));
        assert!(header.contains("gamma:1:I11:L"));
        let ts: Vec<f64> = lines
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(ts.windows(2).all(|w| w[1] < w[0]));
    }
}
