//! Outer loop: projected subgradient ascent on the per-cell noise
//! covariances `D`, alternating with inner dual solves, plus the fixed
//! `D = I` baseline.
//!
//! Each outer iteration solves the inner problem for the current `D`,
//! recovers precoders, steps `D` along `diag(sum_u w w^H)`, and projects the
//! concatenated diagonal back onto `{d >= 0, sum d <= N_c * N_b}`. The trace
//! budget is shared across cells: stationarity of the minimax Lagrangian in
//! the common power cap fixes only the network-wide trace, and a shared
//! budget lets the ascent equalize the peak antenna power across cells,
//! which is what closes the duality gap on asymmetric instances. The best
//! iterate by dual objective is returned.

use crate::dual::{solve_inner, DualState, InnerOptions};
use crate::error::Result;
use crate::metrics::{build_report, SolveReport};
use crate::netgen::ChannelSet;
use crate::primal::{build_sigma, recover_precoders, BeamformerSet};
use crate::quant::QuantModel;
use crate::types::RVec;

/// Step-size schedule for the subgradient ascent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Constant eta_0.
    Fixed,
    /// eta_n = eta_0 / sqrt(n).
    Diminishing,
    /// Polyak step (ub_n - f_n) / ||g_n||^2, where ub_n is the best scaled
    /// max-antenna-power seen so far. Parameter-free and much faster than
    /// the diminishing schedule; the default.
    Polyak,
}

/// Outer-loop tuning knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterConfig {
    pub step_rule: StepRule,
    /// Absolute eta_0; when unset, eta_0 = eta0_scale * N_b / ||g_1||_1 so
    /// the first step moves a fixed fraction of the trace budget.
    pub eta0: Option<f64>,
    pub eta0_scale: f64,
    /// Declare convergence once the max relative change of D drops below
    /// this (and the measured gap is reasonable).
    pub tol: f64,
    /// Declare convergence once the measured primal-dual gap
    /// `(N_c N_b min_k p0(W_k) - f_best) / f_best` drops below this.
    pub gap_tol: f64,
    pub max_iters: usize,
    /// Give up (flagged not converged) once the best dual objective has not
    /// improved for this many iterations.
    pub stagnation_window: usize,
}

impl Default for OuterConfig {
    fn default() -> Self {
        Self {
            step_rule: StepRule::Polyak,
            eta0: None,
            eta0_scale: 0.1,
            tol: 1e-5,
            gap_tol: 1e-4,
            max_iters: 2000,
            stagnation_window: 50,
        }
    }
}

/// Relative improvement of the dual objective that resets the stagnation
/// counter; gains below this are noise next to the gap tolerance.
const IMPROVEMENT_REL: f64 = 1e-7;
/// Floor kept under every D entry. The optimal D concentrates its trace and
/// zeroes many entries; the floor keeps the received-covariance condition
/// number near `1/D_FLOOR` so the fixed point can still meet a 1e-9
/// tolerance in f64. The induced objective bias is O(D_FLOOR) relative.
const D_FLOOR: f64 = 1e-5;
/// Polyak level shrink: after this many iterations without significant
/// improvement the step target is halved.
const LEVEL_SHRINK_AFTER: usize = 5;

/// A solved realization: precoders, a dual certificate, and the audit
/// report. For the per-antenna solver the precoders come from the iterate
/// with the lowest peak power and the dual state from the iterate with the
/// best dual objective; each is a valid bound on the minimax optimum, so the
/// reported duality gap brackets both.
#[derive(Debug, Clone)]
pub struct Solution {
    pub beamformers: BeamformerSet,
    pub dual: DualState,
    pub report: SolveReport,
}

/// Subgradient of the inner value function at cell `cell`:
/// `diag(sum_u w_{i,u} w_{i,u}^H)`, i.e. per-antenna sums of |w|^2.
pub fn subgradient(bf: &BeamformerSet, cell: usize) -> RVec {
    let w_i = bf.cell_matrix(cell);
    RVec::from_iterator(
        w_i.nrows(),
        w_i.row_iter().map(|row| row.iter().map(|c| c.norm_sqr()).sum::<f64>()),
    )
}

/// Exact Euclidean projection onto `{d >= 0, sum d <= cap}`.
///
/// If clipping at zero already satisfies the trace cap that is the
/// projection; otherwise the simplex-cap water-filling threshold applies.
/// Idempotent, and the output is feasible exactly.
pub fn project_d(d: &RVec, cap: f64) -> RVec {
    let clipped = d.map(|x| x.max(0.0));
    if clipped.sum() <= cap {
        return clipped;
    }
    // Water-filling: find theta with sum(max(d - theta, 0)) = cap.
    let mut sorted: Vec<f64> = d.iter().copied().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("D entries must be comparable"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let candidate = (cumsum - cap) / (k + 1) as f64;
        if k + 1 == sorted.len() || sorted[k + 1] <= candidate {
            theta = candidate;
            break;
        }
    }
    d.map(|x| (x - theta).max(0.0))
}

/// One inner solve plus primal recovery at a given D: everything the outer
/// loop needs to score an iterate.
struct Evaluated {
    state: DualState,
    bf: BeamformerSet,
    objective: f64,
    /// Max antenna power of the recovered precoders, `alpha * max_im g_im`.
    p0: f64,
    grads: Vec<RVec>,
}

fn evaluate_iterate(
    ch: &ChannelSet,
    quant: &QuantModel,
    gamma: &[f64],
    inner_opts: &InnerOptions,
    d: &[RVec],
    warm: Option<&[f64]>,
) -> Result<Evaluated> {
    let state = solve_inner(ch, quant, d, gamma, inner_opts, warm)?;
    let sigma = build_sigma(ch, quant, &state.combiners, gamma);
    let bf = recover_precoders(&sigma, ch, &state.combiners, ch.noise_variance())?;
    let objective = state.objective(ch.noise_variance());
    let grads: Vec<RVec> = (0..ch.n_cells()).map(|i| subgradient(&bf, i)).collect();
    let p0 = quant.alpha() * grads.iter().map(|g| g.amax()).fold(0.0, f64::max);
    Ok(Evaluated {
        state,
        bf,
        objective,
        p0,
        grads,
    })
}

/// Q-iCoMP-PA: the per-antenna power minimax solve (Algorithm 1).
///
/// Alternates inner dual solves with projected supergradient steps on the
/// stacked noise covariances, keeping a suffix average of the D iterates
/// that is scored periodically (subgradient trajectories rattle around
/// nonsmooth optima; their averages settle). Returns the lowest-peak-power
/// precoders and the best dual certificate; `converged` reflects the
/// measured primal-dual gap at exit.
pub fn solve_pa(
    ch: &ChannelSet,
    quant: &QuantModel,
    gamma: &[f64],
    inner_opts: &InnerOptions,
    outer_cfg: &OuterConfig,
) -> Result<Solution> {
    let nb = ch.n_antennas();
    let n_cells = ch.n_cells();
    let n_coords = n_cells * nb;
    let cap = n_coords as f64;
    let mut d: Vec<RVec> = vec![RVec::from_element(nb, 1.0); n_cells];
    let mut warm: Option<Vec<f64>> = None;
    let mut eta0 = outer_cfg.eta0;

    let mut best_dual: Option<(f64, DualState)> = None;
    let mut best_primal: Option<(f64, BeamformerSet)> = None;
    let mut best_iter = 1usize;
    let mut dual_trace = Vec::new();
    let mut inner_sweeps = 0usize;
    let mut converged = false;
    let mut iters = 0usize;
    let mut upper_bound = f64::INFINITY;
    let mut level = 1.0_f64;
    let mut level_fails = 0usize;

    // Suffix average of the D trajectory, restarted at doubling boundaries
    // so it always covers roughly the latest half of the run.
    let mut avg_sum = RVec::zeros(n_coords);
    let mut avg_count = 0usize;
    let mut avg_restart = 32usize;
    const AVG_EVERY: usize = 25;
    const AVG_MIN_SAMPLES: usize = 8;

    for n in 1..=outer_cfg.max_iters {
        iters = n;
        let ev = evaluate_iterate(ch, quant, gamma, inner_opts, &d, warm.as_deref())?;
        inner_sweeps += ev.state.sweeps;
        warm = Some(ev.state.lambda.clone());
        dual_trace.push(ev.objective);

        let significant = best_dual
            .as_ref()
            .map_or(true, |(obj, _)| ev.objective > obj * (1.0 + IMPROVEMENT_REL));
        let improved = best_dual.as_ref().map_or(true, |(obj, _)| ev.objective > *obj);
        if improved {
            best_dual = Some((ev.objective, ev.state));
        }
        if best_primal.as_ref().map_or(true, |(p0, _)| ev.p0 < *p0) {
            best_primal = Some((ev.p0, ev.bf));
        }
        upper_bound = upper_bound.min(cap * ev.p0);
        if significant {
            best_iter = n;
        }
        // Any improvement lets the level recover; repeated failures shrink
        // it so a lagging upper bound cannot keep the step oversized.
        if improved {
            level = (level * 1.5).min(1.0);
            level_fails = 0;
        } else {
            level_fails += 1;
            if level_fails >= LEVEL_SHRINK_AFTER {
                level = (level * 0.5).max(1e-3);
                level_fails = 0;
            }
        }

        let best_obj = best_dual.as_ref().expect("set above").0;
        let gap_rel = (upper_bound - best_obj).max(0.0) / best_obj;
        if gap_rel <= outer_cfg.gap_tol {
            converged = true;
            break;
        }

        let grads = &ev.grads;
        if eta0.is_none() {
            let g1_norm: f64 = grads
                .iter()
                .map(|g| g.iter().map(|x| x.abs()).sum::<f64>())
                .sum();
            eta0 = Some(if g1_norm > 0.0 {
                outer_cfg.eta0_scale * cap / g1_norm
            } else {
                outer_cfg.eta0_scale
            });
        }
        let eta = match outer_cfg.step_rule {
            StepRule::Fixed => eta0.unwrap(),
            StepRule::Diminishing => eta0.unwrap() / (n as f64).sqrt(),
            StepRule::Polyak => {
                // The true supergradient of the dual value is alpha * g.
                // Once the trace cap is active the projection strips the
                // component of g along 1, so the step is scaled by the
                // tangential gradient energy; `level` shrinks the target
                // when the upper bound lags and the ascent stalls.
                let g_norm_sq: f64 = grads.iter().map(|g| g.norm_squared()).sum();
                let g_sum: f64 = grads.iter().map(|g| g.sum()).sum();
                let g_tan_sq = g_norm_sq - g_sum * g_sum / cap;
                let denom = if g_tan_sq > 1e-12 * g_norm_sq {
                    g_tan_sq
                } else {
                    g_norm_sq
                };
                if denom > 0.0 {
                    let eta = level * (upper_bound - ev.objective).max(0.0)
                        / (quant.alpha() * denom);
                    // Trust region: never move more than a quarter of the
                    // trace budget in one iteration.
                    if g_sum > 0.0 {
                        eta.min(0.25 * cap / g_sum)
                    } else {
                        eta
                    }
                } else {
                    0.0
                }
            }
        };

        // Step every cell, then project the concatenated diagonal onto the
        // shared budget. The floor is built into the projection target
        // (shift by D_FLOOR, project, shift back) so the trace cap holds
        // exactly.
        let mut stacked = RVec::zeros(n_coords);
        for i in 0..n_cells {
            let stepped = &d[i] + &grads[i] * eta;
            stacked.rows_mut(i * nb, nb).copy_from(&stepped);
        }
        stacked.apply(|x| *x -= D_FLOOR);
        let mut projected = project_d(&stacked, cap - n_coords as f64 * D_FLOOR);
        projected.apply(|x| *x += D_FLOOR);
        debug_assert!(projected.min() >= D_FLOOR * (1.0 - 1e-12));
        debug_assert!(projected.sum() <= cap * (1.0 + 1e-12), "trace cap must hold exactly");
        let mut max_rel_change: f64 = 0.0;
        for i in 0..n_cells {
            let new_d = RVec::from(projected.rows(i * nb, nb));
            let scale = d[i].amax().max(f64::MIN_POSITIVE);
            let change = (&new_d - &d[i]).amax() / scale;
            max_rel_change = max_rel_change.max(change);
            d[i] = new_d;
        }

        avg_sum += &projected;
        avg_count += 1;
        if n == avg_restart {
            avg_sum.fill(0.0);
            avg_count = 0;
            avg_restart *= 2;
        }

        // Score the averaged trajectory every so often; it usually carries a
        // better-equalized primal than any single iterate.
        if avg_count >= AVG_MIN_SAMPLES && n % AVG_EVERY == 0 {
            let d_avg: Vec<RVec> = (0..n_cells)
                .map(|i| RVec::from(avg_sum.rows(i * nb, nb)) / avg_count as f64)
                .collect();
            let av = evaluate_iterate(ch, quant, gamma, inner_opts, &d_avg, warm.as_deref())?;
            inner_sweeps += av.state.sweeps;
            let av_significant = best_dual
                .as_ref()
                .map_or(true, |(obj, _)| av.objective > obj * (1.0 + IMPROVEMENT_REL));
            if best_dual.as_ref().map_or(true, |(obj, _)| av.objective > *obj) {
                best_dual = Some((av.objective, av.state));
            }
            if best_primal.as_ref().map_or(true, |(p0, _)| av.p0 < *p0) {
                best_primal = Some((av.p0, av.bf));
            }
            upper_bound = upper_bound.min(cap * av.p0);
            if av_significant {
                best_iter = n;
            }
            let best_obj = best_dual.as_ref().expect("set above").0;
            let gap_now = (upper_bound - best_obj).max(0.0) / best_obj;
            if gap_now <= outer_cfg.gap_tol {
                converged = true;
                break;
            }
        }

        // Settled D or a stagnant objective ends the loop; either exit still
        // counts as converged when the measured gap certifies the result to
        // within a decade of the target.
        if max_rel_change <= outer_cfg.tol || n - best_iter >= outer_cfg.stagnation_window {
            let best_obj = best_dual.as_ref().expect("set above").0;
            converged = (upper_bound - best_obj).max(0.0) / best_obj <= 10.0 * outer_cfg.gap_tol;
            break;
        }
    }

    let (_, dual) = best_dual.expect("at least one outer iteration ran");
    let (_, beamformers) = best_primal.expect("at least one outer iteration ran");
    let report = build_report(
        ch,
        quant,
        &dual,
        &beamformers,
        iters,
        inner_sweeps,
        converged,
        dual_trace,
    );
    Ok(Solution {
        beamformers,
        dual,
        report,
    })
}

/// Q-iCoMP baseline: one inner solve with `D = I` and no outer loop. This is
/// the total-transmit-power minimizing design.
pub fn solve_baseline(
    ch: &ChannelSet,
    quant: &QuantModel,
    gamma: &[f64],
    inner_opts: &InnerOptions,
) -> Result<Solution> {
    let d = vec![RVec::from_element(ch.n_antennas(), 1.0); ch.n_cells()];
    let state = solve_inner(ch, quant, &d, gamma, inner_opts, None)?;
    let sigma = build_sigma(ch, quant, &state.combiners, gamma);
    let bf = recover_precoders(&sigma, ch, &state.combiners, ch.noise_variance())?;
    let objective = state.objective(ch.noise_variance());
    let sweeps = state.sweeps;
    let report = build_report(ch, quant, &state, &bf, 0, sweeps, true, vec![objective]);
    Ok(Solution {
        beamformers: bf,
        dual: state,
        report,
    })
}
