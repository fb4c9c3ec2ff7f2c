//! Solution audits: downlink SINR, per-antenna powers, duality gap, PAPR,
//! operating range, empirical CDFs, and the per-run report.
//!
//! Powers are linear mW everywhere; dB appears only in reporting fields.

use crate::dual::DualState;
use crate::error::{Error, Result};
use crate::netgen::{ChannelSet, lin_to_db};
use crate::primal::BeamformerSet;
use crate::quant::QuantModel;

/// Floor for the quietest antenna when computing the operating range,
/// relative to the loudest one.
const RANGE_FLOOR_REL: f64 = 1e-12;

/// How PAPR is aggregated across base stations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaprScope {
    /// One ratio over all antennas of all BSs.
    Network,
    /// Per-BS ratios, averaged.
    PerBs,
}

/// Everything worth recording about one solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Achieved DL SINR per user, linear, flat (cell, user) order.
    pub achieved_sinr: Vec<f64>,
    /// Per-antenna transmit powers, mW, `[cell][antenna]`.
    pub antenna_power: Vec<Vec<f64>>,
    /// Max antenna power p0, mW.
    pub max_antenna_power: f64,
    /// Sum of all antenna powers, mW.
    pub total_power: f64,
    /// Dual objective `sum lambda * sigma^2`, mW.
    pub dual_objective: f64,
    /// `|N_c N_b p0 - dual| / dual`.
    pub duality_gap_rel: f64,
    pub papr_db: f64,
    pub operating_range_db: f64,
    /// Total fixed-point sweeps across all inner solves.
    pub inner_sweeps: usize,
    pub outer_iters: usize,
    pub converged: bool,
    /// Dual objective after each outer iteration.
    pub dual_trace: Vec<f64>,
}

impl SolveReport {
    /// Worst relative deviation of the achieved SINRs from their targets.
    pub fn max_sinr_rel_err(&self, gamma: &[f64]) -> f64 {
        self.achieved_sinr
            .iter()
            .zip(gamma)
            .map(|(&got, &want)| (got - want).abs() / want)
            .fold(0.0, f64::max)
    }

    /// All antenna powers flattened over cells.
    pub fn antenna_powers_flat(&self) -> Vec<f64> {
        self.antenna_power.iter().flatten().copied().collect()
    }
}

/// Exact DL SINR of every user for an arbitrary set of precoders,
/// independent of how they were obtained.
pub fn dl_sinr(ch: &ChannelSet, quant: &QuantModel, bf: &BeamformerSet) -> Vec<f64> {
    let alpha = quant.alpha();
    let noise = ch.noise_variance();
    let mut out = Vec::with_capacity(ch.n_links());
    for cell in 0..ch.n_cells() {
        for user in 0..ch.n_users() {
            let own = ch.user_index(cell, user);
            let h_own = ch.h(cell, cell, user);
            let signal = alpha * alpha * h_own.dotc(bf.w(cell, user)).norm_sqr();
            let mut interference = 0.0;
            for src_cell in 0..ch.n_cells() {
                for src_user in 0..ch.n_users() {
                    let src = ch.user_index(src_cell, src_user);
                    if src == own {
                        continue;
                    }
                    let h = ch.h(src_cell, cell, user);
                    interference += alpha * alpha * h.dotc(bf.w(src_cell, src_user)).norm_sqr();
                }
            }
            let q_term = quantization_noise(ch, quant, bf, cell, user);
            out.push(signal / (interference + q_term + noise));
        }
    }
    out
}

/// Quantization-noise power `Q_{i,u} = sum_j h^H C_{q_j q_j} h` seen by user
/// (cell, user).
pub fn quantization_noise(
    ch: &ChannelSet,
    quant: &QuantModel,
    bf: &BeamformerSet,
    cell: usize,
    user: usize,
) -> f64 {
    let mut q_term = 0.0;
    for bs in 0..ch.n_cells() {
        let cov = quant.quant_noise_cov(&bf.cell_matrix(bs));
        let h = ch.h(bs, cell, user);
        for m in 0..ch.n_antennas() {
            q_term += cov[m] * h[m].norm_sqr();
        }
    }
    q_term
}

/// Physical per-antenna transmit powers `alpha * diag(W_i W_i^H)`, mW.
pub fn antenna_powers(quant: &QuantModel, bf: &BeamformerSet) -> Vec<Vec<f64>> {
    let alpha = quant.alpha();
    (0..bf.n_cells())
        .map(|cell| {
            let w_i = bf.cell_matrix(cell);
            (0..w_i.nrows())
                .map(|m| alpha * w_i.row(m).iter().map(|c| c.norm_sqr()).sum::<f64>())
                .collect()
        })
        .collect()
}

/// Peak-to-average power ratio in dB over the given antenna powers.
pub fn papr_db(powers: &[f64]) -> Result<f64> {
    if powers.is_empty() {
        return Err(Error::EmptyMetric("PAPR of an empty power list"));
    }
    let max = powers.iter().fold(0.0_f64, |a, &p| a.max(p));
    if max <= 0.0 {
        return Err(Error::EmptyMetric("PAPR of all-zero powers"));
    }
    let mean = powers.iter().sum::<f64>() / powers.len() as f64;
    Ok(lin_to_db(max / mean))
}

/// Spread between the loudest and quietest antenna, dB. The quiet side is
/// floored to avoid infinities from idle antennas.
pub fn operating_range_db(powers: &[f64]) -> Result<f64> {
    if powers.is_empty() {
        return Err(Error::EmptyMetric("operating range of an empty power list"));
    }
    let max = powers.iter().fold(0.0_f64, |a, &p| a.max(p));
    if max <= 0.0 {
        return Err(Error::EmptyMetric("operating range of all-zero powers"));
    }
    let min = powers
        .iter()
        .fold(f64::INFINITY, |a, &p| a.min(p))
        .max(RANGE_FLOOR_REL * max);
    Ok(lin_to_db(max / min))
}

/// Empirical CDF: sorted distinct values with P(X <= value). Ties collapse
/// to the highest step.
pub fn empirical_cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::EmptyMetric("CDF of an empty sample"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("CDF values must be comparable"));
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (rank, v) in sorted.iter().enumerate() {
        let p = (rank + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *v => last.1 = p,
            _ => out.push((*v, p)),
        }
    }
    Ok(out)
}

/// Relative duality gap between the scaled minimax objective and the dual.
pub fn duality_gap_rel(n_cells: usize, n_antennas: usize, p0: f64, dual_objective: f64) -> f64 {
    ((n_cells * n_antennas) as f64 * p0 - dual_objective).abs() / dual_objective
}

/// Assembles the standard report for a solved realization.
pub fn build_report(
    ch: &ChannelSet,
    quant: &QuantModel,
    dual: &DualState,
    bf: &BeamformerSet,
    outer_iters: usize,
    inner_sweeps: usize,
    converged: bool,
    dual_trace: Vec<f64>,
) -> SolveReport {
    let achieved_sinr = dl_sinr(ch, quant, bf);
    let antenna_power = antenna_powers(quant, bf);
    let flat: Vec<f64> = antenna_power.iter().flatten().copied().collect();
    let max_antenna_power = flat.iter().fold(0.0_f64, |a, &p| a.max(p));
    let total_power = flat.iter().sum();
    let dual_objective = dual.objective(ch.noise_variance());
    SolveReport {
        achieved_sinr,
        max_antenna_power,
        total_power,
        dual_objective,
        duality_gap_rel: duality_gap_rel(
            ch.n_cells(),
            ch.n_antennas(),
            max_antenna_power,
            dual_objective,
        ),
        papr_db: papr_db(&flat).unwrap_or(f64::NAN),
        operating_range_db: operating_range_db(&flat).unwrap_or(f64::NAN),
        antenna_power,
        inner_sweeps,
        outer_iters,
        converged,
        dual_trace,
    }
}
