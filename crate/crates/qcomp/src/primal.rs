//! Downlink precoder recovery from a converged dual solution.
//!
//! Each precoder is a scaled MMSE combiner, `w = sqrt(tau) * f`. The
//! scalings solve the linear system `Sigma * tau = sigma^2 * 1` built from
//! the active downlink SINR constraints.

use nalgebra::LU;

use crate::error::{Error, Result};
use crate::netgen::ChannelSet;
use crate::quant::QuantModel;
use crate::types::{C64, CMat, CVec, RMat, RVec};

/// Tolerance (relative to max |tau|) below which a negative tau is treated
/// as round-off and clamped to zero.
const NEGATIVE_TAU_REL_TOL: f64 = 1e-10;

/// Recovered downlink precoders.
#[derive(Debug, Clone)]
pub struct BeamformerSet {
    n_cells: usize,
    n_users: usize,
    /// Precoders, flat (cell, user) order, units sqrt(mW).
    w: Vec<CVec>,
    /// Power scalings tau, same order.
    tau: Vec<f64>,
    /// Unit-direction source combiners, kept for audits.
    f: Vec<CVec>,
}

impl BeamformerSet {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn w(&self, cell: usize, user: usize) -> &CVec {
        &self.w[cell * self.n_users + user]
    }

    pub fn w_flat(&self, idx: usize) -> &CVec {
        &self.w[idx]
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn combiner(&self, cell: usize, user: usize) -> &CVec {
        &self.f[cell * self.n_users + user]
    }

    /// Per-cell precoder matrix W_i (antennas x users).
    pub fn cell_matrix(&self, cell: usize) -> CMat {
        CMat::from_columns(&self.w[cell * self.n_users..(cell + 1) * self.n_users])
    }
}

/// Builds the real coupling matrix Sigma of the active-SINR system. Rows are
/// indexed by the victim user (i,u), columns by the source user (j,v), both
/// in flat (cell, user) order.
pub fn build_sigma(
    ch: &ChannelSet,
    quant: &QuantModel,
    combiners: &[CVec],
    gamma: &[f64],
) -> RMat {
    let n = ch.n_links();
    assert_eq!(combiners.len(), n);
    assert_eq!(gamma.len(), n);
    let alpha = quant.alpha();
    let beta = quant.beta();
    let mut sigma = RMat::zeros(n, n);
    for cell in 0..ch.n_cells() {
        for user in 0..ch.n_users() {
            let row = ch.user_index(cell, user);
            for src_cell in 0..ch.n_cells() {
                for src_user in 0..ch.n_users() {
                    let col = ch.user_index(src_cell, src_user);
                    // Channel from the source's BS to the victim user.
                    let h = ch.h(src_cell, cell, user);
                    let f = &combiners[col];
                    let gain = h.dotc(f).norm_sqr();
                    let distortion: f64 = alpha
                        * beta
                        * h.iter()
                            .zip(f.iter())
                            .map(|(hm, fm)| hm.norm_sqr() * fm.norm_sqr())
                            .sum::<f64>();
                    sigma[(row, col)] = if row == col {
                        alpha * alpha / gamma[row] * gain - distortion
                    } else {
                        -alpha * alpha * gain - distortion
                    };
                }
            }
        }
    }
    sigma
}

/// Solves `Sigma * tau = sigma^2 * 1` and scales the combiners into
/// precoders. Tau entries slightly negative from round-off are clamped to
/// zero; anything beyond the tolerance means the dual did not converge and
/// is reported as an error carrying the offending value.
pub fn recover_precoders(
    sigma: &RMat,
    ch: &ChannelSet,
    combiners: &[CVec],
    noise_variance: f64,
) -> Result<BeamformerSet> {
    let n = ch.n_links();
    assert_eq!(sigma.nrows(), n);
    assert_eq!(combiners.len(), n);
    let rhs = RVec::from_element(n, noise_variance);
    let lu = LU::new(sigma.clone());
    let mut tau = lu.solve(&rhs).ok_or(Error::SingularSigma)?;
    let max_abs = tau.iter().fold(0.0_f64, |acc, &t| acc.max(t.abs()));
    let neg_tol = NEGATIVE_TAU_REL_TOL * max_abs;
    for idx in 0..n {
        if tau[idx] < -neg_tol {
            return Err(Error::NegativeTau {
                index: idx,
                value: tau[idx],
            });
        }
        if tau[idx] < 0.0 {
            tau[idx] = 0.0;
        }
    }
    let w: Vec<CVec> = (0..n)
        .map(|idx| &combiners[idx] * C64::new(tau[idx].sqrt(), 0.0))
        .collect();
    Ok(BeamformerSet {
        n_cells: ch.n_cells(),
        n_users: ch.n_users(),
        w,
        tau: tau.iter().copied().collect(),
        f: combiners.to_vec(),
    })
}
