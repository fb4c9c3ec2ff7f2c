//! Inner dual solver: the virtual-uplink power minimization for fixed noise
//! covariances `D`.
//!
//! For each cell the received-signal covariance is
//! `K_i = diag(D_i) + alpha * sum_{j,v} lambda_{j,v} h h^H
//!        + beta * diag(H_i Lambda H_i^H)`,
//! and user (i,u) sees the interference-plus-noise covariance
//! `Z_{i,u} = alpha^2 * sum_{(j,v) != (i,u)} lambda h h^H + alpha^2 D_i
//!            + alpha*beta * diag(H_i Lambda H_i^H + D_i)`.
//! The per-user powers `lambda` satisfy the fixed point
//! `lambda = 1 / (alpha (1 + 1/gamma) h^H K^{-1} h)`, iterated Gauss-Seidel
//! style until every uplink SINR constraint is active.

use crate::error::{Error, Result};
use crate::linalg::{hermitize, quad_form_inv, solve_hpd};
use crate::netgen::ChannelSet;
use crate::quant::QuantModel;
use crate::types::{C64, CMat, CVec, RVec};

/// Tolerances for the fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerOptions {
    /// Max relative change of lambda per sweep at which to stop.
    pub tol: f64,
    /// Sweep budget per inner solve.
    pub max_sweeps: usize,
    /// Declared infeasible once lambda exceeds `cap_factor` times its
    /// initialization scale.
    pub lambda_cap_factor: f64,
    /// Strip the common mode of lambda between sweeps (geometric-mean
    /// rescale). Leaves the fixed point untouched; rescues the rate when D
    /// is nearly zero and the update map turns scale-invariant.
    pub accelerate: bool,
}

impl Default for InnerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_sweeps: 10_000,
            lambda_cap_factor: 1e12,
            accelerate: true,
        }
    }
}

/// Fraction of the reference update used to initialize lambda.
const LAMBDA_INIT_SCALE: f64 = 1e-3;

/// Converged dual variables for one network realization.
#[derive(Debug, Clone)]
pub struct DualState {
    /// Virtual-uplink powers, flat (cell, user) order.
    pub lambda: Vec<f64>,
    /// Diagonal noise covariance per cell.
    pub d: Vec<RVec>,
    /// MMSE combiners, flat (cell, user) order.
    pub combiners: Vec<CVec>,
    /// Sweeps spent by the fixed-point iteration.
    pub sweeps: usize,
}

impl DualState {
    /// Dual objective `sum lambda * sigma^2`.
    pub fn objective(&self, noise_variance: f64) -> f64 {
        self.lambda.iter().sum::<f64>() * noise_variance
    }
}

/// Received-signal covariance `K_i` at the BS of `cell`.
pub fn build_k(
    ch: &ChannelSet,
    quant: &QuantModel,
    lambda: &[f64],
    d_i: &RVec,
    cell: usize,
) -> CMat {
    let nb = ch.n_antennas();
    let alpha = quant.alpha();
    let beta = quant.beta();
    let mut k = CMat::zeros(nb, nb);
    for (idx, &lam) in lambda.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let h = ch.h_flat(cell, idx);
        k.gerc(C64::new(alpha * lam, 0.0), h, h, C64::new(1.0, 0.0));
        if beta > 0.0 {
            for m in 0..nb {
                k[(m, m)] += C64::new(beta * lam * h[m].norm_sqr(), 0.0);
            }
        }
    }
    for m in 0..nb {
        k[(m, m)] += C64::new(d_i[m], 0.0);
    }
    hermitize(&k)
}

/// Interference-plus-noise covariance `Z_{i,u}` seen when detecting user
/// (cell, user) at its own BS.
pub fn build_z(
    ch: &ChannelSet,
    quant: &QuantModel,
    lambda: &[f64],
    d_i: &RVec,
    cell: usize,
    user: usize,
) -> CMat {
    let nb = ch.n_antennas();
    let alpha = quant.alpha();
    let beta = quant.beta();
    let own = ch.user_index(cell, user);
    let mut z = CMat::zeros(nb, nb);
    for (idx, &lam) in lambda.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let h = ch.h_flat(cell, idx);
        if idx != own {
            z.gerc(C64::new(alpha * alpha * lam, 0.0), h, h, C64::new(1.0, 0.0));
        }
        if beta > 0.0 {
            for m in 0..nb {
                z[(m, m)] += C64::new(alpha * beta * lam * h[m].norm_sqr(), 0.0);
            }
        }
    }
    // alpha^2 D + alpha*beta D = alpha D on the diagonal.
    for m in 0..nb {
        z[(m, m)] += C64::new(alpha * d_i[m], 0.0);
    }
    hermitize(&z)
}

/// MMSE combiner `f = Z^{-1} h`, computed as a Hermitian PD solve.
pub fn mmse_combiner(z: &CMat, h: &CVec, cell: usize, user: usize) -> Result<CVec> {
    solve_hpd(z, h, "Z", cell, user)
}

/// Uplink SINR `alpha^2 lambda |f^H h|^2 / (f^H Z f)` for an arbitrary
/// combiner; used for audits.
pub fn ul_sinr(quant: &QuantModel, lambda_iu: f64, f: &CVec, z: &CMat, h: &CVec) -> f64 {
    let alpha = quant.alpha();
    let num = alpha * alpha * lambda_iu * f.dotc(h).norm_sqr();
    let den = f.dotc(&(z * f)).re;
    if den <= 0.0 { 0.0 } else { num / den }
}

/// Per-user lambda scale: the fixed-point update at zero interference with
/// unit noise covariance, `1 / (alpha (1 + 1/gamma) ||h||^2)`. Kept
/// independent of the current D so the divergence cap stays physical even
/// when the outer loop drives some D entries to zero.
fn lambda_scale(ch: &ChannelSet, quant: &QuantModel, gamma: &[f64]) -> Vec<f64> {
    let alpha = quant.alpha();
    let mut t0 = vec![0.0; ch.n_links()];
    for cell in 0..ch.n_cells() {
        for user in 0..ch.n_users() {
            let idx = ch.user_index(cell, user);
            let h = ch.h(cell, cell, user);
            t0[idx] = 1.0 / (alpha * (1.0 + 1.0 / gamma[idx]) * h.norm_squared());
        }
    }
    t0
}

/// Runs the Gauss-Seidel fixed-point iteration on lambda for fixed `d`.
///
/// Sweeps users in (cell, user) order, rebuilding `K` with the freshest
/// lambda before each update, until the max relative change drops below
/// `opts.tol`. Returns the converged lambda and the sweep count. A lambda
/// blowing past its cap is reported as an infeasible target; exhausting the
/// sweep budget returns the last iterate inside the error.
pub fn fixed_point_lambda(
    ch: &ChannelSet,
    quant: &QuantModel,
    d: &[RVec],
    gamma: &[f64],
    opts: &InnerOptions,
    init: Option<&[f64]>,
) -> Result<(Vec<f64>, usize)> {
    let n = ch.n_links();
    assert_eq!(gamma.len(), n, "one SINR target per user");
    assert_eq!(d.len(), ch.n_cells(), "one D per cell");
    let alpha = quant.alpha();
    let t0 = lambda_scale(ch, quant, gamma);
    let caps: Vec<f64> = t0
        .iter()
        .map(|&t| opts.lambda_cap_factor * LAMBDA_INIT_SCALE * t)
        .collect();
    let mut lambda: Vec<f64> = match init {
        Some(l) => {
            assert_eq!(l.len(), n);
            l.to_vec()
        }
        None => t0.iter().map(|&t| LAMBDA_INIT_SCALE * t).collect(),
    };
    let mut residual = f64::INFINITY;
    let mut prev = vec![0.0; n];
    for sweep in 1..=opts.max_sweeps {
        prev.copy_from_slice(&lambda);
        let mut max_rel: f64 = 0.0;
        for cell in 0..ch.n_cells() {
            for user in 0..ch.n_users() {
                let idx = ch.user_index(cell, user);
                let k = build_k(ch, quant, &lambda, &d[cell], cell);
                let x = quad_form_inv(&k, ch.h(cell, cell, user), "K", cell, user)?;
                let updated = 1.0 / (alpha * (1.0 + 1.0 / gamma[idx]) * x);
                // Divergence check: the cap only matters while the iterate is
                // still growing; a warm start descending from above is fine.
                if !updated.is_finite() || (updated > caps[idx] && updated >= lambda[idx]) {
                    return Err(Error::InfeasibleTarget {
                        cell,
                        user,
                        lambda: updated,
                        cap: caps[idx],
                    });
                }
                let rel = (updated - lambda[idx]).abs() / updated.max(f64::MIN_POSITIVE);
                max_rel = max_rel.max(rel);
                lambda[idx] = updated;
            }
        }
        if max_rel <= opts.tol {
            return Ok((lambda, sweep));
        }
        residual = max_rel;
        if opts.accelerate {
            let mean_log_ratio: f64 = lambda
                .iter()
                .zip(&prev)
                .map(|(&new, &old)| (new / old.max(f64::MIN_POSITIVE)).ln())
                .sum::<f64>()
                / n as f64;
            let scale = mean_log_ratio.exp().clamp(0.25, 4.0);
            if (scale - 1.0).abs() > opts.tol {
                for l in &mut lambda {
                    *l *= scale;
                }
            }
        }
    }
    Err(Error::InnerNonConverged {
        sweeps: opts.max_sweeps,
        residual,
        lambda,
    })
}

/// Fixed point plus MMSE combiners, bundled.
pub fn solve_inner(
    ch: &ChannelSet,
    quant: &QuantModel,
    d: &[RVec],
    gamma: &[f64],
    opts: &InnerOptions,
    init: Option<&[f64]>,
) -> Result<DualState> {
    let (lambda, sweeps) = fixed_point_lambda(ch, quant, d, gamma, opts, init)?;
    let mut combiners = Vec::with_capacity(ch.n_links());
    for cell in 0..ch.n_cells() {
        for user in 0..ch.n_users() {
            let z = build_z(ch, quant, &lambda, &d[cell], cell, user);
            combiners.push(mmse_combiner(&z, ch.h(cell, cell, user), cell, user)?);
        }
    }
    Ok(DualState {
        lambda,
        d: d.to_vec(),
        combiners,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quant::Bits;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_channels(
        n_cells: usize,
        n_users: usize,
        n_antennas: usize,
        noise: f64,
        seed: u64,
    ) -> ChannelSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ChannelSet::from_link_fn(n_cells, n_users, n_antennas, noise, |_, _, _| {
            CVec::from_fn(n_antennas, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            })
        })
        .unwrap()
    }

    fn uniform_d(n_cells: usize, n_antennas: usize) -> Vec<RVec> {
        vec![RVec::from_element(n_antennas, 1.0); n_cells]
    }

    /// Straight-line elementwise construction of K from the formula, kept
    /// independent of the production path.
    fn k_oracle(
        ch: &ChannelSet,
        quant: &QuantModel,
        lambda: &[f64],
        d_i: &RVec,
        cell: usize,
    ) -> CMat {
        let nb = ch.n_antennas();
        let mut k = CMat::zeros(nb, nb);
        for m in 0..nb {
            for n in 0..nb {
                let mut acc = C64::new(0.0, 0.0);
                for idx in 0..ch.n_links() {
                    let h = ch.h_flat(cell, idx);
                    acc += C64::new(quant.alpha() * lambda[idx], 0.0) * h[m] * h[n].conj();
                }
                if m == n {
                    acc += C64::new(d_i[m], 0.0);
                    for idx in 0..ch.n_links() {
                        let h = ch.h_flat(cell, idx);
                        acc += C64::new(quant.beta() * lambda[idx] * h[m].norm_sqr(), 0.0);
                    }
                }
                k[(m, n)] = acc;
            }
        }
        k
    }

    #[test]
    fn k_reduces_to_d_without_users() {
        let ch = rand_channels(2, 2, 3, 1.0, 1);
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let d = RVec::from_vec(vec![0.5, 1.0, 2.0]);
        let k = build_k(&ch, &q, &[0.0; 4], &d, 0);
        for m in 0..3 {
            for n in 0..3 {
                let expect = if m == n { d[m] } else { 0.0 };
                assert_eq!(k[(m, n)], C64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn k_scalar_case() {
        // beta = 0, N_b = 1, one user, lambda = 1, |h|^2 = 1, D = 1 -> K = 2.
        let ch = ChannelSet::from_link_fn(1, 1, 1, 1.0, |_, _, _| {
            CVec::from_vec(vec![C64::new(1.0, 0.0)])
        })
        .unwrap();
        let q = QuantModel::from_bits(Bits::Infinite).unwrap();
        let k = build_k(&ch, &q, &[1.0], &RVec::from_element(1, 1.0), 0);
        assert_relative_eq!(k[(0, 0)].re, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn k_matches_elementwise_oracle() {
        let ch = rand_channels(2, 2, 4, 1.0, 3);
        let q = QuantModel::from_bits(Bits::Finite(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lambda: Vec<f64> = (0..4).map(|_| rng.random::<f64>() + 0.1).collect();
        let d = RVec::from_fn(4, |_, _| rng.random::<f64>() + 0.1);
        for cell in 0..2 {
            let k = build_k(&ch, &q, &lambda, &d, cell);
            let oracle = k_oracle(&ch, &q, &lambda, &d, cell);
            for m in 0..4 {
                for n in 0..4 {
                    assert_relative_eq!(k[(m, n)].re, oracle[(m, n)].re, epsilon = 1e-14);
                    assert_relative_eq!(k[(m, n)].im, oracle[(m, n)].im, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn z_single_user_formula() {
        // With one user the interference sum is empty:
        // Z = alpha^2 diag(D) + alpha*beta diag(lambda |h|^2 + D).
        let ch = rand_channels(1, 1, 3, 1.0, 5);
        let q = QuantModel::from_bits(Bits::Finite(1)).unwrap();
        let lambda = [0.7];
        let d = RVec::from_vec(vec![0.3, 1.1, 0.6]);
        let z = build_z(&ch, &q, &lambda, &d, 0, 0);
        let (a, b) = (q.alpha(), q.beta());
        let h = ch.h(0, 0, 0);
        for m in 0..3 {
            let expect = a * a * d[m] + a * b * (lambda[0] * h[m].norm_sqr() + d[m]);
            assert_relative_eq!(z[(m, m)].re, expect, max_relative = 1e-14);
            for n in 0..3 {
                if n != m {
                    assert_eq!(z[(m, n)], C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn z_unquantized_limit() {
        // beta = 0: Z = sum_{other users} lambda h h^H + diag(D).
        let ch = rand_channels(1, 2, 3, 1.0, 6);
        let q = QuantModel::from_bits(Bits::Infinite).unwrap();
        let lambda = [0.5, 1.5];
        let d = RVec::from_element(3, 0.8);
        let z = build_z(&ch, &q, &lambda, &d, 0, 0);
        let other = ch.h(0, 0, 1);
        for m in 0..3 {
            for n in 0..3 {
                let mut expect = C64::new(1.5, 0.0) * other[m] * other[n].conj();
                if m == n {
                    expect += C64::new(0.8, 0.0);
                }
                assert_relative_eq!(z[(m, n)].re, expect.re, epsilon = 1e-14);
                assert_relative_eq!(z[(m, n)].im, expect.im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn z_equals_alpha_k_minus_own_signal() {
        // Z_{i,u} = alpha K_i - alpha^2 lambda_{i,u} h h^H: the own-user
        // rank-one term is removed but its quantization distortion stays.
        let ch = rand_channels(2, 2, 4, 1.0, 7);
        let q = QuantModel::from_bits(Bits::Finite(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let lambda: Vec<f64> = (0..4).map(|_| rng.random::<f64>() + 0.05).collect();
        let d = RVec::from_fn(4, |_, _| rng.random::<f64>() + 0.05);
        for cell in 0..2 {
            let k = build_k(&ch, &q, &lambda, &d, cell);
            for user in 0..2 {
                let z = build_z(&ch, &q, &lambda, &d, cell, user);
                let idx = ch.user_index(cell, user);
                let h = ch.h(cell, cell, user);
                let mut expect = &k * C64::new(q.alpha(), 0.0);
                expect.gerc(
                    C64::new(-q.alpha() * q.alpha() * lambda[idx], 0.0),
                    h,
                    h,
                    C64::new(1.0, 0.0),
                );
                for m in 0..4 {
                    for n in 0..4 {
                        let scale = expect[(m, n)].norm().max(1e-3);
                        assert!(
                            (z[(m, n)] - expect[(m, n)]).norm() <= 1e-12 * scale,
                            "mismatch at ({m},{n})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mmse_identity_and_scaling() {
        let ch = rand_channels(1, 1, 3, 1.0, 9);
        let h = ch.h(0, 0, 0);
        let eye = CMat::identity(3, 3);
        let f = mmse_combiner(&eye, h, 0, 0).unwrap();
        for m in 0..3 {
            assert_relative_eq!(f[m].re, h[m].re, max_relative = 1e-14);
            assert_relative_eq!(f[m].im, h[m].im, max_relative = 1e-14);
        }
        let f2 = mmse_combiner(&(&eye * C64::new(2.0, 0.0)), h, 0, 0).unwrap();
        for m in 0..3 {
            assert_relative_eq!(f2[m].re, h[m].re / 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn mmse_beats_random_directions() {
        let ch = rand_channels(1, 2, 4, 1.0, 10);
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let lambda = [0.9, 0.4];
        let d = RVec::from_element(4, 1.0);
        let z = build_z(&ch, &q, &lambda, &d, 0, 0);
        let h = ch.h(0, 0, 0);
        let f = mmse_combiner(&z, h, 0, 0).unwrap();
        let best = ul_sinr(&q, lambda[0], &f, &z, h);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let v = CVec::from_fn(4, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            assert!(ul_sinr(&q, lambda[0], &v, &z, h) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn scalar_fixed_point_closed_form() {
        // N_c = N_u = N_b = 1, alpha = 1, beta = 0, D = d, |h|^2 = g:
        // lambda* = gamma * d / g.
        let g: f64 = 0.37;
        let ch = ChannelSet::from_link_fn(1, 1, 1, 1.0, |_, _, _| {
            CVec::from_vec(vec![C64::new(g.sqrt(), 0.0)])
        })
        .unwrap();
        let q = QuantModel::from_bits(Bits::Infinite).unwrap();
        let d = RVec::from_element(1, 2.5);
        let gamma = [1.3];
        let (lambda, _) =
            fixed_point_lambda(&ch, &q, &[d], &gamma, &InnerOptions::default(), None).unwrap();
        assert_relative_eq!(lambda[0], 1.3 * 2.5 / g, max_relative = 1e-8);
    }

    #[test]
    fn vanishing_targets_give_vanishing_lambda() {
        let ch = rand_channels(2, 2, 3, 1.0, 12);
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let gamma = [1e-9; 4];
        let (lambda, _) = fixed_point_lambda(
            &ch,
            &q,
            &uniform_d(2, 3),
            &gamma,
            &InnerOptions::default(),
            None,
        )
        .unwrap();
        for &l in &lambda {
            assert!(l > 0.0 && l < 1e-7, "lambda should scale with gamma, got {l}");
        }
    }

    #[test]
    fn converged_ul_sinr_hits_targets() {
        let ch = rand_channels(2, 2, 4, 1.0, 13);
        let q = QuantModel::from_bits(Bits::Finite(2)).unwrap();
        let gamma = [1.6, 0.5, 2.0, 1.0];
        let opts = InnerOptions::default();
        let state = solve_inner(&ch, &q, &uniform_d(2, 4), &gamma, &opts, None).unwrap();
        for cell in 0..2 {
            for user in 0..2 {
                let idx = ch.user_index(cell, user);
                let z = build_z(&ch, &q, &state.lambda, &state.d[cell], cell, user);
                let sinr = ul_sinr(
                    &q,
                    state.lambda[idx],
                    &state.combiners[idx],
                    &z,
                    ch.h(cell, cell, user),
                );
                assert_relative_eq!(sinr, gamma[idx], max_relative = 10.0 * opts.tol);
            }
        }
    }

    #[test]
    fn zero_lambda_gives_zero_ul_sinr() {
        let ch = rand_channels(1, 1, 2, 1.0, 14);
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let z = CMat::identity(2, 2);
        let f = CVec::from_element(2, C64::new(1.0, 0.0));
        assert_eq!(ul_sinr(&q, 0.0, &f, &z, ch.h(0, 0, 0)), 0.0);
    }

    #[test]
    fn iterates_are_monotone_from_small_start() {
        // The update map is a standard interference function; starting below
        // the fixed point the Gauss-Seidel iterates never decrease.
        let ch = rand_channels(2, 2, 4, 1.0, 15);
        let q = QuantModel::from_bits(Bits::Finite(3)).unwrap();
        let gamma = [1.2, 0.8, 1.5, 1.0];
        let d = uniform_d(2, 4);
        let mut prev: Option<Vec<f64>> = None;
        for sweeps in 1..=8 {
            // The monotonicity of the plain update map is what is asserted;
            // the common-mode rescale is a solver accelerant on top of it.
            let opts = InnerOptions {
                tol: 0.0,
                max_sweeps: sweeps,
                accelerate: false,
                ..Default::default()
            };
            let lambda = match fixed_point_lambda(&ch, &q, &d, &gamma, &opts, None) {
                Ok((l, _)) => l,
                Err(Error::InnerNonConverged { lambda, .. }) => lambda,
                Err(e) => panic!("unexpected error: {e}"),
            };
            if let Some(p) = &prev {
                for (a, b) in p.iter().zip(&lambda) {
                    assert!(b >= a, "iterates must be nondecreasing");
                }
            }
            prev = Some(lambda);
        }
    }

    #[test]
    fn two_user_fixed_point_matches_grid_oracle() {
        // Brute-force refinement over the 2-D lambda plane, with the
        // residual evaluated through an explicit 2x2 inverse.
        let ch = rand_channels(1, 2, 2, 1.0, 16);
        let q = QuantModel::from_bits(Bits::Finite(2)).unwrap();
        let gamma = [1.4, 0.9];
        let d = RVec::from_vec(vec![1.0, 0.7]);

        let residual = |l1: f64, l2: f64| -> f64 {
            let lam = [l1, l2];
            let mut worst: f64 = 0.0;
            for user in 0..2 {
                // K = diag(d) + sum_u lam (alpha h h^H + beta diag(|h|^2))
                let mut k = [[C64::new(0.0, 0.0); 2]; 2];
                for m in 0..2 {
                    k[m][m] += C64::new(d[m], 0.0);
                }
                for u in 0..2 {
                    let h = ch.h(0, 0, u);
                    for m in 0..2 {
                        for n in 0..2 {
                            k[m][n] += C64::new(q.alpha() * lam[u], 0.0) * h[m] * h[n].conj();
                        }
                        k[m][m] += C64::new(q.beta() * lam[u] * h[m].norm_sqr(), 0.0);
                    }
                }
                let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
                let h = ch.h(0, 0, user);
                // x = h^H K^{-1} h via the adjugate.
                let x = ((h[0].conj() * (k[1][1] * h[0] - k[0][1] * h[1])
                    + h[1].conj() * (k[0][0] * h[1] - k[1][0] * h[0]))
                    / det)
                    .re;
                let balance = q.alpha() * (1.0 + 1.0 / gamma[user]) * lam[user] * x;
                worst = worst.max((balance - 1.0).abs());
            }
            worst
        };

        // Iteratively refined log-space grid search.
        let (mut lo1, mut hi1, mut lo2, mut hi2) = (1e-6_f64, 1e6_f64, 1e-6_f64, 1e6_f64);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for _ in 0..14 {
            let n = 48;
            best = (f64::INFINITY, 0.0, 0.0);
            for a in 0..=n {
                let l1 = lo1 * (hi1 / lo1).powf(a as f64 / n as f64);
                for b in 0..=n {
                    let l2 = lo2 * (hi2 / lo2).powf(b as f64 / n as f64);
                    let r = residual(l1, l2);
                    if r < best.0 {
                        best = (r, l1, l2);
                    }
                }
            }
            let shrink = (hi1 / lo1).powf(2.0 / n as f64);
            lo1 = best.1 / shrink;
            hi1 = best.1 * shrink;
            let shrink2 = (hi2 / lo2).powf(2.0 / n as f64);
            lo2 = best.2 / shrink2;
            hi2 = best.2 * shrink2;
        }

        let (lambda, _) = fixed_point_lambda(
            &ch,
            &q,
            &[d.clone()],
            &gamma,
            &InnerOptions::default(),
            None,
        )
        .unwrap();
        assert_relative_eq!(lambda[0], best.1, max_relative = 1e-5);
        assert_relative_eq!(lambda[1], best.2, max_relative = 1e-5);
    }

    #[test]
    fn infeasible_target_is_detected() {
        // One-bit quantization caps the achievable SINR; demand far beyond it.
        let ch = rand_channels(1, 2, 2, 1.0, 17);
        let q = QuantModel::from_bits(Bits::Finite(1)).unwrap();
        let gamma = [1e4, 1e4];
        let err = fixed_point_lambda(
            &ch,
            &q,
            &uniform_d(1, 2),
            &gamma,
            &InnerOptions::default(),
            None,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::InfeasibleTarget { .. })
                || matches!(err, Error::InnerNonConverged { .. }),
            "got {err}"
        );
    }
}
