//! Built-in quick checks behind `qcomp selftest`: a compact subset of the
//! identity and closed-form tests, runnable without the test harness.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual::{build_k, build_z, fixed_point_lambda, InnerOptions};
use crate::metrics;
use crate::netgen::ChannelSet;
use crate::outer::{self, project_d, OuterConfig};
use crate::quant::{Bits, QuantModel};
use crate::types::{C64, CVec, RVec};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match run() {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn rand_channels(n_cells: usize, n_users: usize, n_antennas: usize, seed: u64) -> ChannelSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ChannelSet::from_link_fn(n_cells, n_users, n_antennas, 1.0, |_, _, _| {
        CVec::from_fn(n_antennas, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    })
    .expect("valid dims")
}

/// Runs the whole quick suite; failures do not panic.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("quantizer one-bit closed form", || {
            let q = QuantModel::from_bits(Bits::Finite(1)).map_err(|e| e.to_string())?;
            let expect = 1.0 - 2.0 / std::f64::consts::PI;
            let err = rel_err(q.beta(), expect);
            if err < 2e-4 {
                Ok(format!("beta = {:.4}, closed form {:.4}", q.beta(), expect))
            } else {
                Err(format!("beta = {} vs {}", q.beta(), expect))
            }
        }),
        check("transmit power identity", || {
            let q = QuantModel::from_bits(Bits::Finite(3)).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(101);
            let w = DMatrix::from_fn(5, 2, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let cov = q.quant_noise_cov(&w);
            let gram = &w * w.adjoint();
            for m in 0..5 {
                let lhs = q.alpha() * q.alpha() * gram[(m, m)].re + cov[m];
                let rhs = q.alpha() * gram[(m, m)].re;
                if rel_err(lhs, rhs) > 1e-13 {
                    return Err(format!("antenna {m}: {lhs} vs {rhs}"));
                }
            }
            Ok("diag(a^2 WW^H + C_qq) = a diag(WW^H)".into())
        }),
        check("Z equals aK minus own rank-one", || {
            let ch = rand_channels(2, 2, 3, 102);
            let q = QuantModel::from_bits(Bits::Finite(2)).map_err(|e| e.to_string())?;
            let lambda = [0.4, 0.9, 0.3, 0.7];
            let d = RVec::from_element(3, 1.0);
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
                    for m in 0..3 {
                        for n in 0..3 {
                            let scale = expect[(m, n)].norm().max(1e-6);
                            if (z[(m, n)] - expect[(m, n)]).norm() > 1e-12 * scale {
                                return Err(format!("cell {cell} user {user} entry ({m},{n})"));
                            }
                        }
                    }
                }
            }
            Ok("identity holds to 1e-12 relative".into())
        }),
        check("quantization noise two-formula identity", || {
            let ch = rand_channels(2, 2, 3, 103);
            let q = QuantModel::from_bits(Bits::Finite(2)).map_err(|e| e.to_string())?;
            let gamma = [1.0, 0.7, 1.2, 0.9];
            let inner = InnerOptions::default();
            let d = vec![RVec::from_element(3, 1.0); 2];
            let state = crate::dual::solve_inner(&ch, &q, &d, &gamma, &inner, None)
                .map_err(|e| e.to_string())?;
            let sigma = crate::primal::build_sigma(&ch, &q, &state.combiners, &gamma);
            let bf = crate::primal::recover_precoders(&sigma, &ch, &state.combiners, 1.0)
                .map_err(|e| e.to_string())?;
            for cell in 0..2 {
                for user in 0..2 {
                    let direct = metrics::quantization_noise(&ch, &q, &bf, cell, user);
                    let mut reform = 0.0;
                    for src_cell in 0..2 {
                        let h = ch.h(src_cell, cell, user);
                        for src_user in 0..2 {
                            let w = bf.w(src_cell, src_user);
                            for m in 0..3 {
                                reform += q.alpha() * q.beta() * h[m].norm_sqr() * w[m].norm_sqr();
                            }
                        }
                    }
                    if rel_err(direct, reform) > 1e-12 {
                        return Err(format!("user ({cell},{user}): {direct} vs {reform}"));
                    }
                }
            }
            Ok("direct and reformulated Q agree to 1e-12".into())
        }),
        check("projection examples and feasibility", || {
            let p = project_d(&RVec::from_vec(vec![3.0, 1.0]), 2.0);
            if (p[0] - 2.0).abs() > 1e-12 || p[1].abs() > 1e-12 {
                return Err(format!("(3,1) projected to ({}, {})", p[0], p[1]));
            }
            let p = project_d(&RVec::from_vec(vec![2.5, 0.1]), 2.0);
            if (p[0] - 2.0).abs() > 1e-12 || p[1].abs() > 1e-12 {
                return Err(format!("(2.5,0.1) projected to ({}, {})", p[0], p[1]));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(104);
            for _ in 0..500 {
                let d = RVec::from_fn(5, |_, _| (rng.random::<f64>() - 0.3) * 10.0);
                let p = project_d(&d, 5.0);
                if p.min() < 0.0 || p.sum() > 5.0 + 1e-9 {
                    return Err("infeasible projection output".into());
                }
                let pp = project_d(&p, 5.0);
                if (&pp - &p).amax() > 1e-12 {
                    return Err("projection not idempotent".into());
                }
            }
            Ok("examples, feasibility, idempotence".into())
        }),
        check("scalar fixed point closed form", || {
            let g: f64 = 0.42;
            let ch = ChannelSet::from_link_fn(1, 1, 1, 1.0, |_, _, _| {
                CVec::from_vec(vec![C64::new(g.sqrt(), 0.0)])
            })
            .map_err(|e| e.to_string())?;
            let q = QuantModel::from_bits(Bits::Infinite).map_err(|e| e.to_string())?;
            let d = RVec::from_element(1, 1.7);
            let (lambda, _) = fixed_point_lambda(
                &ch,
                &q,
                &[d],
                &[2.1],
                &InnerOptions::default(),
                None,
            )
            .map_err(|e| e.to_string())?;
            let expect = 2.1 * 1.7 / g;
            if rel_err(lambda[0], expect) < 1e-7 {
                Ok(format!("lambda = {:.6e}", lambda[0]))
            } else {
                Err(format!("lambda = {} vs {}", lambda[0], expect))
            }
        }),
        check("small PA solve: targets, duality, dominance", || {
            let ch = rand_channels(2, 2, 4, 105);
            let q = QuantModel::from_bits(Bits::Finite(3)).map_err(|e| e.to_string())?;
            let gamma = [1.3, 1.3, 1.3, 1.3];
            let inner = InnerOptions::default();
            let pa = outer::solve_pa(&ch, &q, &gamma, &inner, &OuterConfig::default())
                .map_err(|e| e.to_string())?;
            let base =
                outer::solve_baseline(&ch, &q, &gamma, &inner).map_err(|e| e.to_string())?;
            if pa.report.max_sinr_rel_err(&gamma) > 1e-6 {
                return Err(format!(
                    "SINR error {:.2e}",
                    pa.report.max_sinr_rel_err(&gamma)
                ));
            }
            if pa.report.duality_gap_rel > 0.01 {
                return Err(format!("duality gap {:.3e}", pa.report.duality_gap_rel));
            }
            if pa.report.max_antenna_power > base.report.max_antenna_power * (1.0 + 1e-9) {
                return Err("PA exceeded the baseline max antenna power".into());
            }
            if base.report.total_power > pa.report.total_power * (1.0 + 1e-9) {
                return Err("baseline exceeded the PA total power".into());
            }
            Ok(format!(
                "gap {:.2e}, PA p0 {:.3e} <= baseline p0 {:.3e}",
                pa.report.duality_gap_rel,
                pa.report.max_antenna_power,
                base.report.max_antenna_power
            ))
        }),
    ]
}
