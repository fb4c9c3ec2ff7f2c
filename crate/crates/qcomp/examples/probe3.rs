use qcomp::dual::{fixed_point_lambda, InnerOptions};
use qcomp::error::Error;
use qcomp::netgen::{self, NetworkConfig, TargetSinr};
use qcomp::outer::{solve_pa, OuterConfig};
use qcomp::quant::{Bits, QuantModel};

fn main() {
    // Reproduce the failing inner solve: b=inf, c2 u1 a4, gamma -3 dB.
    let cfg = NetworkConfig {
        n_cells: 2,
        n_users_per_cell: 1,
        n_antennas: 4,
        bits: Bits::Infinite,
        target_sinr: TargetSinr::UniformDb(-3.0),
        seed: (2 * 100 + 1 * 10 + 0 * 5 + 0) as u64,
        ..Default::default()
    };
    let (_, ch) = netgen::generate(&cfg).unwrap();
    let quant = QuantModel::from_bits(cfg.bits).unwrap();
    let gamma = cfg.sinr_targets().unwrap();

    // Run the outer loop until the inner failure, capturing the D that
    // breaks it by re-running with growing max_iters.
    let mut outer = OuterConfig::default();
    outer.max_iters = 2000;
    match solve_pa(&ch, &quant, &gamma, &cfg.solver.inner, &outer) {
        Ok(s) => println!("solved?! gap {:.2e}", s.report.duality_gap_rel),
        Err(e) => println!("outer failed: {e}"),
    }

    // Direct probe: inner iteration at a near-vertex D (almost all trace on
    // cell 0), watching the lambda trajectory.
    use qcomp::types::RVec;
    let d = vec![
        RVec::from_vec(vec![2.0, 2.0, 2.0, 1.999_999]),
        RVec::from_element(4, 1e-12),
    ];
    for max_sweeps in [1usize, 2, 3, 5, 8, 13, 21, 50, 100, 1000, 10000] {
        let opts = InnerOptions {
            tol: 1e-9,
            max_sweeps,
            accelerate: true,
            ..Default::default()
        };
        let (lam, res, sw) = match fixed_point_lambda(&ch, &quant, &d, &gamma, &opts, None) {
            Ok((l, s)) => (l, 0.0, s),
            Err(Error::InnerNonConverged { lambda, residual, sweeps }) => (lambda, residual, sweeps),
            Err(e) => {
                println!("sweeps {max_sweeps}: {e}");
                continue;
            }
        };
        println!(
            "sweeps {sw:6} res {res:.3e}: lambda = [{:.6e}, {:.6e}]",
            lam[0], lam[1]
        );
    }
}
