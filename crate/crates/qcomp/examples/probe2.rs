use qcomp::netgen::{self, NetworkConfig, TargetSinr};
use qcomp::outer::{solve_baseline, solve_pa};
use qcomp::quant::{Bits, QuantModel};

fn main() {
    let mut n_converged = 0;
    let mut worst_gap: f64 = 0.0;
    let mut worst_iters = 0;
    let mut total = 0;
    let t0 = std::time::Instant::now();
    for (bi, &bits) in [Bits::Finite(1), Bits::Finite(3), Bits::Infinite].iter().enumerate() {
        for (ci, &n_cells) in [1usize, 2, 4].iter().enumerate() {
            for (ui, &n_users) in [1usize, 2].iter().enumerate() {
                for (ai, &n_antennas) in [4usize, 8, 32].iter().enumerate() {
                    total += 1;
                    let gamma_db = [-3.0, 0.0, 2.0][(bi + ci + ui + ai) % 3];
                    let cfg = NetworkConfig {
                        n_cells,
                        n_users_per_cell: n_users,
                        n_antennas,
                        bits,
                        target_sinr: TargetSinr::UniformDb(gamma_db),
                        seed: (bi * 100 + ci * 10 + ui * 5 + ai) as u64,
                        ..Default::default()
                    };
                    let (_, ch) = netgen::generate(&cfg).unwrap();
                    let quant = QuantModel::from_bits(bits).unwrap();
                    let gamma = cfg.sinr_targets().unwrap();
                    let t1 = std::time::Instant::now();
                    let pa = match solve_pa(&ch, &quant, &gamma, &cfg.solver.inner, &cfg.solver.outer) {
                        Ok(s) => s,
                        Err(e) => {
                            println!("b{bits:?} c{n_cells} u{n_users} a{n_antennas} g{gamma_db}: ERROR {e}");
                            continue;
                        }
                    };
                    let base = solve_baseline(&ch, &quant, &gamma, &cfg.solver.inner).unwrap();
                    let sinr_err = pa.report.max_sinr_rel_err(&gamma);
                    let dom_p0 = pa.report.max_antenna_power
                        <= base.report.max_antenna_power * (1.0 + 1e-9);
                    let dom_tot = base.report.total_power <= pa.report.total_power * (1.0 + 1e-9);
                    if pa.report.converged {
                        n_converged += 1;
                        worst_gap = worst_gap.max(pa.report.duality_gap_rel);
                        worst_iters = worst_iters.max(pa.report.outer_iters);
                    }
                    println!(
                        "b{:>3} c{n_cells} u{n_users} a{:>2} g{gamma_db:>4}: conv {:5} it {:4} gap {:.2e} sinr_err {:.1e} domP {} domT {} gain_db {:+.2} ({} ms)",
                        bits.to_string(),
                        n_antennas,
                        pa.report.converged,
                        pa.report.outer_iters,
                        pa.report.duality_gap_rel,
                        sinr_err,
                        dom_p0,
                        dom_tot,
                        10.0 * (base.report.max_antenna_power / pa.report.max_antenna_power).log10(),
                        t1.elapsed().as_millis(),
                    );
                }
            }
        }
    }
    println!(
        "{n_converged}/{total} converged; worst gap {worst_gap:.2e}; worst iters {worst_iters}; total {:.1} s",
        t0.elapsed().as_secs_f64()
    );
}
