use qcomp::dual::InnerOptions;
use qcomp::netgen::ChannelSet;
use qcomp::outer::{solve_baseline, solve_pa, OuterConfig};
use qcomp::quant::{Bits, QuantModel};
use qcomp::types::{C64, CVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() {
    // Single-cell single-user, infinite resolution: closed form
    // p0 = gamma * sigma^2 / (sum_m |h_m|)^2.
    let q = QuantModel::from_bits(Bits::Infinite).unwrap();
    let noise = 1.26e-10;
    let gamma = [1.585];
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let nb = [2, 4, 8][(seed % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let scale = 1e-5;
        let ch = ChannelSet::from_link_fn(1, 1, nb, noise, |_, _, _| {
            CVec::from_fn(nb, |_, _| {
                C64::new(
                    scale * rng.sample::<f64, _>(StandardNormal),
                    scale * rng.sample::<f64, _>(StandardNormal),
                )
            })
        })
        .unwrap();
        let sol = solve_pa(&ch, &q, &gamma, &InnerOptions::default(), &OuterConfig::default())
            .unwrap();
        let amp_sum: f64 = ch.h(0, 0, 0).iter().map(|c| c.norm()).sum();
        let closed = gamma[0] * noise / (amp_sum * amp_sum);
        let rel = (sol.report.max_antenna_power - closed).abs() / closed;
        worst = worst.max(rel);
        println!(
            "seed {seed} nb {nb}: iters {:4} conv {} p0 {:.8e} closed {:.8e} rel {:.2e} gap {:.1e}",
            sol.report.outer_iters,
            sol.report.converged,
            sol.report.max_antenna_power,
            closed,
            rel,
            sol.report.duality_gap_rel
        );
    }
    println!("worst rel err vs closed form: {worst:.3e} (need < 1e-3)");

    // A bigger asymmetric instance with pathloss-scale channels.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let q3 = QuantModel::from_bits(Bits::Finite(3)).unwrap();
    let ch = ChannelSet::from_link_fn(4, 2, 8, noise, |bs, cell, _| {
        let g: f64 = if bs == cell { 1e-10 } else { 1e-12 * (1.0 + rng.random::<f64>() * 5.0) };
        CVec::from_fn(8, |_, _| {
            C64::new(
                (g / 2.0).sqrt() * rng.sample::<f64, _>(StandardNormal),
                (g / 2.0).sqrt() * rng.sample::<f64, _>(StandardNormal),
            )
        })
    })
    .unwrap();
    let gamma8 = [1.585; 8];
    let inner = InnerOptions::default();
    let pa = solve_pa(&ch, &q3, &gamma8, &inner, &OuterConfig::default()).unwrap();
    let base = solve_baseline(&ch, &q3, &gamma8, &inner).unwrap();
    println!(
        "4-cell: iters {} conv {} gap {:.2e} pa_p0 {:.3e} base_p0 {:.3e} gain_db {:.2}",
        pa.report.outer_iters,
        pa.report.converged,
        pa.report.duality_gap_rel,
        pa.report.max_antenna_power,
        base.report.max_antenna_power,
        10.0 * (base.report.max_antenna_power / pa.report.max_antenna_power).log10()
    );
    println!(
        "pa papr {:.2} dB base papr {:.2} dB; pa range {:.2} dB base range {:.2} dB",
        pa.report.papr_db, base.report.papr_db, pa.report.operating_range_db, base.report.operating_range_db
    );
}
