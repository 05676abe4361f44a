use invmmd::pcg::*;
use invmmd::sim::Method;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn corpus(count: usize, seed: u64) -> Vec<PreparedRecording> {
    let cycle_len = 800usize;
    let cycles = 8usize;
    let cfg = ExtractionConfig::default();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64) << 16));
            let rotation = rng.random_range(0..cycle_len * cycles);
            let amplitude = 1.0 + rng.random_range(-0.4..0.4);
            let s2_amp = rng.random_range(0.2..0.9);
            let s1_center = 0.1 + rng.random_range(-0.03..0.03);
            let s2_center = rng.random_range(0.35..0.55);
            let s1_width = rng.random_range(0.0010..0.0040);
            let s2_width = rng.random_range(0.002..0.006);
            let phi1 = rng.random_range(0.0..std::f64::consts::TAU);
            let phi2 = rng.random_range(0.0..std::f64::consts::TAU);
            let n = cycle_len * cycles;
            let samples: Vec<f64> = (0..n)
                .map(|k| {
                    let j = (k + rotation) % n;
                    let t = j as f64 / 1000.0;
                    let phase = (j % cycle_len) as f64 / cycle_len as f64;
                    let s1 = (-(phase - s1_center) * (phase - s1_center) / s1_width).exp()
                        * (std::f64::consts::TAU * 30.0 * t + phi1).sin();
                    let s2 = s2_amp
                        * (-(phase - s2_center) * (phase - s2_center) / s2_width).exp()
                        * (std::f64::consts::TAU * 35.0 * t + phi2).sin();
                    amplitude * (s1 + s2) + rng.random_range(-0.3..0.3)
                })
                .collect();
            let rec = Recording::new(samples, 1000.0, format!("synthetic-{i}")).unwrap();
            prepare(&rec, &cfg).unwrap()
        })
        .collect()
}

fn main() {
    let pool = corpus(200, 77);
    let mut periods: Vec<f64> = pool.iter().map(|p| p.period.period_s).collect();
    periods.sort_by(f64::total_cmp);
    println!(
        "period estimates: min {} median {} max {}",
        periods[0],
        periods[periods.len() / 2],
        periods[periods.len() - 1]
    );
    let low_conf = pool.iter().filter(|p| p.period.low_confidence).count();
    println!("low confidence: {low_conf}/200");

    for n in [10usize, 40, 80] {
        let params = PcgTestParams {
            n_rep: 100,
            seed: 3,
            ..PcgTestParams::default()
        };
        let rates = misalignment_experiment(&pool, n, &params).unwrap();
        let row: Vec<String> = Method::ALL
            .iter()
            .map(|m| {
                let r = rates.iter().find(|x| x.method == *m).unwrap();
                format!("{}={:.3}", m.name(), r.reject_rate)
            })
            .collect();
        println!("n={n}: {}", row.join(" "));
    }
}
