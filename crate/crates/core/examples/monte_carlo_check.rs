//! Cross-checks quadrature against simulation at a few points and prints the
//! z-score of each comparison.
//!
//!     cargo run --release --example monte_carlo_check [samples] [seed]

use power_reliability::{
    CopulaSpec, DecaySpec, DistributionSpec, EvalPoint, MonteCarlo, SystemModel, ThresholdConvention,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(200_000);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1);

    let model = SystemModel::new(
        6,
        5,
        DistributionSpec::Exponential { rate: 1.0 },
        DistributionSpec::Exponential { rate: 1.0 },
        CopulaSpec::Fgm { alpha: 1.0 },
        DecaySpec::Exponential { theta: 1.0 },
    )?;
    let analysis = model.analysis();
    let mc = MonteCarlo::new(model, samples, seed)?;
    let conv = ThresholdConvention::PaperLiteral;

    println!("{samples} simulated systems, seed {seed}");
    println!("{:>5} {:>5}  {:<24} {:>12} {:>12} {:>10} {:>7}", "t", "s", "quantity", "quadrature", "simulation", "std err", "z");
    for (t, s) in [(0.1, 0.0), (0.2, 0.5), (0.4, 1.0), (0.3, 2.0)] {
        let p = EvalPoint::new(t, s)?;
        let x = t + 0.3;
        let est = mc.estimate_point(p, x, conv)?;
        let rows = [
            ("joint survival", analysis.joint_survival(p)?, est.joint_survival),
            ("min concomitant survival", analysis.min_concomitant_survival(s)?, est.min_concomitant_survival),
            ("operational reliability", analysis.operational_reliability(p)?, est.operational_reliability),
            ("residual cdf", analysis.residual_life_cdf(t, s, x, conv)?, est.residual_cdf),
            ("mean residual life", analysis.mean_residual_life(t, s, conv)?, est.mrl),
        ];
        for (name, exact, e) in rows {
            let z = if (e.value - exact).abs() < 1e-12 { 0.0 } else { e.z_score(exact) };
            println!("{t:>5} {s:>5}  {name:<24} {exact:>12.6} {:>12.6} {:>10.2e} {z:>7.2}", e.value, e.std_error);
        }
    }
    Ok(())
}
