//! Residual operating life after an inspection at time `t`: mean residual
//! life under both threshold conventions, and the residual-life cdf and
//! density at a few running times.
//!
//!     cargo run --example mean_residual_life

use power_reliability::{CopulaSpec, DecaySpec, DistributionSpec, SystemModel, ThresholdConvention};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = SystemModel::new(
        10,
        6,
        DistributionSpec::Exponential { rate: 1.0 },
        DistributionSpec::Exponential { rate: 1.0 },
        CopulaSpec::Independence,
        DecaySpec::Exponential { theta: 1.0 },
    )?;
    let analysis = model.analysis();
    let conventions = [ThresholdConvention::PaperLiteral, ThresholdConvention::InspectionTime];

    println!("mean residual life (rows: t, columns: s = 0, 0.25, 0.5)");
    for conv in conventions {
        println!("  threshold convention: {}", conv.as_str());
        for t in [0.0, 0.25, 0.5, 1.0] {
            let row: Vec<String> = [0.0, 0.25, 0.5]
                .iter()
                .map(|&s| analysis.mean_residual_life(t, s, conv).map(|v| format!("{v:.6}")))
                .collect::<Result<_, _>>()?;
            println!("    t = {t:<4}  {}", row.join("  "));
        }
    }

    let (t, s) = (0.5, 0.5);
    println!("\nresidual life given survival to t = {t} at power level s = {s}");
    println!("  {:>5}  {:>10} {:>10}  {:>10} {:>10}", "x", "cdf/paper", "pdf/paper", "cdf/insp", "pdf/insp");
    for x in [0.6, 0.8, 1.0, 1.5, 2.0] {
        let [(c1, p1), (c2, p2)] = conventions.map(|c| {
            (analysis.residual_life_cdf(t, s, x, c), analysis.residual_life_pdf(t, s, x, c))
        });
        println!("  {x:>5}  {:>10.6} {:>10.6}  {:>10.6} {:>10.6}", c1?, p1?, c2?, p2?);
    }
    Ok(())
}
