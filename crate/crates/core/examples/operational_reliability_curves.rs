//! Operational reliability `P_s(t)` of a 2-out-of-6 system with FGM-dependent
//! exponential lifetimes and powers and exponential power decay, one curve
//! per power level. Prints `s,t,P` CSV.
//!
//!     cargo run --example operational_reliability_curves > curves.csv

use power_reliability::{CopulaSpec, DecaySpec, DistributionSpec, EvalPoint, SystemModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = SystemModel::new(
        6,
        5,
        DistributionSpec::Exponential { rate: 1.0 },
        DistributionSpec::Exponential { rate: 1.0 },
        CopulaSpec::Fgm { alpha: 1.0 },
        DecaySpec::Exponential { theta: 1.0 },
    )?;
    let analysis = model.analysis();
    println!("s,t,P");
    for s in [0.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
        for i in 0..=60 {
            let t = f64::from(i) / 20.0;
            let p = analysis.operational_reliability(EvalPoint::new(t, s)?)?;
            println!("{s},{t},{p}");
        }
    }
    Ok(())
}
