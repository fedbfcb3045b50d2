//! Joint survival with exponentially decaying power, independent exponential
//! lifetimes and powers, `n = 10`, `r = 6`. The quadrature value is printed
//! next to the closed form available under independence.
//!
//!     cargo run --example decay_survival_surface > decay.csv

use power_reliability::{CopulaSpec, DecaySpec, DistributionSpec, EvalPoint, SystemModel};

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
    println!("t,s,Q,Q_factorized");
    for j in 0..=20 {
        let s = f64::from(j) / 20.0;
        for i in 0..=20 {
            let t = f64::from(i) / 10.0;
            let p = EvalPoint::new(t, s)?;
            println!("{t},{s},{},{}", analysis.joint_survival(p)?, analysis.joint_survival_factorized(p)?);
        }
    }
    Ok(())
}
