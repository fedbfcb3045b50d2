//! Joint density of the system failure time and the weakest live power for
//! exponential lifetimes and Pareto powers, on a grid, as `n,r,t,s,pdf` CSV.
//!
//!     cargo run --example joint_pdf_surface > pdf.csv

use power_reliability::{CopulaSpec, DecaySpec, DistributionSpec, SystemModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("n,r,t,s,pdf");
    for (n, r) in [(6, 3), (10, 7)] {
        let model = SystemModel::new(
            n,
            r,
            DistributionSpec::Exponential { rate: 1.0 },
            DistributionSpec::ParetoLomax { shape: 2.0, scale: 1.0 },
            CopulaSpec::Independence,
            DecaySpec::NoDecay,
        )?;
        let analysis = model.analysis();
        for j in 0..=20 {
            let s = f64::from(j) / 10.0;
            for i in 0..=30 {
                let t = f64::from(i) / 10.0;
                println!("{n},{r},{t},{s},{}", analysis.joint_pdf(t, s)?);
            }
        }
    }
    Ok(())
}
