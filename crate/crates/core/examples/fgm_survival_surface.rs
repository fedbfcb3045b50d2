//! Joint survival `Q(t, s)` and joint cdf `G(t, s)` of the system failure
//! time and the weakest live power under FGM dependence, with exponential
//! lifetimes and Uniform(2, 5) powers. Prints `t,s,Q,G` CSV.
//!
//!     cargo run --example fgm_survival_surface > fgm.csv

use power_reliability::{CopulaSpec, DecaySpec, DistributionSpec, SystemModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = SystemModel::new(
        10,
        4,
        DistributionSpec::Exponential { rate: 1.0 },
        DistributionSpec::Uniform { lo: 2.0, hi: 5.0 },
        CopulaSpec::Fgm { alpha: 1.0 },
        DecaySpec::NoDecay,
    )?;
    let analysis = model.analysis();
    println!("t,s,Q,G");
    for j in 0..=30 {
        let s = f64::from(20 + j) / 10.0;
        for i in 0..=25 {
            let t = f64::from(i) / 10.0;
            let q = analysis.joint_survival_fixed(t, s)?;
            let g = analysis.joint_cdf_fixed(t, s)?;
            println!("{t},{s},{q},{g}");
        }
    }
    Ok(())
}
