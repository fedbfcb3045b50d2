//! Loads a model file (TOML, or JSON by extension) and prints a summary
//! table of the main reliability quantities.
//!
//!     cargo run --example model_file -- crates/core/examples/models/uniform_fgm.toml

use std::path::PathBuf;

use power_reliability::config::ModelFile;
use power_reliability::{Analysis, EvalPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/models/decaying_fgm.toml")));
    let file = ModelFile::load(&path)?;
    let model = file.model()?;
    let analysis = Analysis::new(model, file.quadrature()?);
    println!("{}", path.display());
    println!("{}-out-of-{} system", model.required_alive(), model.n);
    let s = model.power.quantile(0.1)?;
    println!("power level s = {s:.4} (10% quantile of the power law)");
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "physical", "joint surv", "operational");
    for i in 0..=8 {
        let t = 0.125 * f64::from(i);
        let p = EvalPoint::new(t, s)?;
        println!(
            "{t:>6.3} {:>12.6} {:>12.6} {:>12.6}",
            analysis.physical_reliability(t)?,
            analysis.joint_survival(p)?,
            analysis.operational_reliability(p)?
        );
    }
    Ok(())
}
