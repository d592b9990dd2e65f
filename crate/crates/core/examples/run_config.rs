//! Driving the JSON configuration layer from code, as the binary does.

use contact_index::cli::{cmd_index, cmd_rockland, cmd_spectrum, RunConfig};
use contact_index::Result;

fn main() -> Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs");
    let spectrum = RunConfig::load(format!("{dir}/laplacian_n2.json").as_ref())?;
    let out = cmd_spectrum(&spectrum)?;
    for block in out.report["blocks"].as_array().into_iter().flatten() {
        println!("degree {}: multiplicity {}, first eigenvalue {}", block["degree"], block["multiplicity"], block["eigenvalues"][0]);
    }

    let lambda = RunConfig::load(format!("{dir}/twisted_lambda.json").as_ref())?;
    let out = cmd_rockland(&lambda)?;
    println!("β = 1: exit code {} ({})", out.exit_code, out.message.unwrap_or_default());

    let mut varying = RunConfig::load(format!("{dir}/twisted_varying.json").as_ref())?;
    varying.manifold.as_mut().expect("manifold").res = 12;
    let out = cmd_index(&varying)?;
    println!("scalar varying β: estimate {}, index {}", out.report["estimate"], out.report["index"]);
    Ok(())
}
