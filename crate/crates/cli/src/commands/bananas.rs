use std::fmt::Write as _;
use std::path::Path;

use crate::bananas::{run_bananas, BananaConfig};
use crate::io::OutDir;
use crate::CliError;

pub fn cmd_bananas(config: &BananaConfig, out: &Path) -> Result<String, CliError> {
    let results = run_bananas(config)?;
    let dir = OutDir::create(out)?;
    dir.write("summary.csv", &results.summary_csv())?;
    dir.write("runs.csv", &results.cells_csv())?;
    if config.grid > 0 {
        dir.write("grid.csv", &results.grid_csv())?;
    }
    let mut msg = format!("banana sweep written to {}\n", dir.path().display());
    msg.push_str("model,lambda,test_error,mean_m_frame\n");
    for s in &results.summary {
        let _ = writeln!(
            msg,
            "{},{},{:.4},{:.4}",
            s.model.name(),
            s.lambda,
            s.test_error,
            s.test_ignorance
        );
    }
    Ok(msg)
}
