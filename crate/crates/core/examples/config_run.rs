//! Drives the library from a JSON configuration, as the `degenfb` binary
//! does: validate, then run a command into an output directory.
//!
//! `cargo run --release --example config_run -- examples/configs/barrier.json barrier`

use std::path::PathBuf;

use degenfb::cli::{execute, validate, Command, Invocation};
use degenfb::config::RunConfig;

fn main() -> degenfb::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(args.next().unwrap_or_else(|| "examples/configs/constant.json".into()));
    let command = match args.next().as_deref() {
        None | Some("solve") => Command::Solve,
        Some("sweep") => Command::Sweep,
        Some("barrier") => Command::Barrier,
        Some("oned") => Command::Oned,
        Some("geometry") => Command::Geometry { field: None },
        Some("validate") => Command::Validate,
        Some(other) => {
            eprintln!("unknown command {other}");
            std::process::exit(1);
        }
    };

    let cfg = RunConfig::from_path(&config)?;
    let report = validate(&cfg, config.parent().unwrap_or(&PathBuf::new()));
    println!("checked: {}", report.checked.join(", "));
    for e in &report.errors {
        println!("error: {e}");
    }

    let out = std::env::temp_dir().join("degenfb-config-run");
    execute(&Invocation { command, config, out: out.clone(), seed: Some(1) })?;
    for entry in std::fs::read_dir(&out)? {
        let path = entry?.path();
        println!("wrote {}", path.display());
    }
    Ok(())
}
