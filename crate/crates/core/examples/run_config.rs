//! Drives a subcommand from an in-memory TOML configuration, as the
//! `btfloquet` binary does, and lists the files it writes.
//!
//! `cargo run --release --example run_config [OUT_DIR]`

use std::path::PathBuf;

use btfloquet::cli::{execute, Command, RunConfig, Status};

const CONFIG: &str = r#"
g = 20.0
q = 0.0
n = 16
seed = 1

[shape]
kind = "ellipse"
a = 0.3
b = 0.15

[eigen]
m = 20
tol = 1e-6
nev = 4
"#;

fn main() -> btfloquet::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("btfloquet-example"));
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let outcome = execute(Command::Spectrum, &cfg, &out, true)?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    match outcome.status {
        Status::Ok => println!("ok"),
        Status::Numerical(m) | Status::Validation(m) => println!("status: {m}"),
    }
    Ok(())
}
