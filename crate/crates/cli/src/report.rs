//! Run reports: a deterministic JSON payload on stdout (or a file) plus a
//! wall-clock line on stderr, so identical invocations stay byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<T: Serialize> {
    /// Echo of the invoking command line.
    pub command: String,
    /// SHA-256 of the state input (file bytes or canonical family string).
    pub input_digest: Option<String>,
    /// Seed used for any pseudo-random stream.
    pub seed: u64,
    pub results: T,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn command_echo() -> String {
    let args: Vec<String> = std::env::args().collect();
    args.join(" ")
}

/// Write the payload to `out` or stdout; timing goes to stderr only.
pub fn emit(payload: &str, out: Option<&Path>, elapsed: Duration) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .map_err(|e| CliError::input(format!("cannot write stdout: {e}")))?;
        }
    }
    eprintln!("completed in {:.3} ms", elapsed.as_secs_f64() * 1e3);
    Ok(())
}

pub fn to_json_payload<T: Serialize>(report: &RunReport<T>) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}
