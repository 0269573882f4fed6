use std::fs;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{Common, Format};

pub const REPORT_SCHEMA: &str = "tcc.report/1";

/// A finished command: machine and human renderings.
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    /// Hash of the patch document the command ran on, if any.
    pub fingerprint: Option<String>,
    pub body: Value,
    pub table: String,
    /// Written as is, bypassing the envelope (patch documents).
    pub raw: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fingerprint: &'a Option<String>,
    seed: u64,
    report: &'a Value,
}

pub fn fingerprint(patch_json: &str) -> String {
    hex::encode(Sha256::digest(patch_json.as_bytes()))
}

pub fn emit(r: &Report, common: &Common) -> std::io::Result<()> {
    let text = match (&r.raw, common.format) {
        (Some(raw), _) => raw.clone() + "\n",
        (None, f) => render(r, common, f)?,
    };
    match &common.out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(r: &Report, common: &Common, format: Format) -> std::io::Result<String> {
    Ok(match format {
        Format::Json => {
            let env = Envelope {
                schema: REPORT_SCHEMA,
                command: r.command,
                passed: r.passed,
                fingerprint: &r.fingerprint,
                seed: common.seed,
                report: &r.body,
            };
            serde_json::to_string_pretty(&env).map_err(std::io::Error::other)? + "\n"
        }
        Format::Table => {
            let mut t = r.table.clone();
            if let Some(f) = &r.fingerprint {
                t.push_str(&format!("patch fingerprint: {f}\n"));
            }
            t.push_str(if r.passed { "result: PASS\n" } else { "result: FAIL\n" });
            t
        }
    })
}
