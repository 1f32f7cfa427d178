//! Output sink: stdout or `--out <path>`.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            file.write_all(content.as_bytes())
                .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            if !content.ends_with('\n') {
                file.write_all(b"\n")
                    .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        None => {
            if content.ends_with('\n') {
                print!("{content}");
            } else {
                println!("{content}");
            }
            Ok(())
        }
    }
}

pub fn to_json_string<T: serde::Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::io(format!("json encoding: {e}")))
}
