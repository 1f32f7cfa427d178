//! Byte-size flag parsing with binary suffixes (KiB/MiB/GiB).

use crate::error::{CliError, CliResult};

/// Parses "64MiB", "4096", "32KiB", "2GiB" (suffix case-insensitive).
pub fn parse_size(s: &str) -> CliResult<u128> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    let (digits, mult): (&str, u128) = if let Some(d) = lower.strip_suffix("kib") {
        (d, 1 << 10)
    } else if let Some(d) = lower.strip_suffix("mib") {
        (d, 1 << 20)
    } else if let Some(d) = lower.strip_suffix("gib") {
        (d, 1 << 30)
    } else if let Some(d) = lower.strip_suffix('b') {
        (d, 1)
    } else {
        (lower.as_str(), 1)
    };
    let digits = digits.trim();
    let value: u128 = digits
        .parse()
        .map_err(|_| CliError::usage(format!("`{s}` is not a byte size (use N, NKiB, NMiB, or NGiB)")))?;
    value
        .checked_mul(mult)
        .ok_or_else(|| CliError::usage(format!("byte size `{s}` overflows")))
}

pub fn format_size(bytes: u128) -> String {
    const UNITS: [(&str, u128); 3] = [("GiB", 1 << 30), ("MiB", 1 << 20), ("KiB", 1 << 10)];
    for (suffix, mult) in UNITS {
        if bytes >= mult && bytes.is_multiple_of(mult) {
            return format!("{}{suffix}", bytes / mult);
        }
    }
    format!("{bytes}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_suffixes() {
        assert_eq!(parse_size("4096").unwrap(), 4096);
        assert_eq!(parse_size("64MiB").unwrap(), 64 << 20);
        assert_eq!(parse_size("32kib").unwrap(), 32 << 10);
        assert_eq!(parse_size("2GiB").unwrap(), 2 << 30);
        assert_eq!(parse_size("128B").unwrap(), 128);
        assert!(parse_size("12MB").is_err()); // decimal units not supported
        assert!(parse_size("abc").is_err());
    }

    #[test]
    fn formats_round_sizes() {
        assert_eq!(format_size(64 << 20), "64MiB");
        assert_eq!(format_size(3000), "3000");
    }
}
