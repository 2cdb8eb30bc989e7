//! Plain `key=value` config files. Keys mirror the long flag names; `#`
//! starts a comment. Explicit command-line flags take precedence.

use crate::UsageError;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub n: Option<u32>,
    pub connected: Option<bool>,
    pub no_reversal: Option<bool>,
    pub max_arcs: Option<usize>,
    pub max_out_degree: Option<usize>,
    pub max_in_degree: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<u64>,
    pub count: Option<u64>,
    pub burn_in: Option<u64>,
    pub gap: Option<u64>,
}

pub fn load(path: &Path) -> Result<ConfigFile, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|msg| UsageError(format!("{}: {msg}", path.display())))
}

fn parse(text: &str) -> Result<ConfigFile, String> {
    let mut cfg = ConfigFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| format!("line {}: {what} `{value}` for key `{key}`", lineno + 1);
        match key {
            "n" => cfg.n = Some(value.parse().map_err(|_| bad("bad integer"))?),
            "connected" => cfg.connected = Some(parse_bool(value).ok_or_else(|| bad("bad bool"))?),
            "no-reversal" | "no_reversal" => {
                cfg.no_reversal = Some(parse_bool(value).ok_or_else(|| bad("bad bool"))?)
            }
            "max-arcs" | "max_arcs" => {
                cfg.max_arcs = Some(value.parse().map_err(|_| bad("bad integer"))?)
            }
            "max-out-degree" | "max_out_degree" => {
                cfg.max_out_degree = Some(value.parse().map_err(|_| bad("bad integer"))?)
            }
            "max-in-degree" | "max_in_degree" => {
                cfg.max_in_degree = Some(value.parse().map_err(|_| bad("bad integer"))?)
            }
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("bad integer"))?),
            "steps" => cfg.steps = Some(value.parse().map_err(|_| bad("bad integer"))?),
            "count" => cfg.count = Some(value.parse().map_err(|_| bad("bad integer"))?),
            "burn-in" | "burn_in" => {
                cfg.burn_in = Some(value.parse().map_err(|_| bad("bad integer"))?)
            }
            "gap" => cfg.gap = Some(value.parse().map_err(|_| bad("bad integer"))?),
            _ => return Err(format!("line {}: unknown key `{key}`", lineno + 1)),
        }
    }
    Ok(cfg)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = parse("n = 5\nconnected=yes # sample connected\n\nseed=7\nburn-in=100\n").unwrap();
        assert_eq!(cfg.n, Some(5));
        assert_eq!(cfg.connected, Some(true));
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.burn_in, Some(100));
        assert_eq!(cfg.steps, None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(parse("frobnicate=1\n").is_err());
        assert!(parse("n=abc\n").is_err());
        assert!(parse("just a line\n").is_err());
    }
}
