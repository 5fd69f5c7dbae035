//! Machine config files.
//!
//! ```text
//! alphabet: . #
//! radius: 1
//! rule:
//!   ### -> #
//!   ...
//! ```
//!
//! Every window of length `2 * radius + 1` must be listed exactly once.
//! Duplicates are rejected here; missing windows and foreign symbols are
//! reported by [`validate_machine`](super::validate_machine).

use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use super::MachineSpec;
use crate::tape::{Alphabet, TapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Alphabet { line: usize, source: TapeError },
    #[error("line {line}: window {window} is listed twice")]
    DuplicateWindow { line: usize, window: String },
    #[error("line {line}: {key} is given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing {0}")]
    Missing(&'static str),
}

pub fn parse_config(text: &str) -> Result<MachineSpec, ConfigError> {
    let mut alphabet = None;
    let mut radius = None;
    let mut rule: Option<Vec<(String, char)>> = None;
    let mut seen = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| ConfigError::Syntax { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("alphabet:") {
            if alphabet.is_some() {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: "alphabet".into(),
                });
            }
            let mut symbols = Vec::new();
            for tok in rest.split_whitespace() {
                let mut chars = tok.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => symbols.push(c),
                    _ => {
                        return Err(syntax(format!(
                            "alphabet symbol {tok:?} is not a single character"
                        )))
                    }
                }
            }
            alphabet = Some(
                Alphabet::new(symbols).map_err(|source| ConfigError::Alphabet { line, source })?,
            );
        } else if let Some(rest) = trimmed.strip_prefix("radius:") {
            if radius.is_some() {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: "radius".into(),
                });
            }
            let r: usize = rest.trim().parse().map_err(|_| {
                syntax(format!(
                    "radius {:?} is not a non-negative integer",
                    rest.trim()
                ))
            })?;
            radius = Some(r);
        } else if trimmed == "rule:" {
            if rule.is_some() {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: "rule".into(),
                });
            }
            rule = Some(Vec::new());
        } else if let Some(entries) = rule.as_mut() {
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let [window, "->", out] = tokens.as_slice() else {
                return Err(syntax(format!(
                    "expected `WINDOW -> SYMBOL`, found {trimmed:?}"
                )));
            };
            let mut chars = out.chars();
            let (Some(symbol), None) = (chars.next(), chars.next()) else {
                return Err(syntax(format!("output {out:?} is not a single character")));
            };
            if !seen.insert(window.to_string()) {
                return Err(ConfigError::DuplicateWindow {
                    line,
                    window: window.to_string(),
                });
            }
            entries.push((window.to_string(), symbol));
        } else {
            return Err(syntax(format!("unexpected line {trimmed:?}")));
        }
    }

    Ok(MachineSpec {
        alphabet: alphabet.ok_or(ConfigError::Missing("alphabet"))?,
        radius: radius.ok_or(ConfigError::Missing("radius"))?,
        rule: rule.ok_or(ConfigError::Missing("rule"))?,
    })
}

pub fn render_config(spec: &MachineSpec) -> String {
    let mut out = String::from("alphabet:");
    for s in spec.alphabet.symbols() {
        write!(out, " {s}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "radius: {}", spec.radius).unwrap();
    writeln!(out, "rule:").unwrap();
    for (window, symbol) in &spec.rule {
        writeln!(out, "  {window} -> {symbol}").unwrap();
    }
    out
}
