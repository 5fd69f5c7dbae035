//! Plain-text form of [`FinCatPresentation`].
//!
//! ```text
//! object NAME
//! morphism NAME : A -> B
//! identity A = NAME
//! compose G F = H
//! ```
//!
//! Blank lines and lines starting with `//` are ignored. Declarations may
//! appear in any order.

use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use super::{FinCatError, FinCatPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Structure { line: usize, source: FinCatError },
    #[error("line {line}: duplicate {what} for {key}")]
    Duplicate {
        line: usize,
        what: &'static str,
        key: String,
    },
}

pub(super) fn render(p: &FinCatPresentation) -> String {
    let mut out = String::new();
    for o in &p.objects {
        writeln!(out, "object {o}").unwrap();
    }
    for m in &p.morphisms {
        writeln!(out, "morphism {} : {} -> {}", m.name, m.dom, m.cod).unwrap();
    }
    for o in &p.objects {
        if let Some(id) = p.identities.get(o) {
            writeln!(out, "identity {o} = {id}").unwrap();
        }
    }
    for ((g, f), h) in &p.composition {
        writeln!(out, "compose {g} {f} = {h}").unwrap();
    }
    out
}

enum Line<'a> {
    Object(&'a str),
    Morphism(&'a str, &'a str, &'a str),
    Identity(&'a str, &'a str),
    Compose(&'a str, &'a str, &'a str),
}

fn parse_line(line: &str) -> Result<Option<Line<'_>>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with("//") {
        return Ok(None);
    }
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    let parsed = match tokens.as_slice() {
        ["object", name] => Line::Object(name),
        ["morphism", name, ":", a, "->", b] => Line::Morphism(name, a, b),
        ["identity", obj, "=", name] => Line::Identity(obj, name),
        ["compose", g, f, "=", h] => Line::Compose(g, f, h),
        [kw, ..] if ["object", "morphism", "identity", "compose"].contains(kw) => {
            return Err(format!("malformed {kw} declaration"))
        }
        [kw, ..] => return Err(format!("unknown declaration {kw:?}")),
        [] => unreachable!(),
    };
    Ok(Some(parsed))
}

pub fn parse_presentation(text: &str) -> Result<FinCatPresentation, PresentationParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match parse_line(raw) {
            Ok(Some(l)) => lines.push((line, l)),
            Ok(None) => {}
            Err(message) => return Err(PresentationParseError::Syntax { line, message }),
        }
    }

    let structure = |line: usize| move |source| PresentationParseError::Structure { line, source };
    let mut p = FinCatPresentation::new();
    for (line, l) in &lines {
        if let Line::Object(name) = l {
            p.add_object(*name).map_err(structure(*line))?;
        }
    }
    for (line, l) in &lines {
        if let Line::Morphism(name, a, b) = l {
            p.add_morphism(*name, *a, *b).map_err(structure(*line))?;
        }
    }
    let mut seen_ids = HashSet::new();
    let mut seen_composites = HashSet::new();
    for (line, l) in &lines {
        match l {
            Line::Identity(obj, name) => {
                if !seen_ids.insert(*obj) {
                    return Err(PresentationParseError::Duplicate {
                        line: *line,
                        what: "identity",
                        key: obj.to_string(),
                    });
                }
                p.set_identity(*obj, *name).map_err(structure(*line))?;
            }
            Line::Compose(g, f, h) => {
                if !seen_composites.insert((*g, *f)) {
                    return Err(PresentationParseError::Duplicate {
                        line: *line,
                        what: "composite",
                        key: format!("{g} {f}"),
                    });
                }
                p.set_composite(*g, *f, *h).map_err(structure(*line))?;
            }
            _ => {}
        }
    }
    Ok(p)
}
