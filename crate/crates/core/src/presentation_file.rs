//! Presentation files: named generators in the map language plus analysis
//! parameters.
//!
//! ```text
//! # absolute value
//! param max-h = 2
//! generator phi
//! piece n>=0: n
//! piece n<0: -n
//! ```

use thiserror::Error;

use crate::dsl::{parse_lines, DslError, SourceLine};
use crate::engine::{Presentation, PresentationError};
use crate::index_map::DEFAULT_MAX_DEGREE;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub budget_orbit: Option<usize>,
    pub budget_closure: Option<usize>,
    pub probes: Option<(i64, i64)>,
    pub max_h: Option<i64>,
    pub window: Option<(i64, i64)>,
    pub seed: Option<u64>,
    pub max_degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("generator `{name}`: {source}")]
    Map { name: String, source: DslError },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("no generators defined")]
    NoGenerators,
}

/// `LO..HI` with `LO ≤ HI`.
pub fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{text}`"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in `{text}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in `{text}`"))?;
    if lo > hi {
        return Err(format!("empty range `{text}`"));
    }
    Ok((lo, hi))
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{text}`")),
    }
}

fn set_param(params: &mut Params, key: &str, value: &str) -> Result<(), String> {
    match key {
        "budget-orbit" => params.budget_orbit = Some(positive(value)?),
        "budget-closure" => params.budget_closure = Some(positive(value)?),
        "max-degree" => params.max_degree = Some(positive(value)?),
        "probes" => params.probes = Some(parse_range(value)?),
        "window" => params.window = Some(parse_range(value)?),
        "max-h" => {
            params.max_h = Some(
                value
                    .parse::<u32>()
                    .map_err(|_| format!("expected a nonnegative integer, got `{value}`"))?
                    .into(),
            )
        }
        "seed" => params.seed = Some(value.parse().map_err(|_| format!("bad seed `{value}`"))?),
        _ => return Err(format!("unknown parameter `{key}`")),
    }
    Ok(())
}

pub fn parse_presentation_file(text: &str) -> Result<PresentationFile, FileError> {
    let mut params = Params::default();
    let mut blocks: Vec<(String, Vec<SourceLine>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |message: String| FileError::Syntax {
            line: number,
            message,
        };
        if let Some(rest) = body.strip_prefix("param ") {
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| syntax("expected `param KEY = VALUE`".into()))?;
            set_param(&mut params, key.trim(), value.trim()).map_err(syntax)?;
        } else if let Some(name) = body.strip_prefix("generator ") {
            blocks.push((name.trim().to_string(), Vec::new()));
        } else {
            let (_, lines) = blocks
                .last_mut()
                .ok_or_else(|| syntax("map statement before any `generator` line".into()))?;
            lines.push(SourceLine { number, text: raw });
        }
    }
    if blocks.is_empty() {
        return Err(FileError::NoGenerators);
    }
    let max_degree = params.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    let mut generators = Vec::with_capacity(blocks.len());
    for (name, lines) in blocks {
        let map = parse_lines(&lines, max_degree).map_err(|source| FileError::Map {
            name: name.clone(),
            source,
        })?;
        generators.push((name, map));
    }
    let presentation = Presentation::new(generators)?.with_max_degree(max_degree);
    Ok(PresentationFile {
        presentation,
        params,
    })
}
