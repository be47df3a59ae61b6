//! Population CSV: `# key=value` manifest lines, then the header
//! `id,x1..xn,f1..fm,rank,crowding` and one row per individual.
//!
//! Reals use the shortest representation that parses back to the same value;
//! infinite crowding is the literal `inf`. Rank is 0-based.

use std::fmt::Write as _;

use nsga_maximin::{CrowdingDistance, Individual64, ObjectiveVector};

use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

pub fn header(n: usize, m: usize) -> String {
    let mut cols = vec!["id".to_string()];
    cols.extend((1..=n).map(|i| format!("x{i}")));
    cols.extend((1..=m).map(|i| format!("f{i}")));
    cols.push("rank".into());
    cols.push("crowding".into());
    cols.join(",")
}

fn crowding_token(d: &CrowdingDistance<f64>) -> String {
    match d {
        CrowdingDistance::Finite(v) => v.to_string(),
        CrowdingDistance::Infinite => "inf".into(),
    }
}

pub fn write_population(manifest: &Manifest, pop: &[Individual64]) -> String {
    let n = pop.first().map_or(0, |i| i.decision.len());
    let m = pop.first().map_or(2, |i| i.objectives.dim());
    let mut out = manifest.comment_lines();
    out.push_str(&header(n, m));
    out.push('\n');
    for (id, ind) in pop.iter().enumerate() {
        let _ = write!(out, "{id}");
        for v in ind.decision.iter().chain(ind.objectives.values()) {
            let _ = write!(out, ",{v}");
        }
        let rank = ind.rank.map(|r| r.to_string()).unwrap_or_default();
        let cd = ind
            .crowding
            .as_ref()
            .map(crowding_token)
            .unwrap_or_default();
        let _ = writeln!(out, ",{rank},{cd}");
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedPopulation {
    pub manifest: Manifest,
    pub individuals: Vec<Individual64>,
}

/// Splits a header into `(n, m)`, or explains what is wrong with it.
fn parse_header(line: &str) -> Result<(usize, usize), String> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.len() < 5
        || cols[0] != "id"
        || cols[cols.len() - 2] != "rank"
        || cols[cols.len() - 1] != "crowding"
    {
        return Err(format!(
            "expected header id,x1..xn,f1..fm,rank,crowding, got '{line}'"
        ));
    }
    let middle = &cols[1..cols.len() - 2];
    let n = middle.iter().take_while(|c| c.starts_with('x')).count();
    let m = middle.len() - n;
    let expected = header(n, m);
    if expected != cols.join(",") || m < 2 {
        return Err(format!(
            "expected header {expected} with at least two objectives, got '{line}'"
        ));
    }
    Ok((n, m))
}

fn finite(token: &str, what: &str) -> Result<f64, String> {
    let v: f64 = token
        .parse()
        .map_err(|_| format!("{what}: '{token}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{what}: '{token}' is not finite"));
    }
    Ok(v)
}

fn parse_row(line: &str, n: usize, m: usize) -> Result<Individual64, String> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.len() != n + m + 3 {
        return Err(format!("expected {} fields, got {}", n + m + 3, cols.len()));
    }
    cols[0]
        .parse::<usize>()
        .map_err(|_| format!("id: '{}' is not an index", cols[0]))?;
    let decision = cols[1..=n]
        .iter()
        .enumerate()
        .map(|(i, t)| finite(t, &format!("x{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let objectives = cols[n + 1..=n + m]
        .iter()
        .enumerate()
        .map(|(i, t)| finite(t, &format!("f{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ind = Individual64::new(
        decision,
        ObjectiveVector::new(objectives).map_err(|e| e.to_string())?,
    );
    let rank = cols[n + m + 1];
    if !rank.is_empty() {
        ind.rank = Some(
            rank.parse()
                .map_err(|_| format!("rank: '{rank}' is not a non-negative integer"))?,
        );
    }
    let cd = cols[n + m + 2];
    if !cd.is_empty() {
        ind.crowding = Some(if cd == "inf" {
            CrowdingDistance::Infinite
        } else {
            let v = finite(cd, "crowding")?;
            if v < 0.0 {
                return Err(format!("crowding: '{cd}' is negative"));
            }
            CrowdingDistance::Finite(v)
        });
    }
    Ok(ind)
}

/// Parses a population dump. Errors name the offending line (1-based).
pub fn parse_population(text: &str, source_name: &str) -> CliResult<ParsedPopulation> {
    let mut manifest = Manifest::new();
    let mut shape = None;
    let mut individuals = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if shape.is_none() {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    manifest.set(k.trim(), v.trim());
                }
            }
            continue;
        }
        match shape {
            None => {
                shape =
                    Some(parse_header(line).map_err(|e| CliError::parse(source_name, line_no, e))?)
            }
            Some((n, m)) => {
                individuals.push(
                    parse_row(line, n, m).map_err(|e| CliError::parse(source_name, line_no, e))?,
                );
            }
        }
    }
    if shape.is_none() {
        return Err(CliError::parse(
            source_name,
            text.lines().count().max(1),
            "missing header",
        ));
    }
    Ok(ParsedPopulation {
        manifest,
        individuals,
    })
}
