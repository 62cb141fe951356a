//! Reader and harness for SCWS-style contextual similarity data.
//!
//! Each line is `id word1 pos1 word2 pos2 context1 context2 avg r1 .. r10`
//! separated by tabs, with the target word of each context wrapped in
//! `<b> ... </b>`. POS tags and the individual ratings are parsed past but
//! unused.

use std::fs;
use std::path::Path;

use log::warn;
use rayon::prelude::*;

use super::similarity::{ContextScorer, Metric, SenseModel};
use super::spearman::spearman;
use crate::corpus::tokenize;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ContextualPair {
    pub id: String,
    pub word1: String,
    pub word2: String,
    pub context1: Vec<String>,
    pub target1: usize,
    pub context2: Vec<String>,
    pub target2: usize,
    pub gold: f64,
}

/// Tokenizes a context and locates the `<b>`-marked target.
fn parse_context(raw: &str) -> std::result::Result<(Vec<String>, usize), String> {
    let open = raw.find("<b>").ok_or("context has no <b> marker")?;
    let close = raw[open..]
        .find("</b>")
        .map(|i| i + open)
        .ok_or("context has no </b> marker")?;
    let mut tokens = tokenize(&raw[..open]);
    let target = tokens.len();
    let marked = tokenize(&raw[open + 3..close]);
    if marked.is_empty() {
        return Err("empty target between <b> markers".into());
    }
    tokens.extend(marked);
    tokens.extend(tokenize(&raw[close + 4..]));
    Ok((tokens, target))
}

pub fn parse_scws_str(text: &str, source: &Path) -> Result<Vec<ContextualPair>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 8 {
            return Err(Error::parse(source, lineno, format!("expected at least 8 tab-separated fields, found {}", fields.len())));
        }
        let err = |m: String| Error::parse(source, lineno, m);
        let (context1, target1) = parse_context(fields[5]).map_err(|m| err(format!("context1: {m}")))?;
        let (context2, target2) = parse_context(fields[6]).map_err(|m| err(format!("context2: {m}")))?;
        let gold: f64 = fields[7]
            .trim()
            .parse()
            .map_err(|_| err(format!("bad average rating {:?}", fields[7])))?;
        if !gold.is_finite() {
            return Err(err("non-finite rating".into()));
        }
        let word = |f: &str| tokenize(f).into_iter().next().ok_or_else(|| err(format!("bad word {f:?}")));
        pairs.push(ContextualPair {
            id: fields[0].trim().to_string(),
            word1: word(fields[1])?,
            word2: word(fields[3])?,
            context1,
            target1,
            context2,
            target2,
            gold,
        });
    }
    Ok(pairs)
}

pub fn parse_scws(path: impl AsRef<Path>) -> Result<Vec<ContextualPair>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scws_str(&text, path)
}

/// Outcome of a harness run. `rho` is `None` when the correlation is
/// undefined (too few covered pairs or constant predictions); `diagnostic`
/// then says why.
#[derive(Clone, Debug, PartialEq)]
pub struct ScwsReport {
    pub total: usize,
    pub covered: usize,
    pub rho: Option<f64>,
    pub diagnostic: Option<String>,
    pub predictions: Vec<(String, f64, f64)>,
}

impl ScwsReport {
    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }
}

impl std::fmt::Display for ScwsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pairs {} covered {} ({:.1}%)", self.total, self.covered, 100.0 * self.coverage())?;
        match (self.rho, &self.diagnostic) {
            (Some(rho), _) => write!(f, " spearman {:.1}", 100.0 * rho),
            (None, Some(d)) => write!(f, " spearman undefined: {d}"),
            (None, None) => write!(f, " spearman undefined"),
        }
    }
}

/// Scores every pair; pairs with a word lacking any vector are skipped and
/// counted against coverage.
pub fn run_scws<M: SenseModel + Sync>(
    pairs: &[ContextualPair],
    scorer: &ContextScorer<'_, M>,
    metric: Metric,
) -> ScwsReport {
    let scored: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|p| {
            scorer.score(
                metric,
                (&p.word1, &p.context1, p.target1),
                (&p.word2, &p.context2, p.target2),
            )
        })
        .collect();
    let predictions: Vec<(String, f64, f64)> = pairs
        .iter()
        .zip(scored)
        .filter_map(|(p, s)| s.map(|s| (p.id.clone(), s, p.gold)))
        .collect();
    let pred: Vec<f64> = predictions.iter().map(|x| x.1).collect();
    let gold: Vec<f64> = predictions.iter().map(|x| x.2).collect();
    let (rho, diagnostic) = match spearman(&pred, &gold) {
        Ok(r) => (Some(r), None),
        Err(e) => {
            warn!("SCWS correlation undefined: {e}");
            (None, Some(e.to_string()))
        }
    };
    ScwsReport {
        total: pairs.len(),
        covered: predictions.len(),
        rho,
        diagnostic,
        predictions,
    }
}
