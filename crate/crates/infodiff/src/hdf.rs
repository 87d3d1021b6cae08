//! Hyperplane-defined fitness functions.
//!
//! A function is a set of scored *schemas*: width-β patterns over
//! `{0, 1, *}` where `*` matches anything. A binary vector scores the sum
//! of the scores of every schema it matches. Real-valued vectors in
//! `[0, 1]^β` score a weighted sum, where each schema contributes its score
//! scaled by how close the vector is to the schema on its specified
//! positions (see [`score_real`]).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// One position of a schema pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Zero,
    One,
    Any,
}

impl Sym {
    fn bit(self) -> Option<u8> {
        match self {
            Sym::Zero => Some(0),
            Sym::One => Some(1),
            Sym::Any => None,
        }
    }
}

/// A scored pattern. `order` counts the contiguous specified blocks the
/// schema is composed of (1 for a single block).
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pattern: Vec<Sym>,
    score: f64,
    order: u32,
}

impl Schema {
    pub fn new(pattern: Vec<Sym>, score: f64, order: u32) -> Result<Schema> {
        if pattern.iter().all(|&s| s == Sym::Any) {
            return Err(Error::Argument(
                "schema must specify at least one position".into(),
            ));
        }
        Ok(Schema {
            pattern,
            score,
            order,
        })
    }

    /// Parses a pattern string over `{0, 1, *}`.
    pub fn parse(pattern: &str, score: f64, order: u32) -> Result<Schema> {
        let pattern = pattern
            .chars()
            .map(|c| match c {
                '0' => Ok(Sym::Zero),
                '1' => Ok(Sym::One),
                '*' => Ok(Sym::Any),
                other => Err(Error::Format(format!("bad schema symbol {other:?}"))),
            })
            .collect::<Result<Vec<Sym>>>()?;
        Schema::new(pattern, score, order)
    }

    pub fn pattern(&self) -> &[Sym] {
        &self.pattern
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn width(&self) -> usize {
        self.pattern.len()
    }

    fn matches_binary(&self, vector: &[u8]) -> bool {
        self.pattern
            .iter()
            .zip(vector)
            .all(|(&s, &v)| s.bit().map_or(true, |b| b == v))
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.pattern {
            let c = match s {
                Sym::Zero => '0',
                Sym::One => '1',
                Sym::Any => '*',
            };
            write!(f, "{c}")?;
        }
        write!(f, " {}", self.score)
    }
}

/// A set of schemas sharing one width β.
#[derive(Debug, Clone, PartialEq)]
pub struct HdfFunction {
    beta: usize,
    schemas: Vec<Schema>,
}

/// How real-valued vectors are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RealScoreMode {
    /// Per specified position, factor `1 - |s_i - v_i|`; a schema
    /// contributes `score * Π factors`. Rewards closeness and reduces to
    /// exact matching on binary vectors.
    #[default]
    MatchFactor,
    /// Weight is the product of the nonzero `|s_i - v_i|` differences
    /// (zero differences skipped; empty product = 1). Kept for
    /// cross-checking against the alternative published convention.
    LiteralDifference,
}

impl HdfFunction {
    pub fn new(schemas: Vec<Schema>) -> Result<HdfFunction> {
        let Some(first) = schemas.first() else {
            return Err(Error::Argument("function needs at least one schema".into()));
        };
        let beta = first.width();
        if schemas.iter().any(|s| s.width() != beta) {
            return Err(Error::Argument("schemas have mixed widths".into()));
        }
        Ok(HdfFunction { beta, schemas })
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    /// Sum of |score| over schemas; a Lipschitz bound for [`score_real`].
    pub fn score_mass(&self) -> f64 {
        self.schemas.iter().map(|s| s.score.abs()).sum()
    }

    /// The five-schema width-10 example function used as the default
    /// fitness for experiments: three single-block schemas and the two
    /// pairwise overlays of the first with the others.
    pub fn example() -> HdfFunction {
        let schemas = vec![
            Schema::parse("*01*******", 2.0, 1).unwrap(),
            Schema::parse("*****110**", 2.0, 1).unwrap(),
            Schema::parse("********10", 3.0, 1).unwrap(),
            Schema::parse("*01**110**", -4.0, 2).unwrap(),
            Schema::parse("*01*****10", 4.0, 2).unwrap(),
        ];
        HdfFunction::new(schemas).unwrap()
    }

    /// Serializes as one `pattern score` line per schema.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.schemas {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the [`dump`](HdfFunction::dump) format. Order is recomputed
    /// as the number of contiguous specified blocks.
    pub fn parse(text: &str) -> Result<HdfFunction> {
        let mut schemas = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(pattern), Some(score)) = (parts.next(), parts.next()) else {
                return Err(Error::Format(format!(
                    "line {}: expected `pattern score`",
                    lineno + 1
                )));
            };
            let score: f64 = score.parse().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad score: {e}"),
            })?;
            let order = count_blocks(pattern);
            schemas.push(Schema::parse(pattern, score, order)?);
        }
        HdfFunction::new(schemas)
    }
}

fn count_blocks(pattern: &str) -> u32 {
    let mut blocks = 0;
    let mut in_block = false;
    for c in pattern.chars() {
        let specified = c == '0' || c == '1';
        if specified && !in_block {
            blocks += 1;
        }
        in_block = specified;
    }
    blocks
}

/// Builds a random function: `n_order1` single-block schemas (block length
/// uniform in `[2, max(2, beta/3)]`, random offset and bits) plus
/// `n_higher` overlays of 2–3 distinct order-1 patterns. Overlays whose
/// specified positions conflict are re-drawn. Scores are uniform in
/// `[score_low, score_high]`, re-drawn if exactly zero.
pub fn build_random_hdf(
    beta: usize,
    n_order1: usize,
    n_higher: usize,
    score_low: f64,
    score_high: f64,
    seed: u64,
) -> Result<HdfFunction> {
    if beta < 2 {
        return Err(Error::Argument(format!(
            "beta = {beta} too small to place a length-2 block"
        )));
    }
    if n_order1 == 0 {
        return Err(Error::Argument("need at least one order-1 schema".into()));
    }
    if score_low >= score_high {
        return Err(Error::Argument("score_low must be below score_high".into()));
    }
    let mut rng = rng_from_seed(seed);
    let max_block = (beta / 3).max(2);
    let draw_score = |rng: &mut crate::rng::DetRng| loop {
        let s = rng.random_range(score_low..score_high);
        if s != 0.0 {
            return s;
        }
    };

    let mut order1_patterns: Vec<Vec<Sym>> = Vec::with_capacity(n_order1);
    let mut schemas = Vec::with_capacity(n_order1 + n_higher);
    for _ in 0..n_order1 {
        let len = rng.random_range(2..=max_block.min(beta));
        let offset = rng.random_range(0..=beta - len);
        let mut pattern = vec![Sym::Any; beta];
        for slot in pattern.iter_mut().skip(offset).take(len) {
            *slot = if rng.random_bool(0.5) { Sym::One } else { Sym::Zero };
        }
        let score = draw_score(&mut rng);
        order1_patterns.push(pattern.clone());
        schemas.push(Schema::new(pattern, score, 1)?);
    }

    const MAX_REDRAWS: usize = 10_000;
    for _ in 0..n_higher {
        let mut redraws = 0;
        let overlay = loop {
            if redraws > MAX_REDRAWS {
                return Err(Error::Argument(
                    "could not draw a conflict-free higher-order schema".into(),
                ));
            }
            redraws += 1;
            let parts = if n_order1 >= 3 && rng.random_bool(0.5) { 3 } else { 2.min(n_order1) };
            if parts < 2 {
                return Err(Error::Argument(
                    "higher-order schemas need at least two order-1 patterns".into(),
                ));
            }
            // Pick `parts` distinct order-1 patterns.
            let mut picks: Vec<usize> = Vec::new();
            while picks.len() < parts {
                let i = rng.random_range(0..n_order1);
                if !picks.contains(&i) {
                    picks.push(i);
                }
            }
            if let Some(merged) = overlay_patterns(&order1_patterns, &picks) {
                break (merged, picks.len() as u32);
            }
        };
        let score = draw_score(&mut rng);
        schemas.push(Schema::new(overlay.0, score, overlay.1)?);
    }
    HdfFunction::new(schemas)
}

fn overlay_patterns(patterns: &[Vec<Sym>], picks: &[usize]) -> Option<Vec<Sym>> {
    let beta = patterns[picks[0]].len();
    let mut merged = vec![Sym::Any; beta];
    for &p in picks {
        for (slot, &sym) in merged.iter_mut().zip(&patterns[p]) {
            match (slot.bit(), sym.bit()) {
                (_, None) => {}
                (None, Some(_)) => *slot = sym,
                (Some(a), Some(b)) if a == b => {}
                _ => return None, // conflicting specified bits
            }
        }
    }
    Some(merged)
}

/// Scores a binary vector: the sum of scores of all matched schemas.
pub fn score_binary(vector: &[u8], f: &HdfFunction) -> Result<f64> {
    if vector.len() != f.beta {
        return Err(Error::Argument(format!(
            "vector length {} != beta {}",
            vector.len(),
            f.beta
        )));
    }
    if let Some(bad) = vector.iter().find(|&&b| b > 1) {
        return Err(Error::Argument(format!("non-binary entry {bad}")));
    }
    Ok(f.schemas
        .iter()
        .filter(|s| s.matches_binary(vector))
        .map(Schema::score)
        .sum())
}

/// Scores a real vector in `[0, 1]^β`; see [`RealScoreMode`].
pub fn score_real(vector: &[f64], f: &HdfFunction, mode: RealScoreMode) -> Result<f64> {
    if vector.len() != f.beta {
        return Err(Error::Argument(format!(
            "vector length {} != beta {}",
            vector.len(),
            f.beta
        )));
    }
    if let Some(bad) = vector.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Argument(format!("entry {bad} outside [0, 1]")));
    }
    let mut total = 0.0;
    for schema in &f.schemas {
        let mut weight = 1.0;
        for (&sym, &v) in schema.pattern.iter().zip(vector) {
            let Some(bit) = sym.bit() else { continue };
            let diff = (f64::from(bit) - v).abs();
            match mode {
                RealScoreMode::MatchFactor => weight *= 1.0 - diff,
                RealScoreMode::LiteralDifference => {
                    if diff != 0.0 {
                        weight *= diff;
                    }
                }
            }
        }
        total += weight * schema.score;
    }
    Ok(total)
}
