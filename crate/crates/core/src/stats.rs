//! Rank-sum significance tests and table-style summaries of run sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;
/// Combined sample size up to which p-values come from full enumeration.
pub const EXACT_MAX_TOTAL: usize = 16;

/// Outcome of a comparison, read from the reference side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// Reference significantly better (lower errors).
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "=")]
    Equal,
    /// Competitor significantly better.
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Equal => '=',
            Sign::Minus => '-',
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Equal => Sign::Equal,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub sign: Sign,
    pub p_value: f64,
}

/// Joint ranking of two samples, kept as doubled mid-ranks so every rank
/// sum is an integer.
struct Ranking {
    /// doubled mid-rank of each pooled observation; `a` first, then `b`
    doubled: Vec<u64>,
    /// sizes of the tie groups
    ties: Vec<u64>,
}

fn rank(a: &[f64], b: &[f64]) -> Ranking {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut doubled = vec![0; pooled.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share rank (start + 1 + end) / 2
        let r2 = (start + 1 + end) as u64;
        for &k in &order[start..end] {
            doubled[k] = r2;
        }
        ties.push((end - start) as u64);
        start = end;
    }
    Ranking { doubled, ties }
}

/// Counts the size-`n` subsets of `ranks` whose sum `s` has
/// `|s - centre| >= threshold`, all in doubled units.
fn count_extreme(ranks: &[u64], n: usize, centre: i64, threshold: i64) -> u64 {
    fn go(ranks: &[u64], start: usize, left: usize, sum: i64, centre: i64, threshold: i64) -> u64 {
        if left == 0 {
            return u64::from((sum - centre).abs() >= threshold);
        }
        (start..=ranks.len() - left)
            .map(|i| {
                go(
                    ranks,
                    i + 1,
                    left - 1,
                    sum + ranks[i] as i64,
                    centre,
                    threshold,
                )
            })
            .sum()
    }
    go(ranks, 0, n, 0, centre, threshold)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Domain(format!(
            "rank-sum test needs at least 2 observations per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Domain("samples contain NaN".into()));
    }
    Ok(())
}

/// Two-sided p-value by enumerating every assignment of the pooled ranks to
/// the first sample. Extreme means `|W - E[W]|` at least as large as observed.
pub fn exact_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let (n, m) = (a.len(), b.len());
    let total = n + m;
    if total > 30 {
        return Err(Error::Domain(format!(
            "exact enumeration refused for {total} observations"
        )));
    }
    let r = rank(a, b);
    let observed: i64 = r.doubled[..n].iter().map(|&v| v as i64).sum();
    let centre = (n * (total + 1)) as i64;
    let threshold = (observed - centre).abs();
    let hits = count_extreme(&r.doubled, n, centre, threshold);
    Ok(hits as f64 / binomial(total as u64, n as u64) as f64)
}

/// Two-sided p-value from the normal approximation of `U`, with
/// tie-corrected variance and a 0.5 continuity correction.
pub fn normal_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let total = n + m;
    let r = rank(a, b);
    let w_a = r.doubled[..a.len()].iter().sum::<u64>() as f64 / 2.0;
    let u = w_a - n * (n + 1.0) / 2.0;
    let nm = n * m;
    let tie_term: f64 =
        r.ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (total * (total - 1.0));
    let variance = nm / 12.0 * ((total + 1.0) - tie_term);
    if variance <= 0.0 {
        return Ok(1.0);
    }
    let z = ((u - nm / 2.0).abs() - 0.5).max(0.0) / variance.sqrt();
    Ok(statrs::function::erf::erfc(z / std::f64::consts::SQRT_2).min(1.0))
}

/// Unpaired two-sided rank-sum test of `a` (reference) against `b`.
///
/// Exact below [`EXACT_MAX_TOTAL`] combined observations, normal
/// approximation above. `+` means `a` has the lower mean rank and the
/// difference is significant at `alpha`.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<ComparisonVerdict> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    let p_value = if a.len() + b.len() <= EXACT_MAX_TOTAL {
        exact_p_value(a, b)?
    } else {
        normal_p_value(a, b)?
    };
    let sign = if p_value <= alpha {
        let r = rank(a, b);
        let w_a: u64 = r.doubled[..a.len()].iter().sum();
        let w_b: u64 = r.doubled[a.len()..].iter().sum();
        // compare mean ranks without division
        let (lhs, rhs) = (w_a * b.len() as u64, w_b * a.len() as u64);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => Sign::Plus,
            std::cmp::Ordering::Greater => Sign::Minus,
            std::cmp::Ordering::Equal => Sign::Equal,
        }
    } else {
        Sign::Equal
    };
    Ok(ComparisonVerdict { sign, p_value })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub mean_error: f64,
    /// population standard deviation
    pub std_error: f64,
    pub n_runs: usize,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}±{}",
            format_sci(self.mean_error),
            format_sci(self.std_error)
        )
    }
}

pub fn summarize(errors: &[f64]) -> Result<RunSummary> {
    if errors.is_empty() {
        return Err(Error::Domain("cannot summarize an empty sample".into()));
    }
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    Ok(RunSummary {
        mean_error: mean,
        std_error: var.sqrt(),
        n_runs: errors.len(),
    })
}

/// `6.00e+02` style: two mantissa decimals, signed exponent of at least two digits.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let raw = format!("{x:.2e}");
    let (mantissa, exp) = raw.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Median of a sample; mean of the two middle values for even sizes.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub plus: usize,
    pub equal: usize,
    pub minus: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.plus + self.equal + self.minus
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.plus, self.equal, self.minus)
    }
}

pub fn tally_verdicts<'a>(verdicts: impl IntoIterator<Item = &'a ComparisonVerdict>) -> Tally {
    let mut t = Tally::default();
    for v in verdicts {
        match v.sign {
            Sign::Plus => t.plus += 1,
            Sign::Equal => t.equal += 1,
            Sign::Minus => t.minus += 1,
        }
    }
    t
}
