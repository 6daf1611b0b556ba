//! Closed-form bounds, evaluated as base-2 logarithms so that huge values
//! stay representable.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    /// `f(n,r,k,L) <= 2^(2k n^(r-1) + n^(r-1) log n)` for 3-good `L`.
    TheoremMainUpper,
    /// `d(r-i, n) <= 2^(k n^(i-1) + n^(i-1) log n)`.
    CorollaryDBound,
    /// `d(r-1, n) <= 2^k n`.
    LinkgraphBound,
    /// Explicit lower bound on the number of Turán-minus-linear graphs.
    QnLower,
    /// Greedy partial Steiner system lower bound `n^(n^(r-1) / (2 r^(r+1)))`.
    SteinerLower,
    /// `prod_{m=1}^{n-1} m!`, the Barnes G value `G(n+1)`.
    BarnesG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u64>,
}

impl BoundParams {
    fn n(n: u64) -> Self {
        BoundParams {
            n,
            r: None,
            k: None,
            i: None,
        }
    }
}

/// A bound `2^log2_value`. `vacuous` marks a lower bound whose explicit
/// expression is not positive at these parameters; its value is then 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBound {
    pub formula_id: FormulaId,
    pub params: BoundParams,
    pub log2_value: f64,
    pub vacuous: bool,
}

impl LogBound {
    fn new(formula_id: FormulaId, params: BoundParams, log2_value: f64) -> Self {
        LogBound {
            formula_id,
            params,
            log2_value,
            vacuous: false,
        }
    }

    /// Whether `count <= 2^log2_value`, compared in log space.
    pub fn admits(&self, log2_count: f64) -> bool {
        log2_count <= self.log2_value
    }
}

fn pow(n: u64, e: u64) -> f64 {
    (n as f64).powi(e as i32)
}

pub fn theorem_main_upper(n: u64, r: u64, k: u64) -> Result<LogBound> {
    if !(n >= k && k > r && r >= 2) {
        return Err(Error::params(format!(
            "need n >= k > r >= 2 (got n={n}, r={r}, k={k})"
        )));
    }
    let lead = pow(n, r - 1);
    let value = 2.0 * k as f64 * lead + lead * (n as f64).log2();
    Ok(LogBound::new(
        FormulaId::TheoremMainUpper,
        BoundParams {
            n,
            r: Some(r),
            k: Some(k),
            i: None,
        },
        value,
    ))
}

pub fn corollary_d_bound(i: u64, n: u64, r: u64, k: u64) -> Result<LogBound> {
    if i == 0 || i >= r {
        return Err(Error::params(format!(
            "need 1 <= i <= r-1 (got i={i}, r={r})"
        )));
    }
    if n == 0 {
        return Err(Error::params("n must be positive"));
    }
    let lead = pow(n, i - 1);
    let value = k as f64 * lead + lead * (n as f64).log2();
    Ok(LogBound::new(
        FormulaId::CorollaryDBound,
        BoundParams {
            n,
            r: Some(r),
            k: Some(k),
            i: Some(i),
        },
        value,
    ))
}

/// `log2(2^k n)`, or `k` when `n <= k` (there are at most `2^k` link
/// colourings then).
pub fn linkgraph_bound(n: u64, k: u64) -> Result<LogBound> {
    if n == 0 {
        return Err(Error::params("n must be positive"));
    }
    let value = if n <= k {
        k as f64
    } else {
        k as f64 + (n as f64).log2()
    };
    Ok(LogBound::new(
        FormulaId::LinkgraphBound,
        BoundParams {
            n,
            r: None,
            k: Some(k),
            i: None,
        },
        value,
    ))
}

/// `(n²/27 − n²/log n) · log(n / log n)`. The bracket is positive only once
/// `log2 n > 27`; below that the bound is reported as vacuous.
pub fn qn_lower_log(n: u64) -> Result<LogBound> {
    if n < 2 {
        return Err(Error::params("n must be at least 2"));
    }
    let nf = n as f64;
    let lg = nf.log2();
    let steps = nf * nf / 27.0 - nf * nf / lg;
    let value = steps * (nf / lg).log2();
    let mut bound = LogBound::new(FormulaId::QnLower, BoundParams::n(n), value);
    if steps <= 0.0 || value <= 0.0 {
        bound.log2_value = 0.0;
        bound.vacuous = true;
    }
    Ok(bound)
}

pub fn steiner_lower_log(n: u64, r: u64) -> Result<LogBound> {
    if !(n >= r && r >= 2) {
        return Err(Error::params(format!(
            "need n >= r >= 2 (got n={n}, r={r})"
        )));
    }
    let steps = pow(n, r - 1) / (2.0 * pow(r, r + 1));
    Ok(LogBound::new(
        FormulaId::SteinerLower,
        BoundParams {
            n,
            r: Some(r),
            k: None,
            i: None,
        },
        steps * (n as f64).log2(),
    ))
}

/// `log2 prod_{m=1}^{n-1} m! = sum_{j=1}^{n-1} (n-j) log2 j`.
pub fn barnes_g_log(n: u64) -> Result<LogBound> {
    if n < 2 {
        return Err(Error::params("n must be at least 2"));
    }
    let value = (2..n).map(|j| (n - j) as f64 * (j as f64).log2()).sum();
    Ok(LogBound::new(FormulaId::BarnesG, BoundParams::n(n), value))
}
