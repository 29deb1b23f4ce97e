//! Summation helpers: compensated sums, log-space accumulation and a
//! certified tail summation for positive series.

use crate::error::{Error, Result};

/// Neumaier (improved Kahan) compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }

    fn scale(&mut self, factor: f64) {
        self.sum *= factor;
        self.comp *= factor;
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sum of positive terms given by their logarithms, kept relative to the
/// largest exponent seen so far.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    shift: f64,
    scaled: NeumaierSum,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            shift: f64::NEG_INFINITY,
            scaled: NeumaierSum::default(),
        }
    }
}

impl LogSum {
    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.shift {
            if self.shift.is_finite() {
                self.scaled.scale((self.shift - ln_term).exp());
            }
            self.shift = ln_term;
        }
        self.scaled.add((ln_term - self.shift).exp());
    }

    pub fn ln_total(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.shift + self.scaled.total().ln()
        }
    }
}

/// Stopping rule for infinite positive sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPolicy {
    pub eps_rel: f64,
    pub n_min: u64,
    pub n_max_hard: u64,
}

impl Default for TailPolicy {
    fn default() -> Self {
        Self {
            eps_rel: 1e-15,
            n_min: 0,
            n_max_hard: 1_000_000,
        }
    }
}

impl TailPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_rel > 0.0 && self.eps_rel < 1.0) {
            return Err(Error::Domain(format!("eps_rel must lie in (0, 1), got {}", self.eps_rel)));
        }
        if self.n_min > self.n_max_hard {
            return Err(Error::Domain(format!(
                "n_min {} exceeds n_max_hard {}",
                self.n_min, self.n_max_hard
            )));
        }
        Ok(())
    }
}

/// Number of consecutive small, decreasing terms required before stopping.
const QUIET_RUN: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSum {
    pub ln_value: f64,
    /// Index of the last term included.
    pub cutoff: u64,
    /// Geometric bound on the omitted terms, from the last term ratio.
    /// Rigorous whenever the term ratios keep decreasing.
    pub tail_bound: f64,
}

/// Sums `Σ_{m≥0} exp(ln_term(m))`. `ln_term` returns `-∞` for vanishing terms.
///
/// Stops after [`QUIET_RUN`] consecutive terms that are each strictly smaller
/// than their predecessor and below `eps_rel/10` of the running sum.
pub fn sum_positive_series<F>(policy: &TailPolicy, mut ln_term: F) -> Result<TailSum>
where
    F: FnMut(u64) -> Result<f64>,
{
    policy.validate()?;
    let threshold = (policy.eps_rel / 10.0).ln();
    let mut acc = LogSum::default();
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    for m in 0..policy.n_max_hard {
        let lt = ln_term(m)?;
        if lt.is_nan() || lt == f64::INFINITY {
            return Err(Error::TruncationFailure {
                terms: m,
                reason: format!("term {m} is not finite"),
            });
        }
        acc.add_ln(lt);
        let decreasing = lt < prev || (lt == f64::NEG_INFINITY && prev == f64::NEG_INFINITY);
        if decreasing && lt - acc.ln_total() < threshold {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_RUN && m + 1 >= policy.n_min {
            let ln_ratio = lt - prev;
            let tail_bound = if lt == f64::NEG_INFINITY {
                0.0
            } else {
                (lt + ln_ratio - (-ln_ratio.exp()).ln_1p()).exp()
            };
            return Ok(TailSum {
                ln_value: acc.ln_total(),
                cutoff: m,
                tail_bound,
            });
        }
        prev = lt;
    }
    Err(Error::TruncationFailure {
        terms: policy.n_max_hard,
        reason: "terms did not settle into a small decreasing tail".into(),
    })
}
