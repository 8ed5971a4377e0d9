//! Fairness arithmetic over per-PV delivered energy: horizon totals, L1
//! deviation from the mean, and the Gini index.
//!
//! The Gini here is the unnormalized cumulative-share form: with `s`
//! sorted ascending it sums `i/n - cum_i/total` over all positions. Its
//! maximum under full concentration is `(n-1)/2`, which equals 1 only at
//! n = 3; [`gini_index_normalized`] rescales by that maximum so the value
//! lands in [0, 1] for every vector length.

use alloc::vec::Vec;

use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum FairnessError {
    Empty,
    LengthMismatch { expected: usize, got: usize },
    NegativeEntry(f64),
    /// Total delivered energy is zero; shares are undefined.
    ZeroTotal,
}

impl fmt::Display for FairnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FairnessError::Empty => write!(f, "empty energy vector"),
            FairnessError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {}, got {}", expected, got)
            }
            FairnessError::NegativeEntry(v) => write!(f, "negative energy entry {}", v),
            FairnessError::ZeroTotal => write!(f, "gini undefined on an all-zero vector"),
        }
    }
}

impl core::error::Error for FairnessError {}

/// Total delivered energy per PV over the horizon, optionally masked by a
/// curtailment pattern (`true` drops that slot's output).
pub fn total_power(
    per_slot_outputs: &[Vec<f64>],
    curtail_mask: Option<&[Vec<bool>]>,
) -> Result<Vec<f64>, FairnessError> {
    if let Some(mask) = curtail_mask {
        if mask.len() != per_slot_outputs.len() {
            return Err(FairnessError::LengthMismatch {
                expected: per_slot_outputs.len(),
                got: mask.len(),
            });
        }
        for (row, mrow) in per_slot_outputs.iter().zip(mask.iter()) {
            if row.len() != mrow.len() {
                return Err(FairnessError::LengthMismatch {
                    expected: row.len(),
                    got: mrow.len(),
                });
            }
        }
    }
    Ok(per_slot_outputs
        .iter()
        .enumerate()
        .map(|(l, row)| {
            row.iter()
                .enumerate()
                .map(|(t, &z)| {
                    if curtail_mask.map_or(false, |m| m[l][t]) {
                        0.0
                    } else {
                        z
                    }
                })
                .sum()
        })
        .collect())
}

/// Sum of absolute deviations of each entry from the mean.
pub fn l1_deviation(s: &[f64]) -> Result<f64, FairnessError> {
    if s.is_empty() {
        return Err(FairnessError::Empty);
    }
    let mean: f64 = s.iter().sum::<f64>() / s.len() as f64;
    Ok(s.iter().map(|&v| (mean - v).abs()).sum())
}

/// Cumulative-share Gini over a nonnegative vector with positive total.
/// 0 means all entries equal; full concentration gives `(n-1)/2`.
pub fn gini_index(s: &[f64]) -> Result<f64, FairnessError> {
    if s.is_empty() {
        return Err(FairnessError::Empty);
    }
    for &v in s {
        if v < 0.0 {
            return Err(FairnessError::NegativeEntry(v));
        }
    }
    let total: f64 = s.iter().sum();
    if total <= 0.0 {
        return Err(FairnessError::ZeroTotal);
    }
    let mut sorted: Vec<f64> = s.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut cum = 0.0;
    let mut gini = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cum += v;
        gini += (i + 1) as f64 / n - cum / total;
    }
    Ok(gini)
}

/// [`gini_index`] rescaled by its maximum `(n-1)/2` so the result is in
/// [0, 1] regardless of vector length. Defined as 0 for n = 1.
pub fn gini_index_normalized(s: &[f64]) -> Result<f64, FairnessError> {
    let g = gini_index(s)?;
    let n = s.len() as f64;
    if n <= 1.0 {
        return Ok(0.0);
    }
    Ok(g / ((n - 1.0) / 2.0))
}
