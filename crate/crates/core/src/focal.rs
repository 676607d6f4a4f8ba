//! The focal-loss distortion measure and its entropy-like companion.
//!
//! Focal loss scales log loss by a focusing factor: reconstructing symbol `x`
//! with a soft reconstruction that puts mass `t` on it costs
//! `(1 - t)^gamma * log2(1/t)` bits. At `gamma = 0` this is exactly log loss;
//! as `gamma` grows, well-reconstructed symbols are discounted toward zero.
//!
//! The companion quantity `H_gamma(p) = log2 sum_x p(x)^((1-p(x))^gamma)`
//! plays the role Shannon entropy plays for log loss. Unlike Shannon entropy
//! its maximum over all distributions on a k-letter alphabet — computed here
//! by [`focal_entropy_max`] — stays bounded as k grows.

use crate::error::{Error, Result};
use crate::pmf::Pmf;

/// Number of grid intervals for the line search in [`focal_entropy_max`].
const Q_GRID: usize = 10_000;

/// Width at which the ternary refinement of the line search stops.
const Q_REFINE_TOLERANCE: f64 = 1e-12;

/// The map `t -> t^((1-t)^gamma)` on `[0, 1]`, extended by continuity:
/// 0 at `t = 0` and 1 at `t = 1`.
///
/// This is the summand of the focal entropy. At `gamma = 0` it is exactly the
/// identity (the exponent is 1), which the explicit branch preserves against
/// round-off.
pub fn focal_power(t: f64, gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0, "gamma must be nonnegative");
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let exponent = (1.0 - t).powf(gamma);
    if exponent == 1.0 {
        t
    } else {
        (exponent * t.log2()).exp2()
    }
}

/// Focal loss of a reconstruction that assigns mass `t` to the realized
/// symbol: `(1 - t)^gamma * log2(1/t)`.
///
/// Zero mass costs `+inf`; full mass costs 0 for every `gamma`.
pub fn focal_loss(t: f64, gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0, "gamma must be nonnegative");
    if t <= 0.0 {
        return f64::INFINITY;
    }
    if t >= 1.0 {
        return 0.0;
    }
    (1.0 - t).powf(gamma) * -t.log2()
}

/// Focal distortion between symbol `x` and a soft reconstruction `phat`.
///
/// Panics if `x` is outside the alphabet of `phat`.
pub fn focal_distortion(x: usize, phat: &Pmf, gamma: f64) -> f64 {
    focal_loss(phat.get(x), gamma)
}

/// The focal entropy `H_gamma(p) = log2 sum_x p(x)^((1-p(x))^gamma)` in bits.
///
/// Equals 0 at `gamma = 0` and grows toward Shannon-like behavior as the
/// focusing factor kicks in; always nonnegative and non-decreasing in gamma.
pub fn focal_entropy(p: &Pmf, gamma: f64) -> f64 {
    let sum: f64 = p
        .probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| focal_power(v, gamma))
        .sum();
    sum.log2()
}

/// The maximum of the focal entropy over all distributions on a fixed
/// alphabet size, together with the structured maximizer that attains it.
///
/// The maximizer found by [`focal_entropy_max`] always has the shape
/// "one symbol with mass `1 - q`, `d` symbols sharing `q` equally, the rest
/// zero"; `d` and `q` are reported so callers can reconstruct it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGammaMax {
    /// The maximal focal entropy, in bits.
    pub value: f64,
    /// Number of symbols sharing the spread mass in the maximizer.
    pub d: usize,
    /// Total spread mass in the maximizer.
    pub q: f64,
}

impl HGammaMax {
    /// Materializes the structured maximizer on an alphabet of the given
    /// size: entries `[1-q, q/d, ..., q/d, 0, ..., 0]`.
    pub fn maximizer(&self, alphabet_size: usize) -> Result<Pmf> {
        if alphabet_size <= self.d {
            return Err(Error::InvalidSize {
                name: "alphabet for maximizer",
                value: alphabet_size,
            });
        }
        let mut values = Vec::with_capacity(alphabet_size);
        values.push(1.0 - self.q);
        values.extend(std::iter::repeat_n(self.q / self.d as f64, self.d));
        values.resize(alphabet_size, 0.0);
        Pmf::from_values(&values, false)
    }
}

/// Objective of the structured maximization: the focal entropy of the
/// distribution `[1-q, q/d, ..., q/d]`.
fn structured_objective(d: f64, q: f64, gamma: f64) -> f64 {
    (focal_power(1.0 - q, gamma) + d * focal_power(q / d, gamma)).log2()
}

/// Computes the maximal focal entropy over all distributions on
/// `alphabet_size` symbols.
///
/// For each candidate spread count `d` in `1..alphabet_size` the scalar
/// objective is maximized over `q` in `[0, 1]` by a dense 10,001-point grid
/// pass followed by ternary refinement to width 1e-12 around the best grid
/// point. The objective can be multimodal in `q` for large gamma, which is
/// why the grid pass comes first. Ties across `d` keep the smallest `d`.
pub fn focal_entropy_max(alphabet_size: usize, gamma: f64) -> Result<HGammaMax> {
    if alphabet_size < 2 {
        return Err(Error::InvalidSize {
            name: "alphabet",
            value: alphabet_size,
        });
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    let mut best: Option<HGammaMax> = None;
    for d in 1..alphabet_size {
        let dd = d as f64;
        let mut grid_index = 0usize;
        let mut grid_value = f64::NEG_INFINITY;
        for i in 0..=Q_GRID {
            let q = i as f64 / Q_GRID as f64;
            let v = structured_objective(dd, q, gamma);
            if v > grid_value {
                grid_value = v;
                grid_index = i;
            }
        }
        let mut lo = (grid_index as f64 - 1.0).max(0.0) / Q_GRID as f64;
        let mut hi = ((grid_index as f64 + 1.0) / Q_GRID as f64).min(1.0);
        for _ in 0..200 {
            if hi - lo <= Q_REFINE_TOLERANCE {
                break;
            }
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if structured_objective(dd, m1, gamma) < structured_objective(dd, m2, gamma) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let refined_q = 0.5 * (lo + hi);
        let refined_value = structured_objective(dd, refined_q, gamma);
        let (value, q) = if refined_value > grid_value {
            (refined_value, refined_q)
        } else {
            (grid_value, grid_index as f64 / Q_GRID as f64)
        };
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(HGammaMax { value, d, q });
        }
    }
    Ok(best.expect("alphabet_size >= 2 guarantees at least one candidate"))
}

/// Closed-form upper bound on [`focal_entropy_max`], valid for every
/// alphabet size: `log2(1 + e^(max(1, gamma)/e))`.
pub fn focal_entropy_upper(gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0, "gamma must be nonnegative");
    let exponent = gamma.max(1.0) / std::f64::consts::E;
    exponent.exp().ln_1p() / std::f64::consts::LN_2
}

/// Counts sign changes of the central second difference of
/// `t -> t^((1-t)^gamma)` over a uniform grid on `[1e-4, 1-1e-4]`.
///
/// Second differences smaller than 1e-12 in magnitude are treated as noise
/// and skipped, so the affine `gamma = 0` case reports zero sign changes
/// instead of round-off chatter. For positive gamma the curve is convex then
/// concave, so the expected count is exactly 1.
pub fn inflection_count(gamma: f64, grid_size: usize) -> Result<usize> {
    if grid_size < 100 {
        return Err(Error::InvalidSize {
            name: "grid",
            value: grid_size,
        });
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    let lo = 1e-4;
    let hi = 1.0 - 1e-4;
    let values: Vec<f64> = (0..grid_size)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (grid_size - 1) as f64;
            focal_power(t, gamma)
        })
        .collect();
    let mut last_sign = 0i8;
    let mut changes = 0usize;
    for w in values.windows(3) {
        let second = w[2] - 2.0 * w[1] + w[0];
        if second.abs() < 1e-12 {
            continue;
        }
        let sign = if second > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    Ok(changes)
}
