//! Exhaustive computation of the true optimum `d*(m; gamma)` on small
//! instances: enumerate every partition of the alphabet into at most `m`
//! cells, solve the inner reconstruction problem on each cell, and keep the
//! best total. Serves as ground truth for the greedy construction and the
//! closed-form bounds.
//!
//! The inner problem — minimize `sum_a w(a) * (1-t_a)^gamma * log2(1/t_a)`
//! over probability vectors `t` on a cell — is solved by a dense grid plus
//! ternary refinement when the cell has at most two symbols (effectively
//! certifying the optimum), and by multi-start projected coordinate descent
//! for larger cells.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::focal::{focal_entropy, focal_loss};
use crate::pmf::Pmf;

/// Hard ceiling on the alphabet for exhaustive search.
const MAX_ALPHABET: usize = 10;

/// Hard ceiling on `m^alphabet`, the raw assignment count.
const MAX_ASSIGNMENTS: u64 = 1_000_000;

/// Grid points for the two-symbol inner problem.
const PAIR_GRID: usize = 2_000;

/// Lower clamp keeping reconstruction masses strictly positive.
const MASS_FLOOR: f64 = 1e-12;

/// Fixed seed for the descent starting points; the oracle is deterministic
/// and independent of any caller-supplied seed.
const START_SEED: u64 = 0x6f72_6163;

/// Outcome of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// The minimal expected focal distortion found.
    pub value: f64,
    /// Cell label per symbol (labels are dense, `0..cells`, first occurrence
    /// ordered — the canonical form of the winning partition).
    pub best_partition: Vec<usize>,
    /// One reconstruction distribution per cell label, on the full alphabet
    /// (zero outside the cell).
    pub best_reconstructions: Vec<Pmf>,
    /// True when every cell of the winning partition was solved by the
    /// grid-based path (cells of size at most two); descent-based solutions
    /// for larger cells are excellent in practice but carry no certificate.
    pub certified: bool,
}

/// Solution of the inner problem on one cell.
#[derive(Debug, Clone)]
struct CellSolution {
    value: f64,
    masses: Vec<f64>,
    certified: bool,
}

fn cell_objective(weights: &[f64], masses: &[f64], gamma: f64) -> f64 {
    weights
        .iter()
        .zip(masses)
        .filter(|(&w, _)| w > 0.0)
        .map(|(&w, &t)| w * focal_loss(t, gamma))
        .sum()
}

/// Solves the two-symbol inner problem: grid the first mass over
/// `[1e-9, 1-1e-9]`, then ternary-refine around the three best grid points.
fn solve_pair(weights: &[f64], gamma: f64) -> CellSolution {
    let lo_edge = 1e-9;
    let hi_edge = 1.0 - 1e-9;
    let span = hi_edge - lo_edge;
    let eval = |t: f64| cell_objective(weights, &[t, 1.0 - t], gamma);

    let mut values: Vec<(f64, usize)> = (0..=PAIR_GRID)
        .map(|i| {
            let t = lo_edge + span * i as f64 / PAIR_GRID as f64;
            (eval(t), i)
        })
        .collect();
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("objective is finite").then(a.1.cmp(&b.1)));

    let mut best_t = lo_edge + span * values[0].1 as f64 / PAIR_GRID as f64;
    let mut best_v = values[0].0;
    for &(_, index) in values.iter().take(3) {
        let mut lo = lo_edge + span * (index.saturating_sub(1)) as f64 / PAIR_GRID as f64;
        let mut hi = lo_edge + span * ((index + 1).min(PAIR_GRID)) as f64 / PAIR_GRID as f64;
        for _ in 0..200 {
            if hi - lo <= 1e-12 {
                break;
            }
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if eval(m1) > eval(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let t = 0.5 * (lo + hi);
        let v = eval(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    CellSolution {
        value: best_v,
        masses: vec![best_t, 1.0 - best_t],
        certified: true,
    }
}

/// Projected coordinate-exchange descent from one starting point: repeatedly
/// try moving `step` mass between coordinate pairs, halving the step when a
/// sweep stops improving, until the step drops below 1e-10.
fn descend(weights: &[f64], start: &[f64], gamma: f64) -> (f64, Vec<f64>) {
    let k = start.len();
    let mut masses: Vec<f64> = start.iter().map(|&v| v.max(MASS_FLOOR)).collect();
    let total: f64 = masses.iter().sum();
    for v in &mut masses {
        *v /= total;
    }
    let mut value = cell_objective(weights, &masses, gamma);
    let mut step = 0.25_f64;
    while step >= 1e-10 {
        for _pass in 0..50 {
            let mut improved = false;
            for to in 0..k {
                for from in 0..k {
                    if from == to {
                        continue;
                    }
                    let delta = step.min(masses[from] - MASS_FLOOR);
                    if delta <= 0.0 {
                        continue;
                    }
                    masses[from] -= delta;
                    masses[to] += delta;
                    let candidate = cell_objective(weights, &masses, gamma);
                    if candidate < value {
                        value = candidate;
                        improved = true;
                    } else {
                        masses[from] += delta;
                        masses[to] -= delta;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    (value, masses)
}

/// Solves the inner problem on a cell of three or more symbols by
/// multi-start descent: the weight-proportional point, the uniform point,
/// and 48 fixed-seed Dirichlet draws.
fn solve_large(weights: &[f64], gamma: f64) -> CellSolution {
    let k = weights.len();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(50);

    let weight_total: f64 = weights.iter().sum();
    if weight_total > 0.0 {
        starts.push(weights.iter().map(|&w| w / weight_total).collect());
    } else {
        starts.push(vec![1.0 / k as f64; k]);
    }
    starts.push(vec![1.0 / k as f64; k]);
    while starts.len() < 50 {
        // Dirichlet(1,..,1) via normalized exponentials.
        let raw: Vec<f64> = (0..k)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln().max(1e-300))
            .collect();
        let sum: f64 = raw.iter().sum();
        starts.push(raw.iter().map(|&g| g / sum).collect());
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in &starts {
        let (value, masses) = descend(weights, start, gamma);
        if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best = Some((value, masses));
        }
    }
    let (value, masses) = best.expect("at least one start");
    CellSolution {
        value,
        masses,
        certified: false,
    }
}

/// Minimizes `sum_a weights[a] * (1-t_a)^gamma * log2(1/t_a)` over
/// probability vectors `t` on the cell, returning the minimizing vector and
/// its value.
///
/// Weights are arbitrary nonnegative masses (typically the source restricted
/// to the cell) — they are not normalized, and the returned value scales
/// with them.
pub fn optimal_cell_reconstruction(weights: &[f64], gamma: f64) -> Result<(Pmf, f64)> {
    if weights.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidProbability { index, value: w });
        }
    }
    let solution = match weights.len() {
        1 => CellSolution {
            value: 0.0,
            masses: vec![1.0],
            certified: true,
        },
        2 => solve_pair(weights, gamma),
        _ => solve_large(weights, gamma),
    };
    Ok((Pmf::from_normalized(solution.masses.clone()), solution.value))
}

fn solve_cell(
    weights: &[f64],
    cell: &[usize],
    gamma: f64,
    memo: &mut HashMap<u64, CellSolution>,
) -> CellSolution {
    let mask: u64 = cell.iter().fold(0, |acc, &s| acc | (1 << s));
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let cell_weights: Vec<f64> = cell.iter().map(|&s| weights[s]).collect();
    let solution = match cell.len() {
        1 => CellSolution {
            value: 0.0,
            masses: vec![1.0],
            certified: true,
        },
        2 => solve_pair(&cell_weights, gamma),
        _ => solve_large(&cell_weights, gamma),
    };
    memo.insert(mask, solution.clone());
    solution
}

fn enumerate_partitions(
    labels: &mut Vec<usize>,
    alphabet: usize,
    m: usize,
    next_new: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if labels.len() == alphabet {
        visit(labels);
        return;
    }
    let limit = next_new.min(m - 1);
    for label in 0..=limit {
        labels.push(label);
        let bumped = if label == next_new { next_new + 1 } else { next_new };
        enumerate_partitions(labels, alphabet, m, bumped, visit);
        labels.pop();
    }
}

/// Computes the exact optimum `d*(m; gamma)` for source `r` by exhausting
/// every partition of the alphabet into at most `m` non-empty cells
/// (enumerated canonically as restricted-growth strings, in lexicographic
/// order; the first partition attaining the optimum wins) and solving the
/// inner reconstruction problem per cell, memoized per symbol subset.
///
/// Guarded: refuses alphabets above 10 symbols or instances where
/// `m^alphabet` exceeds one million.
pub fn exhaustive_dstar(r: &Pmf, m: usize, gamma: f64) -> Result<OracleResult> {
    if m == 0 {
        return Err(Error::InvalidSize {
            name: "message count",
            value: 0,
        });
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    let alphabet = r.len();
    let assignments = (m as u64).checked_pow(alphabet as u32);
    if alphabet > MAX_ALPHABET || assignments.is_none_or(|a| a > MAX_ASSIGNMENTS) {
        return Err(Error::InstanceTooLarge {
            alphabet,
            message_count: m,
            max_alphabet: MAX_ALPHABET,
            max_assignments: MAX_ASSIGNMENTS,
        });
    }

    let weights = r.probs();
    let mut memo: HashMap<u64, CellSolution> = HashMap::new();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut labels = Vec::with_capacity(alphabet);
    enumerate_partitions(&mut labels, alphabet, m, 0, &mut |labels| {
        let cell_count = labels.iter().copied().max().unwrap_or(0) + 1;
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); cell_count];
        for (symbol, &label) in labels.iter().enumerate() {
            cells[label].push(symbol);
        }
        let total: f64 = cells
            .iter()
            .map(|cell| solve_cell(weights, cell, gamma, &mut memo).value)
            .sum();
        if best.as_ref().is_none_or(|(bv, _)| total < *bv) {
            best = Some((total, labels.to_vec()));
        }
    });

    let (value, best_labels) = best.expect("at least one partition exists");
    let cell_count = best_labels.iter().copied().max().unwrap_or(0) + 1;
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); cell_count];
    for (symbol, &label) in best_labels.iter().enumerate() {
        cells[label].push(symbol);
    }
    let mut certified = true;
    let mut reconstructions = Vec::with_capacity(cell_count);
    for cell in &cells {
        let solution = solve_cell(weights, cell, gamma, &mut memo);
        certified &= solution.certified;
        let mut values = vec![0.0; alphabet];
        for (&symbol, &mass) in cell.iter().zip(&solution.masses) {
            values[symbol] = mass;
        }
        reconstructions.push(Pmf::from_normalized(values));
    }

    Ok(OracleResult {
        value,
        best_partition: best_labels,
        best_reconstructions: reconstructions,
        certified,
    })
}

/// Maximizes the focal entropy over the step-lattice on the probability
/// simplex of the given size (supported sizes: 2, 3, 4). A brute-force
/// cross-check for the structured maximization in
/// [`crate::focal::focal_entropy_max`].
pub fn simplex_grid_max_focal_entropy(size: usize, gamma: f64, step: f64) -> Result<f64> {
    if !(2..=4).contains(&size) {
        return Err(Error::InvalidSize {
            name: "simplex grid size",
            value: size,
        });
    }
    if !(0.005..=1.0).contains(&step) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
        });
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
        });
    }
    let ticks = (1.0 / step).round() as usize;
    let denominator = ticks as f64;
    let mut best = f64::NEG_INFINITY;
    let mut point = vec![0usize; size];
    // Enumerates all compositions of `ticks` into `size` parts.
    fn recurse(
        point: &mut Vec<usize>,
        index: usize,
        remaining: usize,
        denominator: f64,
        gamma: f64,
        best: &mut f64,
    ) {
        if index + 1 == point.len() {
            point[index] = remaining;
            let values: Vec<f64> = point.iter().map(|&i| i as f64 / denominator).collect();
            let pmf = Pmf::from_normalized(values);
            let v = focal_entropy(&pmf, gamma);
            if v > *best {
                *best = v;
            }
            return;
        }
        for take in 0..=remaining {
            point[index] = take;
            recurse(point, index + 1, remaining - take, denominator, gamma, best);
        }
    }
    recurse(&mut point, 0, ticks, denominator, gamma, &mut best);
    Ok(best)
}
