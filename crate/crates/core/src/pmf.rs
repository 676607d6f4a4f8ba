//! Probability mass functions on finite alphabets, plus the handful of
//! classical information quantities the rest of the crate is built on.
//!
//! Symbols are identified by their index `0..k` into the probability vector.
//! All logarithms are base 2 and all entropies are in bits.

use crate::error::{Error, Result};

/// How far from 1 a probability vector's sum may be before we refuse to
/// treat it as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A validated probability mass function on the alphabet `0..len`.
///
/// Invariants: non-empty, every entry is a finite value in `[0, 1]`, and the
/// entries sum to 1 within [`NORMALIZATION_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Builds a Pmf from raw values.
    ///
    /// With `renormalize` set, any nonnegative vector with positive total mass
    /// is accepted and scaled to sum to 1; otherwise the sum must already be
    /// 1 within [`NORMALIZATION_TOLERANCE`].
    pub fn from_values(values: &[f64], renormalize: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = values.iter().sum();
        if renormalize {
            if sum <= 0.0 {
                return Err(Error::ZeroMassTotal);
            }
            Ok(Self {
                probs: values.iter().map(|v| v / sum).collect(),
            })
        } else {
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::NotNormalized { sum });
            }
            Ok(Self {
                probs: values.to_vec(),
            })
        }
    }

    /// Internal constructor for vectors that are normalized by construction.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty(), "internal pmf must be non-empty");
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() < 1e-6,
            "internal pmf must be normalized"
        );
        Self { probs }
    }

    /// The uniform distribution on `k` symbols.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize {
                name: "alphabet",
                value: 0,
            });
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    /// A point mass on `at` within an alphabet of `k` symbols.
    pub fn point_mass(k: usize, at: usize) -> Result<Self> {
        if k == 0 || at >= k {
            return Err(Error::InvalidSize {
                name: "point mass index",
                value: at,
            });
        }
        let mut probs = vec![0.0; k];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    /// The Binomial(trials, p) distribution on `0..=trials`.
    ///
    /// Evaluated in log space through the log-gamma function so that tail
    /// masses far below machine epsilon keep full relative precision, then
    /// renormalized.
    pub fn binomial(trials: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "binomial p",
                value: p,
            });
        }
        if p == 0.0 {
            return Self::point_mass(trials + 1, 0);
        }
        if p == 1.0 {
            return Self::point_mass(trials + 1, trials);
        }
        let n = trials as f64;
        let ln_p = p.ln();
        let ln_q = (-p).ln_1p();
        let ln_fact_n = statrs::function::gamma::ln_gamma(n + 1.0);
        let values: Vec<f64> = (0..=trials)
            .map(|j| {
                let jf = j as f64;
                let ln_choose = ln_fact_n
                    - statrs::function::gamma::ln_gamma(jf + 1.0)
                    - statrs::function::gamma::ln_gamma(n - jf + 1.0);
                (ln_choose + jf * ln_p + (n - jf) * ln_q).exp()
            })
            .collect();
        Self::from_values(&values, true)
    }

    /// Parses a whitespace- or comma-separated list of probabilities.
    ///
    /// `#` starts a comment running to the end of the line. Entries may be
    /// plain decimals (`0.25`, `1e-3`) or fractions (`2/3`).
    pub fn parse_text(text: &str, renormalize: bool) -> Result<Self> {
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for token in line.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
                values.push(parse_ratio(token)?);
            }
        }
        Self::from_values(&values, renormalize)
    }

    /// Number of symbols in the alphabet.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// The probability of symbol `x`.
    pub fn get(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// The underlying probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Iterates over `(symbol, probability)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().copied().enumerate()
    }

    /// Number of symbols with strictly positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }
}

/// Parses a single numeric token: a decimal literal or a fraction `a/b`.
pub fn parse_ratio(token: &str) -> Result<f64> {
    let parsed = if let Some((num, den)) = token.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in '{token}'")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in '{token}'")))?;
        if den == 0.0 {
            return Err(Error::Parse(format!("zero denominator in '{token}'")));
        }
        num / den
    } else {
        token
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{token}'")))?
    };
    Ok(parsed)
}

/// Shannon entropy of `p` in bits; zero-probability symbols contribute 0.
pub fn shannon_entropy(p: &Pmf) -> f64 {
    p.probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

/// The information value log2(1/f(x)) of symbol `x` under distribution `f`.
///
/// Symbols outside the support get `+inf`. Panics if `x` is out of range.
pub fn information(f: &Pmf, x: usize) -> f64 {
    let v = f.get(x);
    if v <= 0.0 {
        f64::INFINITY
    } else {
        -v.log2()
    }
}

/// Folds a per-symbol weight distribution `q` into a source distribution `p`,
/// returning the tilted distribution r(x) = p(x) q(x) / sum_a p(a) q(a).
///
/// Errors if the supports are disjoint (total tilted mass zero).
pub fn reweight(p: &Pmf, q: &Pmf) -> Result<Pmf> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let products: Vec<f64> = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| a * b)
        .collect();
    let total: f64 = products.iter().sum();
    if total <= 0.0 {
        return Err(Error::DisjointSupport);
    }
    Ok(Pmf::from_normalized(
        products.iter().map(|&v| v / total).collect(),
    ))
}

/// A source: an alphabet distribution plus an optional per-symbol weight
/// distribution that tilts it.
///
/// All rate-distortion quantities downstream consume [`Source::reweighted`],
/// which coincides with the raw distribution when no weight is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    px: Pmf,
    weight: Option<Pmf>,
    reweighted: Pmf,
}

impl Source {
    /// A source with no weighting; the effective distribution is `px` itself.
    pub fn unweighted(px: Pmf) -> Self {
        let reweighted = px.clone();
        Self {
            px,
            weight: None,
            reweighted,
        }
    }

    /// A source with a per-symbol weight distribution.
    pub fn weighted(px: Pmf, weight: Pmf) -> Result<Self> {
        let reweighted = reweight(&px, &weight)?;
        Ok(Self {
            px,
            weight: Some(weight),
            reweighted,
        })
    }

    /// The raw alphabet distribution.
    pub fn px(&self) -> &Pmf {
        &self.px
    }

    /// The weight distribution, if any.
    pub fn weight(&self) -> Option<&Pmf> {
        self.weight.as_ref()
    }

    /// The effective distribution all distortion computations run against.
    pub fn reweighted(&self) -> &Pmf {
        &self.reweighted
    }
}
