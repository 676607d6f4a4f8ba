//! Exact information spectra: the distribution of the per-letter information
//! value and its n-fold sums under an i.i.d. source.
//!
//! A spectrum is a finite list of `(value, mass)` atoms. Convolution is exact
//! — no binning — with one concession to floating point: values that land
//! within 1e-9 of each other are merged, which also keeps lattice sources
//! (where many sum-paths produce the same value) from duplicating atoms.

use crate::error::{Error, Result};
use crate::pmf::{information, Pmf};

/// Merge radius for near-equal atom values.
const MERGE_TOLERANCE: f64 = 1e-9;

/// Safety cap on atom counts during convolution. Lattice sources stay tiny;
/// this only trips on generic sources convolved to large blocklengths.
const ATOM_CAP: usize = 10_000_000;

/// A single point of probability mass at a real value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

/// A discrete distribution over real values, sorted ascending by value.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    atoms: Vec<Atom>,
}

impl Spectrum {
    /// Normalizes a raw atom list: drops zero-mass atoms, sorts by value, and
    /// merges runs of near-equal values (within 1e-9 of the run's first
    /// value, which is the value that survives).
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Self {
        atoms.retain(|a| a.mass > 0.0);
        atoms.sort_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .expect("atom values must not be NaN")
        });
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if atom.value - last.value <= MERGE_TOLERANCE => {
                    last.mass += atom.mass;
                }
                _ => merged.push(atom),
            }
        }
        Self { atoms: merged }
    }

    /// The atoms, ascending by value.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// True when no atom carries mass.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total probability mass (1 for a spectrum of a proper distribution).
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mean value under the spectrum.
    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.mass).sum()
    }

    /// Distribution of the sum of two independent draws.
    pub fn convolve(&self, other: &Spectrum) -> Result<Spectrum> {
        let product = self.atoms.len().saturating_mul(other.atoms.len());
        if product > ATOM_CAP {
            return Err(Error::SpectrumTooLarge {
                atoms: product,
                cap: ATOM_CAP,
            });
        }
        let mut atoms = Vec::with_capacity(product);
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom {
                    value: a.value + b.value,
                    mass: a.mass * b.mass,
                });
            }
        }
        Ok(Self::from_atoms(atoms))
    }
}

/// The exact spectrum of the n-letter information sum: the distribution of
/// `sum_i log2(1/f(X_i))` when `X_1..X_n` are i.i.d. with law `r`.
///
/// Errors if some symbol has `r(x) > 0` but `f(x) = 0` — the information
/// value would be infinite and the spectrum cannot represent it.
pub fn iid_spectrum(r: &Pmf, f: &Pmf, n: usize) -> Result<Spectrum> {
    if r.len() != f.len() {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: f.len(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidSize {
            name: "blocklength",
            value: 0,
        });
    }
    let mut single = Vec::with_capacity(r.len());
    for (x, mass) in r.iter() {
        if mass <= 0.0 {
            continue;
        }
        let value = information(f, x);
        if value.is_infinite() {
            return Err(Error::InfiniteInformation { symbol: x });
        }
        single.push(Atom { value, mass });
    }
    let single = Spectrum::from_atoms(single);
    let mut result = single.clone();
    for _ in 1..n {
        result = result.convolve(&single)?;
    }
    Ok(result)
}
