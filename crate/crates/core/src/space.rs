//! Finite-dimensional normed spaces ℝⁿ and their points.

use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" | "sup" | "max" => Ok(NormKind::Linf),
            other => Err(format!("unknown norm '{other}' (expected l1, l2 or linf)")),
        }
    }
}

/// ℝⁿ with one of the ℓ¹, ℓ², ℓ∞ norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    dim: usize,
    norm: NormKind,
}

impl Space {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(
                "space dimension must be >= 1".into(),
            ));
        }
        Ok(Self { dim, norm })
    }

    /// The real line; all three norms coincide.
    pub fn real_line() -> Self {
        Self {
            dim: 1,
            norm: NormKind::L2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn norm<S: Scalar>(&self, v: &[S]) -> Result<S> {
        self.check(v)?;
        if self.dim == 1 {
            return Ok(v[0].abs());
        }
        match self.norm {
            NormKind::L1 => Ok(v.iter().fold(S::zero(), |acc, x| acc + x.abs())),
            NormKind::Linf => Ok(v.iter().fold(S::zero(), |acc, x| acc.max_of(x.abs()))),
            NormKind::L2 => {
                let sq = v
                    .iter()
                    .fold(S::zero(), |acc, x| acc + x.clone() * x.clone());
                sq.sqrt()
                    .ok_or_else(|| Error::InexactNorm(format_coords(v)))
            }
        }
    }

    pub fn distance<S: Scalar>(&self, a: &[S], b: &[S]) -> Result<S> {
        self.check(a)?;
        self.check(b)?;
        let diff: Vec<S> = a
            .iter()
            .zip(b)
            .map(|(x, y)| x.clone() - y.clone())
            .collect();
        self.norm(&diff)
    }

    pub fn check<S>(&self, v: &[S]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, space has dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Linear functionals `w` with `‖v‖ = max_w |w·v|` when the norm is polyhedral
    /// (or the space is one-dimensional). Opposite pairs are listed once.
    pub fn norming_functionals<S: Scalar>(&self) -> Result<Vec<Vec<S>>> {
        let n = self.dim;
        if n == 1 || self.norm == NormKind::Linf {
            return Ok((0..n).map(|k| Point::<S>::unit(n, k).coords).collect());
        }
        match self.norm {
            NormKind::L1 => Ok(sign_vectors(n)
                .into_iter()
                .filter(|s| s[0] > 0)
                .map(|s| s.into_iter().map(S::from_i64).collect())
                .collect()),
            _ => Err(Error::UnsupportedCodomainNorm(format!(
                "{}^{}",
                self.norm, n
            ))),
        }
    }

    /// True when the norm is injective in the Banach-space sense: ℝ or ℓ∞ᵐ.
    pub fn is_injective(&self) -> bool {
        self.dim == 1 || self.norm == NormKind::Linf
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^{} ({})", self.dim, self.norm)
    }
}

/// All ±1 vectors of length `n`, in lexicographic order of signs.
pub(crate) fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|k| if mask >> (n - 1 - k) & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

fn format_coords<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::render).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coords: vec![S::zero(); n],
        }
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut p = Self::zeros(n);
        p.coords[k] = S::one();
        p
    }

    pub fn scalar(x: S) -> Self {
        Self { coords: vec![x] }
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coords.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn dot(&self, w: &[S]) -> S {
        self.coords
            .iter()
            .zip(w)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Sum of coordinatewise absolute differences; zero only for equal points.
    pub fn l1_gap(&self, other: &Self) -> S {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs())
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.coords.iter().map(Scalar::to_f64).collect())
    }

    /// Lexicographic comparison; incomparable (NaN) coordinates compare equal.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.partial_cmp(b) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim(), "point dimensions differ");
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| op(a.clone(), b.clone()))
                .collect(),
        )
    }
}

impl<S> Deref for Point<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.coords
    }
}

impl<S> Index<usize> for Point<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

impl<S: Scalar> From<Vec<S>> for Point<S> {
    fn from(coords: Vec<S>) -> Self {
        Self::new(coords)
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coords(&self.coords))
    }
}
