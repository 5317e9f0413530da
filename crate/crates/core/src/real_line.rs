//! The free space over ℝ as step functions: `δ_x ↦ χ_(0,x)` for `x > 0` and
//! `−χ_(x,0)` for `x < 0`. Exact rational arithmetic only.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::molecule::Molecule;
use crate::scalar::{Rational, Scalar};

/// A piecewise-constant function with finitely many rational breakpoints,
/// zero outside `[b₀, b_k]`. Values at breakpoints are not represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self {
            breaks: Vec::new(),
            values: Vec::new(),
        }
    }

    /// `c·χ_(a,b)`; empty when `a ≥ b`.
    pub fn indicator(a: Rational, b: Rational, c: Rational) -> Self {
        if a >= b {
            return Self::zero();
        }
        Self {
            breaks: vec![a, b],
            values: vec![c],
        }
        .canonical()
    }

    /// Validates strictly increasing breakpoints and one value per interval.
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let ok_len = if breaks.is_empty() {
            values.is_empty()
        } else {
            values.len() + 1 == breaks.len()
        };
        if !ok_len {
            return Err(Error::DimensionMismatch(format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                values.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DimensionMismatch(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breaks, values }.canonical())
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Merges equal neighbours and trims zero intervals at both ends.
    fn canonical(self) -> Self {
        let mut breaks: Vec<Rational> = Vec::with_capacity(self.breaks.len());
        let mut values: Vec<Rational> = Vec::with_capacity(self.values.len());
        for (i, v) in self.values.into_iter().enumerate() {
            if values.last() == Some(&v) {
                *breaks.last_mut().expect("a previous interval") = self.breaks[i + 1].clone();
                continue;
            }
            if breaks.is_empty() {
                breaks.push(self.breaks[i].clone());
            }
            breaks.push(self.breaks[i + 1].clone());
            values.push(v);
        }
        while values.first().is_some_and(Zero::is_zero) {
            values.remove(0);
            breaks.remove(0);
        }
        while values.last().is_some_and(Zero::is_zero) {
            values.pop();
            breaks.pop();
        }
        if values.is_empty() {
            breaks.clear();
        }
        Self { breaks, values }
    }

    /// Value on the open interval containing `t` (zero outside the support).
    /// `t` must not be a breakpoint.
    pub fn value_at(&self, t: &Rational) -> Rational {
        match self.breaks.iter().position(|b| b > t) {
            Some(0) | None => Rational::zero(),
            Some(i) => self.values[i - 1].clone(),
        }
    }

    /// Pointwise combination on the union of both breakpoint sets.
    fn combine(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let mut grid: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        grid.sort();
        grid.dedup();
        if grid.len() < 2 {
            return Self::zero();
        }
        let two = Rational::from_integer(2.into());
        let values = grid
            .windows(2)
            .map(|w| {
                let mid = (w[0].clone() + w[1].clone()) / two.clone();
                op(&self.value_at(&mid), &other.value_at(&mid))
            })
            .collect();
        Self {
            breaks: grid,
            values,
        }
        .canonical()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
        .canonical()
    }

    fn lengths(&self) -> impl Iterator<Item = (Rational, &Rational)> {
        self.breaks
            .windows(2)
            .map(|w| w[1].clone() - w[0].clone())
            .zip(&self.values)
    }

    /// `Σ |vᵢ|·(bᵢ − bᵢ₋₁)`.
    pub fn l1_norm(&self) -> Rational {
        self.lengths().map(|(len, v)| len * v.abs()).sum()
    }

    /// `Σ vᵢ·(bᵢ − bᵢ₋₁)`, the Lebesgue integral.
    pub fn integral(&self) -> Rational {
        self.lengths().map(|(len, v)| len * v).sum()
    }

    /// `∫₀ˣ s`, negative for `x < 0` when `s > 0`.
    pub fn primitive(&self, x: &Rational) -> Rational {
        let (lo, hi, sign) = if x.is_negative() {
            (x.clone(), Rational::zero(), -Rational::one())
        } else {
            (Rational::zero(), x.clone(), Rational::one())
        };
        let total: Rational = self
            .breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| {
                let a = w[0].clone().max(lo.clone());
                let b = w[1].clone().min(hi.clone());
                if a < b {
                    (b - a) * v
                } else {
                    Rational::zero()
                }
            })
            .sum();
        sign * total
    }

    /// Extends the outermost values to `±∞` over the span `[lo, hi]`.
    fn extended_over(&self, lo: &Rational, hi: &Rational) -> Self {
        if self.breaks.is_empty() {
            return self.clone();
        }
        let mut breaks = self.breaks.clone();
        let mut values = self.values.clone();
        if lo < &breaks[0] {
            breaks.insert(0, lo.clone());
            values.insert(0, self.values[0].clone());
        }
        if hi > breaks.last().expect("non-empty") {
            breaks.push(hi.clone());
            values.push(self.values.last().expect("non-empty").clone());
        }
        Self { breaks, values }
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| format!("{} on ({}, {})", v.render(), w[0].render(), w[1].render()))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

fn one_dimensional(m: &Molecule<Rational>) -> Result<()> {
    match m.space().dim() {
        1 => Ok(()),
        n => Err(Error::NotOneDimensional(n)),
    }
}

/// The isometry `F(ℝ) → L¹(ℝ)` on molecules, extended linearly.
pub fn phi_map(m: &Molecule<Rational>) -> Result<StepFunction> {
    one_dimensional(m)?;
    let zero = Rational::zero();
    Ok(m.terms().iter().fold(StepFunction::zero(), |acc, t| {
        let x = t.point[0].clone();
        let piece = if x.is_positive() {
            StepFunction::indicator(zero.clone(), x, t.coeff.clone())
        } else {
            StepFunction::indicator(x, zero.clone(), -t.coeff.clone())
        };
        acc.add(&piece)
    }))
}

/// `∫ f′·φ(m)`, the pairing `⟨f, m⟩` carried over to `L^∞ × L¹`.
/// `fprime` is extended by its boundary values to cover the support of `φ(m)`.
pub fn pairing_via_derivative(fprime: &StepFunction, m: &Molecule<Rational>) -> Result<Rational> {
    let image = phi_map(m)?;
    let (Some(lo), Some(hi)) = (image.breaks.first(), image.breaks.last()) else {
        return Ok(Rational::zero());
    };
    Ok(fprime.extended_over(lo, hi).mul(&image).integral())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::space::{Point, Space};

    fn q(p: i64) -> Rational {
        rational(p, 1)
    }

    fn line_mol(terms: &[(i64, i64)]) -> Molecule<Rational> {
        Molecule::new(
            Space::real_line(),
            terms
                .iter()
                .map(|&(a, x)| (q(a), Point::scalar(q(x))))
                .collect(),
        )
        .unwrap()
        .canonicalize()
    }

    fn step(breaks: &[i64], values: &[i64]) -> StepFunction {
        StepFunction::new(
            breaks.iter().map(|&b| q(b)).collect(),
            values.iter().map(|&v| q(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn primitive_of_sign() {
        let sign = step(&[-3, 0, 3], &[-1, 1]);
        assert_eq!(sign.primitive(&q(2)), q(2));
        assert_eq!(sign.primitive(&q(-2)), q(2));
        assert_eq!(sign.primitive(&q(5)), q(3));
        assert_eq!(sign.primitive(&rational(-1, 2)), rational(1, 2));
    }

    #[test]
    fn phi_of_deltas() {
        assert_eq!(phi_map(&line_mol(&[(1, 1)])).unwrap(), step(&[0, 1], &[1]));
        assert_eq!(
            phi_map(&line_mol(&[(1, -2)])).unwrap(),
            step(&[-2, 0], &[-1])
        );
        assert_eq!(
            phi_map(&line_mol(&[(2, 1), (-1, 2)])).unwrap(),
            step(&[0, 1, 2], &[1, -1])
        );
        assert!(phi_map(&line_mol(&[])).unwrap().is_zero());
    }

    #[test]
    fn norms_and_integrals() {
        assert_eq!(step(&[0, 1], &[1]).l1_norm(), q(1));
        assert_eq!(step(&[0, 1, 2], &[1, -1]).l1_norm(), q(2));
        assert_eq!(StepFunction::zero().l1_norm(), q(0));
        assert_eq!(step(&[0, 1], &[1]).integral(), q(1));
        assert_eq!(
            phi_map(&line_mol(&[(2, 1), (-1, 2)])).unwrap().integral(),
            q(0)
        );
        assert_eq!(step(&[-2, 0], &[-1]).integral(), q(-2));
    }

    #[test]
    fn canonical_merging() {
        let s = step(&[-3, -1, 0, 2, 5], &[0, 4, 4, 0]);
        assert_eq!(s.breaks(), &[q(-1), q(2)]);
        assert_eq!(s.values(), &[q(4)]);
        assert!(step(&[0, 1], &[0]).is_zero());
        assert!(StepFunction::new(vec![q(1), q(0)], vec![q(1)]).is_err());
        assert!(StepFunction::new(vec![q(0), q(1)], vec![]).is_err());
    }

    #[test]
    fn derivative_pairing() {
        let sign = step(&[-3, 0, 3], &[-1, 1]);
        assert_eq!(
            pairing_via_derivative(&sign, &line_mol(&[(1, 1), (1, -1)])).unwrap(),
            q(2)
        );
        let c = step(&[0, 1], &[5]);
        // extended by boundary values: constant 5 everywhere relevant
        assert_eq!(
            pairing_via_derivative(&c, &line_mol(&[(1, 7)])).unwrap(),
            q(35)
        );
        assert_eq!(
            pairing_via_derivative(&c, &line_mol(&[(2, 1), (-1, 2)])).unwrap(),
            q(0)
        );
    }

    #[test]
    fn rejects_higher_dimensions() {
        let s = Space::new(2, crate::space::NormKind::L1).unwrap();
        let m = Molecule::delta(s, Point::from_i64s(&[1, 1])).unwrap();
        assert_eq!(phi_map(&m), Err(Error::NotOneDimensional(2)));
    }
}
