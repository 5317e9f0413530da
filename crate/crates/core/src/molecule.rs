//! Finitely supported elements `Σ aᵢ δ_{xᵢ}` of the free space, the
//! barycenter map β, and the decomposition η.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Point, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct Term<S> {
    pub coeff: S,
    pub point: Point<S>,
}

/// A formal sum `Σ aᵢ δ_{xᵢ}` over a normed space.
///
/// Constructors leave terms as given; every arithmetic operation returns
/// canonical form (see [`Molecule::canonicalize`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule<S> {
    space: Space,
    terms: Vec<Term<S>>,
}

impl<S: Scalar> Molecule<S> {
    pub fn new(space: Space, terms: Vec<(S, Point<S>)>) -> Result<Self> {
        for (_, p) in &terms {
            space.check(p)?;
        }
        Ok(Self {
            space,
            terms: terms
                .into_iter()
                .map(|(coeff, point)| Term { coeff, point })
                .collect(),
        })
    }

    pub fn zero(space: Space) -> Self {
        Self {
            space,
            terms: Vec::new(),
        }
    }

    /// The evaluation functional `δ_x`.
    pub fn delta(space: Space, x: Point<S>) -> Result<Self> {
        Ok(Self::new(space, vec![(S::one(), x)])?.canonicalize())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> &[Term<S>] {
        &self.terms
    }

    pub fn support(&self) -> Vec<Point<S>> {
        self.terms.iter().map(|t| t.point.clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.canonicalize().terms.is_empty()
    }

    /// Merges repeated points, drops zero coefficients and the `δ₀` term
    /// (`δ₀(f) = f(0) = 0` on Lip₀), and sorts points lexicographically.
    pub fn canonicalize(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.point.lex_cmp(&b.point));
        let mut merged: Vec<Term<S>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.point == t.point => last.coeff = last.coeff.clone() + t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero() && !t.point.is_zero());
        Self {
            space: self.space,
            terms: merged,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().terms == self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            space: self.space,
            terms,
        }
        .canonicalize())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone() * s.clone(),
                    point: t.point.clone(),
                })
                .collect(),
        }
        .canonicalize()
    }

    /// `β(Σ aᵢ δ_{xᵢ}) = Σ aᵢ xᵢ`.
    pub fn beta(&self) -> Point<S> {
        self.terms
            .iter()
            .fold(Point::zeros(self.space.dim()), |acc, t| {
                acc.add(&t.point.scale(&t.coeff))
            })
    }

    /// Membership in `ker β`: exact in exact mode, `‖β(m)‖ ≤ tol` otherwise.
    pub fn is_kernel(&self, tol: f64) -> bool {
        let b = self.beta();
        if S::EXACT {
            return b.is_zero();
        }
        match self.space.norm(&b) {
            Ok(n) => n.to_f64() <= tol,
            Err(_) => false,
        }
    }

    /// `−r δ_{x₁} − δ_{x₂} + δ_{r x₁ + x₂}`, a generator of `ker β`.
    pub fn elementary_kernel(space: Space, r: S, x1: Point<S>, x2: Point<S>) -> Result<Self> {
        let target = x1.scale(&r).add(&x2);
        Ok(Self::new(space, vec![(-r, x1), (-S::one(), x2), (S::one(), target)])?.canonicalize())
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "{} vs {}",
                self.space, other.space
            )));
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for Molecule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}·δ{}", t.coeff.render(), t.point))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A point of `X ⊕₁ ker β`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaPair<S> {
    pub base: Point<S>,
    pub kernel_part: Molecule<S>,
}

/// Float-mode tolerance for kernel membership.
pub const KERNEL_TOL: f64 = 1e-9;

impl<S: Scalar> EtaPair<S> {
    /// `‖x₁ − x₂‖ + ‖μ₁ − μ₂‖_free`, the ⊕₁ distance, given a free norm.
    pub fn distance_with(
        &self,
        other: &Self,
        free_norm: impl Fn(&Molecule<S>) -> Result<S>,
    ) -> Result<S> {
        let space = self.kernel_part.space();
        let base = space.distance(&self.base, &other.base)?;
        let kernel = free_norm(&self.kernel_part.sub(&other.kernel_part)?)?;
        Ok(base + kernel)
    }
}

/// `η(x, μ) = δ_x + μ`.
pub fn eta<S: Scalar>(pair: &EtaPair<S>) -> Result<Molecule<S>> {
    let mu = &pair.kernel_part;
    if !mu.is_kernel(KERNEL_TOL) {
        return Err(Error::NotKernel(mu.beta().to_string()));
    }
    Molecule::delta(*mu.space(), pair.base.clone())?.add(mu)
}

/// `η⁻¹(γ) = (β(γ), γ − δ_{β(γ)})`.
pub fn eta_inverse<S: Scalar>(m: &Molecule<S>) -> Result<EtaPair<S>> {
    let base = m.beta();
    let kernel_part = m.sub(&Molecule::delta(*m.space(), base.clone())?)?;
    Ok(EtaPair { base, kernel_part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use crate::space::NormKind;

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
    }

    #[test]
    fn canonical_form() {
        assert_eq!(
            line_mol(&[(1, 1), (1, 1)]).canonicalize(),
            line_mol(&[(2, 1)])
        );
        assert_eq!(
            line_mol(&[(3, 0), (1, 2)]).canonicalize(),
            line_mol(&[(1, 2)])
        );
        assert!(line_mol(&[(1, 1), (-1, 1)]).is_zero());
        let m = line_mol(&[(1, 5), (2, -3), (1, 1)]).canonicalize();
        assert_eq!(m, line_mol(&[(2, -3), (1, 1), (1, 5)]));
        assert!(m.is_canonical());
    }

    #[test]
    fn beta_values() {
        assert_eq!(line_mol(&[(1, 3)]).beta(), Point::scalar(q(3)));
        assert!(line_mol(&[(2, 1), (-1, 2)]).beta().is_zero());
        let r2 = Space::new(2, NormKind::L1).unwrap();
        let m = Molecule::new(
            r2,
            vec![
                (q(3), Point::from_i64s(&[1, 0])),
                (q(1), Point::from_i64s(&[0, 2])),
            ],
        )
        .unwrap();
        assert_eq!(m.beta(), Point::from_i64s(&[3, 2]));
    }

    #[test]
    fn kernel_membership() {
        assert!(line_mol(&[(2, 1), (-1, 2)]).is_kernel(0.0));
        assert!(!line_mol(&[(1, 1)]).is_kernel(0.0));
        assert!(line_mol(&[(1, 1), (1, -1)]).is_kernel(0.0));
        let float = Molecule::new(
            Space::real_line(),
            vec![(0.1, Point::scalar(3.0)), (-0.3, Point::scalar(1.0))],
        )
        .unwrap();
        assert!(float.is_kernel(1e-9));
        assert!(!float.is_kernel(0.0));
    }

    #[test]
    fn elementary_generators() {
        let line = Space::real_line();
        let m = Molecule::elementary_kernel(line, q(2), Point::scalar(q(1)), Point::scalar(q(3)))
            .unwrap();
        assert_eq!(m, line_mol(&[(-2, 1), (-1, 3), (1, 5)]).canonicalize());
        assert!(m.is_kernel(0.0));
        let z = Molecule::elementary_kernel(line, q(1), Point::scalar(q(7)), Point::scalar(q(0)))
            .unwrap();
        assert!(z.terms().is_empty());
        let z = Molecule::elementary_kernel(line, q(-1), Point::scalar(q(1)), Point::scalar(q(1)))
            .unwrap();
        assert!(z.terms().is_empty());
    }

    #[test]
    fn eta_examples() {
        let x = Point::scalar(q(4));
        let p = EtaPair {
            base: x.clone(),
            kernel_part: Molecule::zero(Space::real_line()),
        };
        assert_eq!(
            eta(&p).unwrap(),
            Molecule::delta(Space::real_line(), x).unwrap()
        );

        let inv = eta_inverse(&line_mol(&[(2, 1)])).unwrap();
        assert_eq!(inv.base, Point::scalar(q(2)));
        assert_eq!(inv.kernel_part, line_mol(&[(2, 1), (-1, 2)]).canonicalize());

        let inv = eta_inverse(&line_mol(&[(1, 1), (-1, 2)])).unwrap();
        assert_eq!(inv.base, Point::scalar(q(-1)));
        assert_eq!(
            inv.kernel_part,
            line_mol(&[(1, 1), (-1, 2), (-1, -1)]).canonicalize()
        );
        assert!(inv.kernel_part.is_kernel(0.0));
    }

    #[test]
    fn eta_rejects_non_kernel() {
        let p = EtaPair {
            base: Point::scalar(q(1)),
            kernel_part: line_mol(&[(1, 1)]),
        };
        assert!(matches!(eta(&p), Err(Error::NotKernel(_))));
    }

    #[test]
    fn space_mismatch() {
        let a = line_mol(&[(1, 1)]);
        let b = Molecule::<Rational>::zero(Space::new(2, NormKind::L1).unwrap());
        assert!(matches!(a.add(&b), Err(Error::SpaceMismatch(_))));
    }
}
