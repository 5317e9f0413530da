//! Distance from a Lipschitz map to the linear maps on a finite sample, and
//! the matching supremum of the pairing over the unit ball of `ker β`.
//!
//! Both sides are linear programs dual to each other, so on any sample they
//! agree exactly in rational mode. The codomain must be ℝ or `ℓ∞ᵐ`, where
//! the problem splits by output coordinate.

use crate::duality::anchored_sample;
use crate::error::{Error, Result};
use crate::free_norm::unit_ball_sup;
use crate::funcspec::FunctionSpec;
use crate::linear::LinearMap;
use crate::lp::{solve, LpProblem, Relation};
use crate::molecule::Molecule;
use crate::scalar::Scalar;
use crate::space::{Point, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearDistance<S> {
    pub value: S,
    /// A linear map attaining the distance.
    pub best: LinearMap<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSup<S> {
    pub value: S,
    /// A kernel molecule of norm at most 1 attaining the supremum.
    pub witness: Molecule<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport<S> {
    pub primal: LinearDistance<S>,
    pub dual: KernelSup<S>,
    pub gap: S,
}

fn require_injective(codomain: &Space) -> Result<()> {
    if codomain.is_injective() {
        Ok(())
    } else {
        Err(Error::UnsupportedCodomainNorm(codomain.to_string()))
    }
}

/// `min_T max_{i≠j} ‖(f(xᵢ) − f(xⱼ)) − T(xᵢ − xⱼ)‖ / ‖xᵢ − xⱼ‖` over the
/// sample together with the origin.
pub fn dist_to_linear<S: Scalar>(
    f: &FunctionSpec<S>,
    sample: &[Point<S>],
) -> Result<LinearDistance<S>> {
    let (domain, codomain) = (*f.domain(), *f.codomain());
    require_injective(&codomain)?;
    let nodes = anchored_sample(&domain, sample)?;
    let values: Vec<Point<S>> = nodes.iter().map(|p| f.evaluate(p)).collect::<Result<_>>()?;
    let (n, m) = (domain.dim(), codomain.dim());
    let t = m * n;
    let mut objective = vec![S::zero(); t + 1];
    objective[t] = -S::one();
    let mut lp = LpProblem::new(objective);
    lp.nonnegative(t);
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let dx = nodes[i].sub(&nodes[j]);
            let d = domain.norm(&dx)?;
            let df = values[i].sub(&values[j]);
            for k in 0..m {
                let mut up: Vec<(usize, S)> = (0..n).map(|l| (k * n + l, dx[l].clone())).collect();
                up.push((t, -d.clone()));
                let down: Vec<(usize, S)> = up
                    .iter()
                    .map(|(v, c)| (*v, if *v == t { c.clone() } else { -c.clone() }))
                    .collect();
                lp.add_sparse(&up, Relation::Le, df[k].clone());
                lp.add_sparse(&down, Relation::Le, -df[k].clone());
            }
        }
    }
    let sol = solve(&lp)?.optimal()?;
    let rows = (0..m)
        .map(|k| sol.witness[k * n..(k + 1) * n].to_vec())
        .collect();
    Ok(LinearDistance {
        value: -sol.value,
        best: LinearMap::from_rows(rows)?,
    })
}

/// `sup{‖⟨f, μ⟩‖ : β(μ) = 0, ‖μ‖ ≤ 1, supp μ ⊆ sample ∪ {0}}`.
pub fn kernel_ball_sup<S: Scalar>(
    f: &FunctionSpec<S>,
    sample: &[Point<S>],
) -> Result<KernelSup<S>> {
    let (domain, codomain) = (*f.domain(), *f.codomain());
    require_injective(&codomain)?;
    let nodes = anchored_sample(&domain, sample)?;
    let values: Vec<Point<S>> = nodes.iter().map(|p| f.evaluate(p)).collect::<Result<_>>()?;
    let mut best: Option<KernelSup<S>> = None;
    for k in 0..codomain.dim() {
        let weights: Vec<S> = values.iter().map(|v| v[k].clone()).collect();
        let (value, witness) = unit_ball_sup(&domain, &nodes, &weights, true)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(KernelSup { value, witness });
        }
    }
    Ok(best.expect("codomain has dimension at least 1"))
}

/// Runs both programs and fails with [`Error::IsometryViolation`] when they
/// differ by more than `tol`. In rational mode `tol = 0` demands equality.
pub fn theta_isometry_check<S: Scalar>(
    f: &FunctionSpec<S>,
    sample: &[Point<S>],
    tol: f64,
) -> Result<ThetaReport<S>> {
    let (primal, dual) = rayon::join(|| dist_to_linear(f, sample), || kernel_ball_sup(f, sample));
    let (primal, dual) = (primal?, dual?);
    let gap = (primal.value.clone() - dual.value.clone()).abs();
    let ok = if S::EXACT && tol == 0.0 {
        gap.is_zero()
    } else {
        gap.to_f64() <= tol
    };
    if !ok {
        return Err(Error::IsometryViolation {
            primal: primal.value.render(),
            dual: dual.value.render(),
        });
    }
    Ok(ThetaReport { primal, dual, gap })
}

/// Half the spread of consecutive difference quotients on a sorted sample
/// of the line (the origin is added), maximized over output coordinates.
pub fn quotient_oracle_1d<S: Scalar>(f: &FunctionSpec<S>, sample: &[Point<S>]) -> Result<S> {
    if f.domain().dim() != 1 {
        return Err(Error::NotOneDimensional(f.domain().dim()));
    }
    let mut nodes = anchored_sample(f.domain(), sample)?;
    nodes.sort_by(|a, b| a.lex_cmp(b));
    let values: Vec<Point<S>> = nodes.iter().map(|p| f.evaluate(p)).collect::<Result<_>>()?;
    let mut spread = S::zero();
    #[allow(clippy::needless_range_loop)]
    for k in 0..f.codomain().dim() {
        let slopes: Vec<S> = (1..nodes.len())
            .map(|i| {
                (values[i][k].clone() - values[i - 1][k].clone())
                    / (nodes[i][0].clone() - nodes[i - 1][0].clone())
            })
            .collect();
        let hi = slopes
            .iter()
            .skip(1)
            .fold(slopes[0].clone(), |a, s| a.max_of(s.clone()));
        let lo = slopes
            .iter()
            .skip(1)
            .fold(slopes[0].clone(), |a, s| a.min_of(s.clone()));
        spread = spread.max_of(hi - lo);
    }
    Ok(spread / S::from_i64(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::pair;
    use crate::free_norm::free_norm;
    use crate::scalar::{rational, Rational};
    use crate::space::NormKind;
    use num_traits::Signed;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    fn pts(xs: &[i64]) -> Vec<Point<Rational>> {
        xs.iter().map(|&x| Point::scalar(q(x, 1))).collect()
    }

    fn func(text: &str) -> FunctionSpec<Rational> {
        FunctionSpec::parse(text, Space::real_line(), Space::real_line()).unwrap()
    }

    #[test]
    fn abs_on_three_points() {
        let f = func("abs(x0)");
        let s = pts(&[-1, 0, 1]);
        let d = dist_to_linear(&f, &s).unwrap();
        assert_eq!(d.value, q(1, 1));
        assert_eq!(*d.best.get(0, 0), q(0, 1));
        let k = kernel_ball_sup(&f, &s).unwrap();
        assert_eq!(k.value, q(1, 1));
        assert!(k.witness.is_kernel(0.0));
        assert!(free_norm(&k.witness).unwrap() <= q(1, 1));
        assert_eq!(pair(&f, &k.witness).unwrap()[0].clone().abs(), q(1, 1));
        assert_eq!(quotient_oracle_1d(&f, &s).unwrap(), q(1, 1));
    }

    #[test]
    fn slopes_zero_and_two() {
        let f = FunctionSpec::from_table(
            Space::real_line(),
            Space::real_line(),
            pts(&[-1, 0, 1]),
            pts(&[0, 0, 2]),
        )
        .unwrap();
        let d = dist_to_linear(&f, &pts(&[-1, 0, 1])).unwrap();
        assert_eq!((d.value, d.best.get(0, 0).clone()), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn max_of_two_slopes() {
        let f = func("max(x0, 2*x0)");
        let s = pts(&[-2, -1, 0, 1, 2]);
        let r = theta_isometry_check(&f, &s, 0.0).unwrap();
        assert_eq!(r.primal.value, q(1, 2));
        assert_eq!(r.dual.value, q(1, 2));
        assert_eq!(quotient_oracle_1d(&f, &s).unwrap(), q(1, 2));
    }

    #[test]
    fn linear_and_zero_vanish() {
        for text in ["3/2*x0", "0"] {
            let r = theta_isometry_check(&func(text), &pts(&[-3, 1, 4]), 0.0).unwrap();
            assert_eq!((r.primal.value, r.dual.value), (q(0, 1), q(0, 1)));
        }
    }

    #[test]
    fn plane_into_sup_norm() {
        let r2 = Space::new(2, NormKind::L1).unwrap();
        let sup2 = Space::new(2, NormKind::Linf).unwrap();
        let f = FunctionSpec::<Rational>::parse("abs(x0) + x1; max(x0, x1)", r2, sup2).unwrap();
        let s: Vec<_> = [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]]
            .iter()
            .map(|p| Point::from_i64s(p))
            .collect();
        let r = theta_isometry_check(&f, &s, 0.0).unwrap();
        assert!(r.primal.value > q(0, 1));
    }

    #[test]
    fn rejects_non_injective_codomain() {
        let l1 = Space::new(2, NormKind::L1).unwrap();
        let f = FunctionSpec::<Rational>::parse("x0; x0", Space::real_line(), l1).unwrap();
        assert!(matches!(
            dist_to_linear(&f, &pts(&[1, 2])),
            Err(Error::UnsupportedCodomainNorm(_))
        ));
        assert!(matches!(
            kernel_ball_sup(&f, &pts(&[1, 2])),
            Err(Error::UnsupportedCodomainNorm(_))
        ));
    }

    #[test]
    fn float_mode_agrees() {
        let f =
            FunctionSpec::<f64>::parse("sin(x0)", Space::real_line(), Space::real_line()).unwrap();
        let s: Vec<_> = [-2.0, -0.5, 0.7, 1.3, 3.0]
            .iter()
            .map(|&x| Point::scalar(x))
            .collect();
        let r = theta_isometry_check(&f, &s, 1e-9).unwrap();
        assert!((r.primal.value - quotient_oracle_1d(&f, &s).unwrap()).abs() < 1e-9);
    }
}
