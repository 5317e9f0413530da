//! The Y-valued pairing `⟨f, μ⟩ = μ(f)` between `Lip₀(X, Y)` and the free
//! space, its norm identity on finite samples, and the linearity test by
//! annihilation of `ker β`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free_norm::unit_ball_sup;
use crate::funcspec::{distinct, FunctionSpec};
use crate::molecule::Molecule;
use crate::scalar::Scalar;
use crate::space::{NormKind, Point, Space};

/// `Σ aᵢ f(xᵢ)`.
pub fn pair<S: Scalar>(f: &FunctionSpec<S>, m: &Molecule<S>) -> Result<Point<S>> {
    if f.domain() != m.space() {
        return Err(Error::SpaceMismatch(format!(
            "function on {}, molecule on {}",
            f.domain(),
            m.space()
        )));
    }
    m.terms()
        .iter()
        .try_fold(Point::zeros(f.codomain().dim()), |acc, t| {
            Ok(acc.add(&f.evaluate(&t.point)?.scale(&t.coeff)))
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HatNormReport<S> {
    /// Largest difference quotient on the sample.
    pub lip_lower: S,
    /// `sup{‖⟨f, μ⟩‖ : ‖μ‖ ≤ 1, supp μ ⊆ sample}`.
    pub pairing_sup: S,
    pub gap: S,
    /// A molecule attaining `pairing_sup` (not unique).
    pub witness: Molecule<S>,
    /// `gap ≤ 1e-7` in float mode, `gap = 0` in exact mode.
    pub passed: bool,
}

/// Sample points with the origin added when missing.
pub(crate) fn anchored_sample<S: Scalar>(
    space: &Space,
    sample: &[Point<S>],
) -> Result<Vec<Point<S>>> {
    for p in sample {
        space.check(p)?;
    }
    let mut nodes = distinct(sample);
    if !nodes.iter().any(Point::is_zero) {
        nodes.push(Point::zeros(space.dim()));
    }
    if nodes.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    Ok(nodes)
}

/// Compares the sampled Lipschitz constant of `f` with the norm of the
/// functional `μ ↦ ⟨f, μ⟩` restricted to molecules on the sample. The two
/// agree exactly, since the extreme points of that unit ball are normalized
/// differences of point masses.
///
/// The origin is added to the sample when missing. The codomain must be
/// scalar or carry a polyhedral norm (ℓ∞ or ℓ¹).
pub fn hat_norm_check<S: Scalar>(
    f: &FunctionSpec<S>,
    sample: &[Point<S>],
) -> Result<HatNormReport<S>> {
    let space = *f.domain();
    let nodes = anchored_sample(&space, sample)?;
    let functionals = f.codomain().norming_functionals::<S>()?;
    let values: Vec<Point<S>> = nodes.iter().map(|p| f.evaluate(p)).collect::<Result<_>>()?;
    let lip_lower = f.lip_constant_on_sample(&nodes)?;
    let mut best: Option<(S, Molecule<S>)> = None;
    for w in &functionals {
        let weights: Vec<S> = values.iter().map(|v| v.dot(w)).collect();
        let (value, witness) = unit_ball_sup(&space, &nodes, &weights, false)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, witness));
        }
    }
    let (pairing_sup, witness) = best.expect("at least one norming functional");
    let gap = (pairing_sup.clone() - lip_lower.clone()).abs();
    let passed = if S::EXACT {
        gap.is_zero()
    } else {
        gap.to_f64() <= 1e-7
    };
    Ok(HatNormReport {
        lip_lower,
        pairing_sup,
        gap,
        witness,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearityOptions {
    pub trials: usize,
    pub tol: f64,
    /// Coordinates and the ratio `r` are drawn from `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
}

impl Default for LinearityOptions {
    fn default() -> Self {
        Self {
            trials: 200,
            tol: 1e-8,
            lo: -10.0,
            hi: 10.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearityVerdict<S> {
    /// No sampled generator separated `f` from the linear maps. One-sided.
    pub is_linear: bool,
    /// The generator with the largest pairing, when it exceeds `tol`.
    pub witness: Option<Molecule<S>>,
    pub max_violation: f64,
}

/// Random draws land on the dyadic grid `2⁻¹⁰ℤ` so they are exact in both modes.
fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x: f64 = rng.gen_range(lo..=hi);
    (x * 1024.0).round() / 1024.0
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Pairs `f` with random generators `−r δ_{x₁} − δ_{x₂} + δ_{r x₁ + x₂}` of
/// `ker β`; a linear map annihilates all of them. Trials are independent
/// and seeded per index, so the verdict does not depend on thread count.
pub fn linearity_test<S: Scalar>(
    f: &FunctionSpec<S>,
    opts: &LinearityOptions,
) -> Result<LinearityVerdict<S>> {
    let space = *f.domain();
    let n = space.dim();
    let outcomes: Vec<(f64, Molecule<S>)> = (0..opts.trials.max(1))
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(opts.seed, trial);
            let r = S::from_f64(dyadic(&mut rng, opts.lo, opts.hi));
            let mut draw = || {
                Point::new(
                    (0..n)
                        .map(|_| S::from_f64(dyadic(&mut rng, opts.lo, opts.hi)))
                        .collect(),
                )
            };
            let x1 = draw();
            let x2 = draw();
            let m = Molecule::elementary_kernel(space, r, x1, x2)?;
            let v = pair(f, &m)?;
            let size = f.codomain().norm(&v.to_f64())?;
            Ok((size, m))
        })
        .collect::<Result<_>>()?;
    let (max_violation, worst) = outcomes
        .into_iter()
        .fold((0.0, None), |(best, w), (size, m)| {
            if size > best {
                (size, Some(m))
            } else {
                (best, w)
            }
        });
    let is_linear = max_violation <= opts.tol;
    Ok(LinearityVerdict {
        is_linear,
        witness: if is_linear { None } else { worst },
        max_violation,
    })
}

/// `x ↦ max(0, r − ‖x − c‖)`: a tent of height `r` at `c`, vanishing at the
/// origin when `r ≤ ‖c‖`. Piecewise affine for ℓ¹/ℓ∞; ℓ² tents need float mode.
pub fn hat_potential<S: Scalar>(
    space: Space,
    center: &Point<S>,
    radius: &S,
) -> Result<FunctionSpec<S>> {
    space.check(center)?;
    let codomain = Space::real_line();
    let n = space.dim();
    if n > 1 && space.norm_kind() == NormKind::L2 {
        if S::EXACT {
            return Err(Error::InexactNorm("l2 tent".into()));
        }
        let (c, r) = (center.clone(), radius.clone());
        return FunctionSpec::from_fn(space, codomain, move |x| {
            let d = space.distance(x, &c).expect("same dimension");
            vec![(r.clone() - d).max_of(S::zero())]
        });
    }
    let offsets: Vec<String> = (0..n)
        .map(|i| format!("abs(x{i} - ({}))", center[i].render()))
        .collect();
    let dist = match space.norm_kind() {
        NormKind::Linf => offsets
            .iter()
            .skip(1)
            .fold(offsets[0].clone(), |acc, o| format!("max({acc}, {o})")),
        _ => offsets.join(" + "),
    };
    FunctionSpec::parse(
        &format!("max(0, {} - ({dist}))", radius.render()),
        space,
        codomain,
    )
}

/// A tent potential on which `m` pairs to a nonzero value, for nonzero
/// canonical `m`.
pub fn separating_potential<S: Scalar>(m: &Molecule<S>) -> Result<Option<FunctionSpec<S>>> {
    let m = m.canonicalize();
    let Some(first) = m.terms().first() else {
        return Ok(None);
    };
    let space = *m.space();
    let mut radius = space.norm(&first.point)?;
    for t in &m.terms()[1..] {
        radius = radius.min_of(space.distance(&first.point, &t.point)?);
    }
    let radius = radius / S::from_i64(2);
    hat_potential(space, &first.point, &radius).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::LinearMap;
    use crate::scalar::{rational, Rational};

    fn line() -> Space {
        Space::real_line()
    }

    fn q(p: i64) -> Rational {
        rational(p, 1)
    }

    fn line_mol(terms: &[(i64, i64)]) -> Molecule<Rational> {
        Molecule::new(
            line(),
            terms
                .iter()
                .map(|&(a, x)| (q(a), Point::scalar(q(x))))
                .collect(),
        )
        .unwrap()
        .canonicalize()
    }

    fn pts(xs: &[i64]) -> Vec<Point<Rational>> {
        xs.iter().map(|&x| Point::scalar(q(x))).collect()
    }

    #[test]
    fn pairing_examples() {
        let sq =
            FunctionSpec::from_table(line(), line(), pts(&[-1, 0, 1]), pts(&[1, 0, 1])).unwrap();
        assert_eq!(
            pair(&sq, &line_mol(&[(1, 1), (1, -1)])).unwrap(),
            Point::scalar(q(2))
        );
        let five = FunctionSpec::parse("5*x0", line(), line()).unwrap();
        assert!(pair(&five, &line_mol(&[(2, 1), (-1, 2)]))
            .unwrap()
            .is_zero());
        assert!(pair(&sq, &line_mol(&[])).unwrap().is_zero());
    }

    #[test]
    fn pairing_checks_spaces() {
        let r2 = Space::new(2, NormKind::L1).unwrap();
        let f = FunctionSpec::<Rational>::parse("x0", r2, line()).unwrap();
        assert!(matches!(
            pair(&f, &line_mol(&[(1, 1)])),
            Err(Error::SpaceMismatch(_))
        ));
    }

    #[test]
    fn hat_norm_examples() {
        let abs = FunctionSpec::parse("abs(x0)", line(), line()).unwrap();
        let rep = hat_norm_check(&abs, &pts(&[-1, 0, 1])).unwrap();
        assert_eq!(
            (rep.lip_lower.clone(), rep.pairing_sup.clone()),
            (q(1), q(1))
        );
        assert!(rep.passed);
        let two = FunctionSpec::parse("2*x0", line(), line()).unwrap();
        let rep = hat_norm_check(&two, &pts(&[0, 1, 2])).unwrap();
        assert_eq!((rep.lip_lower, rep.pairing_sup), (q(2), q(2)));
        let zero = FunctionSpec::parse("0", line(), line()).unwrap();
        let rep = hat_norm_check(&zero, &pts(&[0, 1, 2])).unwrap();
        assert_eq!((rep.lip_lower, rep.pairing_sup), (q(0), q(0)));
    }

    #[test]
    fn hat_norm_vector_codomain() {
        let r2 = Space::new(2, NormKind::L1).unwrap();
        let sup2 = Space::new(2, NormKind::Linf).unwrap();
        let f = FunctionSpec::parse("abs(x0) - x1; max(x0, 2*x1)", r2, sup2).unwrap();
        let sample: Vec<Point<Rational>> = [[0, 0], [1, 0], [0, 1], [-1, 2], [2, -1]]
            .iter()
            .map(|p| Point::from_i64s(p))
            .collect();
        let rep = hat_norm_check(&f, &sample).unwrap();
        assert!(rep.passed, "{rep:?}");
        let l2 = Space::new(2, NormKind::L2).unwrap();
        let g = FunctionSpec::<f64>::parse("x0; x1", r2, l2).unwrap();
        assert!(matches!(
            hat_norm_check(&g, &[Point::new(vec![1.0, 0.0])]),
            Err(Error::UnsupportedCodomainNorm(_))
        ));
    }

    #[test]
    fn linearity_examples() {
        let opts = LinearityOptions::default();
        let five = FunctionSpec::<f64>::parse("5*x0", line(), line()).unwrap();
        assert!(linearity_test(&five, &opts).unwrap().is_linear);

        let abs = FunctionSpec::<f64>::parse("abs(x0)", line(), line()).unwrap();
        let v = linearity_test(&abs, &opts).unwrap();
        assert!(!v.is_linear);
        let w = v.witness.unwrap();
        assert!(w.is_kernel(0.0));
        assert!(pair(&abs, &w).unwrap()[0].abs() > 1e-3);
        // the hand-picked generator r = 1, x1 = 1, x2 = -1
        let g = Molecule::elementary_kernel(line(), 1.0, Point::scalar(1.0), Point::scalar(-1.0))
            .unwrap();
        assert_eq!(pair(&abs, &g).unwrap()[0], -2.0);

        let wobble = FunctionSpec::<f64>::parse("x0 + sin(x0)", line(), line()).unwrap();
        let opts3 = LinearityOptions {
            lo: -3.0,
            hi: 3.0,
            tol: 1e-6,
            ..opts
        };
        assert!(!linearity_test(&wobble, &opts3).unwrap().is_linear);
        let g = Molecule::elementary_kernel(line(), 1.0, Point::scalar(1.0), Point::scalar(1.0))
            .unwrap();
        let direct = 2f64.sin() - 2.0 * 1f64.sin();
        assert!((pair(&wobble, &g).unwrap()[0] - direct).abs() < 1e-15);
        assert!((direct + 0.7736).abs() < 1e-3);
    }

    #[test]
    fn linearity_is_exact_in_rational_mode() {
        let r2 = Space::new(2, NormKind::Linf).unwrap();
        let t =
            LinearMap::from_rows(vec![vec![q(1) / q(3), q(-7)], vec![q(2), q(5) / q(11)]]).unwrap();
        let f = FunctionSpec::linear(t, r2, r2).unwrap();
        let v = linearity_test(
            &f,
            &LinearityOptions {
                tol: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(v.is_linear);
        assert_eq!(v.max_violation, 0.0);
    }

    #[test]
    fn linear_pairing_factors_through_beta() {
        let r2 = Space::new(2, NormKind::L1).unwrap();
        let t = LinearMap::from_rows(vec![vec![q(2), q(-1)]]).unwrap();
        let f = FunctionSpec::linear(t.clone(), r2, line()).unwrap();
        let m = Molecule::new(
            r2,
            vec![
                (q(3), Point::from_i64s(&[1, 2])),
                (q(-2), Point::from_i64s(&[4, -1])),
            ],
        )
        .unwrap();
        assert_eq!(pair(&f, &m).unwrap().into_coords(), t.apply(&m.beta()));
    }

    #[test]
    fn tents_separate() {
        for kind in [NormKind::L1, NormKind::Linf] {
            let s = Space::new(2, kind).unwrap();
            let m = Molecule::new(
                s,
                vec![
                    (q(1), Point::from_i64s(&[1, 1])),
                    (q(-1), Point::from_i64s(&[2, 1])),
                ],
            )
            .unwrap();
            let f = separating_potential(&m).unwrap().unwrap();
            assert!(!pair(&f, &m).unwrap().is_zero());
        }
        assert!(separating_potential(&line_mol(&[])).unwrap().is_none());
    }
}
