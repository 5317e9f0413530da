//! Seeded batteries of property checks, grouped by topic.
//!
//! Every case draws its instance from a generator seeded by the run seed,
//! the check name and the case index, and cases are gathered in index
//! order, so a report depends only on its options.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::duality::{
    hat_norm_check, linearity_test, pair, separating_potential, LinearityOptions,
};
use crate::error::{Error, Result};
use crate::free_norm::{free_norm, free_norm_dual, free_norm_primal};
use crate::funcspec::FunctionSpec;
use crate::linear::LinearMap;
use crate::mean_projection::{decompose, project_linear, WindowSchedule};
use crate::molecule::{eta, eta_inverse, Molecule};
use crate::quotient::{dist_to_linear, quotient_oracle_1d, theta_isometry_check};
use crate::random;
use crate::real_line::{pairing_via_derivative, phi_map, StepFunction};
use crate::scalar::{Rational, Scalar};
use crate::space::{NormKind, Point, Space};

/// Relative tolerance for float comparisons of LP values.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Projection onto linear maps and the norm equivalence.
    S2,
    /// Free norm, duality of the two programs, β and η.
    S3,
    /// Pairing, the Lipschitz-norm identity and the linearity test.
    S4,
    /// Quotient by the linear maps.
    S5,
    /// The step-function model on the line.
    S6,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::S2, Suite::S3, Suite::S4, Suite::S5, Suite::S6],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s2" => Ok(Suite::S2),
            "s3" => Ok(Suite::S3),
            "s4" => Ok(Suite::S4),
            "s5" => Ok(Suite::S5),
            "s6" => Ok(Suite::S6),
            "all" => Ok(Suite::All),
            other => Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown suite {other:?}"),
            }),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::S2 => "s2",
            Suite::S3 => "s3",
            Suite::S4 => "s4",
            Suite::S5 => "s5",
            Suite::S6 => "s6",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub seed: u64,
    /// Rational arithmetic where the check allows it.
    pub exact: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            seed: 42,
            exact: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub mode: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// The first failing case, if any.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub exact: bool,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// `Ok(None)` for a passing case, `Ok(Some(why))` for a failing one.
type Outcome = Result<Option<String>>;

fn fnv(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

fn mode_name<S: Scalar>() -> &'static str {
    if S::EXACT {
        "exact"
    } else {
        "float"
    }
}

struct Runner {
    suite: Suite,
    seed: u64,
    results: Vec<CheckResult>,
}

impl Runner {
    fn check<S: Scalar>(
        &mut self,
        name: &'static str,
        cases: usize,
        case: impl Fn(&mut ChaCha8Rng) -> Outcome + Sync,
    ) {
        let base = self.seed ^ fnv(name);
        let outcomes: Vec<Option<String>> = (0..cases)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(i as u64));
                match case(&mut rng) {
                    Ok(o) => o.map(|why| format!("case {i}: {why}")),
                    Err(e) => Some(format!("case {i}: error: {e}")),
                }
            })
            .collect();
        let failures = outcomes.iter().filter(|o| o.is_some()).count();
        self.results.push(CheckResult {
            suite: self.suite,
            name,
            mode: mode_name::<S>(),
            cases,
            failures,
            detail: outcomes.into_iter().flatten().next(),
        });
    }
}

fn expect(ok: bool, why: impl FnOnce() -> String) -> Outcome {
    Ok((!ok).then(why))
}

fn le_tol<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a <= b
    } else {
        a.to_f64() <= b.to_f64() + FLOAT_TOL * b.to_f64().abs().max(1.0)
    }
}

/// Spaces whose norms are rational on rational points in exact mode.
fn any_space<S: Scalar>(rng: &mut ChaCha8Rng, max_dim: usize) -> Space {
    if S::EXACT {
        random::polyhedral_space(rng, max_dim)
    } else {
        random::space(rng, max_dim)
    }
}

fn nonzero_point<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> Point<S> {
    loop {
        let p = random::point(rng, dim, 6);
        if !p.is_zero() {
            return p;
        }
    }
}

fn suite_s3<S: Scalar>(r: &mut Runner) {
    r.check::<S>("delta_isometry", 60, |rng| {
        let space = any_space::<S>(rng, 3);
        let x: Point<S> = nonzero_point(rng, space.dim());
        let y: Point<S> = nonzero_point(rng, space.dim());
        let nx = free_norm(&Molecule::delta(space, x.clone())?)?;
        let dx = space.norm(&x)?;
        if !nx.close_to(&dx, FLOAT_TOL) {
            return Ok(Some(format!(
                "‖δ{x}‖ = {} but ‖x‖ = {}",
                nx.render(),
                dx.render()
            )));
        }
        let m = Molecule::delta(space, x.clone())?.sub(&Molecule::delta(space, y.clone())?)?;
        let (nm, dxy) = (free_norm(&m)?, space.distance(&x, &y)?);
        expect(nm.close_to(&dxy, FLOAT_TOL), || {
            format!("‖δx − δy‖ = {} but ‖x − y‖ = {}", nm.render(), dxy.render())
        })
    });
    r.check::<S>("strong_duality", 60, |rng| {
        let space = any_space::<S>(rng, 3);
        let m: Molecule<S> = random::molecule_upto(rng, space, 6);
        let (d, p) = (free_norm_dual(&m)?.value, free_norm_primal(&m)?.value);
        expect(d.close_to(&p, FLOAT_TOL), || {
            format!("dual {} primal {} for {m}", d.render(), p.render())
        })
    });
    r.check::<S>("beta_contraction", 60, |rng| {
        let space = any_space::<S>(rng, 3);
        let m: Molecule<S> = random::molecule_upto(rng, space, 6);
        let (b, n) = (space.norm(&m.beta())?, free_norm(&m)?);
        expect(le_tol(&b, &n), || {
            format!("‖β(m)‖ = {} > ‖m‖ = {}", b.render(), n.render())
        })
    });
    r.check::<S>("norm_axioms", 40, |rng| {
        let space = any_space::<S>(rng, 2);
        let m1: Molecule<S> = random::molecule_upto(rng, space, 4);
        let m2: Molecule<S> = random::molecule_upto(rng, space, 4);
        let s: S = random::scalar(rng, 5);
        let scaled = free_norm(&m1.scale(&s))?;
        let expected = s.abs() * free_norm(&m1)?;
        if !scaled.close_to(&expected, FLOAT_TOL) {
            return Ok(Some(format!(
                "‖s·m‖ = {} vs |s|‖m‖ = {}",
                scaled.render(),
                expected.render()
            )));
        }
        let lhs = free_norm(&m1.add(&m2)?)?;
        let rhs = free_norm(&m1)? + free_norm(&m2)?;
        expect(le_tol(&lhs, &rhs), || {
            format!("triangle: {} > {}", lhs.render(), rhs.render())
        })
    });
    r.check::<S>("eta_bounds", 40, |rng| {
        let space = any_space::<S>(rng, 2);
        let m1: Molecule<S> = random::molecule_upto(rng, space, 4);
        let m2: Molecule<S> = random::molecule_upto(rng, space, 4);
        let (p, q) = (eta_inverse(&m1)?, eta_inverse(&m2)?);
        if eta(&p)? != m1 || eta_inverse(&eta(&p)?)? != p {
            return Ok(Some(format!("η round trip failed for {m1}")));
        }
        let pair_dist = p.distance_with(&q, free_norm)?;
        let mol_dist = free_norm(&m1.sub(&m2)?)?;
        if !le_tol(&mol_dist, &pair_dist) {
            return Ok(Some(format!(
                "η stretched {} to {}",
                pair_dist.render(),
                mol_dist.render()
            )));
        }
        let three = S::from_i64(3) * mol_dist.clone();
        expect(le_tol(&pair_dist, &three), || {
            format!("η⁻¹ ratio {} / {}", pair_dist.render(), mol_dist.render())
        })
    });
}

fn suite_s4<S: Scalar>(r: &mut Runner) {
    r.check::<S>("hat_norm_identity", 30, |rng| {
        let domain = any_space::<S>(rng, 2);
        let codomain = random::polyhedral_space(rng, 2);
        let f: FunctionSpec<S> = random::piecewise_affine(rng, domain, codomain);
        let sample = random::anchored_sample(rng, domain.dim(), 5);
        let rep = hat_norm_check(&f, &sample)?;
        expect(rep.passed, || {
            format!(
                "Lip {} vs pairing sup {}",
                rep.lip_lower.render(),
                rep.pairing_sup.render()
            )
        })
    });
    let tol = if S::EXACT { 0.0 } else { 1e-8 };
    r.check::<S>("linear_maps_annihilate_kernel", 10, |rng| {
        let domain = any_space::<S>(rng, 3);
        let codomain = any_space::<S>(rng, 3);
        let t: LinearMap<S> = random::linear_map(rng, codomain.dim(), domain.dim());
        let f = FunctionSpec::linear(t, domain, codomain)?;
        let v = linearity_test(
            &f,
            &LinearityOptions {
                seed: rng.gen(),
                tol,
                ..Default::default()
            },
        )?;
        expect(v.is_linear, || format!("violation {:e}", v.max_violation))
    });
    r.check::<S>("nonlinear_maps_have_witnesses", 2, |rng| {
        let texts = ["abs(x0)", "max(x0, 2*x0)"];
        for text in texts {
            let f = FunctionSpec::<S>::parse(text, Space::real_line(), Space::real_line())?;
            let v = linearity_test(
                &f,
                &LinearityOptions {
                    seed: rng.gen(),
                    tol,
                    ..Default::default()
                },
            )?;
            let Some(w) = v.witness else {
                return Ok(Some(format!("{text}: no witness")));
            };
            let size = pair(&f, &w)?[0].abs().to_f64();
            if !w.is_kernel(1e-9) || size <= 1e-3 {
                return Ok(Some(format!("{text}: weak witness {w}")));
            }
        }
        Ok(None)
    });
    r.check::<S>("pairing_bilinear", 30, |rng| {
        let domain = any_space::<S>(rng, 2);
        let codomain = random::polyhedral_space(rng, 2);
        let f: FunctionSpec<S> = random::piecewise_affine(rng, domain, codomain);
        let g: FunctionSpec<S> = random::piecewise_affine(rng, domain, codomain);
        let m1: Molecule<S> = random::molecule(rng, domain, 3);
        let m2: Molecule<S> = random::molecule(rng, domain, 3);
        let s: S = random::scalar(rng, 4);
        let combo = FunctionSpec::combination(vec![(s.clone(), f.clone()), (S::one(), g.clone())])?;
        let left = pair(&combo, &m1)?;
        let right = pair(&f, &m1)?.scale(&s).add(&pair(&g, &m1)?);
        let same = |a: &Point<S>, b: &Point<S>| {
            a.iter()
                .zip(b.iter())
                .all(|(x, y)| x.close_to(y, FLOAT_TOL))
        };
        if !same(&left, &right) {
            return Ok(Some(format!("function slot: {left} vs {right}")));
        }
        let left = pair(&f, &m1.scale(&s).add(&m2)?)?;
        let right = pair(&f, &m1)?.scale(&s).add(&pair(&f, &m2)?);
        expect(same(&left, &right), || {
            format!("molecule slot: {left} vs {right}")
        })
    });
    r.check::<S>("linear_pairing_is_beta", 30, |rng| {
        let domain = any_space::<S>(rng, 3);
        let rows = rng.gen_range(1..=3);
        let t: LinearMap<S> = random::linear_map(rng, rows, domain.dim());
        let codomain = Space::new(t.rows(), NormKind::Linf)?;
        let f = FunctionSpec::linear(t.clone(), domain, codomain)?;
        let m: Molecule<S> = random::molecule_upto(rng, domain, 5);
        let (lhs, rhs) = (pair(&f, &m)?, Point::new(t.apply(&m.beta())));
        let ok = lhs
            .iter()
            .zip(rhs.iter())
            .all(|(a, b)| a.close_to(b, FLOAT_TOL));
        expect(ok, || format!("⟨T, m⟩ = {lhs}, T(β m) = {rhs}"))
    });
    r.check::<S>("pairing_bound", 30, |rng| {
        let domain = any_space::<S>(rng, 2);
        let f: FunctionSpec<S> = random::piecewise_affine(rng, domain, Space::real_line());
        let m: Molecule<S> = random::molecule_upto(rng, domain, 5);
        let mut support = m.support();
        support.push(Point::zeros(domain.dim()));
        if support.len() < 2 {
            return Ok(None);
        }
        let bound = f.lip_constant_on_sample(&support)? * free_norm(&m)?;
        let value = pair(&f, &m)?[0].abs();
        expect(le_tol(&value, &bound), || {
            format!("|⟨f, m⟩| = {} > {}", value.render(), bound.render())
        })
    });
    r.check::<S>("molecules_are_separated", 30, |rng| {
        let domain = any_space::<S>(rng, 2);
        let m: Molecule<S> = random::molecule_upto(rng, domain, 5);
        let Some(f) = separating_potential(&m)? else {
            return Ok(Some("no potential".into()));
        };
        let value = pair(&f, &m)?[0].clone();
        expect(!value.is_zero(), || format!("tent does not separate {m}"))
    });
}

fn suite_s4_float(r: &mut Runner) {
    r.check::<f64>("oscillating_map_has_witness", 1, |rng| {
        let f = FunctionSpec::<f64>::parse("x0 + sin(x0)", Space::real_line(), Space::real_line())?;
        let opts = LinearityOptions {
            lo: -3.0,
            hi: 3.0,
            tol: 1e-6,
            seed: rng.gen(),
            ..Default::default()
        };
        let v = linearity_test(&f, &opts)?;
        let ok = v
            .witness
            .as_ref()
            .is_some_and(|w| pair(&f, w).map(|p| p[0].abs() > 1e-3).unwrap_or(false));
        expect(ok, || format!("max violation {:e}", v.max_violation))
    });
}

fn suite_s5<S: Scalar>(r: &mut Runner) {
    let tol = if S::EXACT { 0.0 } else { FLOAT_TOL };
    r.check::<S>("theta_isometry", 30, |rng| {
        let domain = random::polyhedral_space(rng, 2);
        let codomain = Space::new(rng.gen_range(1..=2), NormKind::Linf)?;
        let f: FunctionSpec<S> = random::piecewise_affine(rng, domain, codomain);
        let size = rng.gen_range(2..=6);
        let sample = random::anchored_sample(rng, domain.dim(), size);
        match theta_isometry_check(&f, &sample, tol) {
            Ok(_) => Ok(None),
            Err(Error::IsometryViolation { primal, dual }) => {
                Ok(Some(format!("primal {primal} dual {dual}")))
            }
            Err(e) => Err(e),
        }
    });
    r.check::<S>("line_oracle", 30, |rng| {
        let f: FunctionSpec<S> =
            random::piecewise_affine(rng, Space::real_line(), Space::real_line());
        let size = rng.gen_range(2..=6);
        let sample = random::anchored_sample(rng, 1, size);
        let (lp, oracle) = (
            dist_to_linear(&f, &sample)?.value,
            quotient_oracle_1d(&f, &sample)?,
        );
        expect(lp.close_to(&oracle, FLOAT_TOL), || {
            format!("LP {} oracle {}", lp.render(), oracle.render())
        })
    });
    r.check::<S>("sample_monotone", 20, |rng| {
        let domain = random::polyhedral_space(rng, 2);
        let f: FunctionSpec<S> = random::piecewise_affine(rng, domain, Space::real_line());
        let mut sample = random::anchored_sample(rng, domain.dim(), 4);
        let small = dist_to_linear(&f, &sample)?.value;
        sample.push(random::point(rng, domain.dim(), 5));
        let large = dist_to_linear(&f, &sample)?.value;
        expect(le_tol(&small, &large), || {
            format!("{} dropped to {}", small.render(), large.render())
        })
    });
    r.check::<S>("linear_maps_vanish", 20, |rng| {
        let domain = random::polyhedral_space(rng, 2);
        let t: LinearMap<S> = random::linear_map(rng, 1, domain.dim());
        let f = FunctionSpec::linear(t, domain, Space::real_line())?;
        let sample = random::anchored_sample(rng, domain.dim(), 5);
        let rep = theta_isometry_check(&f, &sample, tol)?;
        let zero = rep.primal.value.to_f64().abs() <= tol && rep.dual.value.to_f64().abs() <= tol;
        expect(zero, || format!("distance {}", rep.primal.value.render()))
    });
}

fn line_molecule(rng: &mut ChaCha8Rng) -> Molecule<Rational> {
    random::molecule_upto(rng, Space::real_line(), 6)
}

fn random_step(rng: &mut ChaCha8Rng) -> StepFunction {
    let mut breaks: Vec<Rational> = (0..rng.gen_range(2..=6))
        .map(|_| random::rational_in(rng, 8))
        .collect();
    breaks.sort();
    breaks.dedup();
    if breaks.len() < 2 {
        return StepFunction::zero();
    }
    let values = (1..breaks.len())
        .map(|_| random::rational_in(rng, 3))
        .collect();
    StepFunction::new(breaks, values).expect("sorted distinct breakpoints")
}

fn suite_s6(r: &mut Runner) {
    r.check::<Rational>("phi_isometry", 60, |rng| {
        let m = line_molecule(rng);
        let (l1, lp) = (phi_map(&m)?.l1_norm(), free_norm(&m)?);
        expect(l1 == lp, || format!("‖φ(m)‖₁ = {l1}, ‖m‖ = {lp} for {m}"))
    });
    r.check::<Rational>("beta_is_integral", 60, |rng| {
        let m = line_molecule(rng);
        let (i, b) = (phi_map(&m)?.integral(), m.beta()[0].clone());
        expect(i == b, || format!("∫φ(m) = {i}, β(m) = {b}"))
    });
    r.check::<Rational>("kernel_iff_zero_integral", 60, |rng| {
        let mut m = line_molecule(rng);
        if rng.gen_bool(0.5) {
            m = eta_inverse(&m)?.kernel_part;
        }
        let zero = phi_map(&m)?.integral() == Rational::from_integer(0.into());
        expect(zero == m.is_kernel(0.0), || format!("mismatch for {m}"))
    });
    r.check::<Rational>("phi_linear", 60, |rng| {
        let (m1, m2) = (line_molecule(rng), line_molecule(rng));
        let s = random::rational_in(rng, 4);
        let left = phi_map(&m1.scale(&s).add(&m2)?)?;
        let right = phi_map(&m1)?.scale(&s).add(&phi_map(&m2)?);
        expect(left == right, || format!("{left} vs {right}"))
    });
    r.check::<Rational>("derivative_pairing", 60, |rng| {
        let fprime = random_step(rng);
        let m = line_molecule(rng);
        let g = fprime.clone();
        let f = FunctionSpec::from_fn(
            Space::real_line(),
            Space::real_line(),
            move |x: &[Rational]| vec![g.primitive(&x[0])],
        )?;
        let (direct, via) = (
            pair(&f, &m)?[0].clone(),
            pairing_via_derivative(&fprime, &m)?,
        );
        // Outside its breakpoints the derivative pairing extends fprime by its
        // end values while `primitive` treats it as zero, so compare on the span.
        let inside = fprime
            .breaks()
            .first()
            .zip(fprime.breaks().last())
            .is_some_and(|(lo, hi)| {
                m.terms()
                    .iter()
                    .all(|t| &t.point[0] >= lo && &t.point[0] <= hi)
                    && lo <= &Rational::from_integer(0.into())
                    && hi >= &Rational::from_integer(0.into())
            });
        expect(!inside || direct == via, || {
            format!("∫f′φ(m) = {via}, ⟨f, m⟩ = {direct}")
        })
    });
}

fn suite_s2(r: &mut Runner) {
    let sched = |n: usize| WindowSchedule::default_for(n);
    r.check::<f64>("linear_maps_fixed", 10, |rng| {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let t: LinearMap<f64> = random::linear_map(rng, m, n);
        let domain = Space::new(n, random::norm_kind(rng))?;
        let codomain = Space::new(m, NormKind::Linf)?;
        let p = project_linear(
            &FunctionSpec::linear(t.clone(), domain, codomain)?,
            &sched(n),
        )?;
        let err = p.map.max_abs_diff(&t);
        expect(err <= 1e-12, || format!("entry error {err:e}"))
    });
    r.check::<f64>("oscillation_removed", 4, |rng| {
        let n = rng.gen_range(1..=2);
        let t: LinearMap<f64> = random::linear_map(rng, 1, n);
        let wobble = random::rational_in(rng, 2).to_f64();
        let axis = rng.gen_range(0..n);
        let domain = Space::new(n, NormKind::L1)?;
        let base = FunctionSpec::linear(t.clone(), domain, Space::real_line())?;
        let bump = FunctionSpec::parse(&format!("sin(x{axis})"), domain, Space::real_line())?;
        let f = FunctionSpec::combination(vec![(1.0, base), (wobble, bump)])?;
        let p = project_linear(&f, &sched(n))?;
        let err = p.map.max_abs_diff(&t);
        expect(err <= 1e-3, || format!("entry error {err:e}"))
    });
    r.check::<f64>("abs_projects_to_zero", 1, |_| {
        let f = FunctionSpec::<f64>::parse("abs(x0)", Space::real_line(), Space::real_line())?;
        let p = project_linear(&f, &sched(1))?;
        let err = p.map.get(0, 0).abs();
        expect(err <= 1e-3, || format!("P(abs) = {err:e}"))
    });
    r.check::<f64>("norm_equivalence", 3, |rng| {
        let texts = ["2*x0 + sin(x0)", "abs(x0)", "-3/2*x0 + abs(x0 - 1) - 1"];
        let text = texts[rng.gen_range(0..texts.len())];
        let f = FunctionSpec::<f64>::parse(text, Space::real_line(), Space::real_line())?;
        let sample: Vec<Point<f64>> = (-40..=40).map(|k| Point::scalar(k as f64 / 8.0)).collect();
        let d = decompose(&f, &sample, &sched(1))?;
        let ok = !d.projection.converged || (d.lower_holds && d.upper_holds);
        expect(ok, || {
            format!(
                "{text}: lip {} vs ‖T‖ + residual {}",
                d.lip,
                d.operator_norm + d.residual_lip
            )
        })
    });
}

/// Runs the selected suites. Exact mode uses rationals wherever the check
/// has no transcendental input; the projection suite always uses floats.
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let mut results = Vec::new();
    for suite in opts.suite.members() {
        let mut r = Runner {
            suite,
            seed: opts.seed,
            results: Vec::new(),
        };
        match (suite, opts.exact) {
            (Suite::S2, _) => suite_s2(&mut r),
            (Suite::S3, true) => suite_s3::<Rational>(&mut r),
            (Suite::S3, false) => suite_s3::<f64>(&mut r),
            (Suite::S4, true) => {
                suite_s4::<Rational>(&mut r);
                suite_s4_float(&mut r);
            }
            (Suite::S4, false) => {
                suite_s4::<f64>(&mut r);
                suite_s4_float(&mut r);
            }
            (Suite::S5, true) => suite_s5::<Rational>(&mut r),
            (Suite::S5, false) => suite_s5::<f64>(&mut r),
            (Suite::S6, _) => suite_s6(&mut r),
            (Suite::All, _) => unreachable!("expanded by members"),
        }
        results.extend(r.results);
    }
    VerifyReport {
        suite: opts.suite,
        seed: opts.seed,
        exact: opts.exact,
        passed: results.iter().all(|c| c.failures == 0),
        checks: results,
    }
}
