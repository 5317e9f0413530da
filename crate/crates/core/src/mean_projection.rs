//! A computable stand-in for an invariant mean on bounded maps, and the
//! projection `P(f)(z) = 𝓜(φ_f(z))` it induces onto linear maps.
//!
//! The mean is realized by averaging over growing centered cubes. This only
//! converges on a restricted class of maps (periodic, odd, asymptotically
//! constant, ...); non-convergence is reported through
//! [`MeanEstimate::converged`] instead of being silently averaged away.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{Body, FunctionSpec};
use crate::linear::LinearMap;
use crate::scalar::Scalar;
use crate::space::Point;

/// Above this many evaluations per level the grid rule refuses to run.
pub const MAX_WINDOW_POINTS: usize = 5_000_000;

const CHUNK: usize = 2048;
const ADDITIVITY_PAIRS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Rule {
    /// Midpoint rule; `points_per_dim` nodes per axis on the base window,
    /// with the spacing kept fixed as the window grows.
    Grid { points_per_dim: usize },
    /// Centered Latin hypercube: every axis sees each of `samples` strata
    /// exactly once, paired across axes by seeded random permutations.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Level `k = 1..=levels` averages over the cube of half-width
/// `base_radius · growth^(k−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSchedule {
    pub base_radius: f64,
    pub growth: f64,
    pub levels: usize,
    pub rule: Rule,
    /// Convergence threshold on the last step `‖A_K − A_{K−1}‖`.
    pub tol: f64,
}

impl WindowSchedule {
    pub fn new(base_radius: f64, growth: f64, levels: usize, rule: Rule, tol: f64) -> Result<Self> {
        let sched = Self {
            base_radius,
            growth,
            levels,
            rule,
            tol,
        };
        sched.validate()?;
        Ok(sched)
    }

    /// Grid rule on the line, Latin hypercube in higher dimensions.
    pub fn default_for(dim: usize) -> Self {
        let rule = if dim <= 1 {
            Rule::Grid {
                points_per_dim: 129,
            }
        } else {
            Rule::MonteCarlo {
                samples: 20_000,
                seed: 42,
            }
        };
        Self {
            base_radius: 8.0,
            growth: 2.0,
            levels: 8,
            rule,
            tol: 1e-4,
        }
    }

    fn validate(&self) -> Result<()> {
        let rule_ok = match self.rule {
            Rule::Grid { points_per_dim } => points_per_dim >= 1,
            Rule::MonteCarlo { samples, .. } => samples >= 1,
        };
        if self.base_radius > 0.0
            && self.growth > 1.0
            && self.levels >= 2
            && rule_ok
            && self.tol >= 0.0
        {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "invalid window schedule {self:?}"
            )))
        }
    }

    pub fn radius(&self, level: usize) -> f64 {
        self.base_radius * self.growth.powi(level as i32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanEstimate {
    /// The last level average.
    pub value: Vec<f64>,
    pub converged: bool,
    /// Per-level averages `A₁, A₂, …`.
    pub levels: Vec<Vec<f64>>,
    /// `‖A_K − A_{K−1}‖` in the codomain norm (zero for constants).
    pub last_step: f64,
}

impl MeanEstimate {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotAdmissible {
                defect: self.last_step,
            })
        }
    }
}

/// `x' ↦ f(x + x') − f(x')`, bounded by `Lip(f)·‖x‖`.
///
/// Linear and constant bodies translate to constants, and combinations
/// translate termwise, so the averaging can skip integration for them.
pub fn phi_translate<S: Scalar>(f: &FunctionSpec<S>, x: &Point<S>) -> Result<FunctionSpec<S>> {
    let (domain, codomain) = (*f.domain(), *f.codomain());
    domain.check(x)?;
    match f.body() {
        Body::Linear(t) => FunctionSpec::constant(domain, codomain, Point::new(t.apply(x))),
        Body::Constant(_) => FunctionSpec::constant(domain, codomain, Point::zeros(codomain.dim())),
        Body::Combination(terms) => {
            let parts = terms
                .iter()
                .map(|(c, g)| Ok((c.clone(), phi_translate(g, x)?)))
                .collect::<Result<Vec<_>>>()?;
            FunctionSpec::combination(parts)
        }
        _ => f.translated(x.clone()),
    }
}

/// The constant value of `g`, when its body makes it evident.
fn constant_value(g: &FunctionSpec<f64>) -> Option<Vec<f64>> {
    match g.body() {
        Body::Constant(c) => Some(c.coords().to_vec()),
        Body::Combination(terms) => {
            let mut acc = vec![0.0; g.codomain().dim()];
            for (c, h) in terms {
                for (a, v) in acc.iter_mut().zip(constant_value(h)?) {
                    *a += c * v;
                }
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Sample nodes of one level, indexable without materializing the cube.
enum Nodes {
    Grid {
        per_axis: usize,
        dim: usize,
        radius: f64,
    },
    Latin {
        perms: Vec<Vec<u32>>,
        radius: f64,
    },
}

impl Nodes {
    fn build(sched: &WindowSchedule, dim: usize, level: usize) -> Result<Self> {
        let radius = sched.radius(level);
        match sched.rule {
            Rule::Grid { points_per_dim } => {
                let per_axis = ((points_per_dim as f64) * radius / sched.base_radius)
                    .round()
                    .max(1.0) as usize;
                let total = per_axis.saturating_pow(dim as u32);
                if total > MAX_WINDOW_POINTS {
                    return Err(Error::SizeLimit {
                        nonzeros: total,
                        limit: MAX_WINDOW_POINTS,
                    });
                }
                Ok(Nodes::Grid {
                    per_axis,
                    dim,
                    radius,
                })
            }
            Rule::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(level as u64));
                let perms = (0..dim)
                    .map(|_| {
                        let mut p: Vec<u32> = (0..samples as u32).collect();
                        p.shuffle(&mut rng);
                        p
                    })
                    .collect();
                Ok(Nodes::Latin { perms, radius })
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            Nodes::Grid { per_axis, dim, .. } => per_axis.pow(*dim as u32),
            Nodes::Latin { perms, .. } => perms[0].len(),
        }
    }

    fn point(&self, i: usize, out: &mut [f64]) {
        let stratum = |k: usize, count: usize, radius: f64| {
            -radius + (k as f64 + 0.5) * 2.0 * radius / count as f64
        };
        match self {
            Nodes::Grid {
                per_axis, radius, ..
            } => {
                let mut rest = i;
                for slot in out.iter_mut() {
                    *slot = stratum(rest % per_axis, *per_axis, *radius);
                    rest /= per_axis;
                }
            }
            Nodes::Latin { perms, radius } => {
                let count = perms[0].len();
                for (slot, p) in out.iter_mut().zip(perms) {
                    *slot = stratum(p[i] as usize, count, *radius);
                }
            }
        }
    }
}

/// Mean of `g` over the nodes, summed in fixed-size chunks so the result
/// does not depend on the thread count.
fn level_average(g: &FunctionSpec<f64>, nodes: &Nodes) -> Result<Vec<f64>> {
    let (n, m, total) = (g.domain().dim(), g.codomain().dim(), nodes.len());
    let chunks: Vec<Vec<f64>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; m];
            let mut x = vec![0.0; n];
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                nodes.point(i, &mut x);
                for (a, v) in acc.iter_mut().zip(g.evaluate(&x)?.iter()) {
                    *a += v;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![0.0; m];
    for chunk in chunks {
        for (s, v) in sum.iter_mut().zip(chunk) {
            *s += v;
        }
    }
    Ok(sum.into_iter().map(|s| s / total as f64).collect())
}

/// Window averages of a bounded map at every level of the schedule.
pub fn windowed_mean(g: &FunctionSpec<f64>, sched: &WindowSchedule) -> Result<MeanEstimate> {
    sched.validate()?;
    if let Some(c) = constant_value(g) {
        return Ok(MeanEstimate {
            value: c.clone(),
            converged: true,
            levels: vec![c],
            last_step: 0.0,
        });
    }
    let levels = (1..=sched.levels)
        .map(|k| level_average(g, &Nodes::build(sched, g.domain().dim(), k)?))
        .collect::<Result<Vec<_>>>()?;
    let diff: Vec<f64> = levels[levels.len() - 1]
        .iter()
        .zip(&levels[levels.len() - 2])
        .map(|(a, b)| a - b)
        .collect();
    let last_step = g.codomain().norm(&diff)?;
    Ok(MeanEstimate {
        value: levels[levels.len() - 1].clone(),
        converged: last_step <= sched.tol,
        levels,
        last_step,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub map: LinearMap<f64>,
    /// The estimate behind each column `P(f)(e_j)`.
    pub columns: Vec<MeanEstimate>,
    pub converged: bool,
    /// `max ‖P(f)(x + x') − P(f)(x) − P(f)(x')‖` over a few seeded pairs,
    /// each term computed by its own window average. Diagnostic only.
    pub additivity_defect: f64,
}

/// The mean value `P(f)(z)` at a single point.
pub fn project_at(
    f: &FunctionSpec<f64>,
    z: &Point<f64>,
    sched: &WindowSchedule,
) -> Result<MeanEstimate> {
    windowed_mean(&phi_translate(f, z)?, sched)
}

/// `P(f)`, assembled column by column from `P(f)(e_j)`.
pub fn project_linear(f: &FunctionSpec<f64>, sched: &WindowSchedule) -> Result<Projection> {
    let n = f.domain().dim();
    let columns = (0..n)
        .into_par_iter()
        .map(|j| project_at(f, &Point::unit(n, j), sched))
        .collect::<Result<Vec<_>>>()?;
    let map =
        LinearMap::from_columns(&columns.iter().map(|c| c.value.clone()).collect::<Vec<_>>())?;
    let converged = columns.iter().all(|c| c.converged);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut additivity_defect: f64 = 0.0;
    for _ in 0..ADDITIVITY_PAIRS {
        let mut draw = || Point::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect());
        let (x, y) = (draw(), draw());
        let sum = project_at(f, &x.add(&y), sched)?.value;
        let px = project_at(f, &x, sched)?.value;
        let py = project_at(f, &y, sched)?.value;
        let gap: Vec<f64> = (0..sum.len()).map(|k| sum[k] - px[k] - py[k]).collect();
        additivity_defect = additivity_defect.max(f.codomain().norm(&gap)?);
    }
    Ok(Projection {
        map,
        columns,
        converged,
        additivity_defect,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub projection: Projection,
    pub operator_norm: f64,
    /// Sampled Lipschitz constant of `f − P(f)`.
    pub residual_lip: f64,
    /// Sampled Lipschitz constant of `f`.
    pub lip: f64,
    /// `lip ≤ ‖T‖ + residual_lip`.
    pub lower_holds: bool,
    /// `‖T‖ + residual_lip ≤ 3·lip`.
    pub upper_holds: bool,
}

/// Slack on both sides of the norm-equivalence check.
pub const DECOMPOSE_TOL: f64 = 1e-6;

/// Splits `f = P(f) + (f − P(f))` and checks
/// `Lip(f) ≤ ‖P(f)‖ + Lip(f − P(f)) ≤ 3·Lip(f)` on the sample.
pub fn decompose(
    f: &FunctionSpec<f64>,
    sample: &[Point<f64>],
    sched: &WindowSchedule,
) -> Result<Decomposition> {
    let projection = project_linear(f, sched)?;
    let (domain, codomain) = (*f.domain(), *f.codomain());
    let linear = FunctionSpec::linear(projection.map.clone(), domain, codomain)?;
    let residual = f.minus(&linear)?;
    let operator_norm = projection.map.operator_norm(&domain, &codomain)?;
    let residual_lip = residual.lip_constant_on_sample(sample)?;
    let lip = f.lip_constant_on_sample(sample)?;
    let total = operator_norm + residual_lip;
    Ok(Decomposition {
        lower_holds: lip <= total + DECOMPOSE_TOL,
        upper_holds: total <= 3.0 * lip + DECOMPOSE_TOL,
        projection,
        operator_norm,
        residual_lip,
        lip,
    })
}

/// Wraps a projection result back into a map, for composing `P ∘ P`.
pub fn as_function(p: &Projection, like: &FunctionSpec<f64>) -> Result<FunctionSpec<f64>> {
    FunctionSpec::linear(p.map.clone(), *like.domain(), *like.codomain())
}
