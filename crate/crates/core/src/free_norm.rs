//! The free-space norm of a molecule, computed twice: as the supremum over
//! 1-Lipschitz potentials anchored at the origin, and as the cheapest
//! transshipment that realizes the molecule's point masses.

use crate::error::{Error, Result};
use crate::lp::{solve, LpProblem, Relation};
use crate::molecule::Molecule;
use crate::scalar::Scalar;
use crate::space::{Point, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowEdge<S> {
    pub from: Point<S>,
    pub to: Point<S>,
    pub amount: S,
}

/// A norm value with the witnesses that produced it. Witnesses are not unique.
#[derive(Debug, Clone, PartialEq)]
pub struct NormCertificate<S> {
    pub value: S,
    /// Potential values on the support and the origin.
    pub potential: Vec<(Point<S>, S)>,
    pub flow: Vec<FlowEdge<S>>,
}

/// Support points plus the origin (last), with all pairwise distances.
struct Graph<S> {
    nodes: Vec<Point<S>>,
    coeffs: Vec<S>,
    dist: Vec<Vec<S>>,
}

impl<S: Scalar> Graph<S> {
    fn of(m: &Molecule<S>) -> Result<Self> {
        let m = m.canonicalize();
        let space = *m.space();
        let mut nodes = m.support();
        let coeffs = m.terms().iter().map(|t| t.coeff.clone()).collect();
        nodes.push(Point::zeros(space.dim()));
        let k = nodes.len();
        let mut dist = vec![vec![S::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let d = space.distance(&nodes[i], &nodes[j])?;
                dist[i][j] = d.clone();
                dist[j][i] = d;
            }
        }
        Ok(Self {
            nodes,
            coeffs,
            dist,
        })
    }

    fn base(&self) -> usize {
        self.nodes.len() - 1
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.nodes.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect()
    }
}

/// `sup{Σ aᵢ f(xᵢ) : |f(p) − f(q)| ≤ ‖p − q‖, f(0) = 0}` as an LP over the
/// potential values on the support.
pub fn free_norm_dual<S: Scalar>(m: &Molecule<S>) -> Result<NormCertificate<S>> {
    let g = Graph::of(m)?;
    let k = g.coeffs.len();
    let origin = g.nodes[g.base()].clone();
    if k == 0 {
        return Ok(NormCertificate {
            value: S::zero(),
            potential: vec![(origin, S::zero())],
            flow: vec![],
        });
    }
    let mut lp = LpProblem::new(g.coeffs.clone());
    for (i, j) in g.edges() {
        let d = g.dist[i][j].clone();
        if j == g.base() {
            lp.add_sparse(&[(i, S::one())], Relation::Le, d.clone());
            lp.add_sparse(&[(i, -S::one())], Relation::Le, d);
        } else {
            lp.add_sparse(&[(i, S::one()), (j, -S::one())], Relation::Le, d.clone());
            lp.add_sparse(&[(j, S::one()), (i, -S::one())], Relation::Le, d);
        }
    }
    let sol = solve(&lp)?.optimal()?;
    let mut potential: Vec<(Point<S>, S)> = g.nodes[..k].iter().cloned().zip(sol.witness).collect();
    potential.push((origin, S::zero()));
    Ok(NormCertificate {
        value: sol.value,
        potential,
        flow: vec![],
    })
}

/// `min Σ |flow_e|·d_e` over the complete graph on the support and the
/// origin, where every support point emits its coefficient and the origin
/// absorbs the balance.
pub fn free_norm_primal<S: Scalar>(m: &Molecule<S>) -> Result<NormCertificate<S>> {
    let g = Graph::of(m)?;
    let k = g.coeffs.len();
    if k == 0 {
        return Ok(NormCertificate {
            value: S::zero(),
            potential: vec![],
            flow: vec![],
        });
    }
    let edges = g.edges();
    // variables: forward and backward parts of each edge flow
    let mut costs = Vec::with_capacity(2 * edges.len());
    for &(i, j) in &edges {
        costs.push(-g.dist[i][j].clone());
        costs.push(-g.dist[i][j].clone());
    }
    let mut lp = LpProblem::new(costs);
    for v in 0..lp.num_vars() {
        lp.nonnegative(v);
    }
    for (node, a) in g.coeffs.iter().enumerate() {
        let mut row = Vec::new();
        for (e, &(i, j)) in edges.iter().enumerate() {
            let sign = if i == node {
                S::one()
            } else if j == node {
                -S::one()
            } else {
                continue;
            };
            row.push((2 * e, sign.clone()));
            row.push((2 * e + 1, -sign));
        }
        lp.add_sparse(&row, Relation::Eq, a.clone());
    }
    let sol = solve(&lp)?.optimal()?;
    let mut flow = Vec::new();
    for (e, &(i, j)) in edges.iter().enumerate() {
        let net = sol.witness[2 * e].clone() - sol.witness[2 * e + 1].clone();
        if net.is_positive() {
            flow.push(FlowEdge {
                from: g.nodes[i].clone(),
                to: g.nodes[j].clone(),
                amount: net,
            });
        } else if net.is_negative() {
            flow.push(FlowEdge {
                from: g.nodes[j].clone(),
                to: g.nodes[i].clone(),
                amount: -net,
            });
        }
    }
    Ok(NormCertificate {
        value: -sol.value,
        potential: vec![],
        flow,
    })
}

/// Just the norm value, via the potential LP.
pub fn free_norm<S: Scalar>(m: &Molecule<S>) -> Result<S> {
    free_norm_dual(m).map(|c| c.value)
}

/// Both LPs; fails with [`Error::IsometryViolation`] when their optima differ
/// (beyond `1e-9` relative in float mode).
pub fn certify<S: Scalar>(m: &Molecule<S>) -> Result<NormCertificate<S>> {
    let dual = free_norm_dual(m)?;
    let primal = free_norm_primal(m)?;
    if !dual.value.close_to(&primal.value, 1e-9) {
        return Err(Error::IsometryViolation {
            primal: primal.value.render(),
            dual: dual.value.render(),
        });
    }
    Ok(NormCertificate {
        value: dual.value,
        potential: dual.potential,
        flow: primal.flow,
    })
}

impl<S: Scalar> NormCertificate<S> {
    /// Checks the witnesses against `m`: the potential is anchored and
    /// 1-Lipschitz, the flow has the prescribed divergences, and both attain
    /// `value`. Returns the largest defect found.
    pub fn defect(&self, m: &Molecule<S>) -> Result<S> {
        let m = m.canonicalize();
        let space = *m.space();
        let mut worst = S::zero();
        if !self.potential.is_empty() {
            for (i, (p, fp)) in self.potential.iter().enumerate() {
                if p.is_zero() {
                    worst = worst.max_of(fp.abs());
                }
                for (q, fq) in &self.potential[i + 1..] {
                    let gap = (fp.clone() - fq.clone()).abs() - space.distance(p, q)?;
                    worst = worst.max_of(gap);
                }
            }
            let paired = m.terms().iter().try_fold(S::zero(), |acc, t| {
                let f = self
                    .potential
                    .iter()
                    .find(|(p, _)| *p == t.point)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| Error::PointNotInTable(t.point.to_string()))?;
                Ok::<S, Error>(acc + t.coeff.clone() * f)
            })?;
            worst = worst.max_of((paired - self.value.clone()).abs());
        }
        if !self.flow.is_empty() || (self.potential.is_empty() && !m.terms().is_empty()) {
            let mut cost = S::zero();
            for e in &self.flow {
                cost = cost + e.amount.clone() * space.distance(&e.from, &e.to)?;
            }
            worst = worst.max_of((cost - self.value.clone()).abs());
            for t in m.terms() {
                let out = self.flow.iter().fold(S::zero(), |acc, e| {
                    if e.from == t.point {
                        acc + e.amount.clone()
                    } else if e.to == t.point {
                        acc - e.amount.clone()
                    } else {
                        acc
                    }
                });
                worst = worst.max_of((out - t.coeff.clone()).abs());
            }
        }
        Ok(worst)
    }
}

/// `sup{Σ wᵢ aᵢ : ‖Σ aᵢ δ_{xᵢ}‖ ≤ 1}` over molecules supported on `nodes`,
/// optionally restricted to `ker β`. One LP over coefficients and edge flows.
///
/// `nodes` must be distinct and contain the origin; `weights[i]` is ignored
/// at the origin.
pub(crate) fn unit_ball_sup<S: Scalar>(
    space: &Space,
    nodes: &[Point<S>],
    weights: &[S],
    kernel: bool,
) -> Result<(S, Molecule<S>)> {
    let carriers: Vec<usize> = (0..nodes.len()).filter(|&i| !nodes[i].is_zero()).collect();
    let k = carriers.len();
    if k == 0 {
        return Ok((S::zero(), Molecule::zero(*space)));
    }
    let total = nodes.len();
    let edges: Vec<(usize, usize)> = (0..total)
        .flat_map(|i| (i + 1..total).map(move |j| (i, j)))
        .collect();
    let flow_var = |e: usize| k + 2 * e;
    let mut objective = vec![S::zero(); k + 2 * edges.len()];
    for (c, &i) in carriers.iter().enumerate() {
        objective[c] = weights[i].clone();
    }
    let mut lp = LpProblem::new(objective);
    for e in 0..edges.len() {
        lp.nonnegative(flow_var(e)).nonnegative(flow_var(e) + 1);
    }
    for (c, &node) in carriers.iter().enumerate() {
        let mut row = vec![(c, -S::one())];
        for (e, &(i, j)) in edges.iter().enumerate() {
            let sign = if i == node {
                S::one()
            } else if j == node {
                -S::one()
            } else {
                continue;
            };
            row.push((flow_var(e), sign.clone()));
            row.push((flow_var(e) + 1, -sign));
        }
        lp.add_sparse(&row, Relation::Eq, S::zero());
    }
    let mut budget = Vec::with_capacity(2 * edges.len());
    for (e, &(i, j)) in edges.iter().enumerate() {
        let d = space.distance(&nodes[i], &nodes[j])?;
        budget.push((flow_var(e), d.clone()));
        budget.push((flow_var(e) + 1, d));
    }
    lp.add_sparse(&budget, Relation::Le, S::one());
    if kernel {
        #[allow(clippy::needless_range_loop)]
        for axis in 0..space.dim() {
            let row: Vec<(usize, S)> = carriers
                .iter()
                .enumerate()
                .map(|(c, &i)| (c, nodes[i][axis].clone()))
                .collect();
            lp.add_sparse(&row, Relation::Eq, S::zero());
        }
    }
    let sol = solve(&lp)?.optimal()?;
    let terms = carriers
        .iter()
        .enumerate()
        .map(|(c, &i)| (sol.witness[c].clone(), nodes[i].clone()))
        .collect();
    Ok((sol.value, Molecule::new(*space, terms)?.canonicalize()))
}
