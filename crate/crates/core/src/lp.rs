//! Dense two-phase simplex with Bland's rule, generic over the scalar type.
//!
//! In exact mode every pivot is carried out in rational arithmetic, so the
//! optimum and the witness are exact. The solver maximizes `c·x`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper limit on constraint-matrix nonzeros.
pub const MAX_NONZEROS: usize = 20_000;

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarBounds<S> {
    pub lower: Option<S>,
    pub upper: Option<S>,
}

impl<S> VarBounds<S> {
    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }
}

/// `maximize c·x` subject to linear rows and optional variable bounds.
/// Variables are free unless bounded.
#[derive(Debug, Clone)]
pub struct LpProblem<S> {
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub bounds: Vec<VarBounds<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub value: S,
    pub witness: Vec<S>,
}

impl<S: Scalar> LpSolution<S> {
    /// The optimum, or an error naming the status.
    pub fn optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
        }
    }
}

impl<S: Scalar> LpProblem<S> {
    pub fn new(objective: Vec<S>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: (0..n).map(|_| VarBounds::free()).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<S>, relation: Relation, rhs: S) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Adds a row given as sparse `(index, coefficient)` pairs.
    pub fn add_sparse(&mut self, entries: &[(usize, S)], relation: Relation, rhs: S) -> &mut Self {
        let mut coeffs = vec![S::zero(); self.num_vars()];
        for (j, a) in entries {
            coeffs[*j] = coeffs[*j].clone() + a.clone();
        }
        self.add(coeffs, relation, rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<S>, upper: Option<S>) -> &mut Self {
        self.bounds[var] = VarBounds { lower, upper };
        self
    }

    pub fn nonnegative(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, Some(S::zero()), None)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        let mut nonzeros = 0;
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} coefficients, objective has {n}",
                    c.coeffs.len()
                )));
            }
            nonzeros += c.coeffs.iter().filter(|a| !a.is_zero()).count();
        }
        if nonzeros > MAX_NONZEROS {
            return Err(Error::SizeLimit {
                nonzeros,
                limit: MAX_NONZEROS,
            });
        }
        Ok(())
    }

    /// Largest constraint or bound violation of `x`.
    pub fn max_violation(&self, x: &[S]) -> S {
        let mut worst = S::zero();
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, x);
            let v = match c.relation {
                Relation::Le => lhs - c.rhs.clone(),
                Relation::Ge => c.rhs.clone() - lhs,
                Relation::Eq => (lhs - c.rhs.clone()).abs(),
            };
            worst = worst.max_of(v);
        }
        for (b, xj) in self.bounds.iter().zip(x) {
            if let Some(l) = &b.lower {
                worst = worst.max_of(l.clone() - xj.clone());
            }
            if let Some(u) = &b.upper {
                worst = worst.max_of(xj.clone() - u.clone());
            }
        }
        worst
    }

    pub fn objective_value(&self, x: &[S]) -> S {
        dot(&self.objective, x)
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Solves `problem` to optimality, infeasibility or unboundedness.
pub fn solve<S: Scalar>(problem: &LpProblem<S>) -> Result<LpSolution<S>> {
    problem.validate()?;
    StandardForm::build(problem).run(problem)
}

/// `x_j = offset_j + Σ coeff·y_col` with `y ≥ 0`.
struct VarMap<S> {
    offset: S,
    parts: Vec<(usize, S)>,
}

struct StandardForm<S> {
    vars: Vec<VarMap<S>>,
    ny: usize,
    rows: Vec<(Vec<S>, Relation, S)>,
}

impl<S: Scalar> StandardForm<S> {
    fn build(p: &LpProblem<S>) -> Self {
        let mut vars = Vec::with_capacity(p.num_vars());
        let mut ny = 0;
        let mut upper_rows: Vec<(usize, S)> = Vec::new();
        for b in &p.bounds {
            let map = match (&b.lower, &b.upper) {
                (Some(l), upper) => {
                    if let Some(u) = upper {
                        upper_rows.push((ny, u.clone() - l.clone()));
                    }
                    VarMap {
                        offset: l.clone(),
                        parts: vec![(ny, S::one())],
                    }
                }
                (None, Some(u)) => VarMap {
                    offset: u.clone(),
                    parts: vec![(ny, -S::one())],
                },
                (None, None) => {
                    ny += 1;
                    VarMap {
                        offset: S::zero(),
                        parts: vec![(ny - 1, S::one()), (ny, -S::one())],
                    }
                }
            };
            ny += 1;
            vars.push(map);
        }
        let mut rows = Vec::with_capacity(p.constraints.len() + upper_rows.len());
        for c in &p.constraints {
            let mut coeffs = vec![S::zero(); ny];
            let mut rhs = c.rhs.clone();
            for (a, v) in c.coeffs.iter().zip(&vars) {
                if a.is_zero() {
                    continue;
                }
                rhs = rhs - a.clone() * v.offset.clone();
                for (col, k) in &v.parts {
                    coeffs[*col] = coeffs[*col].clone() + a.clone() * k.clone();
                }
            }
            rows.push((coeffs, c.relation, rhs));
        }
        for (col, width) in upper_rows {
            let mut coeffs = vec![S::zero(); ny];
            coeffs[col] = S::one();
            rows.push((coeffs, Relation::Le, width));
        }
        Self { vars, ny, rows }
    }

    fn objective(&self, c: &[S]) -> (Vec<S>, S) {
        let mut obj = vec![S::zero(); self.ny];
        let mut constant = S::zero();
        for (cj, v) in c.iter().zip(&self.vars) {
            constant = constant + cj.clone() * v.offset.clone();
            for (col, k) in &v.parts {
                obj[*col] = obj[*col].clone() + cj.clone() * k.clone();
            }
        }
        (obj, constant)
    }

    fn run(self, p: &LpProblem<S>) -> Result<LpSolution<S>> {
        let (obj, constant) = self.objective(&p.objective);
        let n = p.num_vars();
        let mut tableau = Tableau::new(self.ny, &self.rows);
        if !tableau.phase_one()? {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                value: S::zero(),
                witness: vec![S::zero(); n],
            });
        }
        let bounded = tableau.phase_two(&obj)?;
        let y = tableau.primal();
        let witness: Vec<S> = self
            .vars
            .iter()
            .map(|v| {
                v.parts.iter().fold(v.offset.clone(), |acc, (col, k)| {
                    acc + k.clone() * y[*col].clone()
                })
            })
            .collect();
        if !bounded {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: S::zero(),
                witness,
            });
        }
        let value = dot(&obj, &y[..self.ny]) + constant;
        Ok(LpSolution {
            status: LpStatus::Optimal,
            value,
            witness,
        })
    }
}

/// Rows `[coefficients | rhs]`, one basic column per row.
struct Tableau<S> {
    cells: Vec<Vec<S>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    objective_row: Vec<S>,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn new(ny: usize, rows: &[(Vec<S>, Relation, S)]) -> Self {
        let m = rows.len();
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        // normalize to rhs >= 0 first so we know which rows need artificials
        let normalized: Vec<(Vec<S>, Relation, S)> = rows
            .iter()
            .map(|(a, rel, b)| {
                if b.is_negative() {
                    let flipped = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (a.iter().map(|x| -x.clone()).collect(), flipped, -b.clone())
                } else {
                    (a.clone(), *rel, b.clone())
                }
            })
            .collect();
        let artificials = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let ncols = ny + slacks + artificials;
        let first_artificial = ny + slacks;
        let mut cells = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut slack, mut art) = (ny, first_artificial);
        for (a, rel, b) in normalized {
            let mut row = a;
            row.resize(ncols + 1, S::zero());
            row[ncols] = b;
            match rel {
                Relation::Le => {
                    row[slack] = S::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -S::one();
                    slack += 1;
                    row[art] = S::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = S::one();
                    basis.push(art);
                    art += 1;
                }
            }
            cells.push(row);
        }
        Self {
            cells,
            basis,
            ncols,
            first_artificial,
            objective_row: vec![S::zero(); ncols + 1],
            pivots: 0,
        }
    }

    /// Reduced costs `c_j − c_B B⁻¹ A_j` and the current value in the last slot.
    fn load_objective(&mut self, costs: &[S]) {
        let mut row: Vec<S> = costs.to_vec();
        row.resize(self.ncols + 1, S::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = row[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, t) in row.iter_mut().zip(&self.cells[r]) {
                *x = x.clone() - cb.clone() * t.clone();
            }
        }
        self.objective_row = row;
    }

    fn pivot(&mut self, r: usize, col: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(Error::CycleDetected);
        }
        let p = self.cells[r][col].clone();
        for x in self.cells[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.cells[r].clone();
        let eliminate = |row: &mut Vec<S>| {
            let factor = row[col].clone();
            if factor.is_zero() {
                return;
            }
            for (x, t) in row.iter_mut().zip(&pivot_row) {
                if !t.is_zero() {
                    *x = x.clone() - factor.clone() * t.clone();
                }
            }
            if !S::EXACT {
                let eps = S::pivot_eps() * S::from_f64(1e-2);
                for x in row.iter_mut() {
                    if x.abs() < eps {
                        *x = S::zero();
                    }
                }
            }
        };
        for (i, row) in self.cells.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.objective_row);
        self.basis[r] = col;
        Ok(())
    }

    /// Runs Bland's rule over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, limit: usize) -> Result<bool> {
        let eps = S::pivot_eps();
        loop {
            let entering = (0..limit).find(|&j| self.objective_row[j] > eps);
            let Some(col) = entering else { return Ok(true) };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.cells.iter().enumerate() {
                if row[col] > eps {
                    let ratio = row[self.ncols].clone() / row[col].clone();
                    let better = match &leave {
                        None => true,
                        Some((k, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col)?,
                None => return Ok(false),
            }
        }
    }

    /// Minimizes the artificial sum; false when the problem is infeasible.
    fn phase_one(&mut self) -> Result<bool> {
        if self.first_artificial == self.ncols {
            return Ok(true);
        }
        let costs: Vec<S> = (0..self.ncols)
            .map(|j| {
                if j >= self.first_artificial {
                    -S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        self.load_objective(&costs);
        self.optimize(self.ncols)?;
        let infeasibility = self.artificial_sum();
        let tol = if S::EXACT {
            S::zero()
        } else {
            S::from_f64(1e-9)
        };
        if infeasibility > tol {
            return Ok(false);
        }
        // drive remaining artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < self.cells.len() {
            if self.basis[r] >= self.first_artificial {
                let col =
                    (0..self.first_artificial).find(|&j| self.cells[r][j].abs() > S::pivot_eps());
                match col {
                    Some(j) => self.pivot(r, j)?,
                    None => {
                        self.cells.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        Ok(true)
    }

    fn artificial_sum(&self) -> S {
        self.basis
            .iter()
            .zip(&self.cells)
            .filter(|(&b, _)| b >= self.first_artificial)
            .fold(S::zero(), |acc, (_, row)| acc + row[self.ncols].clone())
    }

    fn phase_two(&mut self, obj: &[S]) -> Result<bool> {
        let mut costs = obj.to_vec();
        costs.resize(self.ncols, S::zero());
        self.load_objective(&costs);
        self.optimize(self.first_artificial)
    }

    fn primal(&self) -> Vec<S> {
        let mut y = vec![S::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            y[b] = self.cells[r][self.ncols].clone();
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(p: i64) -> Rational {
        rational(p, 1)
    }

    #[test]
    fn bounded_by_two_rows() {
        let mut p = LpProblem::new(vec![1.0]);
        p.add(vec![1.0], Relation::Le, 1.0)
            .add(vec![-1.0], Relation::Le, 0.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, 1.0);
        assert_eq!(s.witness, vec![1.0]);
    }

    #[test]
    fn delta_one_norm_dual() {
        let mut p = LpProblem::new(vec![q(1)]);
        p.add(vec![q(1)], Relation::Le, q(1))
            .add(vec![q(-1)], Relation::Le, q(1));
        assert_eq!(solve(&p).unwrap().value, q(1));
    }

    #[test]
    fn infeasible_pair() {
        let mut p = LpProblem::new(vec![1.0]);
        p.add(vec![1.0], Relation::Le, -1.0)
            .add(vec![-1.0], Relation::Le, -1.0);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut p = LpProblem::new(vec![q(1), q(1)]);
        p.add(vec![q(1), q(-1)], Relation::Le, q(2));
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_bounds() {
        // max x + 2y, x + y = 4, 0 <= x, 1 <= y <= 3
        let mut p = LpProblem::new(vec![q(1), q(2)]);
        p.add(vec![q(1), q(1)], Relation::Eq, q(4));
        p.nonnegative(0).set_bounds(1, Some(q(1)), Some(q(3)));
        let s = solve(&p).unwrap();
        assert_eq!(s.value, q(7));
        assert_eq!(s.witness, vec![q(1), q(3)]);
        assert_eq!(p.max_violation(&s.witness), q(0));
    }

    #[test]
    fn upper_bound_only_and_redundant_equalities() {
        // max -x, x <= 5 (bound), x >= -2 (row), duplicated equality x + y = 1 twice
        let mut p = LpProblem::new(vec![q(-1), q(0)]);
        p.set_bounds(0, None, Some(q(5)));
        p.add(vec![q(1), q(0)], Relation::Ge, q(-2));
        p.add(vec![q(1), q(1)], Relation::Eq, q(1));
        p.add(vec![q(2), q(2)], Relation::Eq, q(2));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, q(2));
        assert_eq!(s.witness, vec![q(-2), q(3)]);
    }

    #[test]
    fn dimension_and_size_guards() {
        let mut p = LpProblem::new(vec![1.0, 1.0]);
        p.add(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&p), Err(Error::DimensionMismatch(_))));

        let n = 150;
        let mut big = LpProblem::new(vec![1.0; n]);
        for _ in 0..140 {
            big.add(vec![1.0; n], Relation::Le, 1.0);
        }
        assert!(matches!(solve(&big), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule; Bland's rule terminates.
        let c = vec![q(3) / q(4), q(-150), q(1) / q(50), q(-6)];
        let mut p = LpProblem::new(c);
        for j in 0..4 {
            p.nonnegative(j);
        }
        p.add(
            vec![q(1) / q(4), q(-60), q(-1) / q(25), q(9)],
            Relation::Le,
            q(0),
        );
        p.add(
            vec![q(1) / q(2), q(-90), q(-1) / q(50), q(3)],
            Relation::Le,
            q(0),
        );
        p.add(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1));
        let s = solve(&p).unwrap();
        assert_eq!(s.value, q(1) / q(20));
    }
}
