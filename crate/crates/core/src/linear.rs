//! Matrices acting between normed spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{sign_vectors, NormKind, Point, Space};

/// An `m × n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "matrix rows must be non-empty and equal length".into(),
            ));
        }
        let entries: Vec<S> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !e.to_f64().is_finite()) {
            return Err(Error::DimensionMismatch(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self {
            rows: m,
            cols: n,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, Vec::len);
        let rows = (0..m)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        let map = Self::from_rows(rows)?;
        debug_assert_eq!(map.cols, n);
        Ok(map)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        assert_eq!(
            x.len(),
            self.cols,
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|i| Point::new(self.row(i).to_vec()).dot(x))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols).map(|j| self.column(j)).collect();
        Self::from_rows(rows).expect("transpose of a valid matrix")
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> LinearMap<f64> {
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// `sup{‖Tx‖_Y : ‖x‖_X ≤ 1}`.
    ///
    /// Polyhedral domains are maximized over the vertices of their unit ball;
    /// an ℓ² domain goes through the dual ball of the codomain. The ℓ²→ℓ²
    /// case is a spectral norm and is only available in float mode.
    pub fn operator_norm(&self, domain: &Space, codomain: &Space) -> Result<S> {
        if domain.dim() != self.cols || codomain.dim() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix between {domain} and {codomain}",
                self.rows, self.cols
            )));
        }
        let n = self.cols;
        let domain_kind = if n == 1 {
            NormKind::L1
        } else {
            domain.norm_kind()
        };
        match domain_kind {
            NormKind::L1 => (0..n).try_fold(S::zero(), |best, j| {
                Ok(best.max_of(codomain.norm(&self.column(j))?))
            }),
            NormKind::Linf => sign_vectors(n).into_iter().try_fold(S::zero(), |best, s| {
                let x: Vec<S> = s.into_iter().map(S::from_i64).collect();
                Ok(best.max_of(codomain.norm(&self.apply(&x))?))
            }),
            NormKind::L2 => match codomain.norming_functionals::<S>() {
                Ok(ws) => {
                    let adjoint = self.transpose();
                    ws.iter().try_fold(S::zero(), |best, w| {
                        Ok(best.max_of(domain.norm(&adjoint.apply(w))?))
                    })
                }
                Err(_) => {
                    if S::EXACT {
                        return Err(Error::InexactNorm("spectral norm".into()));
                    }
                    Ok(S::from_f64(self.to_f64().spectral_norm()))
                }
            },
        }
    }
}

impl LinearMap<f64> {
    /// Largest singular value by power iteration on `TᵀT`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = {
            let t = self.transpose();
            let mut g = vec![vec![0.0; self.cols]; self.cols];
            for (i, gi) in g.iter_mut().enumerate() {
                for (j, gij) in gi.iter_mut().enumerate() {
                    *gij = t.row(i).iter().zip(t.row(j)).map(|(a, b)| a * b).sum();
                }
            }
            g
        };
        let mut v = vec![1.0; self.cols];
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w: Vec<f64> = gram
                .iter()
                .map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum())
                .collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let converged = (norm - lambda).abs() <= 1e-15 * norm;
            lambda = norm;
            v = next;
            if converged {
                break;
            }
        }
        lambda.sqrt()
    }
}

impl<S: Scalar> fmt::Display for LinearMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(Scalar::render).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
