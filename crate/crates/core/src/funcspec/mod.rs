//! Lipschitz maps `f: ℝⁿ → ℝᵐ` with `f(0) = 0`.

mod expr;

use std::fmt;
use std::sync::Arc;

pub use expr::{parse_components, parse_expr, Expr, Func};

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::scalar::Scalar;
use crate::space::{Point, Space};

type NativeFn<S> = Arc<dyn Fn(&[S]) -> Vec<S> + Send + Sync>;

/// How a [`FunctionSpec`] computes its values.
#[derive(Clone)]
pub enum Body<S> {
    /// One parsed expression per codomain component.
    Expr(Vec<Expr>),
    /// Values known only at finitely many points.
    Table {
        points: Vec<Point<S>>,
        values: Vec<Point<S>>,
    },
    Linear(LinearMap<S>),
    Constant(Point<S>),
    /// `x' ↦ f(shift + x') − f(x')`.
    Translated {
        base: Arc<FunctionSpec<S>>,
        shift: Point<S>,
    },
    /// `Σ cᵢ fᵢ`.
    Combination(Vec<(S, Arc<FunctionSpec<S>>)>),
    Native(NativeFn<S>),
}

impl<S: Scalar> fmt::Debug for Body<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Expr(es) => {
                let parts: Vec<String> = es.iter().map(ToString::to_string).collect();
                write!(f, "Expr({})", parts.join("; "))
            }
            Body::Table { points, .. } => write!(f, "Table({} points)", points.len()),
            Body::Linear(t) => write!(f, "Linear({t})"),
            Body::Constant(c) => write!(f, "Constant({c})"),
            Body::Translated { base, shift } => write!(f, "Translated({:?} by {shift})", base.body),
            Body::Combination(terms) => write!(f, "Combination({} terms)", terms.len()),
            Body::Native(_) => f.write_str("Native"),
        }
    }
}

/// A map between two [`Space`]s. Values are immutable once built.
///
/// Constructors for anchored maps (`parse`, `from_table`, `linear`,
/// `from_fn`) check `f(0) = 0`; translations and constants are bounded maps
/// used by the averaging machinery and carry no anchor.
#[derive(Clone)]
pub struct FunctionSpec<S> {
    domain: Space,
    codomain: Space,
    body: Body<S>,
}

impl<S: Scalar> fmt::Debug for FunctionSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("body", &self.body)
            .finish()
    }
}

impl<S: Scalar> FunctionSpec<S> {
    /// Parses semicolon-separated component expressions.
    ///
    /// Exact scalars reject `sin`/`cos` with [`Error::RequiresFloat`].
    pub fn parse(text: &str, domain: Space, codomain: Space) -> Result<Self> {
        let exprs = parse_components(text, domain.dim())?;
        if exprs.len() != codomain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a codomain of dimension {}",
                exprs.len(),
                codomain.dim()
            )));
        }
        if S::EXACT && exprs.iter().any(Expr::is_transcendental) {
            return Err(Error::RequiresFloat("sin/cos"));
        }
        Self::anchored(domain, codomain, Body::Expr(exprs))
    }

    pub fn from_table(
        domain: Space,
        codomain: Space,
        points: Vec<Point<S>>,
        values: Vec<Point<S>>,
    ) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidTable(
                "points and values differ in length".into(),
            ));
        }
        for (p, v) in points.iter().zip(&values) {
            domain.check(p)?;
            codomain.check(v)?;
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q == p) {
                return Err(Error::InvalidTable(format!("duplicate point {p}")));
            }
        }
        if !points.iter().any(Point::is_zero) {
            return Err(Error::InvalidTable("table must contain the origin".into()));
        }
        Self::anchored(domain, codomain, Body::Table { points, values })
    }

    pub fn linear(map: LinearMap<S>, domain: Space, codomain: Space) -> Result<Self> {
        if map.cols() != domain.dim() || map.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix between {domain} and {codomain}",
                map.rows(),
                map.cols()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            body: Body::Linear(map),
        })
    }

    /// Wraps a closure; the anchor is checked once at construction.
    pub fn from_fn(
        domain: Space,
        codomain: Space,
        f: impl Fn(&[S]) -> Vec<S> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::anchored(domain, codomain, Body::Native(Arc::new(f)))
    }

    /// Wraps a closure without the anchor check, for bounded test maps.
    pub fn bounded(
        domain: Space,
        codomain: Space,
        f: impl Fn(&[S]) -> Vec<S> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            codomain,
            body: Body::Native(Arc::new(f)),
        }
    }

    pub fn constant(domain: Space, codomain: Space, value: Point<S>) -> Result<Self> {
        codomain.check(&value)?;
        Ok(Self {
            domain,
            codomain,
            body: Body::Constant(value),
        })
    }

    /// `Σ cᵢ fᵢ` over maps sharing domain and codomain.
    pub fn combination(terms: Vec<(S, FunctionSpec<S>)>) -> Result<Self> {
        let (first, rest) = terms
            .split_first()
            .ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?;
        let (domain, codomain) = (first.1.domain, first.1.codomain);
        if rest
            .iter()
            .any(|(_, g)| g.domain != domain || g.codomain != codomain)
        {
            return Err(Error::SpaceMismatch(
                "combined maps must share spaces".into(),
            ));
        }
        let terms = terms.into_iter().map(|(c, g)| (c, Arc::new(g))).collect();
        Ok(Self {
            domain,
            codomain,
            body: Body::Combination(terms),
        })
    }

    /// `self − other`.
    pub fn minus(&self, other: &FunctionSpec<S>) -> Result<Self> {
        Self::combination(vec![(S::one(), self.clone()), (-S::one(), other.clone())])
    }

    /// The bounded map `x' ↦ f(shift + x') − f(x')`.
    pub fn translated(&self, shift: Point<S>) -> Result<Self> {
        self.domain.check(&shift)?;
        Ok(Self {
            domain: self.domain,
            codomain: self.codomain,
            body: Body::Translated {
                base: Arc::new(self.clone()),
                shift,
            },
        })
    }

    fn anchored(domain: Space, codomain: Space, body: Body<S>) -> Result<Self> {
        let f = Self {
            domain,
            codomain,
            body,
        };
        let at_origin = f.evaluate(&Point::zeros(domain.dim()))?;
        let size = at_origin
            .iter()
            .fold(S::zero(), |acc, v| acc.max_of(v.abs()));
        if size > S::anchor_tol() {
            return Err(Error::NotAnchored {
                value: size.render(),
            });
        }
        Ok(f)
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn body(&self) -> &Body<S> {
        &self.body
    }

    pub fn evaluate(&self, x: &[S]) -> Result<Point<S>> {
        self.domain.check(x)?;
        let out = match &self.body {
            Body::Expr(es) => Point::new(es.iter().map(|e| e.eval(x)).collect::<Result<_>>()?),
            Body::Table { points, values } => points
                .iter()
                .position(|p| p.coords() == x)
                .map(|i| values[i].clone())
                .ok_or_else(|| Error::PointNotInTable(Point::new(x.to_vec()).to_string()))?,
            Body::Linear(t) => Point::new(t.apply(x)),
            Body::Constant(c) => c.clone(),
            Body::Translated { base, shift } => {
                let moved: Vec<S> = x
                    .iter()
                    .zip(shift.iter())
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect();
                base.evaluate(&moved)?.sub(&base.evaluate(x)?)
            }
            Body::Combination(terms) => {
                let mut acc = Point::zeros(self.codomain.dim());
                for (c, g) in terms {
                    acc = acc.add(&g.evaluate(x)?.scale(c));
                }
                acc
            }
            Body::Native(f) => Point::new(f(x)),
        };
        self.codomain.check(&out)?;
        Ok(out)
    }

    /// True when any part of the body needs float arithmetic.
    pub fn is_transcendental(&self) -> bool {
        match &self.body {
            Body::Expr(es) => es.iter().any(Expr::is_transcendental),
            Body::Translated { base, .. } => base.is_transcendental(),
            Body::Combination(terms) => terms.iter().any(|(_, g)| g.is_transcendental()),
            _ => false,
        }
    }

    /// `max ‖f(x) − f(y)‖ / ‖x − y‖` over distinct pairs of `sample`.
    pub fn lip_constant_on_sample(&self, sample: &[Point<S>]) -> Result<S> {
        let pts = distinct(sample);
        if pts.len() < 2 {
            return Err(Error::DegenerateSample);
        }
        let values: Vec<Point<S>> = pts
            .iter()
            .map(|p| self.evaluate(p))
            .collect::<Result<_>>()?;
        let mut best = S::zero();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let dx = self.domain.distance(&pts[i], &pts[j])?;
                let dy = self.codomain.distance(&values[i], &values[j])?;
                best = best.max_of(dy / dx);
            }
        }
        Ok(best)
    }
}

/// Convenience wrapper over [`FunctionSpec::parse`].
pub fn parse_function<S: Scalar>(
    text: &str,
    domain: Space,
    codomain: Space,
) -> Result<FunctionSpec<S>> {
    FunctionSpec::parse(text, domain, codomain)
}

/// Drops repeated points, keeping first occurrences.
pub fn distinct<S: Scalar>(sample: &[Point<S>]) -> Vec<Point<S>> {
    let mut out: Vec<Point<S>> = Vec::with_capacity(sample.len());
    for p in sample {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use crate::space::NormKind;

    fn line() -> Space {
        Space::real_line()
    }

    fn pts(xs: &[f64]) -> Vec<Point<f64>> {
        xs.iter().map(|&x| Point::scalar(x)).collect()
    }

    #[test]
    fn parse_and_evaluate() {
        let f: FunctionSpec<f64> = parse_function("2*x0 + sin(x0)", line(), line()).unwrap();
        assert_eq!(f.evaluate(&[0.0]).unwrap()[0], 0.0);
        let g: FunctionSpec<f64> = parse_function("abs(x0)", line(), line()).unwrap();
        assert_eq!(g.evaluate(&[1.0]).unwrap()[0], 1.0);
        assert_eq!(g.evaluate(&[-2.0]).unwrap()[0], 2.0);
    }

    #[test]
    fn rejects_unanchored() {
        let r = parse_function::<f64>("x0 + 1", line(), line());
        assert!(matches!(r, Err(Error::NotAnchored { .. })));
        let r = parse_function::<Rational>("x0 + 1/1000000000000000", line(), line());
        assert!(matches!(r, Err(Error::NotAnchored { .. })));
        // inside the float tolerance
        assert!(parse_function::<f64>("x0 + 1/10000000000000", line(), line()).is_ok());
    }

    #[test]
    fn exact_mode_rejects_sin() {
        let r = parse_function::<Rational>("x0 + sin(x0)", line(), line());
        assert_eq!(r.unwrap_err(), Error::RequiresFloat("sin/cos"));
        assert!(parse_function::<Rational>("max(x0, 2*x0) - abs(x0)", line(), line()).is_ok());
    }

    #[test]
    fn component_count_must_match() {
        let r2 = Space::new(2, NormKind::Linf).unwrap();
        assert!(parse_function::<f64>("x0; x1", r2, r2).is_ok());
        assert!(matches!(
            parse_function::<f64>("x0", r2, r2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn table_lookup() {
        let f =
            FunctionSpec::from_table(line(), line(), pts(&[0.0, 1.0]), pts(&[0.0, 3.0])).unwrap();
        assert_eq!(f.evaluate(&[1.0]).unwrap()[0], 3.0);
        assert!(matches!(f.evaluate(&[2.0]), Err(Error::PointNotInTable(_))));
        assert!(FunctionSpec::from_table(line(), line(), pts(&[1.0]), pts(&[1.0])).is_err());
        assert!(
            FunctionSpec::from_table(line(), line(), pts(&[0.0, 0.0]), pts(&[0.0, 0.0])).is_err()
        );
        assert!(matches!(
            FunctionSpec::from_table(line(), line(), pts(&[0.0]), pts(&[1.0])),
            Err(Error::NotAnchored { .. })
        ));
    }

    #[test]
    fn sampled_lip_constants() {
        let sq: FunctionSpec<f64> = parse_function("x0*x0", line(), line()).unwrap();
        assert_eq!(
            sq.lip_constant_on_sample(&pts(&[0.0, 1.0, 2.0])).unwrap(),
            3.0
        );
        let abs: FunctionSpec<f64> = parse_function("abs(x0)", line(), line()).unwrap();
        assert_eq!(
            abs.lip_constant_on_sample(&pts(&[-1.0, 0.0, 1.0])).unwrap(),
            1.0
        );
        assert_eq!(
            abs.lip_constant_on_sample(&pts(&[1.0, 1.0])),
            Err(Error::DegenerateSample)
        );
    }

    #[test]
    fn identity_has_unit_constant() {
        for kind in [NormKind::L1, NormKind::L2, NormKind::Linf] {
            let s = Space::new(3, kind).unwrap();
            let id: FunctionSpec<Rational> = parse_function("x0; x1; x2", s, s).unwrap();
            let sample: Vec<Point<Rational>> = [[0, 0, 0], [1, 0, 0], [0, 3, 4], [-2, 2, 1]]
                .iter()
                .map(|p| Point::from_i64s(p))
                .collect();
            if kind == NormKind::L2 {
                // (1,0,0)-(0,3,4) has squared norm 26, irrational
                assert!(id.lip_constant_on_sample(&sample).is_err());
                let f = parse_function::<f64>("x0; x1; x2", s, s).unwrap();
                let fs: Vec<Point<f64>> = sample.iter().map(Point::to_f64).collect();
                assert!((f.lip_constant_on_sample(&fs).unwrap() - 1.0).abs() < 1e-15);
            } else {
                assert_eq!(id.lip_constant_on_sample(&sample).unwrap(), rational(1, 1));
            }
        }
    }

    #[test]
    fn translation_and_combination() {
        let abs: FunctionSpec<f64> = parse_function("abs(x0)", line(), line()).unwrap();
        let phi = abs.translated(Point::scalar(1.0)).unwrap();
        assert_eq!(phi.evaluate(&[0.0]).unwrap()[0], 1.0);
        assert_eq!(phi.evaluate(&[-1.0]).unwrap()[0], -1.0);
        let t = FunctionSpec::linear(
            LinearMap::from_rows(vec![vec![2.0]]).unwrap(),
            line(),
            line(),
        )
        .unwrap();
        let d = abs.minus(&t).unwrap();
        assert_eq!(d.evaluate(&[-3.0]).unwrap()[0], 9.0);
    }
}
