//! Seeded generators of test instances: rational points, molecules,
//! piecewise-affine maps and matrices.
//!
//! Everything is drawn as small rationals first and converted, so exact and
//! float runs see the same instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::funcspec::FunctionSpec;
use crate::linear::LinearMap;
use crate::molecule::Molecule;
use crate::scalar::{rational, Rational, Scalar};
use crate::space::{NormKind, Point, Space};

const DENOMINATORS: [i64; 6] = [1, 1, 2, 3, 4, 5];

/// `p/q` with `q` from a short list and `|p/q| ≤ bound`.
pub fn rational_in<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let q = *DENOMINATORS.choose(rng).unwrap();
    rational(rng.gen_range(-bound * q..=bound * q), q)
}

fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let r = rational_in(rng, bound);
        if r != rational(0, 1) {
            return r;
        }
    }
}

pub fn scalar<S: Scalar, R: Rng>(rng: &mut R, bound: i64) -> S {
    S::from_rational(&rational_in(rng, bound))
}

pub fn point<S: Scalar, R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Point<S> {
    Point::new((0..dim).map(|_| scalar(rng, bound)).collect())
}

pub fn norm_kind<R: Rng>(rng: &mut R) -> NormKind {
    *[NormKind::L1, NormKind::L2, NormKind::Linf]
        .choose(rng)
        .unwrap()
}

/// Dimension in `1..=max_dim` with a random norm.
pub fn space<R: Rng>(rng: &mut R, max_dim: usize) -> Space {
    Space::new(rng.gen_range(1..=max_dim), norm_kind(rng)).unwrap()
}

/// Like [`space`] but never ℓ² above dimension 1, where exact norms can
/// be irrational.
pub fn polyhedral_space<R: Rng>(rng: &mut R, max_dim: usize) -> Space {
    let kind = if rng.gen_bool(0.5) {
        NormKind::L1
    } else {
        NormKind::Linf
    };
    Space::new(rng.gen_range(1..=max_dim), kind).unwrap()
}

/// `terms` distinct support points with nonzero coefficients, canonicalized.
pub fn molecule<S: Scalar, R: Rng>(rng: &mut R, space: Space, terms: usize) -> Molecule<S> {
    let mut support: Vec<Point<S>> = Vec::with_capacity(terms);
    while support.len() < terms {
        let p = point(rng, space.dim(), 6);
        if !p.is_zero() && !support.contains(&p) {
            support.push(p);
        }
    }
    let terms = support
        .into_iter()
        .map(|p| (S::from_rational(&nonzero_rational(rng, 4)), p))
        .collect();
    Molecule::new(space, terms).unwrap().canonicalize()
}

/// Between 1 and `max_terms` terms.
pub fn molecule_upto<S: Scalar, R: Rng>(
    rng: &mut R,
    space: Space,
    max_terms: usize,
) -> Molecule<S> {
    let terms = rng.gen_range(1..=max_terms);
    molecule(rng, space, terms)
}

pub fn linear_map<S: Scalar, R: Rng>(rng: &mut R, rows: usize, cols: usize) -> LinearMap<S> {
    LinearMap::from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| scalar(rng, 5)).collect())
            .collect(),
    )
    .unwrap()
}

fn affine_text<R: Rng>(rng: &mut R, dim: usize) -> String {
    let terms: Vec<String> = (0..dim)
        .map(|l| format!("({})*x{l}", rational_in(rng, 3).render()))
        .collect();
    terms.join(" + ")
}

/// One scalar piecewise-affine expression vanishing at the origin: a linear
/// part plus kinks `d·(|a·x − b| − |b|)` and `max(a·x, a'·x)`.
pub fn piecewise_affine_text<R: Rng>(rng: &mut R, dim: usize) -> String {
    let mut parts = vec![affine_text(rng, dim)];
    for _ in 0..rng.gen_range(1..=2) {
        let b = rational_in(rng, 3);
        let d = nonzero_rational(rng, 2);
        parts.push(format!(
            "({})*(abs({} - ({})) - ({}))",
            d.render(),
            affine_text(rng, dim),
            b.render(),
            num_traits::Signed::abs(&b).render()
        ));
    }
    if rng.gen_bool(0.5) {
        parts.push(format!(
            "max({}, {})",
            affine_text(rng, dim),
            affine_text(rng, dim)
        ));
    }
    parts.join(" + ")
}

pub fn piecewise_affine<S: Scalar, R: Rng>(
    rng: &mut R,
    domain: Space,
    codomain: Space,
) -> FunctionSpec<S> {
    let text: Vec<String> = (0..codomain.dim())
        .map(|_| piecewise_affine_text(rng, domain.dim()))
        .collect();
    FunctionSpec::parse(&text.join("; "), domain, codomain).expect("generated text is well formed")
}

/// `count` distinct points, the origin among them.
pub fn anchored_sample<S: Scalar, R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<Point<S>> {
    let mut out = vec![Point::zeros(dim)];
    while out.len() < count {
        let p = point(rng, dim, 4);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}
