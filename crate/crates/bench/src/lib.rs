//! Deterministic fixtures shared by the benchmarks.

use lipfree_core::{rational, Molecule, Point, Rational, Space};

/// A molecule on ℝ with `k` support points `1..=k` and alternating integer weights.
pub fn line_molecule(k: i64) -> Molecule<Rational> {
    let terms = (1..=k)
        .map(|i| {
            let a = if i % 2 == 0 { -i } else { i + 1 };
            (rational(a, 1), Point::scalar(rational(3 * i - k, 2)))
        })
        .collect();
    Molecule::new(Space::real_line(), terms).expect("one-dimensional points")
}

/// The float counterpart of [`line_molecule`].
pub fn line_molecule_f64(k: i64) -> Molecule<f64> {
    let terms = line_molecule(k)
        .terms()
        .iter()
        .map(|t| (lipfree_core::Scalar::to_f64(&t.coeff), t.point.to_f64()))
        .collect();
    Molecule::new(Space::real_line(), terms).expect("one-dimensional points")
}
