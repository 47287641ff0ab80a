//! Recognizers for M-matrices, H-matrices and inverse-nonnegative matrices,
//! together with their weak, strong and ∀∃ interval versions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::{comparison_matrix, IntervalMatrix, QIMatrix};
use crate::linalg::{feasible_positive, inverse};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MatrixClass {
    MMatrix,
    HMatrix,
    InverseNonnegative,
}

/// Outcome of a class recognizer, with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq)]
pub struct Recognition<T> {
    pub class: MatrixClass,
    pub holds: bool,
    /// Real matrix fed to the M-matrix test (the constructed `Ã`, `⟨A⟩`, or `A` itself).
    pub tested: Matrix<T>,
    /// Member of the interval matrix that belongs to the class (weak recognizers).
    pub member: Option<Matrix<T>>,
    /// Fixed realization of the ∃ entries that works for every ∀ choice (AE recognizers).
    pub exists_choice: Option<Matrix<T>>,
    /// `v >= 1` with `tested * v >= 1`, present when `holds`.
    pub positive_vector: Option<Vec<T>>,
}

impl<T> Recognition<T> {
    fn new(class: MatrixClass, tested: Matrix<T>) -> Self {
        Self { class, holds: false, tested, member: None, exists_choice: None, positive_vector: None }
    }
}

fn off_diagonal_nonpositive<T: Scalar>(a: &Matrix<T>) -> bool {
    a.indexed().all(|((i, j), v)| i == j || !v.is_positive())
}

/// Nonpositive off-diagonal entries and some `x > 0` with `A x > 0`.
pub fn is_m_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Recognition<T>> {
    a.ensure_square("is_m_matrix")?;
    let mut out = Recognition::new(MatrixClass::MMatrix, a.clone());
    if off_diagonal_nonpositive(a) {
        out.positive_vector = feasible_positive(a)?;
        out.holds = out.positive_vector.is_some();
    }
    Ok(out)
}

/// Member built from upper endpoints on the diagonal and the smallest-magnitude
/// point off the diagonal: the largest candidate for an M-matrix in the box.
fn weak_m_candidate<T: Scalar>(m: &IntervalMatrix<T>) -> Matrix<T> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let a = m.entry(i, j);
        if i == j { a.hi().clone() } else { a.point_of_mignitude() }
    })
}

/// Some member of `m` is an M-matrix iff the member with upper diagonal
/// endpoints and minimal-magnitude off-diagonal entries is one.
pub fn weak_m_matrix<T: Scalar>(m: &IntervalMatrix<T>) -> Result<Recognition<T>> {
    m.ensure_square("weak_m_matrix")?;
    let tilde = weak_m_candidate(m);
    let mut out = is_m_matrix(&tilde)?;
    out.member = Some(tilde);
    Ok(out)
}

/// ∀∃ M-matrix test.
///
/// `Ã` is the weak-M candidate of `lower(A^∀) + A^∃`; the class holds iff `Ã`
/// is an M-matrix and `upper(A^∀) + Ã^∃` has nonpositive off-diagonal, in which
/// case `Ã^∃` serves every ∀ realization.
pub fn ae_m_matrix<T: Scalar>(q: &QIMatrix<T>) -> Result<Recognition<T>> {
    q.base().ensure_square("ae_m_matrix")?;
    let (forall, exists) = q.split();
    let shifted = exists.shifted(&forall.lower())?;
    let tilde = weak_m_candidate(&shifted);
    let exists_choice = Matrix::from_fn(q.rows(), q.cols(), |i, j| {
        if q.is_exists(i, j) { tilde[(i, j)].clone() } else { T::zero() }
    });
    let worst = &forall.upper() + &exists_choice;
    let mut out = is_m_matrix(&tilde)?;
    out.holds = out.holds && off_diagonal_nonpositive(&worst);
    if !out.holds {
        out.positive_vector = None;
    }
    out.exists_choice = Some(exists_choice);
    Ok(out)
}

/// The comparison matrix `⟨A⟩` is an M-matrix.
pub fn is_h_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Recognition<T>> {
    let cmp = comparison_matrix(a)?;
    let mut out = is_m_matrix(&cmp)?;
    out.class = MatrixClass::HMatrix;
    Ok(out)
}

/// Some member of `m` is an H-matrix iff the matrix of diagonal magnitudes and
/// negated off-diagonal mignitudes is an M-matrix.
pub fn weak_h_matrix<T: Scalar>(m: &IntervalMatrix<T>) -> Result<Recognition<T>> {
    m.ensure_square("weak_h_matrix")?;
    let tilde = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let a = m.entry(i, j);
        if i == j { a.magnitude() } else { -a.mignitude() }
    });
    let member = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let a = m.entry(i, j);
        if i == j { a.point_of_magnitude() } else { a.point_of_mignitude() }
    });
    let mut out = is_m_matrix(&tilde)?;
    out.class = MatrixClass::HMatrix;
    out.member = Some(member);
    Ok(out)
}

/// ∀∃ H-matrix test.
///
/// Each entry contributes its ∀ part pessimistically (mignitude on the
/// diagonal, magnitude off it) and its ∃ part optimistically. The split is
/// disjoint, so the missing part of every entry is the degenerate zero.
pub fn ae_h_matrix<T: Scalar>(q: &QIMatrix<T>) -> Result<Recognition<T>> {
    q.base().ensure_square("ae_h_matrix")?;
    let (forall, exists) = q.split();
    let tilde = Matrix::from_fn(q.rows(), q.cols(), |i, j| {
        let (fa, ex) = (forall.entry(i, j), exists.entry(i, j));
        if i == j {
            fa.mignitude() + ex.magnitude()
        } else {
            -(fa.magnitude() + ex.mignitude())
        }
    });
    let exists_choice = Matrix::from_fn(q.rows(), q.cols(), |i, j| {
        let ex = exists.entry(i, j);
        if i == j { ex.point_of_magnitude() } else { ex.point_of_mignitude() }
    });
    let mut out = is_m_matrix(&tilde)?;
    out.class = MatrixClass::HMatrix;
    out.exists_choice = Some(exists_choice);
    Ok(out)
}

/// Nonsingular with entrywise nonnegative inverse.
pub fn is_inverse_nonnegative<T: Scalar>(a: &Matrix<T>) -> Result<bool> {
    match inverse(a) {
        Ok(inv) => Ok(inv.is_nonnegative()),
        Err(Error::Singular) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Every member is inverse nonnegative iff both endpoint matrices are.
pub fn strong_inverse_nonnegative<T: Scalar>(m: &IntervalMatrix<T>) -> Result<bool> {
    m.ensure_square("strong_inverse_nonnegative")?;
    Ok(is_inverse_nonnegative(&m.lower())? && is_inverse_nonnegative(&m.upper())?)
}

/// Candidate ∃ realizations tried by [`ae_inverse_nonnegative_sufficient`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InverseSearch {
    Midpoint,
    Vertices,
    #[default]
    MidpointThenVertices,
}

/// Searches a fixed `A^∃` such that `A^∀ + A^∃` is inverse nonnegative for
/// every `A^∀`, i.e. both `lower(A^∀) + A^∃` and `upper(A^∀) + A^∃` are.
///
/// Success proves AE inverse nonnegativity (hence AE regularity); `None`
/// proves nothing. Vertices are scanned in index order and the lowest
/// working index is returned.
pub fn ae_inverse_nonnegative_sufficient<T: Scalar>(
    q: &QIMatrix<T>,
    strategy: InverseSearch,
    budget_bits: u32,
) -> Result<Option<Matrix<T>>> {
    q.base().ensure_square("ae_inverse_nonnegative_sufficient")?;
    let (forall, exists) = q.split();
    let (lo, hi) = (forall.lower(), forall.upper());
    let works = |e: &Matrix<T>| -> bool {
        is_inverse_nonnegative(&(&lo + e)).unwrap_or(false) && is_inverse_nonnegative(&(&hi + e)).unwrap_or(false)
    };

    if matches!(strategy, InverseSearch::Midpoint | InverseSearch::MidpointThenVertices) {
        let mid = exists.midpoint();
        if works(&mid) {
            return Ok(Some(mid));
        }
    }
    if matches!(strategy, InverseSearch::Vertices | InverseSearch::MidpointThenVertices) {
        let positions = exists.nondegenerate_positions();
        let bits = positions.len() as u32;
        if bits > budget_bits || bits >= 63 {
            return Err(Error::BudgetExceeded { needed: bits, budget: budget_bits });
        }
        let found = (0..1u64 << bits).into_par_iter().find_map_first(|index| {
            let e = exists.vertex_from_positions(&positions, index);
            works(&e).then_some(e)
        });
        return Ok(found);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Interval, Quantifier};
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn iv(lo: Rational, hi: Rational) -> Interval<Rational> {
        Interval::new(lo, hi).unwrap()
    }

    fn ii(lo: i64, hi: i64) -> Interval<Rational> {
        iv(q(lo, 1), q(hi, 1))
    }

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows)
    }

    fn qim(rows: Vec<Vec<(Interval<Rational>, Quantifier)>>) -> QIMatrix<Rational> {
        let base = IntervalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|c| c.0.clone()).collect()).collect()).unwrap();
        let quants = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|c| c.1).collect()).collect()).unwrap();
        QIMatrix::new(base, quants).unwrap()
    }

    use Quantifier::{Exists as E, Forall as A};

    fn worked_example() -> QIMatrix<Rational> {
        qim(vec![
            vec![(iv(q(4, 5), q(1, 1)), E), (ii(-1, 0), A)],
            vec![(ii(-1, -1), A), (ii(1, 1), A)],
        ])
    }

    fn verify_positive(r: &Recognition<Rational>) {
        let v = r.positive_vector.as_ref().expect("witness vector");
        let tv = r.tested.mul_vec(v).unwrap();
        assert!(v.iter().chain(&tv).all(|x| *x >= q(1, 1)));
    }

    #[test]
    fn m_matrix_examples() {
        let r = is_m_matrix(&rm(&[&[2, -1], &[-1, 2]])).unwrap();
        assert!(r.holds);
        verify_positive(&r);
        assert!(!is_m_matrix(&rm(&[&[1, -2], &[-2, 1]])).unwrap().holds);
        let r = is_m_matrix(&rm(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(!r.holds && r.positive_vector.is_none());
    }

    #[test]
    fn weak_m_matrix_examples() {
        let m = IntervalMatrix::from_rows(vec![vec![ii(1, 2), ii(-1, 1)], vec![ii(-1, 0), ii(1, 2)]]).unwrap();
        let r = weak_m_matrix(&m).unwrap();
        assert_eq!(r.tested, rm(&[&[2, 0], &[0, 2]]));
        assert!(r.holds);
        assert!(m.contains(r.member.as_ref().unwrap()));

        let m = IntervalMatrix::from_rows(vec![vec![ii(5, 6), ii(1, 2)], vec![ii(0, 0), ii(5, 6)]]).unwrap();
        assert!(!weak_m_matrix(&m).unwrap().holds);

        let m = IntervalMatrix::point(&rm(&[&[3, -1], &[-1, 3]]));
        assert!(weak_m_matrix(&m).unwrap().holds);
    }

    #[test]
    fn argmin_of_negative_interval_is_upper_endpoint() {
        let m = IntervalMatrix::from_rows(vec![vec![ii(3, 3), ii(-3, -1)], vec![ii(-5, -2), ii(3, 3)]]).unwrap();
        assert_eq!(weak_m_matrix(&m).unwrap().tested, rm(&[&[3, -1], &[-2, 3]]));
    }

    #[test]
    fn ae_m_matrix_examples() {
        let half = iv(q(-1, 2), q(0, 1));
        let m = qim(vec![vec![(ii(1, 2), A), (half.clone(), E)], vec![(half, E), (ii(1, 2), A)]]);
        let r = ae_m_matrix(&m).unwrap();
        assert_eq!(r.tested, rm(&[&[1, 0], &[0, 1]]));
        assert!(r.holds);

        // all-∀ reduces to strong M: upper off-diagonal must be nonpositive
        let m = qim(vec![vec![(ii(2, 3), A), (ii(-1, 1), A)], vec![(ii(0, 0), A), (ii(2, 3), A)]]);
        assert!(!ae_m_matrix(&m).unwrap().holds);
        let m = qim(vec![vec![(ii(2, 3), A), (ii(-1, 0), A)], vec![(ii(0, 0), A), (ii(2, 3), A)]]);
        assert!(ae_m_matrix(&m).unwrap().holds);
    }

    #[test]
    fn h_matrix_examples() {
        assert!(is_h_matrix(&Matrix::<Rational>::identity(3)).unwrap().holds);
        let r = is_h_matrix(&rm(&[&[2, -3], &[1, -4]])).unwrap();
        assert!(r.holds);
        assert_eq!(r.tested, rm(&[&[2, -3], &[-1, 4]]));
        verify_positive(&r);
        assert!(!is_h_matrix(&rm(&[&[1, 2], &[2, 1]])).unwrap().holds);
    }

    #[test]
    fn weak_h_matrix_examples() {
        let m = IntervalMatrix::from_rows(vec![vec![ii(-2, 2), ii(0, 1)], vec![ii(0, 1), ii(-2, 2)]]).unwrap();
        let r = weak_h_matrix(&m).unwrap();
        assert_eq!(r.tested, rm(&[&[2, 0], &[0, 2]]));
        assert!(r.holds);
        let member = r.member.unwrap();
        assert!(m.contains(&member) && is_h_matrix(&member).unwrap().holds);

        let m = IntervalMatrix::point(&rm(&[&[1, 2], &[2, 1]]));
        let r = weak_h_matrix(&m).unwrap();
        assert_eq!(r.tested, rm(&[&[1, -2], &[-2, 1]]));
        assert!(!r.holds);

        assert!(weak_h_matrix(&IntervalMatrix::point(&Matrix::<Rational>::identity(2))).unwrap().holds);
    }

    #[test]
    fn ae_h_matrix_examples() {
        let r = ae_h_matrix(&worked_example()).unwrap();
        assert_eq!(r.tested, rm(&[&[1, -1], &[-1, 1]]));
        assert!(!r.holds);

        let base = IntervalMatrix::from_rows(vec![vec![ii(-2, 2), ii(0, 1)], vec![ii(0, 1), ii(-2, 2)]]).unwrap();
        assert_eq!(
            ae_h_matrix(&QIMatrix::all_exists(base.clone())).unwrap().holds,
            weak_h_matrix(&base).unwrap().holds
        );

        let quarter = iv(q(-1, 4), q(1, 4));
        let m = qim(vec![vec![(ii(2, 3), A), (quarter.clone(), A)], vec![(quarter, A), (ii(2, 3), A)]]);
        let r = ae_h_matrix(&m).unwrap();
        assert_eq!(r.tested, Matrix::from_rows(vec![vec![q(2, 1), q(-1, 4)], vec![q(-1, 4), q(2, 1)]]).unwrap());
        assert!(r.holds);
    }

    #[test]
    fn midpoint_of_worked_example_is_m_matrix() {
        let mid = worked_example().base().midpoint();
        assert!(is_m_matrix(&mid).unwrap().holds);
    }

    #[test]
    fn inverse_nonnegative_examples() {
        assert!(is_inverse_nonnegative(&Matrix::<Rational>::identity(2)).unwrap());
        assert!(is_inverse_nonnegative(&rm(&[&[2, -1], &[-1, 1]])).unwrap());
        assert!(!is_inverse_nonnegative(&rm(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(!is_inverse_nonnegative(&rm(&[&[1, 2], &[2, 4]])).unwrap());
    }

    #[test]
    fn strong_inverse_nonnegative_examples() {
        let m = IntervalMatrix::hull(&rm(&[&[2, -1], &[-1, 1]]), &rm(&[&[3, 0], &[0, 2]])).unwrap();
        assert!(strong_inverse_nonnegative(&m).unwrap());
        assert!(strong_inverse_nonnegative(&IntervalMatrix::point(&Matrix::<Rational>::identity(3))).unwrap());
        let m = IntervalMatrix::hull(&rm(&[&[1, 0], &[0, 1]]), &rm(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(!strong_inverse_nonnegative(&m).unwrap());
    }

    #[test]
    fn ae_inverse_nonnegative_search() {
        // ∃ off-diagonal in [-1, 1]: the midpoint 0 works, and so does the -1 vertex
        let m = qim(vec![vec![(ii(2, 3), A), (ii(-1, 1), E)], vec![(ii(0, 0), A), (ii(2, 3), A)]]);
        let w = ae_inverse_nonnegative_sufficient(&m, InverseSearch::Vertices, 20).unwrap().unwrap();
        assert_eq!(w[(0, 1)], q(-1, 1));
        let w = ae_inverse_nonnegative_sufficient(&m, InverseSearch::Midpoint, 20).unwrap().unwrap();
        assert_eq!(w[(0, 1)], q(0, 1));

        // all-∀: reduces to the strong endpoint test
        let hull = IntervalMatrix::hull(&rm(&[&[2, -1], &[-1, 1]]), &rm(&[&[3, 0], &[0, 2]])).unwrap();
        let m = QIMatrix::all_forall(hull);
        assert!(ae_inverse_nonnegative_sufficient(&m, InverseSearch::default(), 20).unwrap().is_some());

        // ∃ entry can only make the off-diagonal positive
        let m = qim(vec![vec![(ii(1, 1), A), (ii(1, 2), E)], vec![(ii(0, 0), A), (ii(1, 1), A)]]);
        assert!(ae_inverse_nonnegative_sufficient(&m, InverseSearch::default(), 20).unwrap().is_none());
    }
}
