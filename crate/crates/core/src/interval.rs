//! Exact intervals, interval matrices and their quantified split.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: T) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    /// `[mid - rad, mid + rad]`; a negative radius is treated as its absolute value.
    pub fn from_mid_rad(mid: T, rad: T) -> Self {
        let rad = rad.abs();
        Self { lo: mid.clone() - rad.clone(), hi: mid + rad }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / T::two()
    }

    pub fn radius(&self) -> T {
        (self.hi.clone() - self.lo.clone()) / T::two()
    }

    pub fn contains(&self, v: &T) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Largest absolute value over the interval, `|mid| + rad`.
    pub fn magnitude(&self) -> T {
        self.midpoint().abs() + self.radius()
    }

    /// Smallest absolute value over the interval.
    pub fn mignitude(&self) -> T {
        if self.contains_zero() {
            T::zero()
        } else {
            T::min_of(&self.lo.abs(), &self.hi.abs())
        }
    }

    /// The point of the interval with the largest absolute value.
    pub fn point_of_magnitude(&self) -> T {
        if self.hi.abs() >= self.lo.abs() { self.hi.clone() } else { self.lo.clone() }
    }

    /// The point of the interval with the smallest absolute value.
    ///
    /// Unique: if `0` is outside the interval both endpoints share a sign, so
    /// the endpoint nearer zero is strictly nearer unless the interval is a point.
    pub fn point_of_mignitude(&self) -> T {
        if self.contains_zero() {
            T::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.clone()
        }
    }

    /// Interval sum.
    pub fn add(&self, other: &Self) -> Self {
        Self { lo: self.lo.clone() + other.lo.clone(), hi: self.hi.clone() + other.hi.clone() }
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// `[-rad, rad]`.
    pub fn centered(&self) -> Self {
        let r = self.radius();
        Self { lo: -r.clone(), hi: r }
    }

    /// `lo + (hi - lo) * t`.
    pub fn at(&self, t: &T) -> T {
        self.lo.clone() + (self.hi.clone() - self.lo.clone()) * t.clone()
    }

    /// Random point `lo + (hi - lo) * k / steps` with `k` uniform on `0..=steps`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, steps: u32) -> T {
        let steps = steps.max(1);
        let k = rng.gen_range(0..=steps);
        self.at(&T::ratio(i64::from(k), i64::from(steps)))
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// Magnitude of an interval.
pub fn magnitude<T: Scalar>(a: &Interval<T>) -> T {
    a.magnitude()
}

/// Mignitude of an interval.
pub fn mignitude<T: Scalar>(a: &Interval<T>) -> T {
    a.mignitude()
}

/// Comparison matrix: `|a_ii|` on the diagonal, `-|a_ij|` elsewhere.
pub fn comparison_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.ensure_square("comparison_matrix")?;
    Ok(Matrix::from_fn(n, n, |i, j| {
        let v = a[(i, j)].abs();
        if i == j { v } else { -v }
    }))
}

/// Endpoint selection for every nondegenerate entry, in row-major order.
/// `true` selects the upper endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexIndex {
    bits: Vec<bool>,
}

impl VertexIndex {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn all_low(count: usize) -> Self {
        Self { bits: vec![false; count] }
    }

    pub fn all_high(count: usize) -> Self {
        Self { bits: vec![true; count] }
    }

    /// Bit `k` of `index` selects the endpoint of the `k`-th nondegenerate entry,
    /// so index 0 is the all-LOW vertex.
    pub fn from_index(index: u64, count: usize) -> Self {
        Self { bits: (0..count).map(|k| k < 64 && (index >> k) & 1 == 1).collect() }
    }

    pub fn to_index(&self) -> u64 {
        self.bits.iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (k, _)| acc | (1 << k))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for VertexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "H" } else { "L" })?;
        }
        Ok(())
    }
}

/// Rectangular matrix of intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalMatrix<T> {
    entries: Matrix<Interval<T>>,
}

impl<T: Scalar> IntervalMatrix<T> {
    pub fn new(entries: Matrix<Interval<T>>) -> Self {
        Self { entries }
    }

    pub fn from_rows(rows: Vec<Vec<Interval<T>>>) -> Result<Self> {
        Matrix::from_rows(rows).map(Self::new)
    }

    /// Degenerate interval matrix holding a single real matrix.
    pub fn point(a: &Matrix<T>) -> Self {
        Self::new(a.map(|v| Interval::point(v.clone())))
    }

    /// `[lower, upper]`; fails if `lower > upper` anywhere.
    pub fn hull(lower: &Matrix<T>, upper: &Matrix<T>) -> Result<Self> {
        if lower.shape() != upper.shape() {
            return Err(Error::DimensionMismatch {
                op: "IntervalMatrix::hull",
                expected: lower.shape(),
                found: upper.shape(),
            });
        }
        let rows = (0..lower.rows())
            .map(|i| {
                (0..lower.cols())
                    .map(|j| Interval::new(lower[(i, j)].clone(), upper[(i, j)].clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// `[mid - rad, mid + rad]`.
    pub fn from_mid_rad(mid: &Matrix<T>, rad: &Matrix<T>) -> Result<Self> {
        if mid.shape() != rad.shape() {
            return Err(Error::DimensionMismatch {
                op: "IntervalMatrix::from_mid_rad",
                expected: mid.shape(),
                found: rad.shape(),
            });
        }
        Ok(Self::new(Matrix::from_fn(mid.rows(), mid.cols(), |i, j| {
            Interval::from_mid_rad(mid[(i, j)].clone(), rad[(i, j)].clone())
        })))
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    pub fn is_square(&self) -> bool {
        self.entries.is_square()
    }

    pub fn entries(&self) -> &Matrix<Interval<T>> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Interval<T> {
        &self.entries[(i, j)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Interval<T>) {
        self.entries[(i, j)] = v;
    }

    pub(crate) fn ensure_square(&self, op: &'static str) -> Result<usize> {
        self.entries.ensure_square(op)
    }

    pub fn lower(&self) -> Matrix<T> {
        self.entries.map(|a| a.lo().clone())
    }

    pub fn upper(&self) -> Matrix<T> {
        self.entries.map(|a| a.hi().clone())
    }

    pub fn midpoint(&self) -> Matrix<T> {
        self.entries.map(Interval::midpoint)
    }

    pub fn radius(&self) -> Matrix<T> {
        self.entries.map(Interval::radius)
    }

    /// `(Ac, Δ)` with `Ac = (lower + upper) / 2` and `Δ = (upper - lower) / 2`.
    pub fn midpoint_radius(&self) -> (Matrix<T>, Matrix<T>) {
        (self.midpoint(), self.radius())
    }

    /// `[-Δ, Δ]`.
    pub fn centered(&self) -> Self {
        Self::new(self.entries.map(Interval::centered))
    }

    pub fn is_degenerate(&self) -> bool {
        self.entries.iter().all(Interval::is_degenerate)
    }

    /// Positions of nondegenerate entries, row-major.
    pub fn nondegenerate_positions(&self) -> Vec<(usize, usize)> {
        self.entries.indexed().filter(|(_, a)| !a.is_degenerate()).map(|(p, _)| p).collect()
    }

    pub fn vertex_bit_count(&self) -> usize {
        self.entries.iter().filter(|a| !a.is_degenerate()).count()
    }

    /// Member with each nondegenerate entry at the endpoint selected by `v`.
    pub fn vertex_matrix(&self, v: &VertexIndex) -> Result<Matrix<T>> {
        let positions = self.nondegenerate_positions();
        if positions.len() != v.len() {
            return Err(Error::VertexBitMismatch { expected: positions.len(), found: v.len() });
        }
        let mut out = self.lower();
        for (&(i, j), &high) in positions.iter().zip(v.bits()) {
            if high {
                out[(i, j)] = self.entries[(i, j)].hi().clone();
            }
        }
        Ok(out)
    }

    /// Vertex by integer index, using precomputed nondegenerate positions.
    pub(crate) fn vertex_from_positions(&self, positions: &[(usize, usize)], index: u64) -> Matrix<T> {
        let mut out = self.lower();
        for (k, &(i, j)) in positions.iter().enumerate() {
            if (index >> k) & 1 == 1 {
                out[(i, j)] = self.entries[(i, j)].hi().clone();
            }
        }
        out
    }

    /// `Ac - diag(y) Δ diag(z)` for sign vectors `y, z ∈ {±1}^n`.
    pub fn a_yz(&self, y: &[i8], z: &[i8]) -> Result<Matrix<T>> {
        let n = self.ensure_square("a_yz")?;
        for s in [y, z] {
            if s.len() != n {
                return Err(Error::SignVectorLength { expected: n, found: s.len() });
            }
            if s.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::ShapeMismatch("sign vectors must contain only ±1".into()));
            }
        }
        Ok(Matrix::from_fn(n, n, |i, j| {
            let a = &self.entries[(i, j)];
            if y[i] * z[j] > 0 {
                a.midpoint() - a.radius()
            } else {
                a.midpoint() + a.radius()
            }
        }))
    }

    pub fn contains(&self, a: &Matrix<T>) -> bool {
        a.shape() == self.shape() && self.entries.iter().zip(a.iter()).all(|(iv, v)| iv.contains(v))
    }

    /// First position where `a` leaves the box, if any.
    pub fn first_violation(&self, a: &Matrix<T>) -> Option<(usize, usize)> {
        self.entries.indexed().zip(a.iter()).find(|((_, iv), v)| !iv.contains(v)).map(|((p, _), _)| p)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.entries.transpose())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::new(self.entries.select(rows, cols))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "IntervalMatrix::add",
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(Self::new(Matrix::from_fn(self.rows(), self.cols(), |i, j| {
            self.entries[(i, j)].add(&other.entries[(i, j)])
        })))
    }

    /// Shift every entry by a real matrix.
    pub fn shifted(&self, a: &Matrix<T>) -> Result<Self> {
        self.try_add(&Self::point(a))
    }

    /// Random member with entries on a grid of `steps` subintervals.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, steps: u32) -> Matrix<T> {
        self.entries.map(|a| if a.is_degenerate() { a.lo().clone() } else { a.sample(rng, steps) })
    }
}

/// Quantifier attached to an interval entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn tag(self) -> char {
        match self {
            Quantifier::Forall => 'A',
            Quantifier::Exists => 'E',
        }
    }
}

/// Interval matrix with a quantifier per entry.
///
/// Degenerate entries behave as constants whatever their tag; [`QIMatrix::split`]
/// places them on the ∀ side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QIMatrix<T> {
    base: IntervalMatrix<T>,
    quants: Matrix<Quantifier>,
}

impl<T: Scalar> QIMatrix<T> {
    pub fn new(base: IntervalMatrix<T>, quants: Matrix<Quantifier>) -> Result<Self> {
        if base.shape() != quants.shape() {
            return Err(Error::DimensionMismatch {
                op: "QIMatrix::new",
                expected: base.shape(),
                found: quants.shape(),
            });
        }
        Ok(Self { base, quants })
    }

    pub fn all_forall(base: IntervalMatrix<T>) -> Self {
        let quants = Matrix::from_fn(base.rows(), base.cols(), |_, _| Quantifier::Forall);
        Self { base, quants }
    }

    pub fn all_exists(base: IntervalMatrix<T>) -> Self {
        let quants = Matrix::from_fn(base.rows(), base.cols(), |_, _| Quantifier::Exists);
        Self { base, quants }
    }

    /// Reassembles `A^∀ + A^∃` from two interval matrices whose nondegenerate
    /// entries are disjoint. Nondegenerate entries of `exists` become ∃.
    pub fn from_parts(forall: &IntervalMatrix<T>, exists: &IntervalMatrix<T>) -> Result<Self> {
        let base = forall.try_add(exists)?;
        let mut quants = Matrix::from_fn(base.rows(), base.cols(), |_, _| Quantifier::Forall);
        for i in 0..base.rows() {
            for j in 0..base.cols() {
                let (fa, ex) = (forall.entry(i, j), exists.entry(i, j));
                if !fa.is_degenerate() && !ex.is_degenerate() {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({i}, {j}) is nondegenerate in both parts"
                    )));
                }
                if !ex.is_degenerate() {
                    quants[(i, j)] = Quantifier::Exists;
                }
            }
        }
        Ok(Self { base, quants })
    }

    pub fn base(&self) -> &IntervalMatrix<T> {
        &self.base
    }

    pub fn quantifiers(&self) -> &Matrix<Quantifier> {
        &self.quants
    }

    pub fn rows(&self) -> usize {
        self.base.rows()
    }

    pub fn cols(&self) -> usize {
        self.base.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.base.shape()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Interval<T> {
        self.base.entry(i, j)
    }

    /// Quantifier that governs entry `(i, j)`: degenerate entries count as ∀.
    pub fn effective_quantifier(&self, i: usize, j: usize) -> Quantifier {
        if self.base.entry(i, j).is_degenerate() {
            Quantifier::Forall
        } else {
            self.quants[(i, j)]
        }
    }

    pub fn is_exists(&self, i: usize, j: usize) -> bool {
        self.effective_quantifier(i, j) == Quantifier::Exists
    }

    /// Nondegenerate ∃ entries, row-major.
    pub fn exists_positions(&self) -> Vec<(usize, usize)> {
        self.base
            .nondegenerate_positions()
            .into_iter()
            .filter(|&(i, j)| self.quants[(i, j)] == Quantifier::Exists)
            .collect()
    }

    /// Nondegenerate ∀ entries, row-major.
    pub fn forall_positions(&self) -> Vec<(usize, usize)> {
        self.base
            .nondegenerate_positions()
            .into_iter()
            .filter(|&(i, j)| self.quants[(i, j)] == Quantifier::Forall)
            .collect()
    }

    /// `(A^∀, A^∃)`: each entry lands on its quantifier's side, the other side
    /// holds the degenerate zero. Degenerate entries go to `A^∀`.
    pub fn split(&self) -> (IntervalMatrix<T>, IntervalMatrix<T>) {
        let (m, n) = self.shape();
        let forall = Matrix::from_fn(m, n, |i, j| {
            if self.is_exists(i, j) { Interval::zero() } else { self.base.entry(i, j).clone() }
        });
        let exists = Matrix::from_fn(m, n, |i, j| {
            if self.is_exists(i, j) { self.base.entry(i, j).clone() } else { Interval::zero() }
        });
        (IntervalMatrix::new(forall), IntervalMatrix::new(exists))
    }

    pub fn forall_part(&self) -> IntervalMatrix<T> {
        self.split().0
    }

    pub fn exists_part(&self) -> IntervalMatrix<T> {
        self.split().1
    }

    /// Same matrix with degenerate entries retagged ∀.
    pub fn normalized(&self) -> Self {
        let quants = Matrix::from_fn(self.rows(), self.cols(), |i, j| self.effective_quantifier(i, j));
        Self { base: self.base.clone(), quants }
    }

    pub fn with_quantifier(mut self, i: usize, j: usize, q: Quantifier) -> Self {
        self.quants[(i, j)] = q;
        self
    }

    pub fn with_entry(mut self, i: usize, j: usize, v: Interval<T>) -> Self {
        self.base.set_entry(i, j, v);
        self
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self {
            base: self.base.select(row_perm, col_perm),
            quants: self.quants.select(row_perm, col_perm),
        }
    }

    pub fn transpose(&self) -> Self {
        Self { base: self.base.transpose(), quants: self.quants.transpose() }
    }
}

/// Writes the line-oriented matrix file format: a `qim <m> <n>` header followed
/// by one line per row of `v`, `[lo,hi]A` or `[lo,hi]E` cells.
impl<T: Scalar> fmt::Display for QIMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qim {} {}", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                let a = self.entry(i, j);
                if a.is_degenerate() {
                    write!(f, "{}", a.lo())?;
                } else {
                    write!(f, "{}{}", a, self.quants[(i, j)].tag())?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
