//! Exact dense linear algebra: determinants, rank, inverses, kernels and a
//! small simplex-based feasibility solver.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn abs_cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal)
}

/// Determinant by Bareiss fraction-free elimination with partial pivoting.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    let n = a.ensure_square("determinant")?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.to_rows();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        let p = (k..n).max_by(|&i, &j| abs_cmp(&m[i][k], &m[j][k])).unwrap_or(k);
        if m[p][k].is_zero() {
            return Ok(T::zero());
        }
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                row[j] = (row[j].clone() * pivot_row[k].clone() - row[k].clone() * pivot_row[j].clone())
                    / prev.clone();
            }
            row[k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Reduced row echelon form and the pivot column of each nonzero row.
fn rref<T: Scalar>(a: &Matrix<T>) -> (Vec<Vec<T>>, Vec<usize>) {
    let (rows, cols) = a.shape();
    let mut m = a.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = (r..rows).max_by(|&i, &j| abs_cmp(&m[i][c], &m[j][c])).unwrap_or(r);
        if m[p][c].is_zero() {
            continue;
        }
        m.swap(p, r);
        let inv = T::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Rank by exact elimination.
pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    rref(a).1.len()
}

/// Nonzero `x` with `A x = 0`, if the columns of `A` are dependent.
pub fn null_vector<T: Scalar>(a: &Matrix<T>) -> Option<Vec<T>> {
    let (m, pivots) = rref(a);
    let free = (0..a.cols()).find(|c| !pivots.contains(c))?;
    let mut x = vec![T::zero(); a.cols()];
    x[free] = T::one();
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[r][free].clone();
    }
    Some(x)
}

/// Exact inverse by Gauss–Jordan elimination; [`Error::Singular`] when `det A = 0`.
pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.ensure_square("inverse")?;
    let augmented = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (m, pivots) = rref(&augmented);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| m[i][n + j].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> LinearConstraint<T> {
    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        let lhs = self.coeffs.iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Linear constraints over nonnegative variables `x >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityProblem<T> {
    num_vars: usize,
    constraints: Vec<LinearConstraint<T>>,
}

impl<T: Scalar> FeasibilityProblem<T> {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[LinearConstraint<T>] {
        &self.constraints
    }

    pub fn add(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Result<&mut Self> {
        if coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                op: "FeasibilityProblem::add",
                expected: (self.num_vars, 1),
                found: (coeffs.len(), 1),
            });
        }
        self.constraints.push(LinearConstraint { coeffs, relation, rhs });
        Ok(self)
    }

    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    /// A feasible point, or `None` if the system is infeasible.
    ///
    /// Phase-I simplex on a dense tableau with one artificial per row, using
    /// Bland's rule so the pivot sequence cannot cycle.
    pub fn solve(&self) -> Option<Vec<T>> {
        let n = self.num_vars;
        let m = self.constraints.len();
        let slacks: Vec<Option<usize>> = {
            let mut next = n;
            self.constraints
                .iter()
                .map(|c| {
                    (c.relation != Relation::Eq).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let num_slack = slacks.iter().flatten().count();
        let art0 = n + num_slack;
        let width = art0 + m;

        let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut rhs: Vec<T> = Vec::with_capacity(m);
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![T::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a.clone();
            }
            if let Some(s) = slacks[i] {
                row[s] = if c.relation == Relation::Le { T::one() } else { -T::one() };
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                b = -b;
            }
            row[art0 + i] = T::one();
            tab.push(row);
            rhs.push(b);
        }
        let mut basis: Vec<usize> = (art0..art0 + m).collect();

        // reduced costs of the phase-I objective (sum of artificials)
        let mut cost = vec![T::zero(); width];
        let mut cost_rhs = T::zero();
        for c in &mut cost[art0..] {
            *c = T::one();
        }
        for (row, b) in tab.iter().zip(&rhs) {
            for (cj, a) in cost.iter_mut().zip(row) {
                *cj = cj.clone() - a.clone();
            }
            cost_rhs = cost_rhs - b.clone();
        }

        while let Some(q) = (0..width).find(|&j| is_strictly_negative(&cost[j])) {
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if !is_strictly_positive(&tab[i][q]) {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let ri = rhs[i].clone() / tab[i][q].clone();
                        let rl = rhs[l].clone() / tab[l][q].clone();
                        if ri < rl || (ri == rl && basis[i] < basis[l]) { Some(i) } else { Some(l) }
                    }
                };
            }
            // phase I is bounded below by zero, so some row always limits the step
            let p = leave?;
            pivot(&mut tab, &mut rhs, &mut cost, &mut cost_rhs, p, q);
            basis[p] = q;
        }

        if !is_negligible(&cost_rhs) {
            return None;
        }
        let mut x = vec![T::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = rhs[i].clone();
            }
        }
        Some(x)
    }
}

fn is_negligible<T: Scalar>(v: &T) -> bool {
    if T::EXACT { v.is_zero() } else { v.abs().to_f64_lossy() < 1e-12 }
}

fn is_strictly_negative<T: Scalar>(v: &T) -> bool {
    v.is_negative() && !is_negligible(v)
}

fn is_strictly_positive<T: Scalar>(v: &T) -> bool {
    v.is_positive() && !is_negligible(v)
}

fn pivot<T: Scalar>(
    tab: &mut [Vec<T>],
    rhs: &mut [T],
    cost: &mut [T],
    cost_rhs: &mut T,
    p: usize,
    q: usize,
) {
    let inv = T::one() / tab[p][q].clone();
    for v in tab[p].iter_mut() {
        *v = v.clone() * inv.clone();
    }
    rhs[p] = rhs[p].clone() * inv;
    let prow = tab[p].clone();
    let pb = rhs[p].clone();
    for i in 0..tab.len() {
        if i == p || tab[i][q].is_zero() {
            continue;
        }
        let f = tab[i][q].clone();
        for (v, a) in tab[i].iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * a.clone();
        }
        rhs[i] = rhs[i].clone() - f * pb.clone();
    }
    if !cost[q].is_zero() {
        let f = cost[q].clone();
        for (v, a) in cost.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * a.clone();
        }
        *cost_rhs = cost_rhs.clone() - f * pb;
    }
}

/// Decides whether some `x > 0` has `A x > 0`.
///
/// Any strict solution scales to one with `x >= 1, A x >= 1`, and every
/// solution of the latter is strict, so the nonstrict system is solved instead.
/// The returned witness satisfies `x >= 1` and `A x >= 1`.
pub fn feasible_positive<T: Scalar>(a: &Matrix<T>) -> Result<Option<Vec<T>>> {
    let n = a.ensure_square("feasible_positive")?;
    let mut lp = FeasibilityProblem::new(n);
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        lp.add(e, Relation::Ge, T::one())?;
    }
    for i in 0..n {
        lp.add(a.row(i).to_vec(), Relation::Ge, T::one())?;
    }
    Ok(lp.solve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows)
    }

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &Matrix<Rational>) -> Rational {
        let n = a.rows();
        if n == 0 {
            return r(1);
        }
        let mut acc = r(0);
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&a.select(&rows, &cols));
            let term = a[(0, j)].clone() * minor;
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Largest k with a nonzero k×k minor.
    fn minor_rank(a: &Matrix<Rational>) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect()
        }
        for k in (1..=a.rows().min(a.cols())).rev() {
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    if !cofactor_det(&a.select(&rs, &cs)).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lim: i64) -> Matrix<Rational> {
        Matrix::from_fn(m, n, |_, _| r(rng.gen_range(-lim..=lim)))
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&rm(&[&[2, 1], &[1, 1]])).unwrap(), r(1));
        assert_eq!(determinant(&rm(&[&[1, 2], &[2, 4]])).unwrap(), r(0));
        assert!(matches!(determinant(&Matrix::<Rational>::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_int_matrix(&mut rng, 4, 4, 5);
            assert_eq!(determinant(&a).unwrap(), cofactor_det(&a));
        }
        let a = rm(&[&[3, -1, 4, 1], &[5, 9, -2, 6], &[5, 3, 5, -8], &[9, 7, 9, 3]]);
        assert_eq!(determinant(&a).unwrap(), cofactor_det(&a));
    }

    #[test]
    fn float_determinant_is_close() {
        let a = Matrix::<f64>::from_i64_rows(&[&[3, -1, 4], &[5, 9, -2], &[5, 3, 5]]);
        let exact = determinant(&rm(&[&[3, -1, 4], &[5, 9, -2], &[5, 3, 5]])).unwrap();
        assert!((determinant(&a).unwrap() - exact.to_f64_lossy()).abs() < 1e-9);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&rm(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&Matrix::<Rational>::identity(5)), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = &random_int_matrix(&mut rng, 3, 2, 4) * &random_int_matrix(&mut rng, 2, 5, 4);
            assert!(rank(&a) <= 2);
            assert_eq!(rank(&a), minor_rank(&a));
        }
    }

    #[test]
    fn inverse_examples() {
        let i = Matrix::<Rational>::identity(3);
        assert_eq!(inverse(&i).unwrap(), i);
        let a = rm(&[&[2, -1], &[-1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, rm(&[&[1, 1], &[1, 2]]));
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(inverse(&rm(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn null_vectors_annihilate() {
        let a = rm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let x = null_vector(&a).unwrap();
        assert!(a.mul_vec(&x).unwrap().iter().all(|v| v.is_zero()));
        assert!(x.iter().any(|v| !v.is_zero()));
        assert!(null_vector(&Matrix::<Rational>::identity(3)).is_none());
    }

    #[test]
    fn feasible_positive_examples() {
        let a = rm(&[&[2, -1], &[-1, 2]]);
        let x = feasible_positive(&a).unwrap().unwrap();
        let ax = a.mul_vec(&x).unwrap();
        assert!(x.iter().chain(&ax).all(|v| *v >= r(1)));

        // adding the rows gives -(x1 + x2) > 0
        assert!(feasible_positive(&rm(&[&[1, -2], &[-2, 1]])).unwrap().is_none());

        let x = feasible_positive(&Matrix::<Rational>::identity(3)).unwrap().unwrap();
        assert_eq!(x, vec![r(1); 3]);
    }

    #[test]
    fn feasibility_handles_equalities_and_negative_rhs() {
        let mut lp = FeasibilityProblem::<Rational>::new(2);
        lp.add(vec![r(1), r(1)], Relation::Eq, r(3)).unwrap();
        lp.add(vec![r(-1), r(0)], Relation::Le, r(-2)).unwrap();
        let x = lp.solve().unwrap();
        assert!(lp.is_satisfied_by(&x));
        lp.add(vec![r(0), r(1)], Relation::Ge, r(2)).unwrap();
        assert!(lp.solve().is_none());
    }

    #[test]
    fn degenerate_problems_terminate() {
        // classic cycling-prone data; Bland's rule must terminate
        let mut lp = FeasibilityProblem::<Rational>::new(4);
        let h = |n, d| Rational::ratio(n, d);
        lp.add(vec![h(1, 2), h(-11, 2), h(-5, 2), r(9)], Relation::Le, r(0)).unwrap();
        lp.add(vec![h(1, 2), h(-3, 2), h(-1, 2), r(1)], Relation::Le, r(0)).unwrap();
        lp.add(vec![r(1), r(0), r(0), r(0)], Relation::Le, r(1)).unwrap();
        lp.add(vec![r(1), r(1), r(1), r(1)], Relation::Ge, r(1)).unwrap();
        let x = lp.solve().unwrap();
        assert!(lp.is_satisfied_by(&x));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn determinant_is_row_multilinear(
            seed in any::<u64>(),
            row in 0usize..3,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_int_matrix(&mut rng, 3, 3, 6).map(|v| v.clone() / r(rng.gen_range(1..=4)));
            let u = random_int_matrix(&mut rng, 1, 3, 6);
            let v = random_int_matrix(&mut rng, 1, 3, 6);
            let with_row = |w: &Matrix<Rational>| {
                let mut m = base.clone();
                for j in 0..3 { m[(row, j)] = w[(0, j)].clone(); }
                m
            };
            let sum = &u + &v;
            prop_assert_eq!(
                determinant(&with_row(&sum)).unwrap(),
                determinant(&with_row(&u)).unwrap() + determinant(&with_row(&v)).unwrap()
            );
        }

        #[test]
        fn inverse_times_matrix_is_identity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_int_matrix(&mut rng, 3, 3, 5);
            match inverse(&a) {
                Ok(inv) => prop_assert_eq!(&inv * &a, Matrix::identity(3)),
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(determinant(&a).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn rank_of_transpose(seed in any::<u64>(), m in 1usize..5, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_int_matrix(&mut rng, m, n, 2);
            prop_assert_eq!(rank(&a), rank(&a.transpose()));
        }

        #[test]
        fn positive_witnesses_are_valid(seed in any::<u64>(), n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_int_matrix(&mut rng, n, n, 4);
            if let Some(x) = feasible_positive(&a).unwrap() {
                let ax = a.mul_vec(&x).unwrap();
                prop_assert!(x.iter().chain(&ax).all(|v| *v >= r(1)));
            }
        }
    }
}
