//! Strong singularity: every member of an interval matrix is singular.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, VertexIndex};
use crate::linalg::{determinant, rank};
use crate::matrix::Matrix;
use crate::random::{permutation, small_int_matrix, small_interval, small_rational, stream_rng};
use crate::report::{instance_hash, ExplorationReport, ExplorerConfig, TrialRecord, TrialStatus};
use crate::scalar::Scalar;
use crate::QIMatrix;

/// Default vertex budget, `2^20` vertices.
pub const DEFAULT_BUDGET_BITS: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum StrongSingularity<T> {
    /// Every vertex, hence every member, is singular.
    Yes,
    /// The vertex with the smallest index whose determinant is nonzero.
    No { vertex: VertexIndex, member: Matrix<T>, determinant: T },
    BudgetExceeded { needed: u32, budget: u32 },
}

impl<T> StrongSingularity<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, StrongSingularity::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, StrongSingularity::No { .. })
    }
}

/// Decides strong singularity by checking every vertex matrix.
///
/// The determinant is affine in each entry, so its extremes over the box are
/// attained at vertices; all vertices singular means all members singular.
pub fn is_strongly_singular<T: Scalar>(m: &IntervalMatrix<T>, budget_bits: u32) -> Result<StrongSingularity<T>> {
    m.ensure_square("is_strongly_singular")?;
    let positions = m.nondegenerate_positions();
    let bits = positions.len() as u32;
    if bits > budget_bits || bits >= 63 {
        return Ok(StrongSingularity::BudgetExceeded { needed: bits, budget: budget_bits });
    }
    let count = 1u64 << bits;
    let found = (0..count).into_par_iter().find_map_first(|index| {
        let member = m.vertex_from_positions(&positions, index);
        let det = determinant(&member).expect("square by precondition");
        (!det.is_zero()).then_some((index, member, det))
    });
    Ok(match found {
        None => StrongSingularity::Yes,
        Some((index, member, determinant)) => StrongSingularity::No {
            vertex: VertexIndex::from_index(index, positions.len()),
            member,
            determinant,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusFilter {
    Maybe,
    NotStronglySingular,
}

/// A strongly singular matrix has a singular radius matrix, so `det Δ != 0`
/// rules strong singularity out.
pub fn radius_filter<T: Scalar>(m: &IntervalMatrix<T>) -> Result<RadiusFilter> {
    m.ensure_square("radius_filter")?;
    Ok(if determinant(&m.radius())?.is_zero() {
        RadiusFilter::Maybe
    } else {
        RadiusFilter::NotStronglySingular
    })
}

/// Location of the block form `(B b; C c)` inside a square interval matrix:
/// the single column holding every nondegenerate entry, the rows where that
/// column is an interval (`b`), and the remaining all-real rows (`C c`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowBlockForm {
    pub column: usize,
    pub interval_rows: Vec<usize>,
    pub real_rows: Vec<usize>,
}

impl RowBlockForm {
    /// Finds the form for the given set of "interval" positions, or explains why not.
    pub fn locate(n: usize, positions: &[(usize, usize)]) -> Result<Self> {
        let Some(&(_, column)) = positions.first() else {
            return Err(Error::ShapeMismatch("no interval column: at least one entry must have positive radius".into()));
        };
        if let Some(&(i, j)) = positions.iter().find(|&&(_, j)| j != column) {
            return Err(Error::ShapeMismatch(format!(
                "interval entries in columns {column} and {j} (row {i}); expected a single column"
            )));
        }
        let interval_rows: Vec<usize> = positions.iter().map(|&(i, _)| i).collect();
        let real_rows = (0..n).filter(|i| !interval_rows.contains(i)).collect();
        Ok(Self { column, interval_rows, real_rows })
    }

    /// Columns other than the interval column.
    pub fn other_columns(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| j != self.column).collect()
    }
}

/// Strong singularity of `(B b; C c)` with real `B, C, c` and `rad b > 0`:
/// singular for every `b` exactly when `(B^T C^T)` or `(C c)` lacks full row rank.
///
/// The block layout is found by locating the single column that holds every
/// nondegenerate entry, which is the row/column permutation to the form.
pub fn structured_row_strong_singular<T: Scalar>(m: &IntervalMatrix<T>) -> Result<bool> {
    let n = m.ensure_square("structured_row_strong_singular")?;
    let form = RowBlockForm::locate(n, &m.nondegenerate_positions())?;
    let mid = m.midpoint();
    let all_rows: Vec<usize> = (0..n).collect();
    // (B^T C^T) has full row rank iff the n x (n-1) block [B; C] has full column rank
    let bc = mid.select(&all_rows, &form.other_columns(n));
    let bc_deficient = rank(&bc) < n - 1;
    let cc = mid.select(&form.real_rows, &all_rows);
    let cc_deficient = rank(&cc) < form.real_rows.len();
    Ok(bc_deficient || cc_deficient)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularKind {
    ZeroRow,
    RankDeficientBlock,
    PointSingular,
}

impl SingularKind {
    pub const ALL: [SingularKind; 3] = [SingularKind::ZeroRow, SingularKind::RankDeficientBlock, SingularKind::PointSingular];
}

/// Integer matrix of the given shape with rank at most `r` (exactly `r` when possible).
pub(crate) fn low_rank<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, r: usize) -> Matrix<T> {
    if r == 0 || rows == 0 || cols == 0 {
        return Matrix::zeros(rows, cols);
    }
    let target = r.min(rows).min(cols);
    for _ in 0..64 {
        let a: Matrix<T> = &small_int_matrix(rng, rows, r, 2) * &small_int_matrix(rng, r, cols, 2);
        if rank(&a) == target {
            return a;
        }
    }
    &small_int_matrix(rng, rows, r, 2) * &small_int_matrix(rng, r, cols, 2)
}

/// Strongly singular `n x n` interval matrix built from a known sufficient structure.
///
/// * `ZeroRow`: last row is the degenerate zero row, other entries random intervals.
/// * `PointSingular`: degenerate hull of a random rank `n - 1` integer matrix.
/// * `RankDeficientBlock`: a permuted `(B b; C c)` with `rad b > 0` and either
///   `(C c)` or `[B; C]` rank deficient. For `n = 1` no such block exists and
///   the degenerate zero is returned.
pub fn generate_strongly_singular<T: Scalar>(n: usize, seed: u64, kind: SingularKind) -> IntervalMatrix<T> {
    let mut rng = stream_rng(seed, kind as u64);
    let n = n.max(1);
    match kind {
        SingularKind::ZeroRow => IntervalMatrix::new(Matrix::from_fn(n, n, |i, _| {
            if i + 1 == n { Interval::zero() } else { small_interval(&mut rng, 3, &[0, 1, 2, 4]) }
        })),
        SingularKind::PointSingular => IntervalMatrix::point(&low_rank(&mut rng, n, n, n - 1)),
        SingularKind::RankDeficientBlock => {
            if n == 1 {
                return IntervalMatrix::point(&Matrix::zeros(1, 1));
            }
            let k = rng.gen_range(1..=n);
            let real = n - k;
            // mid holds B, C, c in canonical layout: interval rows first, interval column last
            let mut mid: Matrix<T> = small_int_matrix(&mut rng, n, n, 3);
            if real >= 1 && rng.gen_bool(0.5) {
                let cc: Matrix<T> = low_rank(&mut rng, real, n, real - 1);
                for i in 0..real {
                    for j in 0..n {
                        mid[(k + i, j)] = cc[(i, j)].clone();
                    }
                }
            } else {
                let bc: Matrix<T> = low_rank(&mut rng, n, n - 1, n - 2);
                for i in 0..n {
                    for j in 0..n - 1 {
                        mid[(i, j)] = bc[(i, j)].clone();
                    }
                }
            }
            let mut entries = mid.map(|v| Interval::point(v.clone()));
            for i in 0..k {
                let lo: T = small_rational(&mut rng, 3, &[1, 2]);
                let w = T::ratio(rng.gen_range(1..=4), 2);
                entries[(i, n - 1)] = Interval::new(lo.clone(), lo + w).expect("positive width");
            }
            let rp = permutation(&mut rng, n);
            let cp = permutation(&mut rng, n);
            IntervalMatrix::new(entries.permuted(&rp, &cp))
        }
    }
}

/// A real `k x l` submatrix of rank `k + l - n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Conjecture1Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank: usize,
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
}

/// Searches all-degenerate `k x l` submatrices (`k, l >= 1`) whose rank equals
/// `k + l - n - 1`; such a submatrix forces every member to be singular.
/// Evidence for exploration only, never a decision procedure.
pub fn conjecture1_witness<T: Scalar>(m: &IntervalMatrix<T>) -> Result<Option<Conjecture1Witness>> {
    let n = m.ensure_square("conjecture1_witness")?;
    if n > 16 {
        return Err(Error::ShapeMismatch("submatrix search is limited to n <= 16".into()));
    }
    let mid = m.midpoint();
    for k in 1..=n {
        for l in 1..=n {
            let Some(target) = (k + l).checked_sub(n + 1) else { continue };
            for rows in subsets(n, k) {
                for cols in subsets(n, l) {
                    let real = rows.iter().all(|&i| cols.iter().all(|&j| m.entry(i, j).is_degenerate()));
                    if !real {
                        continue;
                    }
                    let r = rank(&mid.select(&rows, &cols));
                    if r == target {
                        return Ok(Some(Conjecture1Witness { rows, cols, rank: r }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Random instance for trial `trial` of the conjecture-1 explorer.
pub fn conjecture1_instance<T: Scalar>(seed: u64, trial: u64, max_n: usize) -> IntervalMatrix<T> {
    let mut rng = stream_rng(seed, trial);
    let n = rng.gen_range(1..=max_n.max(1));
    match rng.gen_range(0..4) {
        0 => {
            let kind = SingularKind::ALL[rng.gen_range(0..3)];
            generate_strongly_singular(n, rng.gen(), kind)
        }
        _ => {
            // widen a few entries of a rank-deficient point matrix
            let r = rng.gen_range(0..n);
            let base: Matrix<T> = low_rank(&mut rng, n, n, r);
            let p = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
            IntervalMatrix::new(base.map(|v| {
                if rng.gen_bool(p) {
                    let w = T::ratio(rng.gen_range(1..=2), 1);
                    Interval::new(v.clone() - w.clone(), v.clone() + w).expect("ordered")
                } else {
                    Interval::point(v.clone())
                }
            }))
        }
    }
}

/// Compares the submatrix criterion with exact strong singularity on random
/// instances. A strongly singular instance without a witness is a verified
/// counterexample to the criterion's converse; a witness on a matrix that is
/// not strongly singular would contradict the elementary direction.
pub fn explore_conjecture1<T: Scalar>(config: &ExplorerConfig) -> ExplorationReport {
    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let m: IntervalMatrix<T> = conjecture1_instance(config.seed, trial, config.max_n);
            let instance = QIMatrix::all_forall(m.clone()).to_string();
            let witness = conjecture1_witness(&m).expect("square instance");
            let truth = is_strongly_singular(&m, config.budget_bits).expect("square instance");
            let (ground_truth, certificate) = match &truth {
                StrongSingularity::Yes => (Some(true), None),
                StrongSingularity::No { member, .. } => {
                    (Some(false), Some(format!("nonsingular member {}", member.to_rows().iter().map(|r| {
                        r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
                    }).collect::<Vec<_>>().join("; "))))
                }
                StrongSingularity::BudgetExceeded { .. } => (None, None),
            };
            let criterion = witness.is_some();
            let status = match ground_truth {
                None => TrialStatus::Inconclusive,
                Some(gt) if gt == criterion => TrialStatus::Agree,
                Some(_) => TrialStatus::Counterexample,
            };
            TrialRecord {
                trial,
                seed: config.seed,
                n: m.rows(),
                instance_hash: instance_hash(&instance),
                criterion,
                ground_truth,
                status,
                alt_criterion: None,
                instance,
                certificate: certificate.or_else(|| witness.map(|w| format!("real submatrix rows {:?} cols {:?} rank {}", w.rows, w.cols, w.rank))),
            }
        })
        .collect();
    ExplorationReport::new(1, config.seed, records)
}
