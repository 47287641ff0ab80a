//! Strong full rank of interval matrices, the structured AE-regularity
//! deciders built on it, and the block-form conjecture explorer.

use rand::Rng;
use rayon::prelude::*;

use crate::engine::{falsify_ae_regular, verify_witness, FalsifierConfig, WitnessCheck};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, QIMatrix, Quantifier};
use crate::linalg::{FeasibilityProblem, Relation};
use crate::matrix::Matrix;
use crate::random::{small_interval, stream_rng};
use crate::report::{instance_hash, ExplorationReport, ExplorerConfig, TrialRecord, TrialStatus};
use crate::scalar::Scalar;
use crate::singular::RowBlockForm;

#[derive(Clone, Debug, PartialEq)]
pub enum FullRank<T> {
    Full,
    /// A rank-deficient member and a nonzero vector it annihilates
    /// (`member · kernel = 0` for columns, `kernelᵀ · member = 0` for rows).
    Deficient { member: Matrix<T>, kernel: Vec<T> },
}

impl<T> FullRank<T> {
    pub fn is_full(&self) -> bool {
        matches!(self, FullRank::Full)
    }
}

/// Whether every member of the `m × k` matrix (`m ≥ k`) has rank `k`.
///
/// Some member annihilates `x ≠ 0` iff `|Ac x| ≤ Δ |x|`. Writing `x = S y`
/// with a sign matrix `S` and `y ≥ 0, Σ y ≥ 1` makes each orthant a linear
/// feasibility problem; `x` and `-x` are interchangeable so `s_1 = +1`.
/// From a solution the member `Ac − diag(z) Δ S` with `z_i = (Ac x)_i / (Δ|x|)_i`
/// is built, which is inside the box and annihilates `x`.
pub fn strongly_full_column_rank<T: Scalar>(m: &IntervalMatrix<T>) -> Result<FullRank<T>> {
    let (rows, k) = m.shape();
    if rows < k {
        return Err(Error::DimensionMismatch { op: "strongly_full_column_rank", expected: (k, k), found: (rows, k) });
    }
    if k == 0 {
        return Ok(FullRank::Full);
    }
    let (ac, delta) = m.midpoint_radius();
    let found = (0..1u64 << (k - 1)).into_par_iter().find_map_first(|pattern| {
        let s: Vec<T> = (0..k)
            .map(|j| if j > 0 && (pattern >> (j - 1)) & 1 == 1 { -T::one() } else { T::one() })
            .collect();
        let mut lp = FeasibilityProblem::new(k);
        lp.add(vec![T::one(); k], Relation::Ge, T::one()).expect("arity");
        for i in 0..rows {
            let upper = (0..k).map(|j| ac[(i, j)].clone() * s[j].clone() - delta[(i, j)].clone()).collect();
            let lower = (0..k).map(|j| -(ac[(i, j)].clone() * s[j].clone()) - delta[(i, j)].clone()).collect();
            lp.add(upper, Relation::Le, T::zero()).expect("arity");
            lp.add(lower, Relation::Le, T::zero()).expect("arity");
        }
        lp.solve().map(|y| (s, y))
    });
    let Some((s, y)) = found else {
        return Ok(FullRank::Full);
    };
    let x: Vec<T> = y.iter().zip(&s).map(|(a, b)| a.clone() * b.clone()).collect();
    let r = ac.mul_vec(&x)?;
    let d = delta.mul_vec(&y)?;
    let z: Vec<T> = r.iter().zip(&d).map(|(ri, di)| if di.is_zero() { T::zero() } else { ri.clone() / di.clone() }).collect();
    let member = Matrix::from_fn(rows, k, |i, j| {
        ac[(i, j)].clone() - z[i].clone() * delta[(i, j)].clone() * s[j].clone()
    });
    Ok(FullRank::Deficient { member, kernel: x })
}

/// Row version of [`strongly_full_column_rank`] (`m ≤ k`); the kernel is a
/// left null vector of the returned member.
pub fn strongly_full_row_rank<T: Scalar>(m: &IntervalMatrix<T>) -> Result<FullRank<T>> {
    let (rows, cols) = m.shape();
    if rows > cols {
        return Err(Error::DimensionMismatch { op: "strongly_full_row_rank", expected: (rows, rows), found: (rows, cols) });
    }
    Ok(match strongly_full_column_rank(&m.transpose())? {
        FullRank::Full => FullRank::Full,
        FullRank::Deficient { member, kernel } => FullRank::Deficient { member: member.transpose(), kernel },
    })
}

/// Result of a structured decider: the verdict, a ∀-realization making the
/// ∃ part strongly singular when the verdict is negative, and a short trace.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredOutcome<T> {
    pub regular: bool,
    pub witness: Option<Matrix<T>>,
    pub trace: String,
}

fn overwrite<T: Clone>(target: &mut Matrix<T>, rows: &[usize], cols: &[usize], block: &Matrix<T>) {
    for (bi, &i) in rows.iter().enumerate() {
        for (bj, &j) in cols.iter().enumerate() {
            target[(i, j)] = block[(bi, bj)].clone();
        }
    }
}

/// Decides AE regularity of `(B^∀ b^∃; C^∀ c^∀)` up to row and column
/// permutation: all nondegenerate ∃ entries in one column. AE regular iff
/// `(Bᵀ Cᵀ)` and `(C c)` have strongly full row rank.
///
/// Errors with [`Error::ShapeMismatch`] when the ∃ entries do not fit.
pub fn structured_ae_regular_row<T: Scalar>(q: &QIMatrix<T>) -> Result<StructuredOutcome<T>> {
    let n = q.base().ensure_square("structured_ae_regular_row")?;
    let form = RowBlockForm::locate(n, &q.exists_positions())?;
    let all: Vec<usize> = (0..n).collect();
    let others = form.other_columns(n);
    let forall = q.forall_part();

    let bc = forall.select(&all, &others);
    let cc = forall.select(&form.real_rows, &all);
    let bc_rank = strongly_full_column_rank(&bc)?;
    let cc_rank = strongly_full_row_rank(&cc)?;
    let trace = format!(
        "exists column {}, rows {:?}: (B^T C^T) {}, (C c) {}",
        form.column,
        form.interval_rows,
        if bc_rank.is_full() { "strongly full row rank" } else { "rank deficient" },
        if cc_rank.is_full() { "strongly full row rank" } else { "rank deficient" },
    );
    let mut witness = forall.lower();
    match (bc_rank, cc_rank) {
        (FullRank::Full, FullRank::Full) => return Ok(StructuredOutcome { regular: true, witness: None, trace }),
        (FullRank::Deficient { member, .. }, _) => overwrite(&mut witness, &all, &others, &member),
        (_, FullRank::Deficient { member, .. }) => overwrite(&mut witness, &form.real_rows, &all, &member),
    }
    Ok(StructuredOutcome { regular: false, witness: Some(witness), trace })
}

/// `(B^∀ C^∃)` with `rad C > 0` is AE regular iff `B` has strongly full
/// column rank; the result carries the deficient member of `B` otherwise.
pub fn structured_ae_regular_columns<T: Scalar>(
    b_forall: &IntervalMatrix<T>,
    c_exists: &IntervalMatrix<T>,
) -> Result<FullRank<T>> {
    let n = b_forall.rows();
    if c_exists.rows() != n || b_forall.cols() + c_exists.cols() != n {
        return Err(Error::DimensionMismatch {
            op: "structured_ae_regular_columns",
            expected: (n, n - b_forall.cols().min(n)),
            found: c_exists.shape(),
        });
    }
    if let Some(((i, j), _)) = c_exists.entries().indexed().find(|(_, v)| v.is_degenerate()) {
        return Err(Error::ShapeMismatch(format!("radius condition violated: C entry ({i}, {j}) is degenerate")));
    }
    strongly_full_column_rank(b_forall)
}

/// Column partition of a quantified matrix into fully ∃ columns (every entry
/// nondegenerate and ∃) and the rest, which must hold no nondegenerate ∃ entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnBlockForm {
    pub forall_columns: Vec<usize>,
    pub exists_columns: Vec<usize>,
}

impl ColumnBlockForm {
    pub fn locate<T: Scalar>(q: &QIMatrix<T>) -> Result<Self> {
        let (rows, cols) = q.shape();
        let (exists_columns, forall_columns): (Vec<usize>, Vec<usize>) =
            (0..cols).partition(|&j| rows > 0 && (0..rows).all(|i| q.is_exists(i, j)));
        if exists_columns.is_empty() {
            return Err(Error::ShapeMismatch("no column consists of nondegenerate ∃ entries only".into()));
        }
        if let Some(&(i, j)) = q.exists_positions().iter().find(|(_, j)| !exists_columns.contains(j)) {
            return Err(Error::ShapeMismatch(format!("∃ entry ({i}, {j}) outside the ∃ column block")));
        }
        Ok(Self { forall_columns, exists_columns })
    }
}

/// [`structured_ae_regular_columns`] applied after locating the column block.
pub fn structured_columns_outcome<T: Scalar>(q: &QIMatrix<T>) -> Result<StructuredOutcome<T>> {
    let n = q.base().ensure_square("structured_columns")?;
    let form = ColumnBlockForm::locate(q)?;
    let all: Vec<usize> = (0..n).collect();
    let b = q.base().select(&all, &form.forall_columns);
    let c = q.base().select(&all, &form.exists_columns);
    let trace = format!("exists columns {:?}", form.exists_columns);
    Ok(match structured_ae_regular_columns(&b, &c)? {
        FullRank::Full => StructuredOutcome { regular: true, witness: None, trace: format!("{trace}: B strongly full column rank") },
        FullRank::Deficient { member, .. } => {
            let mut witness = q.forall_part().lower();
            overwrite(&mut witness, &all, &form.forall_columns, &member);
            StructuredOutcome { regular: false, witness: Some(witness), trace: format!("{trace}: B rank deficient") }
        }
    })
}

/// Random instance `(B^∀ D^∃; C^∀ E^∀)` with `B` of size `top × left`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockInstance<T> {
    pub matrix: QIMatrix<T>,
    pub top: usize,
    pub left: usize,
}

/// Largest number of ∃ entries drawn, so exact verification stays cheap.
const MAX_EXISTS_ENTRIES: usize = 6;

pub fn conjecture2_instance<T: Scalar>(seed: u64, trial: u64, max_n: usize) -> BlockInstance<T> {
    let mut rng = stream_rng(seed, trial);
    let n = rng.gen_range(2..=max_n.max(2));
    let (top, left) = loop {
        let top = rng.gen_range(1..=n);
        let left = rng.gen_range(0..n);
        if top * (n - left) <= MAX_EXISTS_ENTRIES {
            break (top, left);
        }
    };
    let mut base = Matrix::from_fn(n, n, |i, j| {
        if i < top && j >= left {
            small_interval::<T, _>(&mut rng, 2, &[1, 2, 3])
        } else {
            small_interval::<T, _>(&mut rng, 2, &[0, 0, 0, 1, 2])
        }
    });
    match rng.gen_range(0..5) {
        // a (C E) row that can vanish
        0 if top < n => {
            let i = rng.gen_range(top..n);
            for j in 0..n {
                base[(i, j)] = if rng.gen_bool(0.5) { Interval::zero() } else { small_interval(&mut rng, 0, &[1, 2]) };
            }
        }
        // a [B; C] column that can vanish
        1 if left > 0 => {
            let j = rng.gen_range(0..left);
            for i in 0..n {
                base[(i, j)] = Interval::from_mid_rad(T::zero(), T::ratio(rng.gen_range(0..=2), 2));
            }
        }
        _ => {}
    }
    let quants = Matrix::from_fn(n, n, |i, j| if i < top && j >= left { Quantifier::Exists } else { Quantifier::Forall });
    let matrix = QIMatrix::new(IntervalMatrix::new(base), quants).expect("matching shapes");
    BlockInstance { matrix, top, left }
}

/// Conjectured criterion: `(Bᵀ Cᵀ)` and `(C E)` strongly full row rank, with
/// a ∀-realization witnessing failure. `alt` evaluates the `(B E)` reading,
/// defined only when `B` and `E` have equally many rows.
pub struct BlockCriterion<T> {
    pub holds: bool,
    pub alt: Option<bool>,
    pub witness: Option<Matrix<T>>,
}

pub fn conjecture2_criterion<T: Scalar>(inst: &BlockInstance<T>) -> Result<BlockCriterion<T>> {
    let q = &inst.matrix;
    let n = q.base().ensure_square("conjecture2_criterion")?;
    let all: Vec<usize> = (0..n).collect();
    let left: Vec<usize> = (0..inst.left).collect();
    let top: Vec<usize> = (0..inst.top).collect();
    let bottom: Vec<usize> = (inst.top..n).collect();
    let right: Vec<usize> = (inst.left..n).collect();
    let forall = q.forall_part();

    let bc = strongly_full_column_rank(&forall.select(&all, &left))?;
    let ce = strongly_full_row_rank(&forall.select(&bottom, &all))?;
    let alt = (top.len() == bottom.len()).then(|| -> Result<bool> {
        let b = forall.select(&top, &left);
        let e = forall.select(&bottom, &right);
        let be = Matrix::from_fn(top.len(), n, |i, j| {
            if j < inst.left { b.entry(i, j).clone() } else { e.entry(i, j - inst.left).clone() }
        });
        Ok(bc.is_full() && strongly_full_row_rank(&IntervalMatrix::new(be))?.is_full())
    });
    let alt = alt.transpose()?;
    let mut witness = forall.lower();
    let holds = match (bc, ce) {
        (FullRank::Full, FullRank::Full) => true,
        (FullRank::Deficient { member, .. }, _) => {
            overwrite(&mut witness, &all, &left, &member);
            false
        }
        (_, FullRank::Deficient { member, .. }) => {
            overwrite(&mut witness, &bottom, &all, &member);
            false
        }
    };
    Ok(BlockCriterion { holds, alt, witness: (!holds).then_some(witness) })
}

fn rows_text<T: Scalar>(m: &Matrix<T>) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Compares the block criterion against exact evidence. A failing criterion
/// comes with a ∀-realization that is verified exactly (`agree`). A holding
/// criterion is attacked by the falsifier: an exactly verified witness is a
/// counterexample, otherwise the trial is `unrefuted`.
pub fn explore_conjecture2<T: Scalar>(config: &ExplorerConfig, falsifier: &FalsifierConfig) -> ExplorationReport {
    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let inst: BlockInstance<T> = conjecture2_instance(config.seed, trial, config.max_n);
            let instance = inst.matrix.to_string();
            let crit = conjecture2_criterion(&inst).expect("square instance");
            let (ground_truth, status, certificate) = if let Some(w) = &crit.witness {
                match verify_witness(&inst.matrix, w, config.budget_bits) {
                    Ok(WitnessCheck::Confirmed) => {
                        (Some(false), TrialStatus::Agree, Some(format!("forall realization {}", rows_text(w))))
                    }
                    _ => (None, TrialStatus::Inconclusive, None),
                }
            } else {
                let cfg = FalsifierConfig { seed: falsifier.seed.wrapping_add(trial), ..*falsifier };
                match falsify_ae_regular(&inst.matrix, &cfg, config.budget_bits) {
                    Ok(out) => match out.witness {
                        Some(w) => (
                            Some(false),
                            TrialStatus::Counterexample,
                            Some(format!("forall realization {}", rows_text(&w))),
                        ),
                        None => (None, TrialStatus::Unrefuted, None),
                    },
                    Err(_) => (None, TrialStatus::Inconclusive, None),
                }
            };
            TrialRecord {
                trial,
                seed: config.seed,
                n: inst.matrix.rows(),
                instance_hash: instance_hash(&instance),
                criterion: crit.holds,
                ground_truth,
                status,
                alt_criterion: crit.alt,
                instance,
                certificate,
            }
        })
        .collect();
    ExplorationReport::new(2, config.seed, records)
}
