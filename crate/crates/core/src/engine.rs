//! AE-regularity verdicts: exact branches first, then a numerical falsifier
//! whose candidates are only accepted after exact verification.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{ae_h_matrix, ae_m_matrix, Recognition};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, QIMatrix, Quantifier, VertexIndex};
use crate::linalg::{determinant, FeasibilityProblem, Relation};
use crate::matrix::Matrix;
use crate::random::stream_rng;
use crate::rank::{structured_ae_regular_row, structured_columns_outcome, StructuredOutcome};
use crate::scalar::Scalar;
use crate::singular::{is_strongly_singular, StrongSingularity, DEFAULT_BUDGET_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    AeRegular,
    NotAeRegular,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::AeRegular => "AE_REGULAR",
            Status::NotAeRegular => "NOT_AE_REGULAR",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// Which exact argument produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "no-exists/classical-regularity")]
    ClassicalRegularity,
    #[serde(rename = "no-forall/strong-singularity")]
    NoForallStrongSingularity,
    #[serde(rename = "ae-m-matrix")]
    AeMMatrix,
    #[serde(rename = "ae-h-matrix")]
    AeHMatrix,
    #[serde(rename = "structured-row")]
    StructuredRow,
    #[serde(rename = "structured-columns")]
    StructuredColumns,
    #[serde(rename = "falsifier/exact-verification")]
    Falsifier,
    #[serde(rename = "none")]
    None,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClassicalRegularity => "no-exists/classical-regularity",
            Method::NoForallStrongSingularity => "no-forall/strong-singularity",
            Method::AeMMatrix => "ae-m-matrix",
            Method::AeHMatrix => "ae-h-matrix",
            Method::StructuredRow => "structured-row",
            Method::StructuredColumns => "structured-columns",
            Method::Falsifier => "falsifier/exact-verification",
            Method::None => "none",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<T> {
    /// `A^∀` such that `A^∀ + A^∃` is strongly singular, verified by vertex enumeration.
    ForallWitness(Matrix<T>),
    /// A nonsingular member (no ∀ entries present).
    NonsingularMember(Matrix<T>),
    /// Every `A_yz` determinant is nonzero with one common sign.
    SignStableVertices { min_abs_determinant: T },
    Class(Recognition<T>),
    Structured(String),
    None,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FalsifierDiagnostics {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub residual_tol: f64,
    /// Smallest objective `Σ det²` reached over all starts.
    pub best_residual: f64,
    pub candidates_verified: usize,
    pub confirmed_start: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub budget_bits: u32,
    /// One line per pipeline branch that ran.
    pub steps: Vec<String>,
    pub falsifier: Option<FalsifierDiagnostics>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<T> {
    pub status: Status,
    pub method: Method,
    pub certificate: Certificate<T>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FalsifierConfig {
    pub starts: usize,
    /// Coordinate-descent sweeps per start.
    pub iterations: usize,
    pub seed: u64,
    pub residual_tol: f64,
    /// Denominator bound used when rounding float candidates to rationals.
    pub max_denominator: u64,
}

impl Default for FalsifierConfig {
    fn default() -> Self {
        Self { starts: 32, iterations: 500, seed: 0, residual_tol: 1e-9, max_denominator: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub budget_bits: u32,
    pub falsifier: FalsifierConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { budget_bits: DEFAULT_BUDGET_BITS, falsifier: FalsifierConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regularity<T> {
    Regular { min_abs_determinant: T },
    /// An exact singular member.
    Singular { member: Matrix<T> },
    BudgetExceeded { needed: u32, budget: u32 },
}

fn sign_vector(bits: u64, n: usize) -> Vec<i8> {
    (0..n).map(|k| if (bits >> k) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Classical regularity (every member nonsingular) from the `A_yz` matrices:
/// regular iff all `4^n` determinants are nonzero with a common sign.
///
/// On a sign change the two vertices are joined by a path that flips one
/// entry at a time; the determinant is affine along each step, so the first
/// step that changes sign contains an exact rational singular member.
pub fn classical_regular<T: Scalar>(m: &IntervalMatrix<T>, budget_bits: u32) -> Result<Regularity<T>> {
    let n = m.ensure_square("classical_regular")?;
    let needed = 2 * n as u32;
    if needed > budget_bits || needed >= 63 {
        return Ok(Regularity::BudgetExceeded { needed, budget: budget_bits });
    }
    let dets: Vec<(Matrix<T>, T)> = (0..1u64 << needed)
        .into_par_iter()
        .map(|idx| {
            let y = sign_vector(idx, n);
            let z = sign_vector(idx >> n, n);
            let a = m.a_yz(&y, &z).expect("square with matching signs");
            let d = determinant(&a).expect("square");
            (a, d)
        })
        .collect();
    if let Some((a, _)) = dets.iter().find(|(_, d)| d.is_zero()) {
        return Ok(Regularity::Singular { member: a.clone() });
    }
    let (first, d0) = &dets[0];
    if let Some((other, _)) = dets.iter().find(|(_, d)| d.is_positive() != d0.is_positive()) {
        return Ok(Regularity::Singular { member: singular_on_path(first, other) });
    }
    let min_abs_determinant =
        dets.iter().map(|(_, d)| d.abs()).fold(d0.abs(), |acc, d| T::min_of(&acc, &d));
    Ok(Regularity::Regular { min_abs_determinant })
}

/// Walks from `from` to `to` one differing entry at a time and returns an
/// exact singular point on the first step whose determinant changes sign.
fn singular_on_path<T: Scalar>(from: &Matrix<T>, to: &Matrix<T>) -> Matrix<T> {
    let mut cur = from.clone();
    let mut d_cur = determinant(&cur).expect("square");
    for ((i, j), target) in to.indexed() {
        if &cur[(i, j)] == target {
            continue;
        }
        let mut next = cur.clone();
        next[(i, j)] = target.clone();
        let d_next = determinant(&next).expect("square");
        if d_next.is_zero() {
            return next;
        }
        if d_next.is_positive() != d_cur.is_positive() {
            // det(cur + t (next - cur)) = d_cur + t (d_next - d_cur)
            let t = d_cur.clone() / (d_cur - d_next);
            let a = cur[(i, j)].clone();
            next[(i, j)] = a.clone() + t * (target.clone() - a);
            return next;
        }
        cur = next;
        d_cur = d_next;
    }
    unreachable!("endpoints have determinants of opposite sign")
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessCheck<T> {
    Confirmed,
    /// An ∃ vertex on which the determinant does not vanish.
    Rejected { vertex: VertexIndex, member: Matrix<T> },
    BudgetExceeded { needed: u32, budget: u32 },
}

impl<T> WitnessCheck<T> {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, WitnessCheck::Confirmed)
    }
}

/// Exact check that `candidate + A^∃` is strongly singular.
///
/// `candidate` is a realization of `A^∀`: inside the ∀ bounds, with zeros at
/// the ∃ positions.
pub fn verify_witness<T: Scalar>(q: &QIMatrix<T>, candidate: &Matrix<T>, budget_bits: u32) -> Result<WitnessCheck<T>> {
    q.base().ensure_square("verify_witness")?;
    let (forall, exists) = q.split();
    if candidate.shape() != forall.shape() {
        return Err(Error::DimensionMismatch { op: "verify_witness", expected: forall.shape(), found: candidate.shape() });
    }
    if let Some((row, col)) = forall.first_violation(candidate) {
        return Err(Error::OutOfBounds { row, col });
    }
    Ok(match is_strongly_singular(&exists.shifted(candidate)?, budget_bits)? {
        StrongSingularity::Yes => WitnessCheck::Confirmed,
        StrongSingularity::No { vertex, member, .. } => WitnessCheck::Rejected { vertex, member },
        StrongSingularity::BudgetExceeded { needed, budget } => WitnessCheck::BudgetExceeded { needed, budget },
    })
}

/// Objective `f(A^∀) = Σ_v det(A^∀ + A^∃_v)²` over the ∃ vertices, in floating point.
struct Landscape {
    base: Matrix<f64>,
    vertices: Vec<Matrix<f64>>,
    coords: Vec<(usize, usize)>,
    bounds: Vec<(f64, f64)>,
}

impl Landscape {
    fn assemble(&self, x: &[f64]) -> Matrix<f64> {
        let mut a = self.base.clone();
        for (&(i, j), v) in self.coords.iter().zip(x) {
            a[(i, j)] = *v;
        }
        a
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let a = self.assemble(x);
        self.vertices.iter().map(|e| determinant(&(&a + e)).unwrap_or(f64::NAN).powi(2)).sum()
    }

    /// Exact minimization along coordinate `p`: every determinant is affine in
    /// a single entry, so `f` is a quadratic there.
    fn coordinate_step(&self, x: &mut [f64], p: usize) {
        let (i, j) = self.coords[p];
        let a = self.assemble(x);
        let (mut num, mut den) = (0.0, 0.0);
        for e in &self.vertices {
            let mut m = &a + e;
            m[(i, j)] = 0.0;
            let alpha = determinant(&m).unwrap_or(0.0);
            m[(i, j)] = 1.0;
            let beta = determinant(&m).unwrap_or(0.0) - alpha;
            num += alpha * beta;
            den += beta * beta;
        }
        if den > 1e-300 {
            let (lo, hi) = self.bounds[p];
            x[p] = (-num / den).clamp(lo, hi);
        }
    }

    fn descend(&self, x: &mut [f64], free: &[usize], sweeps: usize, target: f64) -> f64 {
        let mut f = self.objective(x);
        for _ in 0..sweeps {
            if f <= target {
                break;
            }
            for &p in free {
                self.coordinate_step(x, p);
            }
            let next = self.objective(x);
            let stalled = f - next <= 1e-13 * f;
            f = next;
            if stalled {
                break;
            }
        }
        f
    }
}

/// Exact data for rounding float candidates.
struct ExactData<'a, T> {
    q: &'a QIMatrix<T>,
    lower: Matrix<T>,
    vertices: Vec<Matrix<T>>,
    intervals: Vec<(T, T)>,
}

impl<T: Scalar> ExactData<'_, T> {
    fn candidate(&self, coords: &[(usize, usize)], values: &[T]) -> Matrix<T> {
        let mut a = self.lower.clone();
        for (&(i, j), v) in coords.iter().zip(values) {
            a[(i, j)] = v.clone();
        }
        a
    }

    fn clamp(&self, p: usize, v: T) -> T {
        let (lo, hi) = &self.intervals[p];
        T::min_of(&T::max_of(&v, lo), hi)
    }

    /// Re-solves the coordinates `line` (all in one row or one column) so
    /// that every ∃ vertex determinant vanishes, keeping the others fixed.
    /// Each determinant is affine in the entries of a single row or column,
    /// so this is an exact linear feasibility problem over the box.
    fn solve_line(&self, coords: &[(usize, usize)], values: &[T], line: &[usize]) -> Option<Vec<T>> {
        let mut base = values.to_vec();
        for &p in line {
            base[p] = self.intervals[p].0.clone();
        }
        let a = self.candidate(coords, &base);
        let mut lp = FeasibilityProblem::new(line.len());
        for e in &self.vertices {
            let mut m = &a + e;
            let alpha = determinant(&m).expect("square");
            let mut betas = Vec::with_capacity(line.len());
            for &p in line {
                let (i, j) = coords[p];
                m[(i, j)] = base[p].clone() + T::one();
                betas.push(determinant(&m).expect("square") - alpha.clone());
                m[(i, j)] = base[p].clone();
            }
            lp.add(betas, Relation::Eq, -alpha).ok()?;
        }
        for (k, &p) in line.iter().enumerate() {
            let mut unit = vec![T::zero(); line.len()];
            unit[k] = T::one();
            let (lo, hi) = &self.intervals[p];
            lp.add(unit, Relation::Le, hi.clone() - lo.clone()).ok()?;
        }
        let u = lp.solve()?;
        for (k, &p) in line.iter().enumerate() {
            base[p] = base[p].clone() + u[k].clone();
        }
        Some(base)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FalsifierOutcome<T> {
    /// Exactly verified `A^∀` realization, if one was found.
    pub witness: Option<Matrix<T>>,
    pub diagnostics: FalsifierDiagnostics,
}

const START_CHUNK: usize = 8;

struct StartResult<T> {
    residual: f64,
    verified: usize,
    witness: Option<Matrix<T>>,
}

/// Searches an `A^∀` making every ∃ vertex singular by multi-start projected
/// coordinate descent on `Σ_v det(A^∀ + A^∃_v)²`.
///
/// Converged points are rounded to rationals (continued-fraction snapping),
/// then, row by row and column by column, the coordinates of one line are
/// re-solved exactly with the rest held at their snapped values. Candidates
/// go to [`verify_witness`]. Only an
/// exact confirmation is reported; `witness: None` proves nothing.
pub fn falsify_ae_regular<T: Scalar>(
    q: &QIMatrix<T>,
    config: &FalsifierConfig,
    budget_bits: u32,
) -> Result<FalsifierOutcome<T>> {
    q.base().ensure_square("falsify_ae_regular")?;
    let (forall, exists) = q.split();
    let mut diagnostics = FalsifierDiagnostics {
        starts: config.starts,
        iterations: config.iterations,
        seed: config.seed,
        residual_tol: config.residual_tol,
        best_residual: f64::INFINITY,
        candidates_verified: 0,
        confirmed_start: None,
    };
    let exists_positions = exists.nondegenerate_positions();
    let bits = exists_positions.len() as u32;
    if bits > budget_bits || bits >= 63 {
        return Err(Error::BudgetExceeded { needed: bits, budget: budget_bits });
    }
    let coords = q.forall_positions();

    if coords.is_empty() {
        let candidate = forall.lower();
        diagnostics.candidates_verified = 1;
        let confirmed = verify_witness(q, &candidate, budget_bits)?.is_confirmed();
        if confirmed {
            diagnostics.best_residual = 0.0;
            diagnostics.confirmed_start = Some(0);
        }
        return Ok(FalsifierOutcome { witness: confirmed.then_some(candidate), diagnostics });
    }

    let exact_vertices: Vec<Matrix<T>> =
        (0..1u64 << bits).map(|idx| exists.vertex_from_positions(&exists_positions, idx)).collect();
    let exact = ExactData {
        q,
        lower: forall.lower(),
        vertices: exact_vertices,
        intervals: coords.iter().map(|&(i, j)| {
            let a = forall.entry(i, j);
            (a.lo().clone(), a.hi().clone())
        }).collect(),
    };
    let landscape = Landscape {
        base: forall.lower().to_f64(),
        vertices: exact.vertices.iter().map(Matrix::to_f64).collect(),
        bounds: exact.intervals.iter().map(|(lo, hi)| (lo.to_f64_lossy(), hi.to_f64_lossy())).collect(),
        coords: coords.clone(),
    };
    let nv = landscape.vertices.len() as f64;
    let target = config.residual_tol.powi(2) * nv;
    let all: Vec<usize> = (0..coords.len()).collect();
    let n = q.rows();
    let lines: Vec<Vec<usize>> = (0..n)
        .map(|i| all.iter().copied().filter(|&p| coords[p].0 == i).collect::<Vec<_>>())
        .chain((0..n).map(|j| all.iter().copied().filter(|&p| coords[p].1 == j).collect()))
        .filter(|l: &Vec<usize>| !l.is_empty())
        .collect();

    let run_start = |s: usize| -> StartResult<T> {
        let mut rng = stream_rng(config.seed, s as u64);
        let mut x: Vec<f64> = landscape
            .bounds
            .iter()
            .map(|&(lo, hi)| match s {
                0 => 0.5 * (lo + hi),
                _ if s % 4 == 1 => if rng.gen_bool(0.5) { lo } else { hi },
                _ => lo + (hi - lo) * rng.gen::<f64>(),
            })
            .collect();
        let residual = landscape.descend(&mut x, &all, config.iterations, target);
        let mut out = StartResult { residual, verified: 0, witness: None };
        if residual.is_nan() || residual > target {
            return out;
        }
        let snap = |p: usize, v: f64| exact.clamp(p, T::from_f64_approx(v, config.max_denominator));
        let try_candidate = |values: &[T], out: &mut StartResult<T>| -> bool {
            let cand = exact.candidate(&coords, values);
            out.verified += 1;
            if matches!(verify_witness(exact.q, &cand, budget_bits), Ok(WitnessCheck::Confirmed)) {
                out.witness = Some(cand);
                true
            } else {
                false
            }
        };

        let snapped: Vec<T> = x.iter().enumerate().map(|(p, &v)| snap(p, v)).collect();
        if try_candidate(&snapped, &mut out) {
            return out;
        }

        for line in &lines {
            if let Some(values) = exact.solve_line(&coords, &snapped, line) {
                if try_candidate(&values, &mut out) {
                    break;
                }
            }
        }
        out
    };

    // fixed-size chunks keep the early exit independent of the thread count
    let mut witness = None;
    let starts = config.starts.max(1);
    'chunks: for chunk in (0..starts).step_by(START_CHUNK) {
        let results: Vec<StartResult<T>> =
            (chunk..(chunk + START_CHUNK).min(starts)).into_par_iter().map(run_start).collect();
        for (k, r) in results.into_iter().enumerate() {
            diagnostics.best_residual = diagnostics.best_residual.min(r.residual);
            diagnostics.candidates_verified += r.verified;
            if r.witness.is_some() {
                witness = r.witness;
                diagnostics.confirmed_start = Some(chunk + k);
                break 'chunks;
            }
        }
    }
    Ok(FalsifierOutcome { witness, diagnostics })
}

impl<T> Verdict<T> {
    fn new(status: Status, method: Method, certificate: Certificate<T>, diagnostics: Diagnostics) -> Self {
        Self { status, method, certificate, diagnostics }
    }
}

/// Full pipeline; returns the first conclusive branch:
///
/// 1. no ∃ entries: classical regularity;
/// 2. no ∀ entries: AE regular iff some member is nonsingular;
/// 3. ∀∃ M-matrix;
/// 4. ∀∃ H-matrix;
/// 5. structured forms (single ∃ column segment, or ∃ column block);
/// 6. falsifier with exact verification.
///
/// Falsifier failure yields `Unknown`, never `AeRegular`.
pub fn check_ae_regular<T: Scalar>(q: &QIMatrix<T>, config: &EngineConfig) -> Result<Verdict<T>> {
    q.base().ensure_square("check_ae_regular")?;
    let budget = config.budget_bits;
    let mut diag = Diagnostics { budget_bits: budget, ..Default::default() };
    let forall = q.forall_part();
    let has_exists = !q.exists_positions().is_empty();
    let has_forall = !q.forall_positions().is_empty();

    let not_regular = |witness: Matrix<T>, method: Method, diag: &mut Diagnostics| -> Result<Option<Verdict<T>>> {
        match verify_witness(q, &witness, budget)? {
            WitnessCheck::Confirmed => Ok(Some(Verdict::new(
                Status::NotAeRegular,
                method,
                Certificate::ForallWitness(witness),
                std::mem::take(diag),
            ))),
            other => {
                diag.steps.push(format!("{method}: witness not confirmed ({other:?})"));
                Ok(None)
            }
        }
    };

    if !has_exists {
        match classical_regular(&forall, budget)? {
            Regularity::Regular { min_abs_determinant } => {
                diag.steps.push("classical regularity: all A_yz determinants share one sign".into());
                return Ok(Verdict::new(
                    Status::AeRegular,
                    Method::ClassicalRegularity,
                    Certificate::SignStableVertices { min_abs_determinant },
                    diag,
                ));
            }
            Regularity::Singular { member } => {
                diag.steps.push("classical regularity: exact singular member".into());
                if let Some(v) = not_regular(member, Method::ClassicalRegularity, &mut diag)? {
                    return Ok(v);
                }
            }
            Regularity::BudgetExceeded { needed, budget } => {
                diag.steps.push(format!("classical regularity: budget exceeded (2^{needed} > 2^{budget})"));
            }
        }
    } else if !has_forall {
        match is_strongly_singular(q.base(), budget)? {
            StrongSingularity::No { member, .. } => {
                diag.steps.push("no ∀ entries: nonsingular member found".into());
                return Ok(Verdict::new(
                    Status::AeRegular,
                    Method::NoForallStrongSingularity,
                    Certificate::NonsingularMember(member),
                    diag,
                ));
            }
            StrongSingularity::Yes => {
                diag.steps.push("no ∀ entries: every vertex singular".into());
                if let Some(v) = not_regular(forall.lower(), Method::NoForallStrongSingularity, &mut diag)? {
                    return Ok(v);
                }
            }
            StrongSingularity::BudgetExceeded { needed, budget } => {
                diag.steps.push(format!("strong singularity: budget exceeded (2^{needed} > 2^{budget})"));
            }
        }
    }

    let m = ae_m_matrix(q)?;
    diag.steps.push(format!("ae-m-matrix: {}", m.holds));
    if m.holds {
        return Ok(Verdict::new(Status::AeRegular, Method::AeMMatrix, Certificate::Class(m), diag));
    }
    let h = ae_h_matrix(q)?;
    diag.steps.push(format!("ae-h-matrix: {}", h.holds));
    if h.holds {
        return Ok(Verdict::new(Status::AeRegular, Method::AeHMatrix, Certificate::Class(h), diag));
    }

    let structured: [(Method, Result<StructuredOutcome<T>>); 2] = [
        (Method::StructuredRow, structured_ae_regular_row(q)),
        (Method::StructuredColumns, structured_columns_outcome(q)),
    ];
    for (method, outcome) in structured {
        match outcome {
            Ok(o) if o.regular => {
                diag.steps.push(format!("{method}: {}", o.trace));
                return Ok(Verdict::new(Status::AeRegular, method, Certificate::Structured(o.trace), diag));
            }
            Ok(o) => {
                diag.steps.push(format!("{method}: {}", o.trace));
                if let Some(w) = o.witness {
                    if let Some(v) = not_regular(w, method, &mut diag)? {
                        return Ok(v);
                    }
                }
            }
            Err(Error::ShapeMismatch(why)) => diag.steps.push(format!("{method}: not applicable ({why})")),
            Err(e) => return Err(e),
        }
    }

    match falsify_ae_regular(q, &config.falsifier, budget) {
        Ok(out) => {
            let found = out.witness.is_some();
            diag.falsifier = Some(out.diagnostics);
            diag.steps.push(format!("falsifier: {}", if found { "confirmed witness" } else { "no witness" }));
            if let Some(w) = out.witness {
                return Ok(Verdict::new(Status::NotAeRegular, Method::Falsifier, Certificate::ForallWitness(w), diag));
            }
        }
        Err(Error::BudgetExceeded { needed, budget }) => {
            diag.steps.push(format!("falsifier: budget exceeded (2^{needed} > 2^{budget})"));
        }
        Err(e) => return Err(e),
    }
    Ok(Verdict::new(Status::Unknown, Method::None, Certificate::None, diag))
}

/// Random quantified matrix that is not AE regular by construction: a set of
/// rows (or, transposed, columns) of an integer point matrix is linearly
/// dependent, the ∀ intervals contain that point, and every ∃ entry lies
/// outside the dependent rows. The point itself is therefore a witness.
///
/// Returns the matrix together with that embedded witness.
pub fn generate_not_ae_regular<T: Scalar>(n: usize, seed: u64) -> (QIMatrix<T>, Matrix<T>) {
    let n = n.max(1);
    let mut rng = stream_rng(seed, 0);
    let k = rng.gen_range(1..=n.min(3));
    let dependent = crate::random::permutation(&mut rng, n)[..k].to_vec();
    let block: Matrix<T> = crate::singular::low_rank(&mut rng, k, n, k - 1);
    let mut point: Matrix<T> = crate::random::small_int_matrix(&mut rng, n, n, 2);
    for (bi, &i) in dependent.iter().enumerate() {
        for j in 0..n {
            point[(i, j)] = block[(bi, j)].clone();
        }
    }
    let mut exists_left = 6;
    let mut quants = Matrix::from_fn(n, n, |_, _| Quantifier::Forall);
    let entries = Matrix::from_fn(n, n, |i, j| {
        let v = &point[(i, j)];
        if !dependent.contains(&i) && exists_left > 0 && rng.gen_bool(0.4) {
            exists_left -= 1;
            quants[(i, j)] = Quantifier::Exists;
            crate::random::interval_around(&mut rng, v)
        } else if rng.gen_bool(0.6) {
            crate::random::interval_around(&mut rng, v)
        } else {
            Interval::point(v.clone())
        }
    });
    let q = QIMatrix::new(IntervalMatrix::new(entries), quants).expect("matching shapes");
    let witness = q.forall_part().lower();
    let witness = Matrix::from_fn(n, n, |i, j| if q.is_exists(i, j) { witness[(i, j)].clone() } else { point[(i, j)].clone() });
    if rng.gen_bool(0.5) {
        (q.transpose(), witness.transpose())
    } else {
        (q, witness)
    }
}

/// Solves `B x = 0, s^T x = 1` with `s ∈ [-e, e]`; solvable iff `B` is singular.
///
/// A kernel vector scaled to unit 1-norm paired with its sign vector is a solution.
pub fn normalized_kernel_vector<T: Scalar>(b: &Matrix<T>) -> Option<(Vec<T>, Vec<T>)> {
    let x = crate::linalg::null_vector(b)?;
    let norm = x.iter().fold(T::zero(), |acc, v| acc + v.abs());
    let x: Vec<T> = x.into_iter().map(|v| v / norm.clone()).collect();
    let s = x.iter().map(|v| if v.is_negative() { -T::one() } else { T::one() }).collect();
    Some((x, s))
}
