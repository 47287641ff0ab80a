//! Seeded random helpers for fixture generators and explorers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interval::Interval;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Deterministic RNG for a `(seed, stream)` pair, so trial `k` of a run can be
/// replayed on its own.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Integer in `[-lim, lim]` divided by a denominator drawn from `dens`.
pub fn small_rational<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lim: i64, dens: &[i64]) -> T {
    let d = *dens.choose(rng).unwrap_or(&1);
    T::ratio(rng.gen_range(-lim * d..=lim * d), d)
}

pub fn small_int_matrix<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, lim: i64) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::from_int(rng.gen_range(-lim..=lim)))
}

/// Interval with endpoints on a coarse grid; `width_choices` are multiples of 1/2.
pub fn small_interval<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lim: i64, widths: &[i64]) -> Interval<T> {
    let lo: T = small_rational(rng, lim, &[1, 2]);
    let w = *widths.choose(rng).unwrap_or(&0);
    Interval::new(lo.clone(), lo + T::ratio(w, 2)).expect("nonnegative width")
}

/// Interval of positive width containing `v`.
pub fn interval_around<T: Scalar, R: Rng + ?Sized>(rng: &mut R, v: &T) -> Interval<T> {
    let below = T::ratio(rng.gen_range(0..=2), 2);
    let above = T::ratio(rng.gen_range(if below.is_zero() { 1 } else { 0 }..=2), 2);
    Interval::new(v.clone() - below, v.clone() + above).expect("ordered endpoints")
}

pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
