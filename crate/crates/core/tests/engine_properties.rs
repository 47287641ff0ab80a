//! Verdict-level properties of the AE-regularity pipeline on random corpora.

use aereg::engine::{check_ae_regular, verify_witness, Certificate, EngineConfig, FalsifierConfig, Status};
use aereg::random::{permutation, small_interval, stream_rng};
use aereg::singular::{is_strongly_singular, StrongSingularity};
use aereg::{Interval, IntervalMatrix, Matrix, QIMatrix, Quantifier, Rational, Scalar};
use rand::Rng;

fn config() -> EngineConfig {
    EngineConfig { falsifier: FalsifierConfig { starts: 8, iterations: 200, ..Default::default() }, ..Default::default() }
}

/// n ≤ 3 with at most `max_forall` nondegenerate ∀ entries and a few ∃ entries.
fn small_instance(seed: u64, max_forall: usize) -> QIMatrix<Rational> {
    let mut rng = stream_rng(seed, 0);
    let n = rng.gen_range(1..=3);
    let mut forall_left = max_forall;
    let mut exists_left = 4;
    let mut quants = Matrix::from_fn(n, n, |_, _| Quantifier::Forall);
    let base = Matrix::from_fn(n, n, |i, j| {
        let roll = rng.gen_range(0..10);
        if roll < 3 && exists_left > 0 {
            exists_left -= 1;
            quants[(i, j)] = Quantifier::Exists;
            small_interval(&mut rng, 2, &[1, 2, 4])
        } else if roll < 6 && forall_left > 0 {
            forall_left -= 1;
            small_interval(&mut rng, 2, &[1, 2, 4])
        } else {
            Interval::point(Rational::ratio(rng.gen_range(-2..=2), 1))
        }
    });
    QIMatrix::new(IntervalMatrix::new(base), quants).unwrap()
}

fn grid(a: &Interval<Rational>) -> Vec<Rational> {
    let step = a.radius() * Rational::ratio(2, 16);
    (0..=16).map(|k| a.lo().clone() + step.clone() * Rational::ratio(k, 1)).collect()
}

#[test]
fn ae_regular_verdicts_survive_a_grid_scan() {
    let mut regular = 0;
    for seed in 0..150 {
        let q = small_instance(seed, 2);
        let v = check_ae_regular(&q, &config()).unwrap();
        if v.status != Status::AeRegular {
            continue;
        }
        regular += 1;
        let (forall, exists) = q.split();
        let coords = q.forall_positions();
        let axes: Vec<Vec<Rational>> = coords.iter().map(|&(i, j)| grid(forall.entry(i, j))).collect();
        let total: usize = axes.iter().map(Vec::len).product();
        for mut idx in 0..total {
            let mut a = forall.lower();
            for (axis, &(i, j)) in axes.iter().zip(&coords) {
                a[(i, j)] = axis[idx % axis.len()].clone();
                idx /= axis.len();
            }
            let ss = is_strongly_singular(&exists.shifted(&a).unwrap(), 20).unwrap();
            assert!(matches!(ss, StrongSingularity::No { .. }), "grid point {a:?} of {q} ({:?})", v.method);
        }
    }
    assert!(regular > 30, "only {regular} regular instances");
}

#[test]
fn negative_verdicts_carry_confirmed_witnesses() {
    let mut negative = 0;
    for seed in 200..350 {
        let q = small_instance(seed, 4);
        let v = check_ae_regular(&q, &config()).unwrap();
        if v.status == Status::NotAeRegular {
            negative += 1;
            let Certificate::ForallWitness(w) = &v.certificate else { panic!("missing witness") };
            assert!(verify_witness(&q, w, 20).unwrap().is_confirmed());
        }
    }
    assert!(negative > 10);
}

fn widen(a: &Interval<Rational>) -> Interval<Rational> {
    let half = Rational::ratio(1, 2);
    Interval::new(a.lo().clone() - half.clone(), a.hi().clone() + half).unwrap()
}

#[test]
fn widening_is_monotone() {
    let cfg = config();
    for seed in 400..520 {
        let q = small_instance(seed, 3);
        let v = check_ae_regular(&q, &cfg).unwrap().status;
        if v == Status::Unknown {
            continue;
        }
        let n = q.rows();
        let mut rng = stream_rng(seed, 9);
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let wider = q.clone().with_entry(i, j, widen(q.entry(i, j)));
        let w = check_ae_regular(&wider, &cfg).unwrap().status;
        if w == Status::Unknown {
            continue;
        }
        if q.is_exists(i, j) {
            assert!(!(v == Status::AeRegular && w == Status::NotAeRegular), "{q}");
        } else {
            // a degenerate entry widened becomes a ∀ interval
            assert!(!(v == Status::NotAeRegular && w == Status::AeRegular), "{q}");
        }
    }
}

#[test]
fn verdicts_are_invariant_under_permutation_and_degenerate_tags() {
    let cfg = config();
    for seed in 600..700 {
        let q = small_instance(seed, 3);
        let v = check_ae_regular(&q, &cfg).unwrap();
        let n = q.rows();
        let mut rng = stream_rng(seed, 3);
        let (rp, cp) = (permutation(&mut rng, n), permutation(&mut rng, n));
        let p = check_ae_regular(&q.permuted(&rp, &cp), &cfg).unwrap();
        if v.status != Status::Unknown && p.status != Status::Unknown {
            assert_eq!(v.status, p.status, "{q}");
        }
        let t = check_ae_regular(&q.transpose(), &cfg).unwrap();
        if v.status != Status::Unknown && t.status != Status::Unknown {
            assert_eq!(v.status, t.status, "{q}");
        }
        let mut flipped = q.clone();
        for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
            if q.entry(i, j).is_degenerate() {
                flipped = flipped.with_quantifier(i, j, Quantifier::Exists);
            }
        }
        assert_eq!(check_ae_regular(&flipped, &cfg).unwrap(), v);
    }
}
