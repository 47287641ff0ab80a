//! Exact deciders, recognizers and falsifiers for AE regularity of quantified
//! interval matrices.
//!
//! An interval matrix whose entries each carry a ∀ or ∃ quantifier is *AE
//! regular* when every choice of the ∀ entries can be completed by a choice of
//! the ∃ entries to a nonsingular matrix. All deciders work over exact
//! rationals ([`Rational`]); the scalar type is generic so the same routines
//! also run on `f64` where rounding is acceptable.

pub mod classes;
pub mod engine;
pub mod error;
pub mod interval;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod rank;
pub mod report;
pub mod scalar;
pub mod singular;

pub use engine::{check_ae_regular, EngineConfig, FalsifierConfig, Method, Status, Verdict};
pub use error::{Error, Result};
pub use interval::{comparison_matrix, magnitude, mignitude, Interval, IntervalMatrix, QIMatrix, Quantifier, VertexIndex};
pub use matrix::Matrix;
pub use scalar::{Rational, Scalar};

pub type RationalMatrix = Matrix<Rational>;
pub type RationalInterval = Interval<Rational>;
pub type RationalIntervalMatrix = IntervalMatrix<Rational>;
pub type RationalQIMatrix = QIMatrix<Rational>;
pub type RationalVerdict = Verdict<Rational>;
pub type F64Matrix = Matrix<f64>;
pub type F64IntervalMatrix = IntervalMatrix<f64>;
