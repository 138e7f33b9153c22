//! Frames, mass functions and the basic belief-function algebra.
//!
//! A [`MassFunction`] distributes a unit of belief over subsets ([`FocalSet`])
//! of a [`Frame`]. From it one derives belief and plausibility of any subset,
//! the [`ContourFunction`] (plausibility of the singletons) and the pignistic
//! probability used for decisions. Independent mass functions are pooled with
//! Dempster's rule ([`MassFunction::combine`]), which also reports the degree
//! of conflict, and unreliable ones are weakened by discounting.
//!
//! ```
//! use evidential::mass::{FocalSet, Frame, MassFunction};
//!
//! let frame = Frame::new(["a", "b"]).unwrap();
//! let m = MassFunction::from_assignments(
//!     &frame,
//!     [(FocalSet::singleton(0), 0.5), (FocalSet::singleton(1), 0.3), (frame.omega(), 0.2)],
//! )
//! .unwrap();
//! assert_eq!(m.belief(FocalSet::singleton(0)).unwrap(), 0.5);
//! assert!((m.plausibility(FocalSet::singleton(0)).unwrap() - 0.7).abs() < 1e-12);
//! ```

mod contour;
mod frame;
mod function;
mod interchange;
mod simple;

pub use contour::ContourFunction;
pub use frame::{FocalSet, Frame, MAX_FRAME_SIZE};
pub use function::{Combination, MassFunction, SUM_TOLERANCE, TOTAL_CONFLICT};
pub use interchange::MassDocument;
pub use simple::{support_from_weight, weight_from_support, SimpleCombination, SimpleMass};
