//! SINR-optimal binary and quaternary spreading signatures for synchronous
//! code-division links over multipath channels.
//!
//! The optimum of `max sᴴ Q s` over a finite alphabet is found with a
//! fixed-radius Fincke-Pohst enumeration whose radius is set by a feasible
//! starting vector, so the search always returns the exhaustive optimum.
//! Quaternary problems are mapped onto an equivalent binary problem of
//! twice the length.
//!
//! ```
//! use sigforge::fpsearch::{fp_search_binary, FpConfig};
//! use sigforge::linalg::RealMatrix;
//! use sigforge::model::SinrForm;
//!
//! let v = [1.0, -1.0, 1.0, -1.0];
//! let form = SinrForm::from_real(RealMatrix::outer(&v)).unwrap();
//! let (s, stats) = fp_search_binary(&form, &FpConfig::default()).unwrap();
//! assert_eq!(s.entries(), &[1, -1, 1, -1]);
//! assert!(stats.candidates_found >= 1);
//! ```

pub mod cli;
pub mod error;
pub mod fpsearch;
pub mod linalg;
pub mod model;
pub mod quaternary;
pub mod signature;
pub mod sim;

pub use error::{Error, Result};
pub use fpsearch::{fp_search_binary, FpConfig, SearchStats};
pub use model::SinrForm;
pub use quaternary::fp_search_quaternary;
pub use signature::{BinarySignature, QuadUnit, QuaternarySignature, Signature};
