//! Exact Ehrhart invariants of lattice polytopes.
//!
//! ```
//! use hstar::polytope::Polytope;
//! use hstar::ehrhart::h_star;
//! use hstar::monoid::{is_idp, spanning_report};
//!
//! let p = Polytope::from_i64(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]])?;
//! assert_eq!(h_star(&p)?.entries(), &[1, 0, 1, 0]);
//! assert!(!is_idp(&p)?.value);
//! assert_eq!(spanning_report(&p)?.q, 2.into());
//! # Ok::<(), hstar::Error>(())
//! ```

pub mod dilates;
pub mod ehrhart;
pub mod error;
pub mod graded;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod monoid;
pub mod oracle;
pub mod polytope;
pub mod report;

pub use error::{Error, Result};
