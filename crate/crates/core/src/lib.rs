//! Numerical laboratory for finite-dimensional Hamiltonian group actions.
//!
//! The crate covers unitary representations of compact groups on `C^d`
//! ([`algebra`]), their moment maps and the quadratic invariant `nu`
//! ([`symplectic`]), the moment map flow and its limits ([`flow`]), exact GIT
//! stability for torus actions ([`git`], backed by the exact rational simplex
//! in [`lp`]), Donaldson-Futaki bookkeeping ([`kstab`]) and scenario files
//! with the `mmflow` command line ([`scenario`]).
//!
//! ```
//! use mmflow::algebra::{make_torus_rep, point, LieVector};
//! use mmflow::symplectic::{moment_pairing, Chart};
//!
//! let rep = make_torus_rep(1, &[vec![1], vec![-1]]).unwrap();
//! let x = point(&[(1.0, 0.0), (0.0, 0.0)]);
//! let mu = moment_pairing(&rep, &x, &LieVector::basis(1, 0), Chart::Affine).unwrap();
//! assert_eq!(mu, -0.5);
//! ```

pub mod algebra;
pub mod error;
pub mod flow;
pub mod git;
pub mod kstab;
pub mod lp;
pub mod rational;
pub mod scenario;
pub mod symplectic;

pub use error::{Error, Result};
