//! Exact symbolic computation for the Witt algebra `W = k[t,t^-1]∂` and the
//! Virasoro algebra, over arbitrary-precision rationals.
//!
//! The crate is organized around a small tower of modules:
//!
//! * [`exactalg`] — rationals, Laurent polynomials, factored polynomials, and
//!   truncated jets; the arithmetic everything else is built on.
//! * [`liealg`] — elements and brackets of `W`, its subalgebras `W_{>=-1}`,
//!   `W_{>=0}`, `W_{>=1}`, and the central extension `Vir`.
//! * [`localfn`] — local functionals (finite sums of point evaluations of a
//!   vector field and its derivatives), the alternating form `B_chi`, rank and
//!   isotropy computations, and linear-recurrence detection.
//! * [`sympoisson`] — the symmetric algebra `S(W)` with its Poisson bracket,
//!   determinant generators, and the Poisson morphisms `p_gamma` into
//!   `k[t,t^-1,y]`.
//! * [`dloc`] — formal local diffeomorphisms and shifts acting on local
//!   functionals, canonical forms, orbit invariants, orbit dimension and
//!   closure comparison.
//! * [`subalg`] — finite-codimension subalgebras of `W` and `Vir`: floor
//!   polynomials, support, one-point invariants, the codimension <= 3
//!   classification, and the explicit expression of `z` as a bracket
//!   combination.
//! * [`weyl`] — the localized Weyl algebra `k[t,t^-1]<∂>` with normal
//!   ordering, the Lie homomorphisms `pi_gamma`, and the modules `N_x`.
//!
//! All arithmetic is exact; no floating point appears anywhere.
//!
//! ```
//! use wittvir_core::exactalg::{parse_laurent, rint};
//! use wittvir_core::liealg::{witt_bracket, AlgebraTag, VirElement};
//! use wittvir_core::localfn::LocalFunction;
//! use wittvir_core::dloc::{canonicalize, act_on_local, orbit_dim};
//!
//! // [t∂, t^2∂] = t^2∂
//! let u = VirElement::parse("t", AlgebraTag::W)?;
//! let v = VirElement::parse("t^2", AlgebraTag::W)?;
//! assert_eq!(witt_bracket(&u, &v)?.coeff(), &parse_laurent("t^2")?);
//!
//! // reduce an order-2 functional at x = 1 to its canonical form and
//! // reproduce it with the witness diffeomorphism
//! let chi = LocalFunction::one_point(AlgebraTag::W, rint(1), vec![rint(4), rint(-1), rint(7)])?;
//! let point = &chi.points()[0];
//! let cf = canonicalize(point, AlgebraTag::W)?;
//! assert_eq!(act_on_local(&cf.witness, point, AlgebraTag::W)?, cf.functional(rint(1))?);
//! assert_eq!(orbit_dim(&chi), 4);
//! # Ok::<(), wittvir_core::Error>(())
//! ```

pub mod exactalg;
pub mod liealg;
pub mod localfn;
pub(crate) mod matq;
pub mod sympoisson;
pub mod dloc;
pub mod subalg;
pub mod weyl;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
