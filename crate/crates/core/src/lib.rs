//! Diagonal coefficient asymptotics for rational functions `1/Q` where `Q`
//! is a symmetric multilinear polynomial.
//!
//! The library computes, for the power series `1/Q = sum a_r x^r`:
//!
//! * exact diagonal coefficients `delta_n = a_{n,...,n}` via the kernel
//!   recurrence ([`oracle`]), including a fast P-recurrence path for the
//!   four-variable Gillis-Reznick-Zeilberger (GRZ) family;
//! * leading asymptotic terms of `delta_n` from smooth critical points of
//!   the zero set of `Q` ([`smoothasm`]), with every closed form checked
//!   against the exact series;
//! * positivity-regime classification (eventually positive vs. infinitely
//!   many sign changes vs. boundary) for the general three-variable family
//!   `1 - e1 + a e2 + b e3` and for the GRZ family `1 - e1 + c ed`;
//! * the exponential growth rate of `delta_n` and its discontinuous drop at
//!   the critical parameter `c = (d-1)^(d-1)`.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and [`cli`] for the batch interface behind the `symdiag` binary.

pub mod cli;
pub mod critical;
pub mod oracle;
pub mod polyroots;
pub mod smoothasm;
pub mod symmlin;

pub use polyroots::{RootSet, UniPoly};
pub use symmlin::{PointC, SymPoly};
