//! Numerical toolkit for a family of one-dimensional integral inequalities
//! (Wirtinger, Olech–Opial, and the interpolation inequality that links them)
//! and for the Emden–Fowler ground states that saturate them.
//!
//! The crate is organised around one theme: every quantity that admits a
//! closed form is also computable by at least one independent numerical
//! route, and the two are compared rather than trusted.  Concretely:
//!
//! * [`specfun`] — self-contained log-Gamma and Beta evaluation (Lanczos),
//!   the basis of every closed-form constant.
//! * [`quadrature`] — adaptive Gauss–Legendre for smooth integrands and a
//!   tanh-sinh (double-exponential) rule for endpoint-singular ones, plus
//!   the profile integrals `i0`/`i1` with Beta-identity cross-checks.
//! * [`funcspace`] — trial functions on `[0, L]`: finite Fourier-sine series
//!   (exact L²/Dirichlet functionals via Parseval) and uniform-grid samples,
//!   with the four functionals ∫u², ∫(u′)², ∫|uu′|, ∫|u|^{p+1} and the mean.
//! * [`inequalities`] — structured pass/fail evaluation of each inequality
//!   on concrete functions, with explicit constants, ratios and margins.
//! * [`emdenfowler`] — positive ground states of −u″ = μ uᵖ, u(0)=u(L)=0,
//!   built two independent ways (first-integral inversion and RK4 shooting).
//! * [`variational`] — direct maximization of the Rayleigh-type quotient
//!   J(u) = ∫|u|^{p+1} / (∫(u′)²)^{(p+1)/2} by ground-state inverse
//!   iteration, and the closed-form candidates for the optimal constant.
//!
//! All computations are pure and deterministic; random test corpora are
//! seeded.  Errors are explicit (`Error`) — the crate never returns a
//! silently wrong answer when an evaluation budget runs out.

// Frozen reference tables (Gauss nodes, Lanczos coefficients, oracle
// anchors) keep their full 17-digit round-trip form on purpose: the extra
// digits are the provenance.
#![allow(clippy::excessive_precision)]

pub mod emdenfowler;
pub mod error;
pub mod funcspace;
pub mod inequalities;
pub mod quadrature;
pub mod specfun;
pub mod variational;

pub use error::{Error, Result};
