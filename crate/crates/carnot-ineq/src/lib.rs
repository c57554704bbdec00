//! Numerical verification engine for sharp Hardy-, Rellich-,
//! uncertainty-principle- and Caffarelli–Kohn–Nirenberg-type inequalities on
//! Carnot groups of step ≤ 2 with explicit fundamental solutions.
//!
//! The building blocks:
//!
//! * [`group`] — abelian, Heisenberg and H-type groups: group law, dilations,
//!   homogeneous norms, J-map validation.
//! * [`dual`] / [`calculus`] — exact second-order jets and the horizontal
//!   calculus (∇_G, Δ_G, Δ_{G,p}, Δ_{G,∞}, radial identities).
//! * [`profile`] / [`fields`] — piecewise-C² radial profiles and the test
//!   field library (annular bumps, norm Gaussians, near-extremal families).
//! * [`quadrature`] — stratified Monte Carlo and tensor-grid integration over
//!   norm annuli, plus a Muckenhoupt A₂ scanner.
//! * [`identities`] — pointwise closed-form identity checks.
//! * [`ineq`] — Rayleigh-quotient reports, verdicts and sharpness sweeps.
//! * [`driver`] — manifest-driven batch runs emitting CSV/JSON reports.
//!
//! Everything downstream of a seed is deterministic: integrals derive
//! per-shell ChaCha streams from (seed, salt, shell index), so a manifest
//! reruns to byte-identical reports.

pub mod calculus;
pub mod driver;
pub mod dual;
pub mod fields;
pub mod group;
pub mod identities;
pub mod ineq;
pub mod profile;
pub mod quadrature;

pub use calculus::{Frame, HorizontalJet};
pub use fields::{ScalarField, Support, TestFunctionSpec};
pub use group::{GroupKind, GroupSpec, Point};
pub use ineq::{QuotientReport, SweepResult, Verdict};
pub use quadrature::{IntegralEstimate, IntegrationConfig, Method};
