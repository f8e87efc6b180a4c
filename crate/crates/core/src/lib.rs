//! Spectral stability analysis and pseudospectral simulation of an
//! incompressible active-fluid model on the periodic box `[0, L]^n`, `n = 2, 3`:
//!
//! ```text
//! ∂ₜv + λ₀(v·∇)v = f - ∇p + λ₁∇|v|² - (α + β|v|²)v + Γ₀Δv - Γ₂Δ²v,   ∇·v = 0
//! ```
//!
//! Fields live on the symmetric Fourier lattice `{-N..N}^n` ([`lattice`],
//! [`field`]). [`symbols`] gives the per-mode linearization at the disordered
//! state `v = 0` and at the polar states `|V| = sqrt(-α/β)`; [`stability`]
//! classifies both exactly, and [`dense`] cross-checks it against an
//! assembled operator. [`dynamics`] integrates the nonlinear system with
//! ETDRK2, and [`experiments`] turns the stability results into runnable
//! checks. [`config`] and [`run`] back the `actiflow` binary.

pub mod fft;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod params;
pub mod snapshot;
pub mod symbols;
pub mod stability;
pub mod dense;
pub mod dynamics;
pub mod experiments;
pub mod config;
pub mod run;
