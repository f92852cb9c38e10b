//! Algebraic and numerical toolkit for multi-indices in singular SPDEs.
//!
//! Multi-indices index the coefficients of formal power series in the
//! variables `z_k` (nonlinearity) and `z_n` (polynomial part). This crate
//! provides the derivations acting on such series and the Lie algebra they
//! span, the universal envelope in the Guin-Oudom basis, the graded dual
//! Hopf algebra `T` and its comodule structure, the structure group, tree
//! based comparisons, and numerical model hierarchies.

pub mod combo;
pub mod rational;
pub mod index;
pub mod lie;
pub mod envelope;
pub mod hopf;
pub mod group;
pub mod trees;
pub mod dict;
pub mod dynamics;
