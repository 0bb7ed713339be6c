//! Exact arithmetic for commuting ordinary differential operators with
//! polynomial coefficients.
//!
//! The crate builds the known explicit families of commuting pairs `L, M`,
//! recovers a companion `M` from `L` alone by exact linear algebra, extracts
//! the hyperelliptic spectral curve `M^2 = f(L)`, and certifies the dimension
//! of the common eigenspaces at rational spectral points. Everything is exact:
//! coefficients are arbitrary-precision rationals and no floating point is
//! used anywhere.

pub mod centralizer;
pub mod diffop;
pub mod eigenspace;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod selfadjoint;
pub mod spectral;
pub mod zoo;

pub use diffop::{CanonicalReport, DiffOp};
pub use eigenspace::{
    apply_series, certify_rank, m_action, series_kernel, MActionMatrix, RankReport, Series, SeriesKernel,
};
pub use error::{Error, Result};
pub use poly::{CoefPoly, Monomial, ParamSet};
pub use rat::Rat;
pub use selfadjoint::{decompose_selfadjoint4, solve_mironov_g1, verify_mironov_relation, MironovCheck, QPoly, VW};
pub use spectral::{
    curve_report, hyperelliptic_reduce, poly_in_op, rank_of, CommutingPair, CurveReport, HyperellipticCurve, Provenance,
};
pub use zoo::{cheb_nest_check, cheb_operator, chebyshev, Built, ChebPoly, ChebVar, FamilySpec};
