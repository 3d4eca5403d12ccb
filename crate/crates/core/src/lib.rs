//! Option pricing under geometric Lévy processes.
//!
//! The transformed price `u(tau, x) = e^{r tau} V(T - tau, K e^x)` solves
//! `u_tau = sigma^2/2 u_xx + (r - sigma^2/2) u_x + f[u]` with the jump integral
//! `f[u](x) = int (u(x+z) - u(x) - (e^z - 1) u_x(x)) nu(dz)`. The crate provides
//! the Lévy measure families ([`levy`]), Black-Scholes closed forms ([`bs`]),
//! an IMEX finite-difference solver for European options ([`pide`]), a penalty
//! solver for American puts ([`american`]) and independent pricing oracles
//! ([`oracle`]).
//!
//! All numerical types are generic over the scalar type ([`Real`]); the
//! aliases at the crate root fix it to `f64`.

pub mod american;
pub mod bs;
pub mod error;
pub mod format;
pub mod levy;
pub mod oracle;
pub mod pide;
pub mod quad;
pub mod real;
pub mod special;
pub mod tridiag;

pub use bs::OptionKind;
pub use error::{Error, Result};
pub use levy::Side;
pub use real::Real;

pub type ShapeParams = levy::ShapeParams<f64>;
pub type LevyModel = levy::LevyModel<f64>;
pub type QuadratureSpec = levy::QuadratureSpec<f64>;
pub type CheckReport = levy::CheckReport<f64>;
pub type OptionSpec = bs::OptionSpec<f64>;
pub type GridSpec = pide::GridSpec<f64>;
pub type PriceSurface = pide::PriceSurface<f64>;
pub type IntegralOperator = pide::IntegralOperator<f64>;
pub type PenaltyConfig = american::PenaltyConfig<f64>;
pub type ExerciseBoundary = american::ExerciseBoundary<f64>;
pub type LcpReport = american::LcpReport<f64>;

pub type LevyModelF32 = levy::LevyModel<f32>;
pub type OptionSpecF32 = bs::OptionSpec<f32>;
pub type GridSpecF32 = pide::GridSpec<f32>;
pub type PriceSurfaceF32 = pide::PriceSurface<f32>;
