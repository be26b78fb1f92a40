//! Exact drifting Rossby-wave and vortex solutions of the (3+1)-dimensional
//! quasi-geostrophic potential-vorticity (Charney–Obukhov) equation for an
//! ocean with a flat bottom and a rigid lid, together with the machinery to
//! certify them numerically.
//!
//! The equation, for the stream function `p(t, x, y, z)` on `0 <= z <= H`, is
//!
//! ```text
//! d/dt lap(p) + p_x d/dy lap(p) - p_y d/dx lap(p) + beta p_x = 0,
//! lap = d2/dx2 + d2/dy2 + d2/dz2,
//! ```
//!
//! with `p_zt - p_y p_zx + p_x p_zy = 0` at `z = 0` and `z = H`.
//!
//! * [`model`]: physical and family parameters, validation, derived constants.
//! * [`helmholtz`]: horizontal structure functions (plane waves, Bessel vortices).
//! * [`families`]: the nine vertical structures and the assembled solution.
//! * [`verify`]: two-route residual checks and verification reports.
//! * [`fieldio`]: grid sampling, CSV / legacy VTK export, JSON reports.
//! * [`resonance`]: scanning parameters for resonant `M` denominators.

// NaN must fail range checks, so `!(x > 0.0)` is intentional
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod fieldio;
pub mod helmholtz;
pub mod model;
pub mod resonance;
pub mod verify;

pub use error::{Error, Result};
pub use families::{bc_closed_form, build_solution, Perturbation, Profile, Solution, StreamSample};
pub use fieldio::{export_csv, export_vtk, sample_grid, write_report, FieldBlock, GridSpec};
pub use helmholtz::{bessel_j, bessel_vortex, eval_jet, plane_wave, superpose, HorizontalMode, Jet2};
pub use model::{validate, FamilyId, FamilySpec, PhysicalParams, ValidatedSpec};
pub use verify::{verify_solution, SamplingPlan, Tolerances, VerificationReport};
