//! Cocycle assembly over a mesh, odd Chern character and the index integral.

mod calibrate;
mod chern;
mod cocycle;
mod freeze;
mod integral;
pub mod samples;

pub use calibrate::{calibrate_sign, Calibration, CALIBRATED_SIGN};
pub use chern::{odd_chern, odd_chern_components, odd_chern_of, OddChern};
pub use cocycle::{build_cocycle, BlockComponent, CocycleField, CocycleOptions};
pub use freeze::{evaluate_operator, freeze_at, freeze_family, model_principal_part, CoeffValue, CoefficientField};
pub use integral::{index_estimate, index_integral, run_index, EvenForm, IndexEstimate, IndexForms, IndexOptions, IndexReport, StageTimings, Timings, ComponentContribution};
