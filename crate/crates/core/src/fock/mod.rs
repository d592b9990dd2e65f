//! Bargmann-Fock quantization on the graded basis of `V^N`.

mod automorphism;
mod basis;
mod block;
mod model;
mod quantize;
mod rockland;

pub use automorphism::{block_decay_profile, build_a, default_margin, Automorphism, DecayProfile, DEFAULT_EPS, DEFAULT_TOL};
pub use basis::FockBasis;
pub use block::BlockMatrix;
pub use model::{scaled, szego_model, ModelKind, ModelOperator, ModelTag};
pub use quantize::{quantize, quantize_compressed};
pub use rockland::{rockland_check, RocklandReport, Side, Verdict};

