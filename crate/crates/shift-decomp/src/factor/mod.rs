//! Two-stage factorizations φ = φ₂ ∘ φ₁ of a factor code whose middle
//! shift has prescribed entropy, optionally of finite type.

mod dense;
mod normalize;
mod sft;
mod sofic;
mod subsft;

pub use dense::{decompose_dense, sample_s0, SampleRow, SampleStatus};
pub use normalize::{build_alpha, build_theta, hat_z, normalize, NormalizedTriple};
pub use sft::{aux_shift, bound_shift, build_phi_m, overlap_partition, periodic_core_is_cycles, split_sft, OverlapPartition};
pub use sofic::split_sofic;
pub use subsft::find_sub_sft;

use crate::algebra::{EntropyValue, Epsilon};
use crate::codes::{CodeChain, DecompositionCertificate};
use crate::shift::ShiftSpace;

/// Stage-specific data recorded while building a decomposition.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub sofic: Option<SoficTrace>,
    pub sft: Option<SftTrace>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SoficTrace {
    /// The sub-shift of finite type Z the iteration converges to.
    pub sub_sft: ShiftSpace,
    pub sub_sft_entropy: EntropyValue,
    pub block_length: usize,
    pub iterations: usize,
    /// h(Z̃_0), …, h(Z̃_N).
    pub tilde_entropies: Vec<EntropyValue>,
    /// h(Ẑ_0), …, h(Ẑ_N).
    pub hat_entropies: Vec<EntropyValue>,
    /// Z ⊂ Z̃_n ⊂ Ẑ_n and the entropy sandwich, for every n computed.
    pub sandwich_ok: bool,
}

#[derive(Clone, Debug)]
pub struct SftTrace {
    pub n: usize,
    pub classes: usize,
    pub m: usize,
    pub aux_entropy: EntropyValue,
    /// h(Z_1), …, h(Z_M).
    pub entropies: Vec<EntropyValue>,
    /// Entropies of the bounding shifts for the same m.
    pub bounds: Vec<EntropyValue>,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub phi1: CodeChain,
    pub phi2: CodeChain,
    pub intermediate: ShiftSpace,
    pub intermediate_entropy: EntropyValue,
    pub target: EntropyValue,
    pub epsilon: Epsilon,
    pub certificate: DecompositionCertificate,
    /// Step at which the intermediate was certified to be of finite type.
    pub k_step: Option<usize>,
    pub trace: Trace,
}
