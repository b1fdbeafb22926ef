//! Cloning channels: the optimal mirror phase-covariant cloner and the
//! phase-covariant and universal reference machines.

mod choi;
mod mpcc;
mod reference;

pub use choi::{ChoiMatrix, CHOI_DIM};
pub(crate) use choi::{lift_input, normalize_trace_preserving, trace_out_outputs, PINV_CUTOFF};
pub use mpcc::{
    clone, fidelity_of_lambda, lambda_candidates, mpcc_choi, mpcc_clone_bloch, mpcc_clone_density,
    mpcc_fidelity, mpcc_isometry_apply, mpcc_params, optimal_lambda, p_of_theta,
    symmetric_cloner_choi, symmetric_cloner_images, CloneOutput, MpccParams,
};
pub use reference::{
    pcc_clone_bloch, pcc_fidelity, s_theta, uc_choi, uc_clone_bloch, uc_fidelity, uc_shrink,
    ClonerModel,
};
