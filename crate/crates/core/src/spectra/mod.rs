//! Spectral statements built on the propagators.

pub mod airy;
pub mod asymptotics;
pub mod branch;
pub mod fit;
pub mod monodromy;
pub mod pseudospectra;
pub mod reconstruct;
pub mod strip;
pub mod sweep;

pub use airy::{airy_ai, airy_first_zero, half_abs_first_zero, imag_offset_target};
pub use asymptotics::{
    airy_scaling, asymptotic_report, choose_periods, localization_side, report_from_values,
    AiryScaling, AsymptoticReport, AsymptoticRow, RowInput,
};
pub use branch::{distance_mod_ig, fold, unfold, BranchEigenvalue, Method};
pub use fit::{fit_power_law, PowerLawFit};
pub use monodromy::{
    monodromy_spectrum, monodromy_spectrum_in, no_hole_log_modulus, no_hole_mode_factor,
    no_hole_monodromy_eigs, no_hole_spectrum, MonodromySpectrum, MU_FLOOR,
};
pub use pseudospectra::{
    pseudospectra_grid, resolvent_norm, z_window, PseudospectraGrid, PseudospectraPoint,
};
pub use reconstruct::{
    reconstruct_eigenfunction, reconstruction_grid, translate_one_cell, Reconstruction,
};
pub use strip::{
    pseudo_invariance_check, strip_problem, strip_spectrum, strip_spectrum_of, truncation_check,
    InvariancePair, InvarianceReport, StripSpectrum, TruncationCheck, DEFAULT_HALF_WIDTH,
};
pub use sweep::{match_branches, sweep_q, Continuation, Curve, SweepPoint, SweepResult, SUBSET_CAVEAT};
