//! Analytic continuation of eigenvalues along paths in the `α`-plane, loop
//! monodromy, and location of the branch points where eigenvalues collide.

mod branch;
mod monodromy;
mod path;
mod track;

pub use branch::{
    find_branch_points, newton_branch_point, ramification_check, ramification_order, BranchControls, BranchPoint,
    BranchResiduals, BranchScan, DiscardedSeed, ParameterBox, RamificationCheck,
};
pub use monodromy::{
    labelled_eigenvalues, loop_permutation, parity_separation_check, MonodromyPermutation, ParitySeparationEntry,
    ParitySeparationReport, BUFFER_LEVELS,
};
pub use path::PathSpec;
pub use track::{
    continue_eigenvalue, polish_start, track_labels, ContinuationTrace, TraceSample, TraceStatus, TrackControls,
};
