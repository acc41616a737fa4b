//! Local-unitary invariants of pure two- and three-qubit states and the
//! geometry of the three-qubit space of entanglement types.
//!
//! The three-qubit orbit space is identified with a semialgebraic region
//! `X ⊂ R^6` through six invariants `J1..J6`. This crate evaluates those
//! invariants, decides membership in `X`, classifies points into the cells of
//! `X`, synthesizes standard-form states realizing any point of `X`, runs
//! numerical verification suites, and samples the boundary surfaces of `X`
//! for plotting.

pub mod analysis;
pub mod error;
pub mod geom;
pub mod invariants;
pub mod io;
pub mod mesh;
pub mod orbitspace;
pub mod qstate;

pub use analysis::{
    check_lu_invariance, check_membership_of, check_permutation_law, check_synthesis_round_trip,
    monte_carlo_membership, orbit_dimension2, orbit_dimension3, permutation_symmetry_check,
    Failure, RoundTripReport, TangentRankResult, VerificationReport,
};
pub use error::{Error, Result};
pub use geom::{
    fiber_range, sample_bubble_surface, sample_fiber_circle, sample_tetrahedron, Curve2,
    FiberRange, GeomMeta, PointCloud3,
};
pub use invariants::{
    concurrence, eval_p, eval_p_with, hyperdeterminant, invariants_i, invariants_j,
    invariants_j_from_i, j_of_standard, Beta, EvalPath, IVector, StandardState,
};
pub use mesh::{emit_mesh, parse_csv, Geometry, MeshFormat};
pub use orbitspace::{
    canonical_representative, classify, classify_two_qubit, delta_beta, f_value, membership,
    synthesize, Cell2, Cell3, CellInfo, Condition, MembershipReport, SynthesisCase,
    SynthesisResult, DEFAULT_TOL,
};
pub use qstate::{
    apply_local_unitary, apply_qubit_permutation, haar_random_state2, haar_random_state3,
    random_local_unitary, ComplexAmp, LocalUnitary, Permutation, PureState2, PureState3,
    QubitPermutation,
};
