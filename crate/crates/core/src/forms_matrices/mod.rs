//! Forms and matrices over `R`: split parts, normal forms, the `M±/M0`
//! decomposition, Cayley transforms, spinor norms and integral conjugacy
//! transfer.

pub mod cayley;
pub mod decomposition;
pub mod forms;
pub mod sample;
pub mod spinor;
pub mod transfer;

pub use cayley::{cayley_orth, cayley_orth_inverse, cayley_sp, cayley_sp_inverse, so_sp_shift, sp_so_shift};
pub use decomposition::{
    centralizer_shape, cyclotomic_roots, eigen_orthogonality, eigenlattice_split, pm0_decomposition, split_fixed_space,
    teichmuller_roots, CentralizerShape, EigenSplit, FixedSplit, Pm0, SplitMode,
};
pub use forms::{
    j_matrix, j_prime, left_norm, orthogonal_diagonalize, orthogonal_isometry, orthogonal_normal_form, preserves,
    split_parts, symplectic_isometry, symplectic_normal_form, theta_norm, SplitParts,
};
pub use spinor::{reflection, reflection_factorization, spinor_norm, spinor_norm_by_reflections};
pub use transfer::{equivariant_isometry, integral_conjugacy_transfer, TransferMode, TransferOutcome};
