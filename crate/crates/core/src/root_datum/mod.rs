//! Root data with pinned involutions, endoscopic data, fixed-point root
//! systems of twisted torus elements and extended Dynkin diagrams.

pub mod cartan_type;
pub mod datum;
pub mod diagram;
pub mod folded;
pub mod involution;
pub mod isomorphism;
pub mod lattice;
pub mod steinberg;
pub mod weyl;

pub use cartan_type::CentralizerType;
pub use datum::{builtin_datum, cartan_datum, simple_cartan, simple_type_datum, Family, RootDatum};
pub use folded::{FoldedSystem, FoldedVec};
pub use involution::{
    coinvariant_project, diagram_automorphism, endoscopic_datum, short_middle_filter, standard_involution,
    twisted_sum, PinnedInvolution,
};
pub use isomorphism::{find_isomorphism, DatumIsomorphism};
pub use steinberg::{steinberg_fixed_system, FixedSystem, TorusPoint};
pub use diagram::{classify_subdiagrams, extended_diagram, table_blocks, DynkinDiagram, RenderFormat};
pub use weyl::{orbit_witness, weyl_orbit_equal, weyl_orbit_witness, WeylAction, WeylWitness};
