//! Models for the cohomology of polyhedral products (CX, X)^K.

pub mod maps;
pub mod models;
pub mod spaces;

pub(crate) use maps::compare;
pub use maps::{
    b_dga_oracle_check, b_dga_reduction_check, check_chain_map, map_f_x, maps_h_g, oracle_compare_cxx, overlap_witness,
    polyhedral_oracle, rxk_summand_check, suspension_coincidence_check, verify_f_x, verify_h_g, BasisMap, SummandMaps,
};
pub use models::{build_b_dga, build_bxk, build_cxk, build_rxk, cxk_product, GlobalGenerators, TensorBasis};
pub use spaces::{load_spaces, preset, spaces_to_json, Space, SpacesFile};
