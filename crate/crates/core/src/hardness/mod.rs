//! Hardness-reduction generators for Copeland and Borda shift bribery.

pub mod dummy;
pub mod graph;
pub mod reductions;

pub use dummy::{dummy_election, dummy_orders, half_split_orders};
pub use graph::{find_clique, find_dense_subgraph, find_min_set_cover, find_vertex_cover, Graph, SetCoverInstance};
pub use reductions::{
    aon_to_unit, lift_aon_action, project_unit_action, reduce_clique_aon, reduce_clique_gap, reduce_dks_aon,
    reduce_dks_unit, reduce_setcover, reduce_vc3, setcover_unit_blocks, Planted, Reduction, ReductionWitness,
};
