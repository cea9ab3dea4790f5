//! Exact oriented vertex and arc colorings of series-parallel digraphs.
//!
//! * [`digraph`]: oriented multidigraphs, line digraphs, coloring validators.
//! * [`expr`]: series-parallel expressions (arc-leaf `esp` and vertex-leaf
//!   `msp` flavors), parsing, evaluation, generators, esp recognition.
//! * [`oracle`]: brute-force χ_o / χ'_o and CNF/LP encodings of the decision
//!   problems.
//! * [`esp_ocn`]: χ_o of edge series-parallel digraphs by dynamic programming
//!   over the expression tree, plus the constructive QR₇ 7-coloring.
//! * [`msp_oci`]: χ'_o of minimal series-parallel digraphs by dynamic
//!   programming over the expression tree.

pub mod cli;
pub mod colorgraph;
pub mod digraph;
pub mod error;
pub mod esp_ocn;
pub mod expr;
pub mod msp_oci;
pub mod oracle;

pub use colorgraph::ColorGraph;
pub use digraph::{
    isomorphic, line_digraph, underlying_graph, undirected_chromatic_number,
    validate_arc_coloring, validate_vertex_coloring, ArcColoring, ArcId, OrientedDigraph,
    VertexColoring, VertexId,
};
pub use error::{EncodingError, ExprError, GraphError};
pub use esp_ocn::{chi_o_esp, color_esp_qr7};
pub use expr::{Flavor, SpExpression};
pub use msp_oci::chi_o_index_msp;
pub use oracle::{chi_o_exact, chi_o_index_exact};

/// Switches shared by both dynamic programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpOptions {
    /// Drop a state when another state with the same boundary data has a
    /// color graph that is a subgraph of it.
    pub prune: bool,
    /// Keep back-pointers so a witness coloring can be rebuilt.
    pub witness: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { prune: false, witness: true }
    }
}
