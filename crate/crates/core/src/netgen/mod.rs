//! Model parameters, random graph generators and network ingestion.

mod components;
mod edgelist;
mod generate;
mod graph;
mod model;

pub use components::{connected_components, largest_connected_component};
pub use edgelist::{
    format_edge_list, labels_to_membership, parse_edge_list, parse_labels, read_edge_list,
    read_labels, write_edge_list, EdgeList, EdgeListOptions, Indexing, LabelFile,
};
pub use generate::{
    generate_dcbm, generate_mmbm, generate_sbm, random_membership, sample_dirichlet_rows,
    uniform_activeness,
};
pub use graph::AdjacencyGraph;
pub use model::{BlockMatrix, DcbmParams, Membership, MmbmParams};
