//! Sampling sparse random graphs whose expected adjacency matrix is the
//! low-rank product `X S Yᵀ`.
//!
//! The sampler draws the total edge count from a Poisson distribution, splits
//! it over block pairs with a multinomial, and places each edge's endpoints
//! with alias-table draws from the column-normalized factors. The cost is
//! linear in the number of edges plus the size of `X` and `Y`, instead of the
//! `O(n·d)` of sampling every cell.
//!
//! ```
//! use fastrg::{blockmodels, sample_graph, GraphOptions, Matrix};
//!
//! let b = Matrix::from_rows(&[[0.5, 0.1], [0.1, 0.5]]).unwrap();
//! let labels = blockmodels::memberships_from_block_sizes(&[50, 50]);
//! let model = blockmodels::sbm_factors(&labels, &b, false).unwrap();
//! let graph = sample_graph(&model, &GraphOptions::with_seed(7).undirected()).unwrap();
//! assert!(graph.edges().iter().all(|&(i, j)| i <= j));
//! ```

pub mod alias;
pub mod bench;
pub mod blockmodels;
pub mod cli;
pub mod error;
pub mod io;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod postprocess;
pub mod rng;
pub mod sampler;
pub mod variates;

pub use alias::AliasTable;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use model::{validate, FactorModel, NormalizedModel};
pub use sampler::{
    sample_edge_stream, sample_graph, BlockCounts, EdgeList, EdgeSampler, EdgeStream, GraphOptions, GraphSampler,
    OutputKind,
};
