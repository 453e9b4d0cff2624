//! Capped neighborhood sampling.
//!
//! Each epoch the trainer draws a sub-graph in which every node keeps at
//! most `M_h` of its training neighbors at hop `h` -- a uniform
//! without-replacement subset, with all neighbors kept when the degree is
//! already within the cap. Evaluation never samples; it always runs on
//! the full graph.

use alloc::vec::Vec;

use crate::graph::{Csr, InteractionGraph};
use crate::rng::{self, domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResamplePolicy {
    #[default]
    PerEpoch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplerConfig {
    /// `max_neighbors_per_hop[h-1]` caps hop `h`; the length sets the
    /// number of hops and must match the model's layer count.
    pub max_neighbors_per_hop: Vec<usize>,
    pub rng_seed: u64,
    pub resample_policy: ResamplePolicy,
}

impl SamplerConfig {
    pub fn new(max_neighbors_per_hop: Vec<usize>, rng_seed: u64) -> SamplerConfig {
        SamplerConfig { max_neighbors_per_hop, rng_seed, resample_policy: ResamplePolicy::PerEpoch }
    }

    pub fn num_hops(&self) -> usize {
        self.max_neighbors_per_hop.len()
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if self.max_neighbors_per_hop.iter().any(|&m| m == 0) {
            return Err("neighbor caps must be at least 1");
        }
        Ok(())
    }
}

/// Per-hop capped adjacency, user side and item side sampled
/// independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopAdjacency {
    pub user: Csr,
    pub item: Csr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSubgraph {
    hops: Vec<HopAdjacency>,
}

impl SampledSubgraph {
    /// Adjacency for hop `h` (1-based).
    pub fn hop(&self, h: usize) -> &HopAdjacency {
        &self.hops[h - 1]
    }

    pub fn num_hops(&self) -> usize {
        self.hops.len()
    }
}

const SIDE_USER: u64 = 0;
const SIDE_ITEM: u64 = 1;

fn sample_side(full: &Csr, cap: usize, seed: u64, epoch: u64, hop: u64, side: u64) -> Csr {
    let mut lists: Vec<Vec<u32>> = Vec::with_capacity(full.num_rows());
    for node in 0..full.num_rows() {
        let nbrs = full.neighbors(node);
        if nbrs.len() <= cap {
            lists.push(nbrs.to_vec());
        } else {
            let mut buf = nbrs.to_vec();
            // Stream keyed by (epoch, hop, side, node): the draw for a node
            // does not depend on the order nodes are visited in.
            let coords = (epoch << 8) | (hop << 1) | side;
            let mut stream = rng::stream(seed, domain::NEIGHBOR_SAMPLE, coords, node as u64);
            rng::partial_fisher_yates(&mut buf, cap, &mut stream);
            buf.sort_unstable();
            lists.push(buf);
        }
    }
    Csr::from_lists(&lists)
}

/// Draws the capped sub-graph for one epoch. Deterministic in
/// `(config.rng_seed, epoch)`.
pub fn sample_subgraph(
    graph: &InteractionGraph,
    config: &SamplerConfig,
    epoch: u64,
) -> SampledSubgraph {
    config.validate().expect("invalid sampler config");
    let hops = config
        .max_neighbors_per_hop
        .iter()
        .enumerate()
        .map(|(idx, &cap)| {
            let hop = idx as u64 + 1;
            HopAdjacency {
                user: sample_side(graph.train_user(), cap, config.rng_seed, epoch, hop, SIDE_USER),
                item: sample_side(graph.train_item(), cap, config.rng_seed, epoch, hop, SIDE_ITEM),
            }
        })
        .collect();
    SampledSubgraph { hops }
}
