//! The attention model: embedding table, neighbor-aware attention
//! coefficients, degree-scaled aggregation, layer combination, score
//! prediction, and exact reverse-mode gradients of all of it.
//!
//! Five aggregator variants share the same layer skeleton
//! `e_u^(k) = |N_u|^{-1/2} * sum_i alpha(i->u) * e_i^(k-1)` and differ only
//! in how `alpha` is computed:
//!
//! * `ngat` - mean over the destination's neighborhood of the ReLU'd
//!   cosine between neighbor pairs (no extra parameters),
//! * `ngat_nonlinear` - same, after mapping embeddings through a per-layer
//!   `ReLU(W e)` transform,
//! * `lightgat_mlp` - softmax over `LeakyReLU(a^T [W e_dst || W e_nbr])`,
//! * `lightgat_dp` - softmax over scaled dot products,
//! * `lightgcn_mean` - symmetric `1/sqrt(deg)` normalization, no attention.

mod backward;
mod forward;

pub use backward::{backward, AblationGradients, Gradients};
pub use forward::{forward, Activations};

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Csr, InteractionGraph};
use crate::math;
use crate::rng::{self, domain};
use crate::sampler::{HopAdjacency, SampledSubgraph};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregatorVariant {
    #[default]
    Ngat,
    NgatNonlinear,
    LightGatMlp,
    LightGatDp,
    LightGcnMean,
}

impl AggregatorVariant {
    pub const ALL: [AggregatorVariant; 5] = [
        AggregatorVariant::Ngat,
        AggregatorVariant::NgatNonlinear,
        AggregatorVariant::LightGatMlp,
        AggregatorVariant::LightGatDp,
        AggregatorVariant::LightGcnMean,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AggregatorVariant::Ngat => "ngat",
            AggregatorVariant::NgatNonlinear => "ngat_nonlinear",
            AggregatorVariant::LightGatMlp => "lightgat_mlp",
            AggregatorVariant::LightGatDp => "lightgat_dp",
            AggregatorVariant::LightGcnMean => "lightgcn_mean",
        }
    }
}

impl core::str::FromStr for AggregatorVariant {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ngat" => Ok(AggregatorVariant::Ngat),
            "ngat_nonlinear" => Ok(AggregatorVariant::NgatNonlinear),
            "lightgat_mlp" => Ok(AggregatorVariant::LightGatMlp),
            "lightgat_dp" => Ok(AggregatorVariant::LightGatDp),
            "lightgcn_mean" => Ok(AggregatorVariant::LightGcnMean),
            _ => Err("unknown aggregator variant"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub embedding_dim: usize,
    /// Number of propagation layers; 0 degenerates to plain matrix
    /// factorization.
    pub num_layers: usize,
    pub variant: AggregatorVariant,
    /// Norm guard for the cosine attention.
    pub epsilon: f64,
    /// Experimental: drop the `j == i` term from the attention mean
    /// (the default keeps it, contributing an exact 1).
    pub exclude_self_pairs: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            embedding_dim: 64,
            num_layers: 2,
            variant: AggregatorVariant::Ngat,
            epsilon: 1e-12,
            exclude_self_pairs: false,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.embedding_dim == 0 {
            return Err("embedding_dim must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err("epsilon must be a positive finite value");
        }
        Ok(())
    }
}

/// Layer-0 parameters plus their Adam moment buffers.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<R> {
    num_users: usize,
    num_items: usize,
    dim: usize,
    pub user: Vec<R>,
    pub item: Vec<R>,
    pub m_user: Vec<R>,
    pub v_user: Vec<R>,
    pub m_item: Vec<R>,
    pub v_item: Vec<R>,
    /// Adam step counter; incremented once per mini-batch.
    pub step: u64,
}

impl<R: Real> EmbeddingTable<R> {
    pub fn from_rows(
        num_users: usize,
        num_items: usize,
        dim: usize,
        user: Vec<R>,
        item: Vec<R>,
    ) -> EmbeddingTable<R> {
        assert_eq!(user.len(), num_users * dim);
        assert_eq!(item.len(), num_items * dim);
        EmbeddingTable {
            num_users,
            num_items,
            dim,
            m_user: vec![R::zero(); user.len()],
            v_user: vec![R::zero(); user.len()],
            m_item: vec![R::zero(); item.len()],
            v_item: vec![R::zero(); item.len()],
            user,
            item,
            step: 0,
        }
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn user_row(&self, u: usize) -> &[R] {
        &self.user[u * self.dim..(u + 1) * self.dim]
    }

    #[inline]
    pub fn item_row(&self, i: usize) -> &[R] {
        &self.item[i * self.dim..(i + 1) * self.dim]
    }
}

/// Xavier-uniform initialization with `fan_in = fan_out = dim`, i.e.
/// entries drawn from `U(-sqrt(3/dim), +sqrt(3/dim))`. Deterministic per
/// seed.
pub fn init_embeddings<R: Real>(
    num_users: usize,
    num_items: usize,
    dim: usize,
    rng_seed: u64,
) -> EmbeddingTable<R> {
    assert!(num_users > 0 && num_items > 0 && dim > 0);
    let bound = xavier_bound(dim);
    let mut stream = rng::stream(rng_seed, domain::INIT, 0, 0);
    let mut draw = |len: usize| -> Vec<R> {
        (0..len)
            .map(|_| R::from_f64((2.0 * rng::uniform01(&mut stream) - 1.0) * bound))
            .collect()
    };
    let user = draw(num_users * dim);
    let item = draw(num_items * dim);
    EmbeddingTable::from_rows(num_users, num_items, dim, user, item)
}

pub fn xavier_bound(dim: usize) -> f64 {
    (3.0 / dim as f64).sqrt()
}

/// A trainable tensor with its Adam moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Param<R> {
    pub value: Vec<R>,
    pub m: Vec<R>,
    pub v: Vec<R>,
}

impl<R: Real> Param<R> {
    fn xavier(len: usize, bound: f64, stream: &mut rand_chacha::ChaCha8Rng) -> Param<R> {
        let value =
            (0..len).map(|_| R::from_f64((2.0 * rng::uniform01(stream) - 1.0) * bound)).collect();
        Param { value, m: vec![R::zero(); len], v: vec![R::zero(); len] }
    }

    pub fn from_value(value: Vec<R>) -> Param<R> {
        let len = value.len();
        Param { value, m: vec![R::zero(); len], v: vec![R::zero(); len] }
    }
}

/// Extra per-layer parameters carried only by the variants that need
/// them; part of the regularized parameter set.
#[derive(Debug, Clone, PartialEq)]
pub enum AblationParams<R> {
    /// `ngat_nonlinear`: per-layer `d x d` transforms, one per side.
    Nonlinear { w_user: Vec<Param<R>>, w_item: Vec<Param<R>> },
    /// `lightgat_mlp`: per-layer `d x d` transform plus a `2d` attention
    /// vector.
    Mlp { w: Vec<Param<R>>, attn: Vec<Param<R>> },
}

/// Full parameter bundle: config, embedding table, and (when the variant
/// calls for them) the extra attention parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<R> {
    pub config: ModelConfig,
    pub table: EmbeddingTable<R>,
    pub ablation: Option<AblationParams<R>>,
}

impl<R: Real> Model<R> {
    pub fn new(
        num_users: usize,
        num_items: usize,
        config: ModelConfig,
        rng_seed: u64,
    ) -> Model<R> {
        config.validate().expect("invalid model config");
        let d = config.embedding_dim;
        let table = init_embeddings(num_users, num_items, d, rng_seed);
        let bound = xavier_bound(d);
        let ablation = match config.variant {
            AggregatorVariant::NgatNonlinear => {
                let mut w_user = Vec::new();
                let mut w_item = Vec::new();
                for k in 0..config.num_layers {
                    let mut s = rng::stream(rng_seed, domain::INIT, 1, k as u64);
                    w_user.push(Param::xavier(d * d, bound, &mut s));
                    w_item.push(Param::xavier(d * d, bound, &mut s));
                }
                Some(AblationParams::Nonlinear { w_user, w_item })
            }
            AggregatorVariant::LightGatMlp => {
                let mut w = Vec::new();
                let mut attn = Vec::new();
                for k in 0..config.num_layers {
                    let mut s = rng::stream(rng_seed, domain::INIT, 2, k as u64);
                    w.push(Param::xavier(d * d, bound, &mut s));
                    attn.push(Param::xavier(2 * d, bound, &mut s));
                }
                Some(AblationParams::Mlp { w, attn })
            }
            _ => None,
        };
        Model { config, table, ablation }
    }

    pub fn from_parts(
        config: ModelConfig,
        table: EmbeddingTable<R>,
        ablation: Option<AblationParams<R>>,
    ) -> Model<R> {
        config.validate().expect("invalid model config");
        Model { config, table, ablation }
    }

    pub fn num_users(&self) -> usize {
        self.table.num_users()
    }

    pub fn num_items(&self) -> usize {
        self.table.num_items()
    }
}

/// Per-node embeddings for one layer, both sides, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEmb<R> {
    pub user: Vec<R>,
    pub item: Vec<R>,
    dim: usize,
}

impl<R: Real> NodeEmb<R> {
    pub fn zeros(num_users: usize, num_items: usize, dim: usize) -> NodeEmb<R> {
        NodeEmb { user: vec![R::zero(); num_users * dim], item: vec![R::zero(); num_items * dim], dim }
    }

    pub fn from_table(table: &EmbeddingTable<R>) -> NodeEmb<R> {
        NodeEmb { user: table.user.clone(), item: table.item.clone(), dim: table.dim() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_users(&self) -> usize {
        self.user.len() / self.dim
    }

    pub fn num_items(&self) -> usize {
        self.item.len() / self.dim
    }

    #[inline]
    pub fn user_row(&self, u: usize) -> &[R] {
        &self.user[u * self.dim..(u + 1) * self.dim]
    }

    #[inline]
    pub fn item_row(&self, i: usize) -> &[R] {
        &self.item[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn user_row_mut(&mut self, u: usize) -> &mut [R] {
        &mut self.user[u * self.dim..(u + 1) * self.dim]
    }

    #[inline]
    pub fn item_row_mut(&mut self, i: usize) -> &mut [R] {
        &mut self.item[i * self.dim..(i + 1) * self.dim]
    }

    pub fn add_assign(&mut self, other: &NodeEmb<R>) {
        math::add_assign(&mut self.user, &other.user);
        math::add_assign(&mut self.item, &other.item);
    }
}

/// Borrowed adjacency used by one propagation layer: the full training
/// graph during evaluation, a capped hop during training.
#[derive(Debug, Clone, Copy)]
pub struct AdjacencyPair<'a> {
    pub user: &'a Csr,
    pub item: &'a Csr,
}

impl<'a> AdjacencyPair<'a> {
    pub fn full(graph: &'a InteractionGraph) -> AdjacencyPair<'a> {
        AdjacencyPair { user: graph.train_user(), item: graph.train_item() }
    }

    pub fn hop(hop: &'a HopAdjacency) -> AdjacencyPair<'a> {
        AdjacencyPair { user: &hop.user, item: &hop.item }
    }
}

/// Layer-to-hop wiring for training: the outermost aggregation (layer K)
/// reads the hop-1 sample, layer K-1 reads hop 2, and so on.
pub fn layer_adjacencies(sub: &SampledSubgraph, num_layers: usize) -> Vec<AdjacencyPair<'_>> {
    assert_eq!(sub.num_hops(), num_layers, "sampler hops must match layer count");
    (1..=num_layers).map(|k| AdjacencyPair::hop(sub.hop(num_layers - k + 1))).collect()
}

/// Adjacency list for evaluation: the full graph at every layer.
pub fn full_adjacencies(graph: &InteractionGraph, num_layers: usize) -> Vec<AdjacencyPair<'_>> {
    (0..num_layers).map(|_| AdjacencyPair::full(graph)).collect()
}

/// ReLU'd cosine similarity with epsilon-guarded norms; the pairwise
/// attention building block. Result lies in `[0, 1]`.
pub fn pairwise_attention<R: Real>(a: &[R], b: &[R], epsilon: R) -> R {
    debug_assert_eq!(a.len(), b.len());
    let na = math::norm(a);
    if a == b && na > epsilon {
        // Cosine of a vector with itself; shortcutting keeps it exactly 1.
        return R::one();
    }
    let nb = math::norm(b);
    let c = math::dot(a, b) / (na.max(epsilon) * nb.max(epsilon));
    c.max(R::zero()).min(R::one())
}

/// Attention coefficients for one destination node given its neighbors'
/// embeddings: entry `i` is the mean pairwise attention between neighbor
/// `i` and every neighbor of the destination.
pub fn attention_coefficients<R: Real>(
    neighbors: &[&[R]],
    epsilon: R,
    exclude_self: bool,
) -> Vec<R> {
    assert!(!neighbors.is_empty(), "attention needs at least one neighbor");
    let m = neighbors.len();
    let d = neighbors[0].len();
    let mut rows = Vec::with_capacity(m * d);
    let mut unit = Vec::with_capacity(m);
    for nb in neighbors {
        assert_eq!(nb.len(), d);
        let raw = math::norm(*nb);
        let n = raw.max(epsilon);
        rows.extend(nb.iter().map(|&x| x / n));
        unit.push(raw > epsilon);
    }
    let mut acc = vec![R::zero(); m];
    let mut out = vec![R::zero(); m];
    neighbor_alphas(&rows, d, &unit, exclude_self, &mut acc, &mut out);
    out
}

/// Shared attention kernel over pre-normalized neighbor rows.
///
/// `rows` is the `m x d` buffer of normalized embeddings, `unit[i]` marks
/// rows whose raw norm exceeded the guard (their self-cosine is exactly
/// 1). Writes one coefficient per neighbor into `out`.
pub(crate) fn neighbor_alphas<R: Real>(
    rows: &[R],
    d: usize,
    unit: &[bool],
    exclude_self: bool,
    acc: &mut Vec<R>,
    out: &mut [R],
) {
    let m = out.len();
    debug_assert_eq!(rows.len(), m * d);
    acc.clear();
    acc.resize(m, R::zero());
    for i in 0..m {
        let row_i = &rows[i * d..(i + 1) * d];
        for j in (i + 1)..m {
            let c = math::dot(row_i, &rows[j * d..(j + 1) * d]);
            if c > R::zero() {
                acc[i] = acc[i] + c;
                acc[j] = acc[j] + c;
            }
        }
    }
    let denom = if exclude_self { R::from_usize(m.saturating_sub(1).max(1)) } else { R::from_usize(m) };
    for i in 0..m {
        let self_term = if exclude_self {
            R::zero()
        } else if unit[i] {
            R::one()
        } else {
            let row_i = &rows[i * d..(i + 1) * d];
            math::dot(row_i, row_i)
        };
        out[i] = ((self_term + acc[i]) / denom).max(R::zero()).min(R::one());
    }
}

/// Final representation: the unweighted sum of a node's embeddings across
/// layers 0..K.
pub fn combine_layers<R: Real>(layer_rows: &[&[R]]) -> Vec<R> {
    assert!(!layer_rows.is_empty());
    let mut out = layer_rows[0].to_vec();
    for row in &layer_rows[1..] {
        math::add_assign(&mut out, row);
    }
    out
}

/// Matching score: inner product of the final embeddings.
#[inline]
pub fn predict<R: Real>(user_final: &[R], item_final: &[R]) -> R {
    math::dot(user_final, item_final)
}
