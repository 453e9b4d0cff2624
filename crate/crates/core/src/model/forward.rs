//! Forward propagation, retaining the activations the backward pass
//! needs: per-layer embeddings, per-edge attention coefficients, and the
//! variant-specific intermediates (normalized embeddings, transformed
//! features, pre-activation logits).

use alloc::vec;
use alloc::vec::Vec;

use super::{AblationParams, AdjacencyPair, AggregatorVariant, Model, NodeEmb};
use crate::graph::Csr;
use crate::math;
use crate::Real;

/// Everything the forward pass computed for one parameter snapshot.
pub struct Activations<R> {
    /// `layers[k]` holds `e^(k)` for every node, `k` in `0..=K`.
    pub layers: Vec<NodeEmb<R>>,
    /// `e* = sum_k e^(k)`.
    pub finals: NodeEmb<R>,
    pub(crate) caches: Vec<LayerCache<R>>,
}

impl<R: Real> Activations<R> {
    pub fn num_layers(&self) -> usize {
        self.layers.len() - 1
    }

    /// Attention coefficients used to build `e^(k)` (`k` in `1..=K`),
    /// aligned with the layer's adjacency edge order:
    /// `(user-side alpha_{i->u}, item-side alpha_{u->i})`.
    pub fn layer_alphas(&self, k: usize) -> (&[R], &[R]) {
        let cache = &self.caches[k - 1];
        (&cache.alpha_user, &cache.alpha_item)
    }
}

pub(crate) struct LayerCache<R> {
    pub alpha_user: Vec<R>,
    pub alpha_item: Vec<R>,
    pub variant: VariantCache<R>,
}

pub(crate) enum VariantCache<R> {
    /// Normalized source embeddings and their raw norms.
    Ngat { normed: NodeEmb<R>, raw_norm_user: Vec<R>, raw_norm_item: Vec<R> },
    /// Transformed features `p = relu(pre)`, `pre = W_side e`, plus the
    /// normalization cache over `p`.
    Nonlinear {
        pre: NodeEmb<R>,
        p: NodeEmb<R>,
        normed: NodeEmb<R>,
        raw_norm_user: Vec<R>,
        raw_norm_item: Vec<R>,
    },
    /// `q = W e` per node and the pre-LeakyReLU logits per directed edge.
    Mlp { q: NodeEmb<R>, s_user: Vec<R>, s_item: Vec<R> },
    /// Dot-product softmax and mean aggregation keep nothing extra.
    Plain,
}

/// Full forward pass. `adjs[k-1]` is the adjacency used by layer `k`; use
/// [`super::full_adjacencies`] for evaluation and
/// [`super::layer_adjacencies`] for a sampled training sub-graph.
pub fn forward<R: Real>(model: &Model<R>, adjs: &[AdjacencyPair<'_>]) -> Activations<R> {
    let k_layers = model.config.num_layers;
    assert_eq!(adjs.len(), k_layers, "need one adjacency per layer");
    let nu = model.num_users();
    let ni = model.num_items();
    let d = model.config.embedding_dim;

    let mut layers = Vec::with_capacity(k_layers + 1);
    layers.push(NodeEmb::from_table(&model.table));
    let mut caches = Vec::with_capacity(k_layers);

    for k in 1..=k_layers {
        let prev = &layers[k - 1];
        let adj = adjs[k - 1];
        let (next, cache) = forward_layer(model, prev, adj, k - 1);
        layers.push(next);
        caches.push(cache);
    }

    let mut finals = layers[0].clone();
    for layer in &layers[1..] {
        finals.add_assign(layer);
    }

    debug_assert_eq!(finals.user.len(), nu * d);
    debug_assert_eq!(finals.item.len(), ni * d);
    Activations { layers, finals, caches }
}

fn forward_layer<R: Real>(
    model: &Model<R>,
    prev: &NodeEmb<R>,
    adj: AdjacencyPair<'_>,
    layer_idx: usize,
) -> (NodeEmb<R>, LayerCache<R>) {
    let eps = R::from_f64(model.config.epsilon);
    let exclude_self = model.config.exclude_self_pairs;
    match model.config.variant {
        AggregatorVariant::Ngat => {
            let (normed, raw_norm_user, raw_norm_item) = normalize(prev, eps);
            let (out, alpha_user, alpha_item) =
                ngat_like_layer(prev, &normed, &raw_norm_user, &raw_norm_item, adj, eps, exclude_self);
            (
                out,
                LayerCache {
                    alpha_user,
                    alpha_item,
                    variant: VariantCache::Ngat { normed, raw_norm_user, raw_norm_item },
                },
            )
        }
        AggregatorVariant::NgatNonlinear => {
            let (w_user, w_item) = match model.ablation.as_ref() {
                Some(AblationParams::Nonlinear { w_user, w_item }) => {
                    (&w_user[layer_idx], &w_item[layer_idx])
                }
                _ => panic!("ngat_nonlinear requires transform parameters"),
            };
            let (pre, p) = transform_relu(prev, &w_user.value, &w_item.value);
            let (normed, raw_norm_user, raw_norm_item) = normalize(&p, eps);
            let (out, alpha_user, alpha_item) =
                ngat_like_layer(&p, &normed, &raw_norm_user, &raw_norm_item, adj, eps, exclude_self);
            (
                out,
                LayerCache {
                    alpha_user,
                    alpha_item,
                    variant: VariantCache::Nonlinear {
                        pre,
                        p,
                        normed,
                        raw_norm_user,
                        raw_norm_item,
                    },
                },
            )
        }
        AggregatorVariant::LightGatMlp => mlp_layer(model, prev, adj, layer_idx),
        AggregatorVariant::LightGatDp => dp_layer(prev, adj),
        AggregatorVariant::LightGcnMean => mean_layer(prev, adj),
    }
}

/// Normalizes every row by its epsilon-guarded norm; returns the raw
/// (unguarded) norms so the backward pass can pick the right branch.
fn normalize<R: Real>(emb: &NodeEmb<R>, eps: R) -> (NodeEmb<R>, Vec<R>, Vec<R>) {
    let d = emb.dim();
    let mut normed = emb.clone();
    let mut norm_side = |flat: &mut [R]| -> Vec<R> {
        let rows = flat.len() / d;
        let mut raw = Vec::with_capacity(rows);
        for r in 0..rows {
            let row = &mut flat[r * d..(r + 1) * d];
            let n = math::norm(row);
            raw.push(n);
            let guard = n.max(eps);
            for x in row.iter_mut() {
                *x = *x / guard;
            }
        }
        raw
    };
    let raw_user = norm_side(&mut normed.user);
    let raw_item = norm_side(&mut normed.item);
    (normed, raw_user, raw_item)
}

/// `pre = W_side e`, `p = relu(pre)` for every node.
fn transform_relu<R: Real>(
    prev: &NodeEmb<R>,
    w_user: &[R],
    w_item: &[R],
) -> (NodeEmb<R>, NodeEmb<R>) {
    let d = prev.dim();
    let mut pre = NodeEmb::zeros(prev.num_users(), prev.num_items(), d);
    for u in 0..prev.num_users() {
        math::matvec(w_user, prev.user_row(u), pre.user_row_mut(u));
    }
    for i in 0..prev.num_items() {
        math::matvec(w_item, prev.item_row(i), pre.item_row_mut(i));
    }
    let mut p = pre.clone();
    for x in p.user.iter_mut().chain(p.item.iter_mut()) {
        if *x < R::zero() {
            *x = R::zero();
        }
    }
    (pre, p)
}

/// Neighbor-aware attention plus scaled aggregation over `src`
/// embeddings (the raw previous layer for `ngat`, the transformed
/// features for `ngat_nonlinear`).
fn ngat_like_layer<R: Real>(
    src: &NodeEmb<R>,
    normed: &NodeEmb<R>,
    raw_norm_user: &[R],
    raw_norm_item: &[R],
    adj: AdjacencyPair<'_>,
    eps: R,
    exclude_self: bool,
) -> (NodeEmb<R>, Vec<R>, Vec<R>) {
    let d = src.dim();
    let mut out = NodeEmb::zeros(src.num_users(), src.num_items(), d);
    let mut alpha_user = vec![R::zero(); adj.user.num_edges()];
    let mut alpha_item = vec![R::zero(); adj.item.num_edges()];

    let mut rows: Vec<R> = Vec::new();
    let mut unit: Vec<bool> = Vec::new();
    let mut acc: Vec<R> = Vec::new();

    // User destinations: neighbors (and attention pairs) are items.
    for u in 0..src.num_users() {
        let nbrs = adj.user.neighbors(u);
        let m = nbrs.len();
        if m == 0 {
            continue;
        }
        let off = adj.user.row_offset(u);
        gather_normed(normed, raw_norm_item, nbrs, Side::Item, eps, &mut rows, &mut unit);
        super::neighbor_alphas(
            &rows,
            d,
            &unit,
            exclude_self,
            &mut acc,
            &mut alpha_user[off..off + m],
        );
        let scale = R::one() / R::from_usize(m).sqrt();
        let row = out.user_row_mut(u);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            math::axpy(row, scale * alpha_user[off + idx], src.item_row(nbr as usize));
        }
    }

    // Item destinations: neighbors are users.
    for i in 0..src.num_items() {
        let nbrs = adj.item.neighbors(i);
        let m = nbrs.len();
        if m == 0 {
            continue;
        }
        let off = adj.item.row_offset(i);
        gather_normed(normed, raw_norm_user, nbrs, Side::User, eps, &mut rows, &mut unit);
        super::neighbor_alphas(
            &rows,
            d,
            &unit,
            exclude_self,
            &mut acc,
            &mut alpha_item[off..off + m],
        );
        let scale = R::one() / R::from_usize(m).sqrt();
        let row = out.item_row_mut(i);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            math::axpy(row, scale * alpha_item[off + idx], src.user_row(nbr as usize));
        }
    }

    (out, alpha_user, alpha_item)
}

#[derive(Clone, Copy)]
enum Side {
    User,
    Item,
}

fn gather_normed<R: Real>(
    normed: &NodeEmb<R>,
    raw_norms: &[R],
    nbrs: &[u32],
    side: Side,
    eps: R,
    rows: &mut Vec<R>,
    unit: &mut Vec<bool>,
) {
    rows.clear();
    unit.clear();
    for &nbr in nbrs {
        let row = match side {
            Side::User => normed.user_row(nbr as usize),
            Side::Item => normed.item_row(nbr as usize),
        };
        rows.extend_from_slice(row);
        unit.push(raw_norms[nbr as usize] > eps);
    }
}

/// Numerically-stable softmax over a small logit buffer.
pub(crate) fn softmax_in_place<R: Real>(z: &mut [R]) {
    let mut mx = z[0];
    for &v in z.iter() {
        if v > mx {
            mx = v;
        }
    }
    let mut sum = R::zero();
    for v in z.iter_mut() {
        *v = (*v - mx).exp();
        sum = sum + *v;
    }
    for v in z.iter_mut() {
        *v = *v / sum;
    }
}

/// Scaled-dot-product attention: softmax over the destination's
/// neighborhood of `e_dst . e_nbr / sqrt(d)`.
fn dp_layer<R: Real>(prev: &NodeEmb<R>, adj: AdjacencyPair<'_>) -> (NodeEmb<R>, LayerCache<R>) {
    let d = prev.dim();
    let inv_sqrt_d = R::one() / R::from_usize(d).sqrt();
    let mut out = NodeEmb::zeros(prev.num_users(), prev.num_items(), d);
    let mut alpha_user = vec![R::zero(); adj.user.num_edges()];
    let mut alpha_item = vec![R::zero(); adj.item.num_edges()];

    for u in 0..prev.num_users() {
        let nbrs = adj.user.neighbors(u);
        if nbrs.is_empty() {
            continue;
        }
        let off = adj.user.row_offset(u);
        let alphas = &mut alpha_user[off..off + nbrs.len()];
        for (idx, &nbr) in nbrs.iter().enumerate() {
            alphas[idx] = math::dot(prev.user_row(u), prev.item_row(nbr as usize)) * inv_sqrt_d;
        }
        softmax_in_place(alphas);
        let scale = R::one() / R::from_usize(nbrs.len()).sqrt();
        let row = out.user_row_mut(u);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            math::axpy(row, scale * alphas[idx], prev.item_row(nbr as usize));
        }
    }
    for i in 0..prev.num_items() {
        let nbrs = adj.item.neighbors(i);
        if nbrs.is_empty() {
            continue;
        }
        let off = adj.item.row_offset(i);
        let alphas = &mut alpha_item[off..off + nbrs.len()];
        for (idx, &nbr) in nbrs.iter().enumerate() {
            alphas[idx] = math::dot(prev.item_row(i), prev.user_row(nbr as usize)) * inv_sqrt_d;
        }
        softmax_in_place(alphas);
        let scale = R::one() / R::from_usize(nbrs.len()).sqrt();
        let row = out.item_row_mut(i);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            math::axpy(row, scale * alphas[idx], prev.user_row(nbr as usize));
        }
    }

    (out, LayerCache { alpha_user, alpha_item, variant: VariantCache::Plain })
}

/// GAT-style attention without feature transforms in the aggregation:
/// softmax over `LeakyReLU(a^T [W e_dst || W e_nbr])`, slope 0.2.
fn mlp_layer<R: Real>(
    model: &Model<R>,
    prev: &NodeEmb<R>,
    adj: AdjacencyPair<'_>,
    layer_idx: usize,
) -> (NodeEmb<R>, LayerCache<R>) {
    let d = prev.dim();
    let (w, attn) = match model.ablation.as_ref() {
        Some(AblationParams::Mlp { w, attn }) => (&w[layer_idx].value, &attn[layer_idx].value),
        _ => panic!("lightgat_mlp requires attention parameters"),
    };
    let (a_dst, a_nbr) = attn.split_at(d);

    let mut q = NodeEmb::zeros(prev.num_users(), prev.num_items(), d);
    for u in 0..prev.num_users() {
        math::matvec(w, prev.user_row(u), q.user_row_mut(u));
    }
    for i in 0..prev.num_items() {
        math::matvec(w, prev.item_row(i), q.item_row_mut(i));
    }

    let mut out = NodeEmb::zeros(prev.num_users(), prev.num_items(), d);
    let mut alpha_user = vec![R::zero(); adj.user.num_edges()];
    let mut alpha_item = vec![R::zero(); adj.item.num_edges()];
    let mut s_user = vec![R::zero(); adj.user.num_edges()];
    let mut s_item = vec![R::zero(); adj.item.num_edges()];

    let leaky = |x: R| if x > R::zero() { x } else { R::from_f64(0.2) * x };

    let mut side = |dst_count: usize,
                    adj_side: &Csr,
                    dst_is_user: bool,
                    alphas: &mut [R],
                    s_pre: &mut [R],
                    out: &mut NodeEmb<R>| {
        for dst in 0..dst_count {
            let nbrs = adj_side.neighbors(dst);
            if nbrs.is_empty() {
                continue;
            }
            let off = adj_side.row_offset(dst);
            let q_dst = if dst_is_user { q.user_row(dst) } else { q.item_row(dst) };
            let base = math::dot(a_dst, q_dst);
            let z = &mut alphas[off..off + nbrs.len()];
            for (idx, &nbr) in nbrs.iter().enumerate() {
                let q_nbr =
                    if dst_is_user { q.item_row(nbr as usize) } else { q.user_row(nbr as usize) };
                let s = base + math::dot(a_nbr, q_nbr);
                s_pre[off + idx] = s;
                z[idx] = leaky(s);
            }
            softmax_in_place(z);
            let scale = R::one() / R::from_usize(nbrs.len()).sqrt();
            let row = if dst_is_user { out.user_row_mut(dst) } else { out.item_row_mut(dst) };
            for (idx, &nbr) in nbrs.iter().enumerate() {
                let src = if dst_is_user {
                    prev.item_row(nbr as usize)
                } else {
                    prev.user_row(nbr as usize)
                };
                math::axpy(row, scale * z[idx], src);
            }
        }
    };

    side(prev.num_users(), adj.user, true, &mut alpha_user, &mut s_user, &mut out);
    side(prev.num_items(), adj.item, false, &mut alpha_item, &mut s_item, &mut out);

    (out, LayerCache { alpha_user, alpha_item, variant: VariantCache::Mlp { q, s_user, s_item } })
}

/// LightGCN-style symmetric normalization: the coefficient for a source
/// node is `1/sqrt(deg(src))`, with the usual `1/sqrt(deg(dst))` scale
/// outside the sum.
fn mean_layer<R: Real>(prev: &NodeEmb<R>, adj: AdjacencyPair<'_>) -> (NodeEmb<R>, LayerCache<R>) {
    let d = prev.dim();
    let mut out = NodeEmb::zeros(prev.num_users(), prev.num_items(), d);
    let mut alpha_user = vec![R::zero(); adj.user.num_edges()];
    let mut alpha_item = vec![R::zero(); adj.item.num_edges()];

    for u in 0..prev.num_users() {
        let nbrs = adj.user.neighbors(u);
        if nbrs.is_empty() {
            continue;
        }
        let off = adj.user.row_offset(u);
        let scale = R::one() / R::from_usize(nbrs.len()).sqrt();
        let row = out.user_row_mut(u);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            let deg = adj.item.degree(nbr as usize).max(1);
            let alpha = R::one() / R::from_usize(deg).sqrt();
            alpha_user[off + idx] = alpha;
            math::axpy(row, scale * alpha, prev.item_row(nbr as usize));
        }
    }
    for i in 0..prev.num_items() {
        let nbrs = adj.item.neighbors(i);
        if nbrs.is_empty() {
            continue;
        }
        let off = adj.item.row_offset(i);
        let scale = R::one() / R::from_usize(nbrs.len()).sqrt();
        let row = out.item_row_mut(i);
        for (idx, &nbr) in nbrs.iter().enumerate() {
            let deg = adj.user.degree(nbr as usize).max(1);
            let alpha = R::one() / R::from_usize(deg).sqrt();
            alpha_item[off + idx] = alpha;
            math::axpy(row, scale * alpha, prev.user_row(nbr as usize));
        }
    }

    (out, LayerCache { alpha_user, alpha_item, variant: VariantCache::Plain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::InteractionGraph;
    use crate::model::{full_adjacencies, ModelConfig};

    fn tiny_model(
        num_users: usize,
        num_items: usize,
        dim: usize,
        k: usize,
    ) -> crate::model::Model<f64> {
        let config = ModelConfig {
            embedding_dim: dim,
            num_layers: k,
            ..ModelConfig::default()
        };
        crate::model::Model::new(num_users, num_items, config, 42)
    }

    #[test]
    fn k0_forward_is_the_embedding_table_bit_for_bit() {
        let model = tiny_model(4, 5, 8, 0);
        let graph = InteractionGraph::from_train_edges(4, 5, &[(0, 0), (1, 1)]).unwrap();
        let acts = forward(&model, &full_adjacencies(&graph, 0));
        assert_eq!(acts.finals.user, model.table.user);
        assert_eq!(acts.finals.item, model.table.item);
    }

    #[test]
    fn single_neighbor_copies_the_neighbor_embedding() {
        // alpha = 1 and 1/sqrt(1) = 1, so e_u^(1) = e_i^(0).
        let mut model = tiny_model(1, 1, 4, 1);
        model.table.user = alloc::vec![0.3, -0.2, 0.5, 0.1];
        model.table.item = alloc::vec![1.0, 2.0, -3.0, 4.0];
        let graph = InteractionGraph::from_train_edges(1, 1, &[(0, 0)]).unwrap();
        let acts = forward(&model, &full_adjacencies(&graph, 1));
        assert_eq!(acts.layers[1].user_row(0), model.table.item_row(0));
        let (au, ai) = acts.layer_alphas(1);
        assert_eq!(au, &[1.0]);
        assert_eq!(ai, &[1.0]);
    }

    #[test]
    fn two_identical_neighbors_scale_by_sqrt_two() {
        let mut model = tiny_model(1, 2, 2, 1);
        model.table.user = alloc::vec![0.5, 0.5];
        model.table.item = alloc::vec![1.0, 2.0, 1.0, 2.0];
        let graph = InteractionGraph::from_train_edges(1, 2, &[(0, 0), (0, 1)]).unwrap();
        let acts = forward(&model, &full_adjacencies(&graph, 1));
        let expected = [2.0f64.sqrt(), 2.0 * 2.0f64.sqrt()];
        for (got, want) in acts.layers[1].user_row(0).iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
        let (au, _) = acts.layer_alphas(1);
        assert_eq!(au, &[1.0, 1.0]);
    }

    #[test]
    fn zero_degree_nodes_stay_zero_and_contribute_only_layer0() {
        let model = tiny_model(2, 2, 4, 2);
        // Item 1 and user 1 are isolated.
        let graph = InteractionGraph::from_train_edges(2, 2, &[(0, 0)]).unwrap();
        let acts = forward(&model, &full_adjacencies(&graph, 2));
        assert!(acts.layers[1].user_row(1).iter().all(|&x| x == 0.0));
        assert!(acts.layers[2].item_row(1).iter().all(|&x| x == 0.0));
        assert_eq!(acts.finals.user_row(1), model.table.user_row(1));
        assert_eq!(acts.finals.item_row(1), model.table.item_row(1));
    }

    #[test]
    fn permuting_a_neighbor_list_permutes_alphas_and_preserves_output() {
        // Same graph, two different (but equivalent) adjacency encodings.
        let model = tiny_model(1, 3, 4, 1);
        let a = InteractionGraph::from_train_edges(1, 3, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        let acts = forward(&model, &full_adjacencies(&a, 1));
        // Permute item ids 0<->2 in the embedding table and the graph;
        // the destination embedding must be unchanged.
        let mut permuted = model.clone();
        let d = 4;
        let (left, right) = (0usize, 2usize);
        for c in 0..d {
            permuted.table.item.swap(left * d + c, right * d + c);
        }
        let acts_p = forward(&permuted, &full_adjacencies(&a, 1));
        for (x, y) in acts.layers[1].user_row(0).iter().zip(acts_p.layers[1].user_row(0).iter()) {
            assert!((x - y).abs() < 1e-12);
        }
        let (au, _) = acts.layer_alphas(1);
        let (au_p, _) = acts_p.layer_alphas(1);
        assert!((au[0] - au_p[2]).abs() < 1e-12);
        assert!((au[2] - au_p[0]).abs() < 1e-12);
        assert!((au[1] - au_p[1]).abs() < 1e-12);
    }

    #[test]
    fn ngat_alphas_stay_in_unit_interval_across_layers() {
        for seed in 0..20u64 {
            let mut stream = crate::rng::stream(seed, crate::rng::domain::PLANTED, 31, 0);
            let mut edges = Vec::new();
            for u in 0..6u32 {
                for i in 0..6u32 {
                    if crate::rng::uniform01(&mut stream) < 0.5 {
                        edges.push((u, i));
                    }
                }
            }
            let graph = InteractionGraph::from_train_edges(6, 6, &edges).unwrap();
            let config =
                ModelConfig { embedding_dim: 8, num_layers: 2, ..ModelConfig::default() };
            let model: crate::model::Model<f64> = crate::model::Model::new(6, 6, config, seed);
            let acts = forward(&model, &full_adjacencies(&graph, 2));
            for k in 1..=2 {
                let (au, ai) = acts.layer_alphas(k);
                for &a in au.iter().chain(ai.iter()) {
                    assert!((0.0..=1.0).contains(&a), "alpha {a} out of range");
                }
            }
        }
    }
}
