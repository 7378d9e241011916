// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gentree/tree.hpp"

namespace gentree {

/// Discriminator: a tree whose leaves carry nonnegative real/fake weights,
/// each family summing to 1 over the leaves.
struct DecisionTree {
    Schema schema;
    Tree tree;
    double prior = 0.5;
    std::vector<double> real_w, fake_w;  // indexed by node id, meaningful at leaves

    void resize_weights() {
        real_w.resize(tree.node_count(), 0.0);
        fake_w.resize(tree.node_count(), 0.0);
    }
};

/// Calibrated leaf posterior pi*p / (pi*p + (1-pi)*n); an all-zero leaf falls
/// back to the prior.
inline double leaf_posterior(const DecisionTree& dt, int leaf) {
    const double a = dt.prior * dt.real_w[leaf];
    const double b = (1.0 - dt.prior) * dt.fake_w[leaf];
    if (a + b <= 0.0) return dt.prior;
    return a / (a + b);
}

/// Generator: a tree with one Bernoulli probability per internal node; a
/// sample walks arcs right with probability p_right and draws uniformly in
/// the reached leaf's support box.
struct GenerativeTree {
    Schema schema;
    Tree tree;
    std::vector<double> p_right;  // indexed by node id, meaningful at internals

    void resize_probs() { p_right.resize(tree.node_count(), 0.0); }
};

/// Product of arc probabilities along the root path.
inline double leaf_weight(const GenerativeTree& gt, int leaf) {
    double w = 1.0;
    for (int cur = leaf; gt.tree.nodes[cur].parent >= 0; cur = gt.tree.nodes[cur].parent) {
        const int par = gt.tree.nodes[cur].parent;
        const double p = gt.p_right[par];
        w *= (gt.tree.nodes[par].right == cur) ? p : 1.0 - p;
    }
    return w;
}

struct LeafView {
    int id;
    double weight;
    SupportBox box;
};

/// Leaves with weights and support boxes, truncated to the subtree present
/// after `max_nodes` nodes when given (the arena is append-only, so the first
/// 2t+1 nodes are exactly the tree after t splits).
inline std::vector<LeafView> leaf_views(const GenerativeTree& gt,
                                        std::size_t max_nodes = 0) {
    const std::size_t limit = max_nodes ? max_nodes : gt.tree.node_count();
    std::vector<LeafView> out;
    struct Frame {
        int id;
        double w;
        SupportBox box;
    };
    std::vector<Frame> stack;
    stack.push_back({gt.tree.root(), 1.0, full_box(gt.schema)});
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        const Node& node = gt.tree.nodes[fr.id];
        const bool leaf_here =
            node.left < 0 || static_cast<std::size_t>(node.right) >= limit;
        if (leaf_here) {
            out.push_back({fr.id, fr.w, std::move(fr.box)});
            continue;
        }
        const double p = gt.p_right[fr.id];
        const auto f = node.pred.feature;
        Frame rf{node.right, fr.w * p, fr.box};
        rf.box[f] = constraint_intersect(rf.box[f], node.pred.right_set);
        Frame lf{node.left, fr.w * (1.0 - p), std::move(fr.box)};
        lf.box[f] = constraint_subtract(lf.box[f], node.pred.right_set);
        stack.push_back(std::move(rf));
        stack.push_back(std::move(lf));
    }
    return out;
}

/// Mass the generator's piecewise-uniform density places inside a box:
/// sum over leaves g of w_g * vol(box_g intersect B) / vol(box_g).
inline double generator_mass_in_box(const GenerativeTree& gt, const SupportBox& box,
                                    const std::vector<LeafView>& leaves) {
    double mass = 0.0;
    for (const auto& lv : leaves) {
        if (lv.weight == 0.0) continue;
        const SupportBox inter = box_intersect(lv.box, box);
        if (box_empty(inter)) continue;
        const double vol = box_volume(gt.schema, lv.box);
        if (vol <= 0.0) continue;
        mass += lv.weight * box_volume(gt.schema, inter) / vol;
    }
    return mass;
}

inline double generator_mass_in_box(const GenerativeTree& gt, const SupportBox& box) {
    return generator_mass_in_box(gt, box, leaf_views(gt));
}

}  // namespace gentree
