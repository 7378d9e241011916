// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gentree/dataset.hpp"
#include "gentree/schema.hpp"

namespace gentree {

/// Axis-aligned test: true sends a value right. right_set is stored absolutely
/// (already intersected with the node's inherited constraint) and must be a
/// strict nonempty subset of it; for numeric features it is the upper part.
struct Predicate {
    std::size_t feature = 0;
    Constraint right_set;
};

struct Node {
    int parent = -1;
    int left = -1, right = -1;  // -1 at leaves
    Predicate pred;             // meaningful iff internal
};

/// Append-only node arena; ids are creation-ordered, so the subtree present
/// after t splits is exactly nodes 0..2t.
struct Tree {
    std::vector<Node> nodes;

    Tree() { nodes.emplace_back(); }
    int root() const { return 0; }
    bool is_leaf(int id) const { return nodes[id].left < 0; }
    std::size_t node_count() const { return nodes.size(); }

    std::vector<int> leaves() const {
        std::vector<int> out;
        for (int id = 0; id < static_cast<int>(nodes.size()); ++id)
            if (is_leaf(id)) out.push_back(id);
        return out;
    }

    /// Splits a leaf; returns {left_id, right_id}. Child ids are consecutive,
    /// left first, which serialization relies on.
    std::pair<int, int> split(int leaf, Predicate pred) {
        if (!is_leaf(leaf)) throw std::runtime_error("split target is not a leaf");
        const int l = static_cast<int>(nodes.size());
        const int r = l + 1;
        nodes.emplace_back().parent = leaf;
        nodes.emplace_back().parent = leaf;
        nodes[leaf].left = l;
        nodes[leaf].right = r;
        nodes[leaf].pred = std::move(pred);
        return {l, r};
    }
};

/// Per-feature constraints; the product set is the node's support.
using SupportBox = std::vector<Constraint>;

inline SupportBox full_box(const Schema& schema) {
    SupportBox box;
    box.reserve(schema.arity());
    for (const auto& spec : schema.features) box.push_back(full_constraint(spec));
    return box;
}

inline double box_volume(const Schema& schema, const SupportBox& box) {
    double v = 1.0;
    for (std::size_t j = 0; j < box.size(); ++j) {
        v *= feature_measure(schema.features[j], box[j]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

inline SupportBox box_intersect(const SupportBox& a, const SupportBox& b) {
    SupportBox out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = constraint_intersect(a[j], b[j]);
    return out;
}

inline bool box_empty(const SupportBox& box) {
    for (const auto& c : box)
        if (constraint_empty(c)) return true;
    return false;
}

/// Support of a node: conjunction of the arc constraints on the root path.
inline SupportBox support_box(const Tree& tree, const Schema& schema, int id) {
    SupportBox box = full_box(schema);
    std::vector<int> path;
    for (int cur = id; cur >= 0; cur = tree.nodes[cur].parent) path.push_back(cur);
    for (std::size_t k = path.size(); k-- > 1;) {
        const Node& parent = tree.nodes[path[k]];
        const int child = path[k - 1];
        const auto f = parent.pred.feature;
        box[f] = (child == parent.right) ? constraint_intersect(box[f], parent.pred.right_set)
                                         : constraint_subtract(box[f], parent.pred.right_set);
    }
    return box;
}

/// Leaf reached by a complete row (deterministic descent).
inline int leaf_of(const Tree& tree, const Row& row) {
    int cur = tree.root();
    while (!tree.is_leaf(cur)) {
        const Node& node = tree.nodes[cur];
        const auto& cell = row[node.pred.feature];
        if (!cell) throw std::runtime_error("leaf_of requires a complete row");
        cur = constraint_contains(node.pred.right_set, *cell) ? node.right : node.left;
    }
    return cur;
}

/// Distributes one unit of row mass over the leaves. A missing tested value
/// splits the flow by the measure of the two child constraints, so weights
/// telescope to: product over missing features of the leaf-constraint measure
/// times the indicator on observed features. Returns (leaf, weight) pairs with
/// weights summing to 1; complete rows degrade to leaf_of with weight 1.
inline void route_weights(const Tree& tree, const Schema& schema, const Row& row,
                          std::vector<std::pair<int, double>>& out) {
    out.clear();
    struct Frame {
        int id;
        double w;
        SupportBox box;
    };
    std::vector<Frame> stack;
    stack.push_back({tree.root(), 1.0, full_box(schema)});
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        while (!tree.is_leaf(fr.id)) {
            const Node& node = tree.nodes[fr.id];
            const auto f = node.pred.feature;
            const auto& cell = row[f];
            if (cell) {
                fr.id = constraint_contains(node.pred.right_set, *cell) ? node.right : node.left;
                continue;
            }
            const auto& spec = schema.features[f];
            const Constraint right_c = constraint_intersect(fr.box[f], node.pred.right_set);
            const Constraint left_c = constraint_subtract(fr.box[f], node.pred.right_set);
            const double here = feature_measure(spec, fr.box[f]);
            const double wr = feature_measure(spec, right_c) / here;
            Frame rf{node.right, fr.w * wr, fr.box};
            rf.box[f] = right_c;
            stack.push_back(std::move(rf));
            fr.id = node.left;
            fr.w *= 1.0 - wr;
            fr.box[f] = left_c;
        }
        if (fr.w > 0.0) out.emplace_back(fr.id, fr.w);
    }
}

inline std::vector<std::pair<int, double>> route_weights(const Tree& tree, const Schema& schema,
                                                         const Row& row) {
    std::vector<std::pair<int, double>> out;
    route_weights(tree, schema, row, out);
    return out;
}

}  // namespace gentree
