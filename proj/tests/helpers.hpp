// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gentree/dataset.hpp"
#include "gentree/losses.hpp"
#include "gentree/models.hpp"
#include "gentree/rng.hpp"
#include "gentree/tree.hpp"

namespace testutil {

using namespace gentree;

/// Random masses over k cells, each family normalized to 1. Optionally zeroes
/// some cells in one family to exercise the zero-mass conventions.
inline PartitionStats random_partition_stats(Rng& rng, std::size_t min_cells,
                                             std::size_t max_cells, double pi,
                                             bool with_zeros = false) {
    PartitionStats stats;
    stats.prior = pi;
    const std::size_t k =
        min_cells + static_cast<std::size_t>(rng.below(max_cells - min_cells + 1));
    stats.cells.resize(k);
    for (auto& [p, n] : stats.cells) {
        p = -std::log(1.0 - rng.uniform01());
        n = -std::log(1.0 - rng.uniform01());
    }
    if (with_zeros && k >= 3) {
        const std::size_t zp = static_cast<std::size_t>(rng.below(k));
        std::size_t zn = static_cast<std::size_t>(rng.below(k));
        if (zn == zp) zn = (zn + 1) % k;  // keep every cell massive in one family
        stats.cells[zp].first = 0.0;
        stats.cells[zn].second = 0.0;
    }
    double sp = 0.0, sn = 0.0;
    for (const auto& [p, n] : stats.cells) sp += p, sn += n;
    for (auto& [p, n] : stats.cells) p /= sp, n /= sn;
    return stats;
}

inline Schema real_schema_2d(double lo = 0.0, double hi = 1.0) {
    Schema s;
    s.features.push_back({"x", RealDomain{lo, hi}});
    s.features.push_back({"y", RealDomain{lo, hi}});
    return s;
}

inline Schema random_real_schema(Rng& rng, std::size_t d) {
    Schema s;
    for (std::size_t j = 0; j < d; ++j) {
        const double lo = rng.uniform(-3.0, 1.0);
        s.features.push_back({"x" + std::to_string(j), RealDomain{lo, lo + rng.uniform(0.5, 5.0)}});
    }
    return s;
}

inline Schema mixed_schema() {
    Schema s;
    s.features.push_back({"color", NominalDomain{{"red", "green", "blue", "gray"}}});
    s.features.push_back({"count", IntegerDomain{0, 9}});
    s.features.push_back({"mass", RealDomain{0.0, 2.0}});
    return s;
}

/// Tries to build a valid random predicate splitting `box[f]`; returns false
/// when the constraint cannot be split.
inline bool random_predicate(Rng& rng, const Schema& schema, const SupportBox& box,
                             std::size_t f, Predicate& out) {
    const auto& spec = schema.features[f];
    const auto& c = box[f];
    out.feature = f;
    if (spec.kind() == FeatureKind::nominal) {
        const auto& s = std::get<NominalSet>(c);
        if (s.items.size() < 2) return false;
        NominalSet rs;
        for (const auto m : s.items)
            if (rng.bernoulli(0.5)) rs.items.push_back(m);
        if (rs.items.empty()) rs.items.push_back(s.items[0]);
        if (rs.items.size() == s.items.size()) rs.items.pop_back();
        out.right_set = std::move(rs);
        return true;
    }
    if (spec.kind() == FeatureKind::integer) {
        const auto& r = std::get<IntRange>(c);
        if (r.hi <= r.lo) return false;
        const auto t = r.lo + 1 +
                       static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(r.hi - r.lo)));
        out.right_set = IntRange{t, r.hi};
        return true;
    }
    const auto& r = std::get<RealRange>(c);
    if (!(r.hi > r.lo)) return false;
    const double t = r.lo + (r.hi - r.lo) * rng.uniform(0.2, 0.8);
    if (!(t > r.lo && t < r.hi)) return false;
    out.right_set = RealRange{t, r.hi, r.closed_hi};
    return true;
}

/// Random generator tree: repeated random leaf splits with arc probabilities
/// in [p_lo, 1-p_lo].
inline GenerativeTree random_gt(const Schema& schema, std::size_t splits, Rng& rng,
                                double p_lo = 0.05) {
    GenerativeTree gt;
    gt.schema = schema;
    gt.resize_probs();
    for (std::size_t s = 0; s < splits; ++s) {
        const auto leaves = gt.tree.leaves();
        bool done = false;
        for (std::size_t attempt = 0; attempt < 32 && !done; ++attempt) {
            const int leaf = leaves[static_cast<std::size_t>(rng.below(leaves.size()))];
            const SupportBox box = support_box(gt.tree, schema, leaf);
            const std::size_t f = static_cast<std::size_t>(rng.below(schema.arity()));
            Predicate pred;
            if (!random_predicate(rng, schema, box, f, pred)) continue;
            gt.tree.split(leaf, std::move(pred));
            gt.resize_probs();
            gt.p_right[leaf] = rng.uniform(p_lo, 1.0 - p_lo);
            done = true;
        }
        if (!done) break;
    }
    return gt;
}

/// Random partition carried by a decision tree with random normalized leaf
/// weights (structure and boxes are what measure tests care about).
inline DecisionTree random_dt(const Schema& schema, std::size_t splits, Rng& rng) {
    DecisionTree dt;
    dt.schema = schema;
    for (std::size_t s = 0; s < splits; ++s) {
        const auto leaves = dt.tree.leaves();
        bool done = false;
        for (std::size_t attempt = 0; attempt < 32 && !done; ++attempt) {
            const int leaf = leaves[static_cast<std::size_t>(rng.below(leaves.size()))];
            const SupportBox box = support_box(dt.tree, schema, leaf);
            const std::size_t f = static_cast<std::size_t>(rng.below(schema.arity()));
            Predicate pred;
            if (!random_predicate(rng, schema, box, f, pred)) continue;
            dt.tree.split(leaf, std::move(pred));
            done = true;
        }
        if (!done) break;
    }
    dt.resize_weights();
    double sp = 0.0, sf = 0.0;
    for (const int leaf : dt.tree.leaves()) {
        dt.real_w[leaf] = 0.05 + rng.uniform01();
        dt.fake_w[leaf] = 0.05 + rng.uniform01();
        sp += dt.real_w[leaf];
        sf += dt.fake_w[leaf];
    }
    for (const int leaf : dt.tree.leaves()) dt.real_w[leaf] /= sp, dt.fake_w[leaf] /= sf;
    return dt;
}

}  // namespace testutil
