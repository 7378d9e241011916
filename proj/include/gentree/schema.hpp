// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gentree/rng.hpp"

namespace gentree {

enum class FeatureKind { nominal = 0, integer = 1, real = 2 };

struct NominalDomain {
    std::vector<std::string> modalities;  // distinct, first-appearance order
};
struct IntegerDomain {
    std::int64_t lo = 0, hi = 0;  // inclusive
};
struct RealDomain {
    double lo = 0.0, hi = 0.0;  // [lo,hi]; lo==hi is an atom of measure 1
};

struct FeatureSpec {
    std::string name;
    std::variant<NominalDomain, IntegerDomain, RealDomain> domain;

    FeatureKind kind() const { return static_cast<FeatureKind>(domain.index()); }
    const NominalDomain& nominal() const { return std::get<NominalDomain>(domain); }
    const IntegerDomain& integer() const { return std::get<IntegerDomain>(domain); }
    const RealDomain& real() const { return std::get<RealDomain>(domain); }
};

struct Schema {
    std::vector<FeatureSpec> features;

    std::size_t arity() const { return features.size(); }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == name) return i;
        throw std::runtime_error("unknown feature: " + name);
    }
};

/// A single cell value; the alternative in use must match the feature kind
/// (nominal stores the modality index).
using Value = std::variant<std::uint32_t, std::int64_t, double>;

/// Per-feature subsets as produced by axis-aligned splits.
struct NominalSet {
    std::vector<std::uint32_t> items;  // sorted modality indices
};
struct IntRange {
    std::int64_t lo = 0, hi = -1;  // inclusive; empty iff lo > hi
};
struct RealRange {
    // [lo,hi) when closed_hi is false, [lo,hi] when true. The topmost range of
    // a feature keeps closed_hi so the domain maximum stays covered.
    double lo = 0.0, hi = 0.0;
    bool closed_hi = false;
};
using Constraint = std::variant<NominalSet, IntRange, RealRange>;

inline Constraint full_constraint(const FeatureSpec& spec) {
    switch (spec.kind()) {
        case FeatureKind::nominal: {
            NominalSet s;
            s.items.resize(spec.nominal().modalities.size());
            for (std::uint32_t i = 0; i < s.items.size(); ++i) s.items[i] = i;
            return s;
        }
        case FeatureKind::integer:
            return IntRange{spec.integer().lo, spec.integer().hi};
        default:
            return RealRange{spec.real().lo, spec.real().hi, true};
    }
}

inline bool constraint_empty(const Constraint& c) {
    if (const auto* s = std::get_if<NominalSet>(&c)) return s->items.empty();
    if (const auto* r = std::get_if<IntRange>(&c)) return r->lo > r->hi;
    const auto& r = std::get<RealRange>(c);
    return r.lo > r.hi || (r.lo == r.hi && !r.closed_hi);
}

inline bool constraint_contains(const Constraint& c, const Value& v) {
    if (const auto* s = std::get_if<NominalSet>(&c)) {
        const auto m = std::get<std::uint32_t>(v);
        return std::binary_search(s->items.begin(), s->items.end(), m);
    }
    if (const auto* r = std::get_if<IntRange>(&c)) {
        const auto x = std::get<std::int64_t>(v);
        return x >= r->lo && x <= r->hi;
    }
    const auto& r = std::get<RealRange>(c);
    const double x = std::get<double>(v);
    return x >= r.lo && (x < r.hi || (r.closed_hi && x == r.hi));
}

/// Normalized measure: the full domain has measure 1. A real domain collapsed
/// to a point (hi == lo) is an atom of measure 1.
inline double feature_measure(const FeatureSpec& spec, const Constraint& c) {
    if (constraint_empty(c)) return 0.0;
    switch (spec.kind()) {
        case FeatureKind::nominal: {
            const auto& s = std::get<NominalSet>(c);
            return static_cast<double>(s.items.size()) /
                   static_cast<double>(spec.nominal().modalities.size());
        }
        case FeatureKind::integer: {
            const auto& r = std::get<IntRange>(c);
            const auto& d = spec.integer();
            return static_cast<double>(r.hi - r.lo + 1) /
                   static_cast<double>(d.hi - d.lo + 1);
        }
        default: {
            const auto& r = std::get<RealRange>(c);
            const auto& d = spec.real();
            if (d.hi == d.lo) return 1.0;  // atom
            return (r.hi - r.lo) / (d.hi - d.lo);
        }
    }
}

inline Constraint constraint_intersect(const Constraint& a, const Constraint& b) {
    if (const auto* sa = std::get_if<NominalSet>(&a)) {
        const auto& sb = std::get<NominalSet>(b);
        NominalSet out;
        std::set_intersection(sa->items.begin(), sa->items.end(), sb.items.begin(),
                              sb.items.end(), std::back_inserter(out.items));
        return out;
    }
    if (const auto* ra = std::get_if<IntRange>(&a)) {
        const auto& rb = std::get<IntRange>(b);
        return IntRange{std::max(ra->lo, rb.lo), std::min(ra->hi, rb.hi)};
    }
    const auto& ra = std::get<RealRange>(a);
    const auto& rb = std::get<RealRange>(b);
    RealRange out;
    out.lo = std::max(ra.lo, rb.lo);
    out.hi = std::min(ra.hi, rb.hi);
    // The shared endpoint stays closed only if every range covering it is.
    out.closed_hi = (out.hi < ra.hi || ra.closed_hi) && (out.hi < rb.hi || rb.closed_hi);
    return out;
}

/// Removes an upper part (numeric) or an arbitrary subset (nominal) from a
/// constraint; used to derive the left-child constraint from a predicate's
/// right set.
inline Constraint constraint_subtract(const Constraint& c, const Constraint& right_set) {
    if (const auto* s = std::get_if<NominalSet>(&c)) {
        const auto& rs = std::get<NominalSet>(right_set);
        NominalSet out;
        std::set_difference(s->items.begin(), s->items.end(), rs.items.begin(),
                            rs.items.end(), std::back_inserter(out.items));
        return out;
    }
    if (const auto* r = std::get_if<IntRange>(&c)) {
        const auto& rs = std::get<IntRange>(right_set);
        return IntRange{r->lo, rs.lo - 1};
    }
    const auto& r = std::get<RealRange>(c);
    const auto& rs = std::get<RealRange>(right_set);
    return RealRange{r.lo, rs.lo, false};
}

inline Value sample_constraint(const FeatureSpec& spec, const Constraint& c, Rng& rng) {
    switch (spec.kind()) {
        case FeatureKind::nominal: {
            const auto& s = std::get<NominalSet>(c);
            return s.items[static_cast<std::size_t>(rng.below(s.items.size()))];
        }
        case FeatureKind::integer: {
            const auto& r = std::get<IntRange>(c);
            const auto n = static_cast<std::uint64_t>(r.hi - r.lo + 1);
            return r.lo + static_cast<std::int64_t>(rng.below(n));
        }
        default: {
            const auto& r = std::get<RealRange>(c);
            if (r.lo == r.hi) return r.lo;
            return rng.uniform(r.lo, r.hi);
        }
    }
}

}  // namespace gentree
