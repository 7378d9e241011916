// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gentree/csv.hpp"
#include "gentree/rng.hpp"
#include "gentree/schema.hpp"

namespace gentree {

/// Missing cells are empty optionals; on disk they are "" or "?".
using Row = std::vector<std::optional<Value>>;

struct Dataset {
    Schema schema;
    std::vector<Row> rows;

    std::size_t size() const { return rows.size(); }
};

namespace detail {

inline bool is_missing_token(const std::string& s) { return s.empty() || s == "?"; }

enum class TokenForm { integral, real, other };

inline TokenForm classify_token(const std::string& s) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    std::int64_t iv;
    auto ir = std::from_chars(b, e, iv);
    if (ir.ec == std::errc() && ir.ptr == e) return TokenForm::integral;
    double dv;
    auto dr = std::from_chars(b, e, dv);
    if (dr.ec == std::errc() && dr.ptr == e && std::isfinite(dv)) return TokenForm::real;
    return TokenForm::other;
}

inline std::int64_t parse_int(const std::string& s, const std::string& where) {
    std::int64_t v;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::runtime_error(where + ": not an integer: '" + s + "'");
    return v;
}

inline double parse_real(const std::string& s, const std::string& where) {
    double v;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
        throw std::runtime_error(where + ": not a number: '" + s + "'");
    return v;
}

inline std::string format_value(const FeatureSpec& spec, const Value& v) {
    switch (spec.kind()) {
        case FeatureKind::nominal:
            return spec.nominal().modalities[std::get<std::uint32_t>(v)];
        case FeatureKind::integer:
            return std::to_string(std::get<std::int64_t>(v));
        default: {
            char buf[64];
            auto r = std::to_chars(buf, buf + sizeof buf, std::get<double>(v));
            return std::string(buf, r.ptr);  // shortest round-trip form
        }
    }
}

}  // namespace detail

/// Types each column from its non-missing tokens: any non-numeric token makes
/// it Nominal; otherwise any fractional/exponent token makes it Real; else
/// Integer. Domains are the observed min/max (numeric) or the distinct values
/// in first-appearance order (nominal).
inline Schema infer_schema(const CsvTable& table) {
    if (table.header.empty()) throw std::runtime_error("no header");
    if (table.rows.empty()) throw std::runtime_error("no data rows");
    const std::size_t d = table.header.size();
    Schema schema;
    schema.features.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        auto& spec = schema.features[j];
        spec.name = table.header[j];
        bool any = false, any_other = false, any_real = false;
        for (const auto& row : table.rows) {
            if (row.size() != d) throw std::runtime_error("row arity mismatch");
            const auto& tok = row[j];
            if (detail::is_missing_token(tok)) continue;
            any = true;
            switch (detail::classify_token(tok)) {
                case detail::TokenForm::other: any_other = true; break;
                case detail::TokenForm::real: any_real = true; break;
                default: break;
            }
        }
        if (!any)
            throw std::runtime_error("column '" + spec.name + "' has no observed values");
        if (any_other) {
            NominalDomain dom;
            std::unordered_map<std::string, std::uint32_t> seen;
            for (const auto& row : table.rows) {
                const auto& tok = row[j];
                if (detail::is_missing_token(tok)) continue;
                if (seen.emplace(tok, static_cast<std::uint32_t>(dom.modalities.size())).second)
                    dom.modalities.push_back(tok);
            }
            spec.domain = std::move(dom);
        } else if (any_real) {
            RealDomain dom{std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
            for (const auto& row : table.rows) {
                const auto& tok = row[j];
                if (detail::is_missing_token(tok)) continue;
                const double v = detail::parse_real(tok, spec.name);
                dom.lo = std::min(dom.lo, v);
                dom.hi = std::max(dom.hi, v);
            }
            spec.domain = dom;
        } else {
            IntegerDomain dom{std::numeric_limits<std::int64_t>::max(),
                              std::numeric_limits<std::int64_t>::min()};
            for (const auto& row : table.rows) {
                const auto& tok = row[j];
                if (detail::is_missing_token(tok)) continue;
                const std::int64_t v = detail::parse_int(tok, spec.name);
                dom.lo = std::min(dom.lo, v);
                dom.hi = std::max(dom.hi, v);
            }
            spec.domain = dom;
        }
    }
    return schema;
}

inline Schema infer_schema(const std::string& path) { return infer_schema(read_csv(path)); }

/// Parses a table against a declared schema. Header names and arity must
/// match; values must parse and lie inside the declared domains.
inline Dataset load_dataset(const CsvTable& table, const Schema& schema) {
    const std::size_t d = schema.arity();
    if (table.header.size() != d) throw std::runtime_error("header arity mismatch");
    for (std::size_t j = 0; j < d; ++j)
        if (table.header[j] != schema.features[j].name)
            throw std::runtime_error("header mismatch: '" + table.header[j] + "' vs '" +
                                     schema.features[j].name + "'");
    Dataset ds;
    ds.schema = schema;
    ds.rows.reserve(table.rows.size());
    for (const auto& raw : table.rows) {
        if (raw.size() != d) throw std::runtime_error("row arity mismatch");
        Row row(d);
        for (std::size_t j = 0; j < d; ++j) {
            const auto& tok = raw[j];
            if (detail::is_missing_token(tok)) continue;
            const auto& spec = schema.features[j];
            switch (spec.kind()) {
                case FeatureKind::nominal: {
                    const auto& mods = spec.nominal().modalities;
                    auto it = std::find(mods.begin(), mods.end(), tok);
                    if (it == mods.end())
                        throw std::runtime_error(spec.name + ": unknown modality '" + tok + "'");
                    row[j] = static_cast<std::uint32_t>(it - mods.begin());
                    break;
                }
                case FeatureKind::integer: {
                    const std::int64_t v = detail::parse_int(tok, spec.name);
                    if (v < spec.integer().lo || v > spec.integer().hi)
                        throw std::runtime_error(spec.name + ": value out of domain: " + tok);
                    row[j] = v;
                    break;
                }
                default: {
                    const double v = detail::parse_real(tok, spec.name);
                    if (v < spec.real().lo || v > spec.real().hi)
                        throw std::runtime_error(spec.name + ": value out of domain: " + tok);
                    row[j] = v;
                }
            }
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

inline Dataset load_dataset(const std::string& path, const Schema& schema) {
    return load_dataset(read_csv(path), schema);
}

inline Dataset load_dataset(const std::string& path) {
    const CsvTable table = read_csv(path);
    return load_dataset(table, infer_schema(table));
}

inline CsvTable to_table(const Dataset& ds) {
    CsvTable table;
    for (const auto& spec : ds.schema.features) table.header.push_back(spec.name);
    table.rows.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        std::vector<std::string> rec(ds.schema.arity());
        for (std::size_t j = 0; j < row.size(); ++j)
            rec[j] = row[j] ? detail::format_value(ds.schema.features[j], *row[j])
                            : std::string("?");
        table.rows.push_back(std::move(rec));
    }
    return table;
}

inline void save_dataset(const Dataset& ds, const std::string& path) {
    write_csv(path, to_table(ds));
}

/// Missing-completely-at-random corruption: every present cell is erased
/// independently with probability q. Cell-for-cell reproducible for a seed.
inline Dataset mcar_corrupt(const Dataset& ds, double q, std::uint64_t seed) {
    if (q < 0.0 || q > 1.0) throw std::runtime_error("corruption rate must be in [0,1]");
    Dataset out = ds;
    Rng rng(splitmix64(seed ^ 0x6d6361725f713f21ull));
    for (auto& row : out.rows)
        for (auto& cell : row)
            if (cell && rng.uniform01() < q) cell.reset();
    return out;
}

/// Rebuilds the schema's domains from the observed cells of the given rows,
/// keeping column kinds (used when a subset of a dataset becomes a training
/// set of its own). Nominal modalities keep the base order, restricted to the
/// observed ones; numeric domains tighten to observed min/max.
inline Schema schema_from_rows(const Schema& base, const std::vector<Row>& rows) {
    Schema out = base;
    for (std::size_t j = 0; j < base.arity(); ++j) {
        const auto kind = base.features[j].kind();
        bool any = false;
        if (kind == FeatureKind::nominal) {
            std::vector<bool> seen(base.features[j].nominal().modalities.size(), false);
            for (const auto& row : rows)
                if (row[j]) seen[std::get<std::uint32_t>(*row[j])] = true, any = true;
            NominalDomain dom;
            for (std::size_t m = 0; m < seen.size(); ++m)
                if (seen[m]) dom.modalities.push_back(base.features[j].nominal().modalities[m]);
            out.features[j].domain = std::move(dom);
        } else if (kind == FeatureKind::integer) {
            IntegerDomain dom{std::numeric_limits<std::int64_t>::max(),
                              std::numeric_limits<std::int64_t>::min()};
            for (const auto& row : rows)
                if (row[j]) {
                    const auto v = std::get<std::int64_t>(*row[j]);
                    dom.lo = std::min(dom.lo, v);
                    dom.hi = std::max(dom.hi, v);
                    any = true;
                }
            out.features[j].domain = dom;
        } else {
            RealDomain dom{std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
            for (const auto& row : rows)
                if (row[j]) {
                    const auto v = std::get<double>(*row[j]);
                    dom.lo = std::min(dom.lo, v);
                    dom.hi = std::max(dom.hi, v);
                    any = true;
                }
            out.features[j].domain = dom;
        }
        if (!any)
            throw std::runtime_error("column '" + base.features[j].name +
                                     "' has no observed values");
    }
    return out;
}

/// Re-indexes nominal cells of rows built under `from` so they are valid under
/// `to` (whose modalities may be a reordering/subset superset by name).
inline Row reindex_row(const Row& row, const Schema& from, const Schema& to) {
    Row out = row;
    for (std::size_t j = 0; j < from.arity(); ++j) {
        if (!out[j] || from.features[j].kind() != FeatureKind::nominal) continue;
        const auto& name = from.features[j].nominal().modalities[std::get<std::uint32_t>(*out[j])];
        const auto& mods = to.features[j].nominal().modalities;
        const auto it = std::find(mods.begin(), mods.end(), name);
        if (it == mods.end())
            throw std::runtime_error(from.features[j].name + ": unknown modality '" + name + "'");
        out[j] = static_cast<std::uint32_t>(it - mods.begin());
    }
    return out;
}

}  // namespace gentree
