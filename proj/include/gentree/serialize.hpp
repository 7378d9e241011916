// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "gentree/models.hpp"

namespace gentree {

namespace detail {

using nlohmann::json;

inline json schema_to_json(const Schema& schema) {
    json features = json::array();
    for (const auto& spec : schema.features) {
        json f;
        f["name"] = spec.name;
        switch (spec.kind()) {
            case FeatureKind::nominal:
                f["kind"] = "nominal";
                f["modalities"] = spec.nominal().modalities;
                break;
            case FeatureKind::integer:
                f["kind"] = "integer";
                f["lo"] = spec.integer().lo;
                f["hi"] = spec.integer().hi;
                break;
            default:
                f["kind"] = "real";
                f["lo"] = spec.real().lo;
                f["hi"] = spec.real().hi;
        }
        features.push_back(std::move(f));
    }
    return json{{"features", std::move(features)}};
}

inline Schema schema_from_json(const json& j) {
    Schema schema;
    if (!j.contains("features") || !j["features"].is_array() || j["features"].empty())
        throw std::runtime_error("model schema: missing features");
    for (const auto& f : j["features"]) {
        FeatureSpec spec;
        spec.name = f.at("name").get<std::string>();
        const auto kind = f.at("kind").get<std::string>();
        if (kind == "nominal") {
            NominalDomain dom;
            dom.modalities = f.at("modalities").get<std::vector<std::string>>();
            if (dom.modalities.empty())
                throw std::runtime_error("model schema: empty modality set");
            spec.domain = std::move(dom);
        } else if (kind == "integer") {
            spec.domain = IntegerDomain{f.at("lo").get<std::int64_t>(),
                                        f.at("hi").get<std::int64_t>()};
        } else if (kind == "real") {
            spec.domain = RealDomain{f.at("lo").get<double>(), f.at("hi").get<double>()};
        } else {
            throw std::runtime_error("model schema: unknown kind '" + kind + "'");
        }
        schema.features.push_back(std::move(spec));
    }
    return schema;
}

inline json predicate_to_json(const Schema& schema, const Predicate& pred) {
    json p;
    p["feature"] = schema.features[pred.feature].name;
    if (const auto* s = std::get_if<NominalSet>(&pred.right_set)) {
        json in = json::array();
        for (const auto m : s->items)
            in.push_back(schema.features[pred.feature].nominal().modalities[m]);
        p["in"] = std::move(in);
    } else if (const auto* r = std::get_if<IntRange>(&pred.right_set)) {
        p["ge"] = r->lo;
    } else {
        p["ge"] = std::get<RealRange>(pred.right_set).lo;
    }
    return p;
}

template <typename Model>
inline json nodes_to_json(const Model& model, bool is_dt) {
    json nodes = json::array();
    for (std::size_t id = 0; id < model.tree.node_count(); ++id) {
        const Node& node = model.tree.nodes[id];
        json n;
        n["id"] = id;
        if (node.parent < 0)
            n["parent"] = nullptr;
        else
            n["parent"] = node.parent;
        if (node.left >= 0) {
            n["predicate"] = predicate_to_json(model.schema, node.pred);
            if constexpr (!std::is_same_v<Model, DecisionTree>)
                n["p_right"] = model.p_right[id];
        } else if (is_dt) {
            if constexpr (std::is_same_v<Model, DecisionTree>) {
                n["p_real"] = model.real_w[id];
                n["p_fake"] = model.fake_w[id];
            }
        }
        nodes.push_back(std::move(n));
    }
    return nodes;
}

}  // namespace detail

inline std::string serialize_model(const DecisionTree& dt) {
    detail::json j;
    j["format_version"] = 1;
    j["kind"] = "dt";
    j["schema"] = detail::schema_to_json(dt.schema);
    j["prior"] = dt.prior;
    j["nodes"] = detail::nodes_to_json(dt, true);
    return j.dump(2) + "\n";
}

inline std::string serialize_model(const GenerativeTree& gt) {
    detail::json j;
    j["format_version"] = 1;
    j["kind"] = "gt";
    j["schema"] = detail::schema_to_json(gt.schema);
    j["nodes"] = detail::nodes_to_json(gt, false);
    return j.dump(2) + "\n";
}

using Model = std::variant<DecisionTree, GenerativeTree>;

namespace detail {

/// Rebuilds tree topology from (id, parent) pairs; among a node's children the
/// first one listed becomes the left child. Predicates are validated against
/// the inherited constraints while walking down.
inline void load_tree(const json& jnodes, const Schema& schema, Tree& tree,
                      std::vector<const json*>& by_id) {
    if (!jnodes.is_array() || jnodes.empty())
        throw std::runtime_error("model: nodes must be a nonempty array");
    const std::size_t n = jnodes.size();
    tree.nodes.assign(n, Node{});
    by_id.assign(n, nullptr);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& jn = jnodes[i];
        const auto id = jn.at("id").get<std::int64_t>();
        if (id != static_cast<std::int64_t>(i))
            throw std::runtime_error("model: node ids must be 0..n-1 in order");
        by_id[i] = &jn;
        const auto& jp = jn.at("parent");
        if (jp.is_null()) {
            if (i != 0) throw std::runtime_error("model: only the root may lack a parent");
            continue;
        }
        const auto parent = jp.get<std::int64_t>();
        if (parent < 0 || parent >= static_cast<std::int64_t>(i))
            throw std::runtime_error("model: dangling parent id");
        tree.nodes[i].parent = static_cast<int>(parent);
        Node& pn = tree.nodes[parent];
        if (pn.left < 0)
            pn.left = static_cast<int>(i);
        else if (pn.right < 0)
            pn.right = static_cast<int>(i);
        else
            throw std::runtime_error("model: node has more than two children");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Node& node = tree.nodes[i];
        if ((node.left < 0) != (node.right < 0))
            throw std::runtime_error("model: internal nodes need exactly two children");
        if (node.left >= 0 && !by_id[i]->contains("predicate"))
            throw std::runtime_error("model: internal node lacks a predicate");
        if (node.left < 0 && by_id[i]->contains("predicate"))
            throw std::runtime_error("model: leaf carries a predicate");
    }
    // Decode predicates top-down so right sets can be validated as strict
    // nonempty subsets of the inherited constraint.
    std::vector<std::pair<int, SupportBox>> stack;
    stack.emplace_back(0, full_box(schema));
    while (!stack.empty()) {
        auto [id, box] = std::move(stack.back());
        stack.pop_back();
        Node& node = tree.nodes[id];
        if (node.left < 0) continue;
        const auto& jpred = by_id[id]->at("predicate");
        Predicate pred;
        pred.feature = schema.index_of(jpred.at("feature").get<std::string>());
        const auto& inherited = box[pred.feature];
        const auto& spec = schema.features[pred.feature];
        if (spec.kind() == FeatureKind::nominal) {
            const auto names = jpred.at("in").get<std::vector<std::string>>();
            NominalSet rs;
            for (const auto& nm : names) {
                const auto& mods = spec.nominal().modalities;
                const auto it = std::find(mods.begin(), mods.end(), nm);
                if (it == mods.end())
                    throw std::runtime_error("model: unknown modality '" + nm + "'");
                rs.items.push_back(static_cast<std::uint32_t>(it - mods.begin()));
            }
            std::sort(rs.items.begin(), rs.items.end());
            rs.items.erase(std::unique(rs.items.begin(), rs.items.end()), rs.items.end());
            pred.right_set = std::move(rs);
        } else if (spec.kind() == FeatureKind::integer) {
            const auto t = jpred.at("ge").get<std::int64_t>();
            pred.right_set = IntRange{t, std::get<IntRange>(inherited).hi};
        } else {
            const auto t = jpred.at("ge").get<double>();
            const auto& ir = std::get<RealRange>(inherited);
            pred.right_set = RealRange{t, ir.hi, ir.closed_hi};
        }
        const Constraint right_c = constraint_intersect(inherited, pred.right_set);
        const Constraint left_c = constraint_subtract(inherited, pred.right_set);
        if (constraint_empty(right_c) || constraint_empty(left_c))
            throw std::runtime_error("model: predicate does not split its constraint");
        pred.right_set = right_c;
        node.pred = pred;
        SupportBox rbox = box;
        rbox[pred.feature] = right_c;
        SupportBox lbox = std::move(box);
        lbox[pred.feature] = left_c;
        stack.emplace_back(node.right, std::move(rbox));
        stack.emplace_back(node.left, std::move(lbox));
    }
}

}  // namespace detail

inline Model deserialize_model(const std::string& text) {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("model: invalid JSON: ") + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
        throw std::runtime_error("model: unsupported format_version");
    const auto kind = j.at("kind").get<std::string>();
    const Schema schema = detail::schema_from_json(j.at("schema"));
    std::vector<const detail::json*> by_id;
    if (kind == "dt") {
        DecisionTree dt;
        dt.schema = schema;
        detail::load_tree(j.at("nodes"), schema, dt.tree, by_id);
        dt.prior = j.at("prior").get<double>();
        if (!(dt.prior > 0.0 && dt.prior < 1.0))
            throw std::runtime_error("model: prior must be in (0,1)");
        dt.resize_weights();
        double sp = 0.0, sf = 0.0;
        for (std::size_t i = 0; i < dt.tree.node_count(); ++i) {
            if (!dt.tree.is_leaf(static_cast<int>(i))) continue;
            dt.real_w[i] = by_id[i]->at("p_real").get<double>();
            dt.fake_w[i] = by_id[i]->at("p_fake").get<double>();
            if (dt.real_w[i] < 0.0 || dt.fake_w[i] < 0.0)
                throw std::runtime_error("model: negative leaf weight");
            sp += dt.real_w[i];
            sf += dt.fake_w[i];
        }
        if (std::abs(sp - 1.0) > 1e-6 || std::abs(sf - 1.0) > 1e-6)
            throw std::runtime_error("model: leaf weights must sum to 1");
        return dt;
    }
    if (kind == "gt") {
        GenerativeTree gt;
        gt.schema = schema;
        detail::load_tree(j.at("nodes"), schema, gt.tree, by_id);
        gt.resize_probs();
        for (std::size_t i = 0; i < gt.tree.node_count(); ++i) {
            if (gt.tree.is_leaf(static_cast<int>(i))) continue;
            gt.p_right[i] = by_id[i]->at("p_right").get<double>();
            if (!(gt.p_right[i] >= 0.0 && gt.p_right[i] <= 1.0))
                throw std::runtime_error("model: arc probability outside [0,1]");
        }
        return gt;
    }
    throw std::runtime_error("model: kind must be \"dt\" or \"gt\"");
}

inline void save_model_file(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    std::visit([&](const auto& m) { out << serialize_model(m); }, model);
}

inline Model load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(text);
}

}  // namespace gentree
