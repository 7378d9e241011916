// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "gentree/serialize.hpp"
#include "helpers.hpp"

using namespace gentree;

TEST_CASE("a root-only generator serializes to a single node") {
    GenerativeTree gt;
    gt.schema = testutil::real_schema_2d();
    gt.resize_probs();
    const std::string text = serialize_model(gt);
    const Model back = deserialize_model(text);
    const auto& g = std::get<GenerativeTree>(back);
    CHECK(g.tree.node_count() == 1);
    CHECK(serialize_model(g) == text);
}

TEST_CASE("generator round-trip is byte-exact") {
    Rng rng(1234);
    for (int iter = 0; iter < 10; ++iter) {
        const GenerativeTree gt = testutil::random_gt(testutil::mixed_schema(), 9, rng);
        const std::string text = serialize_model(gt);
        const auto& g = std::get<GenerativeTree>(deserialize_model(text));
        REQUIRE(serialize_model(g) == text);
        // Same leaves, weights, and boxes.
        const auto a = leaf_views(gt), b = leaf_views(g);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].id == b[i].id);
            CHECK(a[i].weight == b[i].weight);
            CHECK(box_volume(gt.schema, a[i].box) == box_volume(g.schema, b[i].box));
        }
    }
}

TEST_CASE("discriminator round-trip keeps weights and prior") {
    Rng rng(77);
    const DecisionTree dt = testutil::random_dt(testutil::mixed_schema(), 7, rng);
    const std::string text = serialize_model(dt);
    const auto& d = std::get<DecisionTree>(deserialize_model(text));
    CHECK(serialize_model(d) == text);
    CHECK(d.prior == dt.prior);
    for (const int leaf : dt.tree.leaves()) {
        CHECK(d.real_w[leaf] == dt.real_w[leaf]);
        CHECK(d.fake_w[leaf] == dt.fake_w[leaf]);
    }
}

TEST_CASE("model files round-trip through disk") {
    Rng rng(5150);
    const GenerativeTree gt = testutil::random_gt(testutil::mixed_schema(), 5, rng);
    const auto path = (std::filesystem::temp_directory_path() / "gt_model.json").string();
    save_model_file(path, gt);
    const Model back = load_model_file(path);
    CHECK(serialize_model(std::get<GenerativeTree>(back)) == serialize_model(gt));
}

TEST_CASE("malformed models are rejected") {
    CHECK_THROWS(deserialize_model("not json"));
    CHECK_THROWS(deserialize_model("{}"));
    CHECK_THROWS(deserialize_model(R"({"format_version":2,"kind":"gt"})"));

    const char* schema_part = R"("schema":{"features":[{"name":"x","kind":"real","lo":0.0,"hi":1.0}]})";

    // Dangling parent id.
    CHECK_THROWS(deserialize_model(std::string(R"({"format_version":1,"kind":"gt",)") +
                                   schema_part +
                                   R"(,"nodes":[{"id":0,"parent":null},{"id":1,"parent":5}]})"));
    // Internal node with one child.
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"gt",)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"predicate":{"feature":"x","ge":0.5},"p_right":0.2},{"id":1,"parent":0}]})"));
    // Leaf with a predicate is as malformed as an internal without one.
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"gt",)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"predicate":{"feature":"x","ge":0.5}}]})"));
    // Threshold outside the inherited constraint.
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"gt",)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"predicate":{"feature":"x","ge":1.5},"p_right":0.2},)" +
        R"({"id":1,"parent":0},{"id":2,"parent":0}]})"));
    // Arc probability out of range.
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"gt",)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"predicate":{"feature":"x","ge":0.5},"p_right":1.5},)" +
        R"({"id":1,"parent":0},{"id":2,"parent":0}]})"));

    // Decision-tree leaf weights must sum to one.
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"dt","prior":0.5,)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"p_real":0.4,"p_fake":1.0}]})"));
    // Prior outside (0,1).
    CHECK_THROWS(deserialize_model(
        std::string(R"({"format_version":1,"kind":"dt","prior":1.0,)") + schema_part +
        R"(,"nodes":[{"id":0,"parent":null,"p_real":1.0,"p_fake":1.0}]})"));
}
