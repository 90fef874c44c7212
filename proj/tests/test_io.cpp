// Copyright 2026 The qmacea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>

#include "qmacea/io.hpp"
#include "qmacea/random.hpp"

using namespace qmacea;

namespace {

std::optional<ErrorCode> code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace

TEST(channel_json, round_trip) {
    Rng rng(1);
    const auto ch = random_channel(4, 3, 3, rng, {2, 2});
    const Json j = channel_to_json(ch);
    const auto back = channel_from_json(Json::parse(j.dump()));
    ASSERT_EQ(back.input_dims(), (Dims{2, 2}));
    ASSERT_EQ(back.kraus().size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) ASSERT_EQ(back.kraus()[k], ch.kraus()[k]);
}

TEST(channel_json, real_entries_and_file) {
    const auto j = Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": [[[1, 0], [0, 1]]]})");
    const auto ch = channel_from_json(j);
    ASSERT_LT(channel_distance(ch, make_identity_channel(2)), 1e-15);

    const std::string path = testing::TempDir() + "qmacea_io_channel.json";
    {
        std::ofstream out(path);
        out << channel_to_json(make_completely_dephasing(2)).dump();
    }
    ASSERT_LT(channel_distance(parse_channel_spec("file:" + path), make_completely_dephasing(2)), 1e-15);
    std::remove(path.c_str());
}

TEST(channel_json, errors) {
    ASSERT_EQ(code_of([] { channel_from_json(Json::parse(R"({"dim_in": 2})")); }), ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { channel_from_json(Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": []})")); }),
              ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { channel_from_json(Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": [[[1, 0]]]})")); }),
              ErrorCode::DimensionMismatch);
    ASSERT_EQ(code_of([] { channel_from_json(Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": [[[1, "x"], [0, 1]]]})")); }),
              ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { load_channel_file("/nonexistent/qmacea.json"); }), ErrorCode::ParseError);
    // Kraus completeness is checked by the channel itself
    ASSERT_THROW(channel_from_json(Json::parse(R"({"dim_in": 2, "dim_out": 2, "kraus": [[[1, 0], [0, 0]]]})")), Error);
}

TEST(parse_channel_spec, builtins) {
    const auto pf = parse_channel_spec("phase-flip:d=2,p=0.5,0.5");
    ASSERT_LT(channel_distance(pf, make_collective_phase_flip(2, {0.5, 0.5})), 1e-15);
    ASSERT_EQ(pf.input_dims(), (Dims{2, 2}));

    const auto pf3 = parse_channel_spec("phase-flip:p=0.5,0.25,0.25,d=3");
    ASSERT_EQ(pf3.dim_in(), 9u);

    ASSERT_LT(channel_distance(parse_channel_spec("identity:d=3"), make_identity_channel(3)), 1e-15);
    const auto two = parse_channel_spec("dephasing:d=2,senders=2");
    ASSERT_EQ(two.input_dims(), (Dims{2, 2}));
    ASSERT_LT(channel_distance(two, tensor_channels(make_completely_dephasing(2), make_completely_dephasing(2))), 1e-15);
    ASSERT_LT(channel_distance(parse_channel_spec("depolarizing"), make_completely_depolarizing(2)), 1e-15);
    ASSERT_LT(channel_distance(parse_channel_spec("cq:theta=0.7"), make_qubit_cq_channel(0.7)), 1e-15);
}

TEST(parse_channel_spec, errors) {
    for (const char* bad : {"nope", "phase-flip:d=2", "phase-flip:d=2,p=0.5,x", "identity:d=2,q=1", "identity:d=-1",
                            "identity:d=1.5", "cq", "cq:theta=1,2", "file:", "identity:d=2,senders=3",
                            "phase-flip:d=2,d=3,p=1,0", "phase-flip:,p=1"}) {
        ASSERT_EQ(code_of([&] { parse_channel_spec(bad); }), ErrorCode::ParseError) << bad;
    }
    ASSERT_EQ(code_of([] { parse_channel_spec("phase-flip:d=2,p=0.6,0.6"); }), ErrorCode::BadDistribution);
    ASSERT_EQ(code_of([] { parse_channel_spec("identity:d=5000"); }), ErrorCode::DimensionCap);
}

TEST(parse_inputs, forms) {
    const auto mm = parse_inputs("maximally-mixed", {2, 3});
    ASSERT_EQ(mm.size(), 2u);
    ASSERT_EQ(mm[1].dim(), 3u);

    const auto shared = parse_inputs("diag:0.75,0.25", {2, 2});
    ASSERT_NEAR(shared[0].matrix()(0, 0).real(), 0.75, 1e-15);
    ASSERT_NEAR(shared[1].matrix()(1, 1).real(), 0.25, 1e-15);

    const auto each = parse_inputs("diag:1,0/0.5,0.5", {2, 2});
    ASSERT_NEAR(each[0].matrix()(0, 0).real(), 1, 1e-15);
    ASSERT_NEAR(each[1].matrix()(0, 0).real(), 0.5, 1e-15);

    ASSERT_EQ(code_of([] { parse_inputs("pure", {2}); }), ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { parse_inputs("diag:0.5,0.5,0", {2, 2}); }), ErrorCode::DimensionMismatch);
    ASSERT_EQ(code_of([] { parse_inputs("diag:a,b", {2}); }), ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { parse_inputs("diag:0.9,0.9", {2}); }), ErrorCode::BadDistribution);
    ASSERT_EQ(code_of([] { parse_inputs("diag:1,0/1,0/1,0", {2, 2}); }), ErrorCode::ParseError);
}

TEST(hull_to_csv, format) {
    const std::vector<RatePair> hull{{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 2}};
    ASSERT_EQ(hull_to_csv(hull), "r1,r2\n0,0\n2,0\n2,1\n1,2\n0,2\n");
    ASSERT_EQ(hull_to_csv({}), "r1,r2\n");
}

TEST(report_json, pentagon_and_packing_fields) {
    const auto pi = maximally_mixed(2);
    const auto pent = region_for_inputs(make_collective_phase_flip(2, {0.5, 0.5}), pi, pi);
    const Json j = pentagon_to_json(pent);
    ASSERT_NEAR(j["rsum"].get<double>(), 3, 1e-9);
    ASSERT_EQ(j["corners"]["Q"].size(), 2u);
    ASSERT_EQ(j["vertices"].size(), pent.vertices.size());

    PackingConfig cfg;
    cfg.n = 1;
    cfg.rate = 2;
    cfg.delta = 0.5;
    cfg.trials = 1;
    cfg.kind = CodebookKind::Paulis;
    const Json p = packing_to_json(simulate_packing(make_identity_channel(2), pi, cfg));
    for (const char* key : {"n", "R", "gamma", "delta", "eps_measured", "bound", "min_success", "avg_success",
                            "post_expurgation_max_error", "seed", "codebooks"})
        ASSERT_TRUE(p.contains(key)) << key;
    ASSERT_EQ(p["codebooks"].size(), 1u);
}

TEST(matrix_json, round_trip) {
    Rng rng(2);
    const ComplexMatrix m = gaussian_matrix(3, 2, rng);
    ASSERT_EQ(matrix_from_json(Json::parse(matrix_to_json(m).dump())), m);
    ASSERT_EQ(code_of([] { matrix_from_json(Json::parse("[[1, 2], [3]]")); }), ErrorCode::ParseError);
    ASSERT_EQ(code_of([] { matrix_from_json(Json::parse("[]")); }), ErrorCode::ParseError);
}
