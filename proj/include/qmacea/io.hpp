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

#pragma once

// Channel ingestion (builtin grammar and JSON Kraus files) and JSON
// serialization of every report. Complex numbers are [re, im] pairs.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmacea/capacity.hpp"
#include "qmacea/channels.hpp"
#include "qmacea/codesim.hpp"
#include "qmacea/entropy.hpp"
#include "qmacea/typing.hpp"

namespace qmacea {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Matrices

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        fail(ErrorCode::ParseError, "matrix must be a non-empty list of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(ErrorCode::ParseError, "ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& z = row[static_cast<std::size_t>(c)];
            if (z.is_number()) {
                m(i, c) = Complex(z.get<double>(), 0.0);
            } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
                m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
            } else {
                fail(ErrorCode::ParseError, "matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Channels

inline Json channel_to_json(const QuantumChannel& ch) {
    Json j;
    j["dim_in"] = ch.dim_in();
    j["dim_out"] = ch.dim_out();
    j["input_dims"] = ch.input_dims();
    Json kraus = Json::array();
    for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
    return j;
}

inline QuantumChannel channel_from_json(const Json& j) {
    try {
        const auto din = j.at("dim_in").get<std::size_t>();
        const auto dout = j.at("dim_out").get<std::size_t>();
        if (din == 0 || dout == 0) fail(ErrorCode::ParseError, "dimensions must be positive");
        check_matrix_cap(dout, din);
        std::vector<ComplexMatrix> kraus;
        for (const auto& k : j.at("kraus")) {
            auto m = matrix_from_json(k);
            if (static_cast<std::size_t>(m.rows()) != dout || static_cast<std::size_t>(m.cols()) != din)
                fail(ErrorCode::DimensionMismatch, "Kraus operator shape differs from dim_out x dim_in");
            kraus.push_back(std::move(m));
        }
        if (kraus.empty()) fail(ErrorCode::ParseError, "kraus list is empty");
        Dims input_dims;
        if (j.contains("input_dims")) input_dims = j.at("input_dims").get<Dims>();
        return QuantumChannel(std::move(kraus), std::move(input_dims));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("channel file: ") + e.what());
    }
}

inline QuantumChannel load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open channel file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, "channel file " + path + ": " + e.what());
    }
    return channel_from_json(j);
}

namespace detail {

inline double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) fail(ErrorCode::ParseError, "not a number: '" + s + "'");
    return v;
}

inline std::size_t parse_count(const std::string& s) {
    const double v = parse_number(s);
    if (v < 0 || v != std::floor(v) || v > 1e9) fail(ErrorCode::ParseError, "not a count: '" + s + "'");
    return static_cast<std::size_t>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

// `key=v1,v2,key2=v` → {key: [v1, v2], key2: [v]}; bare tokens extend the previous key.
inline std::map<std::string, std::vector<std::string>> parse_params(const std::string& s) {
    std::map<std::string, std::vector<std::string>> out;
    std::string last;
    if (s.empty()) return out;
    for (const auto& tok : split(s, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (last.empty() || tok.empty()) fail(ErrorCode::ParseError, "dangling value '" + tok + "'");
            out[last].push_back(tok);
            continue;
        }
        last = tok.substr(0, eq);
        if (last.empty() || out.count(last)) fail(ErrorCode::ParseError, "empty or repeated key in '" + s + "'");
        out[last].push_back(tok.substr(eq + 1));
    }
    return out;
}

inline const std::vector<std::string>& param(const std::map<std::string, std::vector<std::string>>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) fail(ErrorCode::ParseError, "missing parameter '" + key + "'");
    return it->second;
}

inline std::size_t count_param(const std::map<std::string, std::vector<std::string>>& p, const std::string& key,
                               std::size_t fallback) {
    if (!p.count(key)) return fallback;
    const auto& v = p.at(key);
    if (v.size() != 1) fail(ErrorCode::ParseError, "parameter '" + key + "' takes one value");
    return parse_count(v.front());
}

inline void only_keys(const std::map<std::string, std::vector<std::string>>& p, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
        bool known = false;
        for (const char* allowed : keys) known = known || k == allowed;
        if (!known) fail(ErrorCode::ParseError, "unknown parameter '" + k + "'");
    }
}

inline QuantumChannel per_sender(QuantumChannel single, std::size_t senders) {
    if (senders == 1) return single;
    if (senders != 2) fail(ErrorCode::ParseError, "senders must be 1 or 2");
    return tensor_channels(single, single);
}

}  // namespace detail

/// Builtin grammar `name:key=value,...`:
///   phase-flip:d=2,p=0.5,0.5   identity:d=2[,senders=2]   dephasing:d=2[,senders=2]
///   depolarizing:d=2[,senders=2]   cq:theta=1.2   file:path.json
inline QuantumChannel parse_channel_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "file") {
        if (rest.empty()) fail(ErrorCode::ParseError, "file: needs a path");
        return load_channel_file(rest);
    }
    const auto p = detail::parse_params(rest);
    if (name == "phase-flip") {
        detail::only_keys(p, {"d", "p"});
        const std::size_t d = detail::count_param(p, "d", 2);
        std::vector<double> probs;
        for (const auto& s : detail::param(p, "p")) probs.push_back(detail::parse_number(s));
        if (d > 64) fail(ErrorCode::DimensionCap, "phase-flip d too large");
        return make_collective_phase_flip(d, probs);
    }
    if (name == "identity" || name == "dephasing" || name == "depolarizing") {
        detail::only_keys(p, {"d", "senders"});
        const std::size_t d = detail::count_param(p, "d", 2);
        const std::size_t senders = detail::count_param(p, "senders", 1);
        if (d < 1 || d > 4096) fail(ErrorCode::DimensionCap, "d out of range");
        if (name == "identity") return detail::per_sender(make_identity_channel(d), senders);
        if (name == "dephasing") return detail::per_sender(make_completely_dephasing(d), senders);
        return detail::per_sender(make_completely_depolarizing(d), senders);
    }
    if (name == "cq") {
        detail::only_keys(p, {"theta"});
        const auto& v = detail::param(p, "theta");
        if (v.size() != 1) fail(ErrorCode::ParseError, "theta takes one value");
        return make_qubit_cq_channel(detail::parse_number(v.front()));
    }
    fail(ErrorCode::ParseError, "unknown channel '" + name + "'");
}

/// `maximally-mixed` or `diag:p1,p2[/q1,q2]` (one list per sender; a single
/// list is shared). Returns one state per entry of `dims`.
inline std::vector<DensityOperator> parse_inputs(const std::string& spec, const Dims& dims) {
    std::vector<DensityOperator> out;
    if (spec == "maximally-mixed") {
        for (auto d : dims) out.push_back(maximally_mixed(d));
        return out;
    }
    if (spec.rfind("diag:", 0) != 0) fail(ErrorCode::ParseError, "inputs must be maximally-mixed or diag:...");
    const auto lists = detail::split(spec.substr(5), '/');
    if (lists.size() != 1 && lists.size() != dims.size()) fail(ErrorCode::ParseError, "one diagonal per sender expected");
    for (std::size_t s = 0; s < dims.size(); ++s) {
        std::vector<double> p;
        for (const auto& tok : detail::split(lists[lists.size() == 1 ? 0 : s], ',')) p.push_back(detail::parse_number(tok));
        if (p.size() != dims[s]) fail(ErrorCode::DimensionMismatch, "diagonal length differs from sender dimension");
        check_distribution(p);
        RealVector v = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
        out.push_back(DensityOperator(ComplexMatrix(v.cast<Complex>().asDiagonal())));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reports

inline Json pair_to_json(const RatePair& p) { return Json::array({p[0], p[1]}); }

inline Json pentagon_to_json(const RegionPentagon& p) {
    Json j;
    j["r1"] = p.r1;
    j["r2"] = p.r2;
    j["rsum"] = p.rsum;
    const auto c = corner_points(p);
    j["corners"] = {{"O", pair_to_json(c.O)}, {"P", pair_to_json(c.P)}, {"Q", pair_to_json(c.Q)}, {"R", pair_to_json(c.R)}};
    Json v = Json::array();
    for (const auto& x : p.vertices) v.push_back(pair_to_json(x));
    j["vertices"] = std::move(v);
    return j;
}

inline Json optimizer_to_json(const OptimizerResult& r) {
    Json j;
    j["value"] = r.value;
    j["objective"] = r.objective;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["best_start"] = r.best_start;
    Json states = Json::array();
    for (const auto& s : r.argmax) states.push_back(matrix_to_json(s.matrix()));
    j["argmax"] = std::move(states);
    return j;
}

inline Json config_to_json(const OptimizerConfig& c) {
    return Json{{"starts", c.starts}, {"step", c.step}, {"tol", c.tol}, {"max_iters", c.max_iters}, {"seed", c.seed}};
}

inline Json corner_rates_to_json(const ResourceCornerRates& r) {
    Json j;
    j["E1"] = r.e1;
    j["E2"] = r.e2;
    j["classical_Q"] = pair_to_json(r.classical_q);
    j["classical_P"] = pair_to_json(r.classical_p);
    j["father_Q"] = {{"ebits", pair_to_json(r.father_q_consumed)}, {"qubits", pair_to_json(r.father_q_sent)}};
    j["father_P"] = {{"ebits", pair_to_json(r.father_p_consumed)}, {"qubits", pair_to_json(r.father_p_sent)}};
    j["quantum_Q"] = pair_to_json(r.quantum_q);
    j["quantum_P"] = pair_to_json(r.quantum_p);
    return j;
}

inline Json packing_to_json(const PackingReport& r) {
    Json j;
    j["n"] = r.n;
    j["R"] = r.rate;
    j["gamma"] = r.gamma;
    j["delta"] = r.delta;
    j["eps_measured"] = r.eps_measured;
    j["bound"] = r.bound;
    j["min_success"] = r.min_success;
    j["avg_success"] = r.avg_success;
    j["post_expurgation_max_error"] = r.post_expurgation_max_error;
    j["seed"] = r.seed;
    Json books = Json::array();
    for (const auto& c : r.codebooks)
        books.push_back({{"trial", c.trial}, {"min_success", c.min_success}, {"avg_success", c.avg_success},
                         {"meets_bound", c.meets_bound}, {"success", c.success}});
    j["codebooks"] = std::move(books);
    j["codewords"] = r.codewords;
    j["codebook_kind"] = r.kind;
    j["eps_pi"] = r.eps_pi;
    j["eps_pi_s"] = r.eps_pi_s;
    j["trace_pi_s"] = r.trace_pi_s;
    j["inverse_D"] = r.inverse_d;
    j["mutual_information"] = r.mutual_information;
    j["p3_tightest_c"] = r.p3_tightest_c;
    j["p4_exponent_gap"] = r.p4_exponent_gap;
    j["best_trial"] = r.best_trial;
    j["pass_fraction"] = r.pass_fraction;
    j["povm_valid"] = r.povm_valid;
    return j;
}

inline Json property_to_json(const PropertyCheck& p) {
    return Json{{"value", p.value}, {"bound", p.bound}, {"margin", p.margin}, {"tightest_c", p.tightest_c}, {"holds", p.holds}};
}

inline Json typicality_to_json(const TypicalityReport& r) {
    Json j;
    j["n"] = r.n;
    j["delta"] = r.delta;
    j["epsilon"] = r.epsilon;
    j["entropy"] = r.entropy;
    j["rank"] = r.rank;
    j["mass"] = property_to_json(r.mass);
    j["sandwich_low"] = property_to_json(r.sandwich_low);
    j["sandwich_high"] = property_to_json(r.sandwich_high);
    j["cardinality"] = property_to_json(r.cardinality);
    j["type_dimension"] = property_to_json(r.type_dimension);
    j["tightest_c"] = r.tightest_c;
    j["eta"] = r.eta;
    j["pass"] = r.pass();
    return j;
}

inline Json entropy_lemmas_to_json(const EntropyLemmaReport& r) {
    return Json{{"trials", r.trials},
                {"max_dim", r.max_dim},
                {"seed", r.seed},
                {"duality_max_violation", r.duality_max_violation},
                {"bound_min_slack", r.bound_min_slack},
                {"pass", r.pass()}};
}

inline Json ssa_to_json(const SubadditivityReport& r) {
    Json j{{"trials", r.trials}, {"max_dim", r.max_dim}, {"seed", r.seed}};
    j["min_conditional_mi"] = r.trials ? Json(r.min_conditional_mi) : Json(nullptr);
    j["pass"] = r.pass;
    return j;
}

inline Json dephasing_to_json(const DephasingMaximizerReport& r) {
    Json j{{"trials", r.trials}, {"seed", r.seed}};
    j["min_gain"] = r.trials ? Json(r.min_gain) : Json(nullptr);
    j["closed_form_max_error"] = r.closed_form_max_error;
    j["pass"] = r.pass;
    return j;
}

inline std::string hull_to_csv(const std::vector<RatePair>& hull) {
    std::ostringstream os;
    os.precision(17);
    os << "r1,r2\n";
    for (const auto& p : hull) os << p[0] << ',' << p[1] << '\n';
    return os.str();
}

}  // namespace qmacea
