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

// qmacea: rate regions, capacity optimizers, code simulation and lemma checks
// for entanglement-assisted quantum multiple-access channels.
//
// Exit codes: 0 ok, 1 a checked property failed, 2 bad input, 3 size cap.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "qmacea/io.hpp"
#include "qmacea/qmacea.hpp"

using namespace qmacea;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

struct RunConfig {
    std::string channel;
    std::string inputs = "maximally-mixed";
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;  // 0: command default
    double rate = 0.5;
    double gamma = -1;
    double delta = 0.1;
    long long trials = -1;  // -1: command/suite default
    std::string out;
    std::string format = "json";
    std::string target = "auto";
    std::string suite = "all";
    std::string codebook = "blocks";
    OptimizerConfig opt;
};

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

Json tolerance_set() {
    return Json{{"hermitian", tol::kHermitian},       {"trace", tol::kTrace},
                {"psd", tol::kPsd},                   {"completeness", tol::kCompleteness},
                {"entropy_clamp", tol::kEntropyClamp}, {"pentagon", tol::kPentagon},
                {"chain_rule", tol::kChainRule},      {"srm_threshold", tol::kSrmThreshold},
                {"povm_sum", tol::kPovmSum},          {"hayashi_nagaoka", tol::kHayashiNagaoka},
                {"duality", kDualityTolerance},       {"inequality_slack", kInequalitySlack}};
}

Json report_header(const std::string& command, const std::string& cmdline, std::uint64_t seed) {
    Json j;
    j["tool"] = "qmacea";
    j["version"] = kVersion;
    j["command"] = command;
    j["command_line"] = cmdline;
    j["seed"] = seed;
    j["tolerances"] = tolerance_set();
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::ParseError, "cannot write " + path);
    f << text;
}

void emit(const RunConfig& cfg, const Json& report) {
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty())
        std::cout << text;
    else
        write_text(cfg.out, text);
}

std::string csv_path(const std::string& out) {
    const std::string ext = ".json";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
        return out.substr(0, out.size() - ext.size()) + ".csv";
    return out + ".csv";
}

std::size_t trials_or(const RunConfig& cfg, std::size_t fallback) {
    return cfg.trials < 0 ? fallback : static_cast<std::size_t>(cfg.trials);
}

// ---------------------------------------------------------------------------

int cmd_region(const RunConfig& cfg, const std::string& cmdline) {
    const auto m = parse_channel_spec(cfg.channel);
    if (m.input_dims().size() != 2)
        fail(ErrorCode::FactorError, "region needs a two-sender channel (declare input_dims or use senders=2)");
    auto inputs = parse_inputs(cfg.inputs, m.input_dims());
    const std::size_t level = cfg.n == 0 ? 1 : cfg.n;
    const auto channel = level_n_channel(m, level);
    DensityOperator rho1 = inputs[0], rho2 = inputs[1];
    for (std::size_t i = 1; i < level; ++i) {
        rho1 = tensor(rho1, inputs[0]);
        rho2 = tensor(rho2, inputs[1]);
    }
    const double scale = 1.0 / static_cast<double>(level);
    auto per_use = [scale](const RegionPentagon& p) { return make_pentagon(p.r1 * scale, p.r2 * scale, p.rsum * scale); };

    const auto pent = per_use(region_for_inputs(channel, rho1, rho2));
    Json report = report_header("region", cmdline, cfg.seed);
    report["channel"] = cfg.channel;
    report["inputs"] = cfg.inputs;
    report["level"] = level;
    report["label"] = level == 1 ? "single-letter region for the given inputs" : "level-n inner bound";
    report["pentagon"] = pentagon_to_json(pent);
    report["optimizer"] = config_to_json(cfg.opt);
    if (level == 1) {
        report["corner_rates"] = corner_rates_to_json(resource_corner_rates(channel, rho1, rho2));
        const auto sd = successive_decode_rates(channel, rho1, rho2);
        report["successive_decoding"] = {{"rates", pair_to_json(sd.rates)},
                                         {"chain_rule_error", sd.chain_rule_error},
                                         {"consistent", sd.consistent}};
    }
    if (cfg.channel.rfind("phase-flip:", 0) == 0) {
        const std::size_t d = m.input_dims()[0];
        std::vector<double> p;
        const auto params = detail::parse_params(cfg.channel.substr(11));
        for (const auto& s : detail::param(params, "p")) p.push_back(detail::parse_number(s));
        report["closed_form"] = pentagon_to_json(phase_flip_region_closed_form(d, p));
    }
    std::vector<RegionPentagon> all{pent};
    if (cfg.samples > 0) {
        OptimizerConfig oc = cfg.opt;
        oc.seed = cfg.seed;
        const auto u = union_region_sample(channel, cfg.samples, oc, cfg.seed);
        Json list = Json::array();
        for (std::size_t i = 0; i < u.pentagons.size(); ++i) {
            const auto p = per_use(u.pentagons[i]);
            all.push_back(p);
            list.push_back({{"source", u.sources[i]}, {"r1", p.r1}, {"r2", p.r2}, {"rsum", p.rsum}});
        }
        report["union"] = {{"samples", cfg.samples}, {"optimizer_converged", u.optimizer_converged}, {"pentagons", list}};
    }
    const auto hull = union_hull(all);
    Json hj = Json::array();
    for (const auto& v : hull) hj.push_back(pair_to_json(v));
    report["hull"] = hj;

    if (cfg.format == "csv") {
        if (cfg.out.empty())
            std::cout << hull_to_csv(hull);
        else
            write_text(cfg.out, hull_to_csv(hull));
        return kExitOk;
    }
    emit(cfg, report);
    if (!cfg.out.empty()) {
        write_text(csv_path(cfg.out), hull_to_csv(hull));
        const auto c = corner_points(pent);
        std::cout << "r1=" << pent.r1 << " r2=" << pent.r2 << " rsum=" << pent.rsum << "\n"
                  << "O=(" << c.O[0] << "," << c.O[1] << ") P=(" << c.P[0] << "," << c.P[1] << ") Q=(" << c.Q[0] << ","
                  << c.Q[1] << ") R=(" << c.R[0] << "," << c.R[1] << ")\n";
    }
    return pent.valid() ? kExitOk : kExitFailed;
}

int cmd_optimize(const RunConfig& cfg, const std::string& cmdline) {
    const auto m = parse_channel_spec(cfg.channel);
    std::string target = cfg.target;
    if (target == "auto") target = m.input_dims().size() == 2 ? "sum" : "single";
    OptimizerConfig oc = cfg.opt;
    oc.seed = cfg.seed;
    Json report = report_header("optimize", cmdline, cfg.seed);
    report["channel"] = cfg.channel;
    report["target"] = target;
    report["optimizer"] = config_to_json(oc);
    OptimizerResult r;
    if (target == "single") {
        r = ea_capacity_single(QuantumChannel(m.kraus()), oc);
    } else if (target == "sum") {
        r = sum_rate_bound(m, oc);
    } else {
        fail(ErrorCode::ParseError, "target must be single, sum or auto");
    }
    report["result"] = optimizer_to_json(r);
    emit(cfg, report);
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& cmdline) {
    const auto m = parse_channel_spec(cfg.channel);
    const QuantumChannel single(m.kraus());
    const auto inputs = parse_inputs(cfg.inputs, {single.dim_in()});
    PackingConfig pc;
    pc.n = cfg.n == 0 ? 2 : cfg.n;
    pc.rate = cfg.rate;
    pc.gamma = cfg.gamma;
    pc.delta = cfg.delta;
    pc.trials = trials_or(cfg, 20);
    pc.seed = cfg.seed;
    if (cfg.codebook == "blocks")
        pc.kind = CodebookKind::Blocks;
    else if (cfg.codebook == "paulis")
        pc.kind = CodebookKind::Paulis;
    else
        fail(ErrorCode::ParseError, "codebook must be blocks or paulis");
    const auto r = simulate_packing(single, inputs[0], pc);
    Json report = report_header("simulate", cmdline, cfg.seed);
    report["channel"] = cfg.channel;
    report["inputs"] = cfg.inputs;
    report["simulation"] = packing_to_json(r);
    const bool pass = r.pass_fraction >= 0.95 && r.povm_valid;
    report["pass"] = pass;
    emit(cfg, report);
    return pass ? kExitOk : kExitFailed;
}

int cmd_verify(const RunConfig& cfg, const std::string& cmdline) {
    static const std::vector<std::string> kSuites{"lemmas",  "ssa",       "typicality",    "hayashi-nagaoka",
                                                  "gentle", "dephasing", "randomization", "average-state"};
    std::vector<std::string> suites;
    if (cfg.suite == "all") {
        suites = kSuites;
    } else {
        if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end())
            fail(ErrorCode::ParseError, "unknown suite '" + cfg.suite + "'");
        suites = {cfg.suite};
    }
    Json report = report_header("verify", cmdline, cfg.seed);
    Json results;
    bool all_pass = true;
    for (const auto& s : suites) {
        Json r;
        bool pass = true;
        if (s == "lemmas") {
            const auto t = trials_or(cfg, 500);
            if (t == 0) {
                r = {{"trials", 0}, {"pass", true}};
            } else {
                const auto e = verify_entropy_lemmas(t, 3, cfg.seed);
                r = entropy_lemmas_to_json(e);
                pass = e.pass();
            }
        } else if (s == "ssa") {
            const auto e = verify_strong_subadditivity(trials_or(cfg, 1000), 3, cfg.seed);
            r = ssa_to_json(e);
            pass = e.pass;
        } else if (s == "typicality") {
            const DensityOperator rho(ComplexMatrix(Eigen::Vector2cd(0.75, 0.25).asDiagonal()));
            const auto sweep = sweep_typical_properties(rho, {4, 6, 8}, 0.1, 0.25);
            Json list = Json::array();
            for (const auto& t : sweep.reports) list.push_back(typicality_to_json(t));
            r = {{"reports", list}, {"mass_monotone", sweep.mass_monotone}, {"pass", sweep.pass()}};
            pass = sweep.pass();
        } else if (s == "hayashi-nagaoka") {
            const auto t = trials_or(cfg, 100);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < t; ++k) {
                Rng rng = Rng::substream(cfg.seed, k);
                const auto [a, b] = random_hn_operands(2 + rng.uniform_index(7), rng);
                worst = std::min(worst, hayashi_nagaoka_check(a, b).margin);
            }
            pass = t == 0 || worst >= -tol::kHayashiNagaoka;
            r = {{"trials", t}, {"min_margin", t ? Json(worst) : Json(nullptr)}, {"pass", pass}};
        } else if (s == "gentle") {
            const auto t = trials_or(cfg, 20);
            double worst_ratio = 0;
            for (std::size_t k = 0; k < t; ++k) {
                Rng rng = Rng::substream(cfg.seed, k);
                const auto inst = random_gentle_instance(2 + rng.uniform_index(3), 0.01 + 0.2 * rng.uniform(), rng);
                const auto g = gentle_measurement_check(inst.states, inst.povm);
                pass = pass && g.holds;
                if (g.bound > 0) worst_ratio = std::max(worst_ratio, g.max_disturbance / g.bound);
            }
            r = {{"trials", t}, {"max_disturbance_over_bound", worst_ratio}, {"pass", pass}};
        } else if (s == "dephasing") {
            const auto e = verify_dephasing_maximizer(make_completely_dephasing(2), trials_or(cfg, 200), cfg.seed);
            r = dephasing_to_json(e);
            pass = e.pass;
        } else if (s == "randomization") {
            Json per = Json::object();
            for (std::size_t d = 2; d <= 5; ++d) {
                const double defect = randomization_identity_defect(d);
                per[std::to_string(d)] = defect;
                pass = pass && defect <= 1e-12;
            }
            r = {{"max_entry_defect", per}, {"pass", pass}};
        } else if (s == "average-state") {
            Json per = Json::array();
            const DensityOperator rho(ComplexMatrix(Eigen::Vector2cd(0.75, 0.25).asDiagonal()));
            for (std::size_t n = 1; n <= 2; ++n) {
                const auto ctx = make_code_context(make_completely_dephasing(2), rho, n);
                const auto a = average_output_state(ctx);
                per.push_back({{"n", n}, {"distance", a.distance}, {"max_cross_block", a.max_cross_block}, {"exact", a.exact}});
                pass = pass && a.pass();
            }
            r = {{"cases", per}, {"pass", pass}};
        }
        results[s] = r;
        all_pass = all_pass && pass;
    }
    report["suites"] = results;
    report["pass"] = all_pass;
    emit(cfg, report);
    return all_pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement-assisted capacity regions of quantum multiple-access channels"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_channel) {
        auto* ch = sub->add_option("--channel", cfg.channel, "builtin spec (phase-flip:d=2,p=0.5,0.5) or file:path.json");
        if (needs_channel) ch->required();
        sub->add_option("--seed", cfg.seed, "PRNG seed (default 0)");
        sub->add_option("--out", cfg.out, "report path (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--trials", cfg.trials, "trial count");
    };
    auto optimizer_flags = [&](CLI::App* sub) {
        sub->add_option("--starts", cfg.opt.starts, "random starts besides the maximally mixed one");
        sub->add_option("--step", cfg.opt.step, "initial ascent step");
        sub->add_option("--tol", cfg.opt.tol, "convergence tolerance");
        sub->add_option("--max-iters", cfg.opt.max_iters, "iteration limit per start");
    };

    auto* region = app.add_subcommand("region", "rate pentagon, corner rates and hull");
    common(region, true);
    optimizer_flags(region);
    region->add_option("--inputs", cfg.inputs, "maximally-mixed or diag:p1,p2/q1,q2");
    region->add_option("--samples", cfg.samples, "sampled input pairs for the union region");
    region->add_option("--n", cfg.n, "block level (regrouped channel power)");

    auto* optimize = app.add_subcommand("optimize", "single-sender capacity or sum-rate bound");
    common(optimize, true);
    optimizer_flags(optimize);
    optimize->add_option("--target", cfg.target, "single, sum or auto")->check(CLI::IsMember({"single", "sum", "auto"}));

    auto* simulate = app.add_subcommand("simulate", "packing-lemma code simulation");
    common(simulate, true);
    simulate->add_option("--inputs", cfg.inputs, "maximally-mixed or diag:p1,p2,...");
    simulate->add_option("--n", cfg.n, "block length");
    simulate->add_option("--rate", cfg.rate, "rate R; codebook size 2^floor(nR)");
    simulate->add_option("--gamma", cfg.gamma, "set codebook size from gamma instead of the rate");
    simulate->add_option("--delta", cfg.delta, "typicality width");
    simulate->add_option("--codebook", cfg.codebook, "blocks or paulis")->check(CLI::IsMember({"blocks", "paulis"}));

    auto* verify = app.add_subcommand("verify", "lemma and identity checks");
    common(verify, false);
    verify->add_option("--suite", cfg.suite, "all, lemmas, ssa, typicality, hayashi-nagaoka, gentle, dephasing, randomization, average-state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }
    const std::string cmdline = command_line(argc, argv);
    try {
        if (cfg.trials < -1) fail(ErrorCode::ParseError, "trials must be non-negative");
        if (region->parsed()) return cmd_region(cfg, cmdline);
        if (optimize->parsed()) return cmd_optimize(cfg, cmdline);
        if (simulate->parsed()) return cmd_simulate(cfg, cmdline);
        if (verify->parsed()) return cmd_verify(cfg, cmdline);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::DimensionCap ? kExitCap : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
