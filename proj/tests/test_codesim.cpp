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

#include <cmath>
#include <numbers>
#include <optional>

#include "qmacea/codesim.hpp"

using namespace qmacea;

namespace {

ComplexMatrix diag2(double a, double b) { return ComplexMatrix(Eigen::Vector2cd(a, b).asDiagonal()); }

double binomial(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

// Σ_k (K_k U ⊗ I)|ψ⟩⟨ψ|(K_k U ⊗ I)† built with full Kronecker products.
ComplexMatrix output_by_kron(const QuantumChannel& ch, const ComplexMatrix& u, const ComplexVector& psi, std::size_t dref) {
    const auto r = static_cast<Eigen::Index>(dref);
    ComplexMatrix out = ComplexMatrix::Zero(ch.kraus().front().rows() * r, ch.kraus().front().rows() * r);
    for (const auto& k : ch.kraus()) {
        const ComplexVector v = tensor(ComplexMatrix(k * u), ComplexMatrix::Identity(r, r)) * psi;
        out += v * v.adjoint();
    }
    return out;
}

ComplexMatrix projector_onto(std::size_t dim, std::initializer_list<std::size_t> idx) {
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (auto i : idx) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1;
    return p;
}

std::optional<ErrorCode> code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace

TEST(build_entangled_resource, single_copy_of_mixed_is_phi) {
    const auto psi = build_entangled_resource(maximally_mixed(2), 1);
    ASSERT_LT((psi.amplitudes() - maximally_entangled(2).amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(build_entangled_resource, reduced_state_is_tensor_power) {
    Rng rng(1);
    const auto rho = random_density(2, rng);
    const auto psi = build_entangled_resource(rho, 3);
    const auto a = partial_trace(psi.density(), {0});
    ASSERT_LT(max_abs_entry(a.matrix() - tensor_power(rho.matrix(), 3)), 1e-10);
}

TEST(class_weights, binomial_masses) {
    const auto ctx = make_code_context(make_identity_channel(2), DensityOperator(diag2(0.75, 0.25)), 2);
    const auto p = class_weights(ctx);
    ASSERT_EQ(p.size(), 3u);
    for (int k = 0; k < 3; ++k) ASSERT_NEAR(p[k], binomial(2, k) * std::pow(0.25, k) * std::pow(0.75, 2 - k), 1e-12);
}

TEST(resource_decomposition_overlap, qubit_n3) {
    Rng rng(2);
    for (int t = 0; t < 3; ++t) {
        const auto ctx = make_code_context(make_identity_channel(2), random_density(2, rng), 3);
        ASSERT_GE(resource_decomposition_overlap(ctx), 1 - 1e-10);
    }
}

TEST(build_block_pauli, identity_and_signs) {
    const auto ctx = make_code_context(make_identity_channel(2), maximally_mixed(2), 1);
    ASSERT_LT(max_abs_entry(build_block_pauli(identity_index(ctx), ctx.classes) - ComplexMatrix::Identity(2, 2)), 1e-15);
    for (std::uint8_t b0 = 0; b0 < 2; ++b0)
        for (std::uint8_t b1 = 0; b1 < 2; ++b1) {
            const auto u = build_block_pauli(BlockPauliIndex{{0, 0}, {b0, b1}}, ctx.classes);
            ASSERT_LT(max_abs_entry(u - diag2(b0 ? -1 : 1, b1 ? -1 : 1)), 1e-15);
        }
}

TEST(build_block_pauli, two_dim_class_embedding) {
    const auto ctx = make_code_context(make_identity_channel(2), DensityOperator(diag2(0.75, 0.25)), 2);
    ASSERT_EQ(ctx.classes.size(), 3u);
    const auto& mid = ctx.classes[1];
    ASSERT_EQ(mid.dim(), 2u);
    ASSERT_EQ(mid.type.counts, (std::vector<std::size_t>{1, 1}));
    for (std::size_t g = 0; g < 4; ++g) {
        const auto u = build_block_pauli(BlockPauliIndex{{0, g, 0}, {0, 0, 0}}, ctx.classes);
        const ComplexMatrix p = generalized_pauli(2, g);
        // sequences 01 and 10 (indices 1, 2) carry the embedded Pauli
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                ASSERT_EQ(u(Eigen::Index(mid.members[i]), Eigen::Index(mid.members[j])), p(Eigen::Index(i), Eigen::Index(j)));
        ASSERT_EQ(u(0, 0), Complex(1));
        ASSERT_EQ(u(3, 3), Complex(1));
    }
}

TEST(build_block_pauli, unitary_for_random_indices) {
    Rng rng(3);
    const auto classes = enumerate_type_classes(3, 3);
    for (int t = 0; t < 20; ++t) {
        const auto u = build_block_pauli(random_block_index(classes, rng), classes);
        ASSERT_LT(max_abs_entry(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())), 1e-12);
    }
}

TEST(build_block_pauli, index_errors) {
    const auto classes = enumerate_type_classes(2, 2);
    ASSERT_EQ(code_of([&] { build_block_pauli(BlockPauliIndex{{0, 0}, {0, 0}}, classes); }), ErrorCode::IndexError);
    ASSERT_EQ(code_of([&] { build_block_pauli(BlockPauliIndex{{0, 4, 0}, {0, 0, 0}}, classes); }), ErrorCode::IndexError);
    ASSERT_EQ(code_of([&] { build_block_pauli(BlockPauliIndex{{1, 0, 0}, {0, 0, 0}}, classes); }), ErrorCode::IndexError);
    ASSERT_EQ(code_of([&] { build_block_pauli(BlockPauliIndex{{0, 0, 0}, {0, 2, 0}}, classes); }), ErrorCode::IndexError);
}

TEST(encoded_output_state, identity_index_gives_theta) {
    Rng rng(4);
    const auto ch = random_channel(2, 2, 2, rng);
    const auto ctx = make_code_context(ch, random_density(2, rng), 2);
    const auto sigma = encoded_output_state(ctx, build_block_pauli(identity_index(ctx), ctx.classes));
    ASSERT_LT(trace_distance(sigma, ctx.theta_n), 1e-12);
    const ComplexMatrix direct = output_by_kron(ctx.channel_n, ComplexMatrix::Identity(4, 4), ctx.psi, ctx.dim_in);
    ASSERT_LT(trace_distance(sigma, direct), 1e-12);
}

TEST(encoded_output_state, dephasing_with_bit_flip) {
    const auto ctx = make_code_context(make_completely_dephasing(2), maximally_mixed(2), 1);
    const ComplexMatrix x = full_pauli(ctx, 1);
    const auto sigma = encoded_output_state(ctx, x);
    // classical copy with the output bit flipped: ½(|10⟩⟨10| + |01⟩⟨01|)
    ASSERT_LT(max_abs_entry(sigma - ComplexMatrix(Eigen::Vector4cd(0, 0.5, 0.5, 0).asDiagonal())), 1e-12);
    ASSERT_LT(max_abs_entry(sigma - output_by_kron(ctx.channel, encoding_unitary(ctx, x), ctx.psi, 2)), 1e-12);
}

TEST(encoded_output_state, transpose_form_n2) {
    Rng rng(5);
    const auto ch = random_channel(2, 2, 3, rng);
    const auto ctx = make_code_context(ch, random_density(2, rng), 2);
    for (int t = 0; t < 10; ++t) {
        const auto b = build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes);
        const auto direct = encoded_output_state(ctx, b);
        ASSERT_LE(trace_distance(direct, encoded_output_state_transpose(ctx, b)), tol::kTransposeForm);
        ASSERT_LE(trace_distance(direct, output_by_kron(ctx.channel_n, encoding_unitary(ctx, b), ctx.psi, 4)), 1e-10);
    }
    ASSERT_LE(transpose_form_defect(ctx, 10, 9), tol::kTransposeForm);
}

TEST(make_code_context, caps) {
    ASSERT_EQ(code_of([] { make_code_context(make_identity_channel(2), maximally_mixed(2), 7); }), ErrorCode::DimensionCap);
    ASSERT_NO_THROW(make_code_context(make_identity_channel(2), maximally_mixed(2), 3));
    ASSERT_EQ(code_of([] { build_entangled_resource(maximally_mixed(2), 7); }), ErrorCode::DimensionCap);
}

TEST(average_output_state, identity_channel_n1) {
    const DensityOperator rho(diag2(0.75, 0.25));
    const auto ctx = make_code_context(make_identity_channel(2), rho, 1);
    const auto rep = average_output_state(ctx);
    ASSERT_TRUE(rep.exact);
    ASSERT_EQ(rep.elements, 4u);
    // Σ_x λ_x |x⟩⟨x| ⊗ |x⟩⟨x|
    const ComplexMatrix want = Eigen::Vector4cd(0.75, 0, 0, 0.25).asDiagonal();
    ASSERT_LT(max_abs_entry(rep.average - want), 1e-12);
    ASSERT_TRUE(rep.pass());
}

TEST(average_output_state, random_channels_n1_n2) {
    Rng rng(6);
    for (std::size_t n = 1; n <= 2; ++n) {
        const auto ctx = make_code_context(random_channel(2, 2, 2, rng), random_density(2, rng), n);
        const auto rep = average_output_state(ctx);
        ASSERT_TRUE(rep.exact);
        ASSERT_LE(rep.distance, 1e-8);
        ASSERT_LE(rep.max_cross_block, 1e-10);
        // independent average: explicit loop over every (g, b) at n = 1
        if (n == 1) {
            ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1)
                    sum += output_by_kron(ctx.channel, encoding_unitary(ctx, diag2(b0 ? -1 : 1, b1 ? -1 : 1)), ctx.psi, 2);
            ASSERT_LT(max_abs_entry(sum / 4.0 - rep.average), 1e-12);
        }
    }
}

TEST(build_srm_decoder, single_projector) {
    const ComplexMatrix p = projector_onto(4, {0, 2});
    const auto povm = build_srm_decoder(ComplexMatrix::Identity(4, 4), {p});
    ASSERT_EQ(povm.elements.size(), 1u);
    ASSERT_LT(max_abs_entry(povm.elements[0] - p), 1e-10);
    ASSERT_TRUE(povm.valid());
}

TEST(build_srm_decoder, orthogonal_supports) {
    Rng rng(7);
    // rank-deficient states on disjoint coordinate blocks
    ComplexMatrix a = ComplexMatrix::Zero(6, 6), b = ComplexMatrix::Zero(6, 6);
    a.block(0, 0, 2, 2) = random_density(2, rng).matrix();
    b.block(3, 3, 3, 3) = random_density(3, rng).matrix();
    const auto povm = build_srm_decoder(ComplexMatrix::Identity(6, 6), {a, b});
    ASSERT_LT(max_abs_entry(povm.elements[0] - projector_onto(6, {0, 1})), 1e-8);
    ASSERT_LT(max_abs_entry(povm.elements[1] - projector_onto(6, {3, 4, 5})), 1e-8);
}

TEST(build_srm_decoder, random_instances_are_povms) {
    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        const std::size_t dim = 2 + rng.uniform_index(6);
        const ComplexMatrix u = random_unitary(dim, rng);
        const std::size_t rank = 1 + rng.uniform_index(dim);
        const ComplexMatrix pi = u.leftCols(Eigen::Index(rank)) * u.leftCols(Eigen::Index(rank)).adjoint();
        std::vector<ComplexMatrix> ops;
        for (std::size_t k = 0; k < 1 + rng.uniform_index(5); ++k) ops.push_back(random_density(dim, rng).matrix());
        const auto povm = build_srm_decoder(pi, ops);
        ASSERT_GE(povm.min_eigenvalue_over_elements(), -1e-9);
        ASSERT_LE(povm.excess(), 1e-8);
    }
}

TEST(build_srm_decoder, degenerate) {
    ASSERT_EQ(code_of([] { build_srm_decoder(ComplexMatrix::Identity(2, 2), {ComplexMatrix::Zero(2, 2)}); }),
              ErrorCode::DegenerateDecoder);
    ASSERT_EQ(code_of([] { build_srm_decoder(projector_onto(2, {0}), {projector_onto(2, {1})}); }),
              ErrorCode::DegenerateDecoder);
    ASSERT_EQ(code_of([] { build_srm_decoder(ComplexMatrix::Identity(2, 2), {}); }), ErrorCode::DegenerateDecoder);
}

TEST(hayashi_nagaoka_check, examples) {
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3), zero = ComplexMatrix::Zero(3, 3);
    ASSERT_NEAR(hayashi_nagaoka_check(id, zero).margin, 0, 1e-12);
    // S = ½I, T = 0: 2·½ − (1 − 1) = 1
    const auto half = hayashi_nagaoka_check(0.5 * id, zero);
    ASSERT_NEAR(half.margin, 1, 1e-12);
    ASSERT_TRUE(half.holds);
}

TEST(hayashi_nagaoka_check, random_pairs) {
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const auto [s, tt] = random_hn_operands(1 + rng.uniform_index(8), rng);
        const auto r = hayashi_nagaoka_check(s, tt);
        ASSERT_GE(r.margin, -1e-8);
        ASSERT_TRUE(r.holds);
    }
}

TEST(hayashi_nagaoka_check, bad_operands) {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ASSERT_EQ(code_of([&] { hayashi_nagaoka_check(2.0 * id, id); }), ErrorCode::BadOperands);
    ASSERT_EQ(code_of([&] { hayashi_nagaoka_check(id, -id); }), ErrorCode::BadOperands);
    ASSERT_EQ(code_of([&] { hayashi_nagaoka_check(id, ComplexMatrix::Identity(3, 3)); }), ErrorCode::BadOperands);
    ComplexMatrix nh = ComplexMatrix::Zero(2, 2);
    nh(0, 1) = 0.5;
    ASSERT_EQ(code_of([&] { hayashi_nagaoka_check(nh, id); }), ErrorCode::BadOperands);
}

TEST(gentle_measurement_check, projective_in_support) {
    Rng rng(10);
    auto inst = random_gentle_instance(3, 0.0, rng);
    const auto rep = gentle_measurement_check(inst.states, inst.povm);
    ASSERT_NEAR(rep.epsilon, 0, 1e-12);
    ASSERT_LE(rep.max_disturbance, 1e-6);
    ASSERT_TRUE(rep.holds);
}

TEST(gentle_measurement_check, small_epsilon_instance) {
    Rng rng(11);
    const auto inst = random_gentle_instance(2, 0.01, rng);
    const auto rep = gentle_measurement_check(inst.states, inst.povm);
    ASSERT_GT(rep.epsilon, 0);
    ASSERT_LE(rep.epsilon, 0.01);
    ASSERT_LE(rep.max_disturbance, rep.bound);
    ASSERT_LE(rep.max_disturbance, std::sqrt(0.08));
    ASSERT_TRUE(rep.holds);
}

TEST(gentle_measurement_check, random_instances) {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const auto inst = random_gentle_instance(1 + rng.uniform_index(3), 0.3 * rng.uniform(), rng);
        ASSERT_TRUE(gentle_measurement_check(inst.states, inst.povm).holds);
    }
}

TEST(gentle_measurement_check, pure_state_distance_identity) {
    Rng rng(13);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_pure(4, rng).amplitudes(), b = random_pure(4, rng).amplitudes();
        const double want = 2 * std::sqrt(1 - std::norm(a.dot(b)));
        ASSERT_NEAR(pure_state_distance(a, b), want, 1e-9);
        const ComplexMatrix diff = a * a.adjoint() - b * b.adjoint();
        ASSERT_NEAR(eig_hermitian(diff).values.cwiseAbs().sum(), want, 1e-9);
    }
}

TEST(simulate_packing, superdense_n1) {
    PackingConfig cfg;
    cfg.n = 1;
    cfg.rate = 2;
    cfg.delta = 0.5;
    cfg.trials = 1;
    cfg.kind = CodebookKind::Paulis;
    const auto rep = simulate_packing(make_identity_channel(2), maximally_mixed(2), cfg);
    ASSERT_EQ(rep.codewords, 4u);
    ASSERT_GE(rep.min_success, 1 - 1e-9);
    ASSERT_TRUE(rep.povm_valid);
}

TEST(simulate_packing, superdense_n2_two_dim_class) {
    // four codewords from the Paulis on span{|01⟩, |10⟩}, sign fixed elsewhere
    const auto ctx = make_code_context(make_identity_channel(2), maximally_mixed(2), 2);
    std::size_t mid = 0;
    for (std::size_t a = 0; a < ctx.classes.size(); ++a)
        if (ctx.classes[a].dim() == 2) mid = a;
    std::vector<ComplexMatrix> sigmas;
    for (std::size_t g = 0; g < 4; ++g) {
        auto idx = identity_index(ctx);
        idx.g[mid] = g;
        sigmas.push_back(encoded_output_state(ctx, build_block_pauli(idx, ctx.classes)));
    }
    const auto povm = build_srm_decoder(ComplexMatrix::Identity(16, 16), sigmas);
    ASSERT_TRUE(povm.valid());
    // the shared components outside the class keep these states from being orthogonal,
    // so only the part inside the class is perfectly distinguishable
    double total = 0;
    for (std::size_t k = 0; k < 4; ++k) total += (sigmas[k] * povm.elements[k]).trace().real();
    ASSERT_GE(total / 4, 0.5 - 1e-9);
}

TEST(simulate_packing, single_codeword_gentle_bound) {
    Rng rng(14);
    const auto ch = make_qubit_cq_channel(0.4 * std::numbers::pi);
    const DensityOperator rho(diag2(0.7, 0.3));
    const auto ctx = make_code_context(ch, rho, 3);
    const auto proj = packing_projectors(ctx, 0.2);
    for (int t = 0; t < 5; ++t) {
        const auto b = build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes);
        const ComplexMatrix sigma = encoded_output_state(ctx, b);
        const ComplexMatrix ps = detail::conjugate_trailing(proj.pi_theta, b.transpose());
        const auto povm = build_srm_decoder(proj.pi, {ps});
        const double eps = 1 - (sigma * proj.pi).trace().real();
        const double success = (sigma * povm.elements[0]).trace().real();
        ASSERT_GE(success, (sigma * ps).trace().real() - std::sqrt(8 * eps) - 1e-9);
    }
}

TEST(simulate_packing, report_consistency_and_determinism) {
    PackingConfig cfg;
    cfg.n = 2;
    cfg.rate = 0.5;
    cfg.trials = 4;
    cfg.seed = 3;
    cfg.delta = 0.3;
    const auto ch = make_qubit_cq_channel(0.4 * std::numbers::pi);
    const auto a = simulate_packing(ch, DensityOperator(diag2(0.6, 0.4)), cfg);
    const auto b = simulate_packing(ch, DensityOperator(diag2(0.6, 0.4)), cfg);
    ASSERT_EQ(a.codewords, 2u);
    ASSERT_EQ(a.codebooks.size(), 4u);
    ASSERT_NEAR(a.bound, packing_bound(a.eps_measured, a.gamma), 1e-15);
    ASSERT_EQ(a.eps_measured, std::max(a.eps_pi, a.eps_pi_s));
    ASSERT_TRUE(a.povm_valid);
    for (std::size_t t = 0; t < 4; ++t) ASSERT_EQ(a.codebooks[t].success, b.codebooks[t].success);
    ASSERT_LE(a.post_expurgation_max_error, 1 - a.codebooks[a.best_trial].min_success + 1e-15);
    // trace of Π_s is the rank of Π_θ
    ASSERT_NEAR(a.trace_pi_s, std::round(a.trace_pi_s), 1e-9);
}

TEST(simulate_packing, gamma_sets_codebook_size) {
    PackingConfig cfg;
    cfg.gamma = 1e-12;
    ASSERT_EQ(codebook_size(cfg, 4, 0.25), 1u);
    cfg.gamma = 0.5;
    ASSERT_EQ(codebook_size(cfg, 2, 0.05), 5u);
    cfg.gamma = -1;
    cfg.n = 4;
    cfg.rate = 0.75;
    ASSERT_EQ(codebook_size(cfg, 1, 1), 8u);
    cfg.n = 30;
    cfg.rate = 1;
    ASSERT_EQ(code_of([&] { codebook_size(cfg, 1, 1); }), ErrorCode::DimensionCap);
}

TEST(simulate_packing, caps_and_bad_config) {
    PackingConfig cfg;
    cfg.n = 7;
    ASSERT_EQ(code_of([&] { simulate_packing(make_identity_channel(2), maximally_mixed(2), cfg); }), ErrorCode::DimensionCap);
    cfg.n = 1;
    cfg.trials = 0;
    ASSERT_EQ(code_of([&] { simulate_packing(make_identity_channel(2), maximally_mixed(2), cfg); }), ErrorCode::BadOperands);
    cfg.trials = 1;
    cfg.kind = CodebookKind::Paulis;
    ASSERT_EQ(code_of([&] { simulate_packing(make_identity_channel(2), DensityOperator(diag2(0.7, 0.3)), cfg); }),
              ErrorCode::BadOperands);
}

TEST(code_conditions, encoding_invariance) {
    Rng rng(15);
    const auto ctx = make_code_context(random_channel(2, 2, 2, rng), random_density(2, rng), 3);
    ASSERT_LE(encoding_invariance_defect(ctx, 20, 1), 1e-9);
}

TEST(code_conditions, dephasing_commutation) {
    const auto ctx = make_code_context(make_qubit_cq_channel(0.3 * std::numbers::pi), DensityOperator(diag2(0.8, 0.2)), 2);
    ASSERT_LE(dephasing_commutation_defect(ctx, 20, 2), 1e-9);
}

TEST(code_conditions, cancellation) {
    for (std::size_t n = 1; n <= 2; ++n) {
        Rng rng(16 + n);
        const auto ctx = make_code_context(random_channel(2, 2, 2, rng), DensityOperator(diag2(0.7, 0.3)), n);
        const auto proj = packing_projectors(ctx, 0.3);
        const auto words = draw_codebook(ctx, CodebookKind::Blocks, 2, rng);
        std::vector<ComplexMatrix> projectors;
        for (const auto& b : words) projectors.push_back(detail::conjugate_trailing(proj.pi_theta, b.transpose()));
        const auto povm = build_srm_decoder(proj.pi, projectors);
        const auto rep = cancellation_check(ctx, words, povm);
        ASSERT_EQ(rep.distance.size(), 2u);
        ASSERT_TRUE(rep.holds);
    }
    // a perfect decoder undoes the encoding exactly
    const auto ctx = make_code_context(make_identity_channel(2), maximally_mixed(2), 1);
    std::vector<ComplexMatrix> words, sigmas;
    for (std::size_t k = 0; k < 4; ++k) {
        words.push_back(full_pauli(ctx, k));
        sigmas.push_back(encoded_output_state(ctx, words.back()));
    }
    const auto rep = cancellation_check(ctx, words, build_srm_decoder(ComplexMatrix::Identity(4, 4), sigmas));
    for (double d : rep.distance) ASSERT_LE(d, 1e-6);
}

TEST(successive_decode_rates, phase_flip_corners) {
    const auto pi = maximally_mixed(2);
    const auto uni = successive_decode_rates(make_collective_phase_flip(2, {0.5, 0.5}), pi, pi);
    ASSERT_NEAR(uni.rates[0], 1, 1e-9);
    ASSERT_NEAR(uni.rates[1], 2, 1e-9);
    ASSERT_NEAR(uni.n1_hat_rate, 2, 1e-9);
    ASSERT_TRUE(uni.consistent);

    const auto clean = successive_decode_rates(make_collective_phase_flip(2, {1, 0}), pi, pi);
    ASSERT_NEAR(clean.rates[0], 2, 1e-9);
    ASSERT_NEAR(clean.rates[1], 2, 1e-9);
}

TEST(successive_decode_rates, chain_rule_on_random_channels) {
    Rng rng(20);
    for (int t = 0; t < 20; ++t) {
        const auto m = random_channel(4, 2, 2 + rng.uniform_index(3), rng, {2, 2});
        const auto rep = successive_decode_rates(m, random_density(2, rng), random_density(2, rng));
        ASSERT_LE(rep.chain_rule_error, 1e-9);
        ASSERT_LE(rep.second_rate_error, 1e-9);
        ASSERT_TRUE(rep.consistent);
        ASSERT_EQ(rep.n1.dim_in(), 2u);
        ASSERT_EQ(rep.n2.dim_in(), 2u);
    }
}

TEST(successive_decode_rates, dimension_mismatch) {
    ASSERT_EQ(code_of([] { successive_decode_rates(make_collective_phase_flip(2, {0.5, 0.5}), maximally_mixed(3), maximally_mixed(2)); }),
              ErrorCode::DimensionMismatch);
}
