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

#include "qmacea/channels.hpp"
#include "qmacea/entropy.hpp"
#include "qmacea/random.hpp"

using namespace qmacea;

namespace {

ComplexMatrix plus_state() { return ComplexMatrix::Constant(2, 2, 0.5); }

ComplexMatrix outer(std::size_t dim, std::size_t i, std::size_t j) {
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
    return m;
}

}  // namespace

TEST(QuantumChannel, rejects_incomplete_kraus) {
    ASSERT_THROW(QuantumChannel({basis_projector(2, 0)}), Error);
    ASSERT_THROW(QuantumChannel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), Error);
    ASSERT_THROW(QuantumChannel({ComplexMatrix::Identity(4, 4)}, {3, 2}), Error);
}

TEST(apply_channel, examples) {
    Rng rng(1);
    const auto rho = random_density(2, rng);
    ASSERT_LT(max_abs_entry(apply_channel(make_identity_channel(2), rho).matrix() - rho.matrix()), 1e-15);

    const auto out = apply_channel(make_completely_dephasing(2), DensityOperator(plus_state()));
    ASSERT_LT(max_abs_entry(out.matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);

    const auto m = make_collective_phase_flip(2, {0.5, 0.5});
    const auto pp = apply_channel(m, maximally_mixed(4));
    ASSERT_LT(max_abs_entry(pp.matrix() - maximally_mixed(4).matrix()), 1e-15);
    ASSERT_THROW(apply_channel(m, maximally_mixed(2)), Error);
}

TEST(apply_channel, random_channels_give_states) {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        const std::size_t din = 1 + rng.uniform_index(4), dout = 1 + rng.uniform_index(4);
        const std::size_t k = (din + dout - 1) / dout + rng.uniform_index(3);
        const auto ch = random_channel(din, dout, k, rng);
        const auto out = apply_channel(ch, random_density(din, rng));
        ASSERT_EQ(out.dim(), dout);
        ASSERT_GE(min_eigenvalue(out.matrix()), -1e-9);
    }
}

TEST(stinespring_dilation, examples) {
    const auto id = stinespring_dilation(make_identity_channel(2));
    ASSERT_EQ(id.env_dim, 1u);
    ASSERT_LT(max_abs_entry(id.matrix - ComplexMatrix::Identity(2, 2)), 1e-15);

    const auto dz = stinespring_dilation(make_completely_dephasing(2));
    ASSERT_EQ(dz.env_dim, 2u);
    // Σ_x |x⟩|x⟩⟨x|
    ComplexMatrix want = ComplexMatrix::Zero(4, 2);
    want(0, 0) = 1;
    want(3, 1) = 1;
    ASSERT_LT(max_abs_entry(dz.matrix - want), 1e-15);
}

TEST(stinespring_dilation, round_trip) {
    Rng rng(3);
    const auto ch = random_channel(3, 2, 3, rng);
    const auto v = stinespring_dilation(ch);
    ASSERT_LT(max_abs_entry(v.matrix.adjoint() * v.matrix - ComplexMatrix::Identity(3, 3)), 1e-12);
    for (int t = 0; t < 50; ++t) {
        const auto rho = random_density(3, rng);
        const ComplexMatrix full = apply_isometry(v, rho.matrix());
        const ComplexMatrix b = partial_trace(full, {v.dim_b, v.env_dim}, {0});
        ASSERT_LT(max_abs_entry(b - apply_channel(ch, rho).matrix()), 1e-9);
    }
    ASSERT_LT(channel_distance(channel_from_isometry(v), ch), 1e-9);
}

TEST(complementary_channel, examples) {
    const auto dz = complementary_channel(make_completely_dephasing(2));
    const ComplexMatrix r = Eigen::Vector2cd(0.3, 0.7).asDiagonal();
    ASSERT_LT(max_abs_entry(apply_channel(dz, r) - r), 1e-15);

    Rng rng(4);
    const auto idc = complementary_channel(make_identity_channel(2));
    ASSERT_EQ(idc.dim_out(), 1u);
    ASSERT_NEAR(apply_channel(idc, random_density(2, rng).matrix())(0, 0).real(), 1.0, 1e-12);
}

TEST(complementary_channel, phase_flip_environment_overlaps) {
    const std::vector<double> p{0.6, 0.4};
    const auto m = make_collective_phase_flip(2, p);
    const auto mc = complementary_channel(m);
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            // ⟨φ_b|φ_a⟩ = Σ_k p_k e^{iπk((j+l)−(j'+l'))}
            const int s = int(a / 2 + a % 2) - int(b / 2 + b % 2);
            Complex want = 0;
            for (std::size_t k = 0; k < 2; ++k) want += p[k] * std::exp(Complex(0, std::numbers::pi * double(k) * s));
            const ComplexMatrix ea = apply_channel(mc, outer(4, a, a)), eb = apply_channel(mc, outer(4, b, b));
            ASSERT_NEAR((ea * eb).trace().real(), std::norm(want), 1e-12);
            const ComplexMatrix coh = apply_channel(m, outer(4, a, b));
            ASSERT_LT(std::abs(coh(Eigen::Index(a), Eigen::Index(b)) - want), 1e-12);
        }
    }
}

TEST(complementary_channel, spectra_match_for_pure_inputs) {
    Rng rng(5);
    const auto ch = random_channel(2, 3, 2, rng);
    const auto cc = complementary_channel(ch);
    for (int t = 0; t < 20; ++t) {
        const auto psi = random_pure(2, rng).density();
        ASSERT_NEAR(von_neumann_entropy(apply_channel(ch, psi)), von_neumann_entropy(apply_channel(cc, psi)), 1e-9);
    }
}

TEST(make_generalized_pauli, qubit) {
    const auto u = make_generalized_pauli(2);
    ASSERT_EQ(u.size(), 4u);
    ComplexMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    ASSERT_LT(max_abs_entry(u[0] - ComplexMatrix::Identity(2, 2)), 1e-15);
    ASSERT_LT(max_abs_entry(u[1] - x), 1e-15);
    ASSERT_LT(max_abs_entry(u[2] - z), 1e-15);
    ASSERT_LT(max_abs_entry(u[3] - z * x), 1e-15);
}

TEST(make_generalized_pauli, unitary_and_shift_formula) {
    for (std::size_t d = 2; d <= 5; ++d) {
        const auto us = make_generalized_pauli(d);
        ASSERT_EQ(us.size(), d * d);
        for (const auto& u : us) {
            const auto n = static_cast<Eigen::Index>(d);
            ASSERT_LT(max_abs_entry(u * u.adjoint() - ComplexMatrix::Identity(n, n)), 1e-12);
        }
        // X̂(k)|s+k⟩ = |s⟩
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t s = 0; s < d; ++s)
                ASSERT_EQ(shift_operator(d, k)(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>((s + k) % d)), Complex(1));
    }
}

TEST(make_generalized_pauli, randomization_and_transpose_identities) {
    for (std::size_t d = 2; d <= 5; ++d) {
        ASSERT_LE(randomization_identity_defect(d), 1e-12);
        ASSERT_LE(transpose_identity_defect(d), 1e-12);
    }
}

TEST(make_collective_phase_flip, constructors) {
    const auto trivial = make_collective_phase_flip(2, {1, 0});
    ASSERT_EQ(trivial.kraus().size(), 1u);
    ASSERT_LT(channel_distance(trivial, make_identity_channel(4)), 1e-12);

    const auto uni = make_collective_phase_flip(2, {0.5, 0.5});
    ASSERT_EQ(uni.kraus().size(), 2u);
    ASSERT_EQ(uni.input_dims(), (Dims{2, 2}));
    ASSERT_NEAR(uni.kraus()[1].cwiseAbs2().sum(), 0.5 * 4, 1e-12);

    const auto three = make_collective_phase_flip(3, {0.5, 0.25, 0.25});
    ASSERT_EQ(three.kraus().size(), 3u);
    ASSERT_EQ(three.dim_in(), 9u);

    try {
        make_collective_phase_flip(2, {0.6, 0.6});
        FAIL();
    } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::BadDistribution);
    }
}

TEST(make_completely_dephasing, idempotent_and_entropy_increasing) {
    const auto dz = make_completely_dephasing(2);
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        const auto rho = random_density(2, rng);
        const auto once = apply_channel(dz, rho);
        ASSERT_LT(std::abs(once.matrix()(0, 1)), 1e-15);
        ASSERT_LT(max_abs_entry(apply_channel(dz, once).matrix() - once.matrix()), 1e-10);
        ASSERT_GE(von_neumann_entropy(once), von_neumann_entropy(rho) - 1e-12);
    }
    ASSERT_TRUE(is_generalized_dephasing(dz));
    ASSERT_FALSE(is_generalized_dephasing(make_completely_depolarizing(2)));
}

TEST(tensor_power_channel, cases) {
    const auto dz = make_completely_dephasing(2);
    ASSERT_LT(channel_distance(tensor_power_channel(dz, 1), dz), 1e-15);

    Rng rng(7);
    const auto rho = random_density(4, rng);
    const auto out = apply_channel(tensor_power_channel(dz, 2), rho).matrix();
    ASSERT_LT(max_abs_entry(out - ComplexMatrix(rho.matrix().diagonal().asDiagonal())), 1e-15);

    const auto m2 = tensor_power_channel(make_collective_phase_flip(2, {0.7, 0.3}), 2);
    ComplexMatrix sum = ComplexMatrix::Zero(16, 16);
    for (const auto& k : m2.kraus()) sum += k.adjoint() * k;
    ASSERT_LT(max_abs_entry(sum - ComplexMatrix::Identity(16, 16)), 1e-9);

    ASSERT_THROW(tensor_power_channel(make_identity_channel(2), 13), Error);
}

TEST(make_cq_channel, commutes_with_dephasing) {
    const auto cq = make_qubit_cq_channel(0.4 * std::numbers::pi);
    const auto dz = make_completely_dephasing(2);
    ASSERT_LT(channel_distance(compose(cq, dz), cq), 1e-12);
}
