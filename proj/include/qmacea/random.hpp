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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qmacea/qmath.hpp"

namespace qmacea {

// Deterministic sampler. The engine is std::mt19937_64; independent trials
// draw from substreams seeded by (seed, stream index) through std::seed_seq so
// that trial k gives the same numbers whether or not trials 0..k-1 ran.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          0x9e3779b9u};
        Rng rng(0);
        rng.engine_.seed(seq);
        return rng;
    }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = Complex(rng.normal(), rng.normal());
    return g;
}

/// Ginibre-ensemble mixed state G G† / Tr(G G†) with square G (full rank almost surely).
inline DensityOperator random_density(std::size_t dim, Rng& rng, Dims dims = {}) {
    ComplexMatrix g = gaussian_matrix(dim, dim, rng);
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityOperator(std::move(m), dims.empty() ? Dims{dim} : std::move(dims));
}

inline PureState random_pure(std::size_t dim, Rng& rng, Dims dims = {}) {
    ComplexVector v = gaussian_matrix(dim, 1, rng).col(0);
    v.normalize();
    return PureState(std::move(v), dims.empty() ? Dims{dim} : std::move(dims));
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// diagonal phases of R divided out.
inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    ComplexMatrix g = gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dim); ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

/// Random isometry dim_in -> dim_out (dim_out >= dim_in): the first dim_in
/// columns of a Haar unitary.
inline ComplexMatrix random_isometry(std::size_t dim_in, std::size_t dim_out, Rng& rng) {
    return random_unitary(dim_out, rng).leftCols(static_cast<Eigen::Index>(dim_in));
}

inline std::vector<double> random_distribution(std::size_t size, Rng& rng) {
    std::vector<double> p(size);
    double total = 0;
    for (auto& x : p) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (auto& x : p) x /= total;
    return p;
}

}  // namespace qmacea
