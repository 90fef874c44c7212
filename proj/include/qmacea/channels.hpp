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

// CPTP maps in Kraus form, their Stinespring dilations and complementary
// channels, plus constructors for the channels the capacity code works with.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qmacea/qmath.hpp"
#include "qmacea/random.hpp"

namespace qmacea {

namespace tol {
inline constexpr double kCompleteness = 1e-9;
inline constexpr double kIsometry = 1e-9;
inline constexpr double kDistribution = 1e-12;
}  // namespace tol

/// Kraus list K_k (dim_out × dim_in) with Σ K†K = I. `input_dims` declares
/// the input factorization (two entries for a two-sender channel);
/// `output_dims` likewise for the output.
class QuantumChannel {
public:
    QuantumChannel(std::vector<ComplexMatrix> kraus, Dims input_dims = {}, Dims output_dims = {})
        : kraus_(std::move(kraus)), input_dims_(std::move(input_dims)), output_dims_(std::move(output_dims)) {
        if (kraus_.empty()) fail(ErrorCode::InvalidState, "channel needs at least one Kraus operator");
        const auto rows = kraus_.front().rows();
        const auto cols = kraus_.front().cols();
        ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
        for (const auto& k : kraus_) {
            if (k.rows() != rows || k.cols() != cols)
                fail(ErrorCode::DimensionMismatch, "Kraus operators differ in shape");
            if (!all_finite(k)) fail(ErrorCode::InvalidState, "non-finite Kraus entry");
            sum += k.adjoint() * k;
        }
        const double defect = max_abs_entry(sum - ComplexMatrix::Identity(cols, cols));
        if (defect > tol::kCompleteness)
            fail(ErrorCode::InvalidState, "Kraus completeness violated by " + std::to_string(defect));
        if (input_dims_.empty()) input_dims_ = {static_cast<std::size_t>(cols)};
        if (output_dims_.empty()) output_dims_ = {static_cast<std::size_t>(rows)};
        if (product(input_dims_) != static_cast<std::size_t>(cols))
            fail(ErrorCode::FactorError, "input dims do not multiply to dim_in");
        if (product(output_dims_) != static_cast<std::size_t>(rows))
            fail(ErrorCode::FactorError, "output dims do not multiply to dim_out");
    }

    std::size_t dim_in() const { return static_cast<std::size_t>(kraus_.front().cols()); }
    std::size_t dim_out() const { return static_cast<std::size_t>(kraus_.front().rows()); }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
    const Dims& input_dims() const { return input_dims_; }
    const Dims& output_dims() const { return output_dims_; }

private:
    std::vector<ComplexMatrix> kraus_;
    Dims input_dims_;
    Dims output_dims_;
};

/// V : A → B ⊗ E with V†V = I. Output index is b * env_dim + e.
struct Isometry {
    ComplexMatrix matrix;
    std::size_t dim_in = 0;
    std::size_t dim_b = 0;
    std::size_t env_dim = 0;

    std::size_t dim_out() const { return dim_b * env_dim; }
};

inline ComplexMatrix apply_channel(const QuantumChannel& ch, const ComplexMatrix& rho) {
    if (static_cast<std::size_t>(rho.rows()) != ch.dim_in())
        fail(ErrorCode::DimensionMismatch, "state dim " + std::to_string(rho.rows()) + " vs channel input " +
                                               std::to_string(ch.dim_in()));
    const auto d = static_cast<Eigen::Index>(ch.dim_out());
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
    return out;
}

inline DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho) {
    return DensityOperator(apply_channel(ch, rho.matrix()), ch.output_dims());
}

/// Applies `ch` to factor `index` of a multipartite operator; the factor's
/// dimension is replaced by ch.dim_out() in `dims` (updated in place).
inline ComplexMatrix apply_channel_to_factor(const QuantumChannel& ch, const ComplexMatrix& m, Dims& dims,
                                             std::size_t index) {
    if (index >= dims.size()) fail(ErrorCode::FactorError, "factor index out of range");
    if (dims[index] != ch.dim_in()) fail(ErrorCode::DimensionMismatch, "factor dimension differs from channel input");
    if (product(dims) != static_cast<std::size_t>(m.rows())) fail(ErrorCode::FactorError, "dims do not match operator");
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < index; ++k) left *= dims[k];
    for (std::size_t k = index + 1; k < dims.size(); ++k) right *= dims[k];
    const auto il = ComplexMatrix::Identity(static_cast<Eigen::Index>(left), static_cast<Eigen::Index>(left));
    const auto ir = ComplexMatrix::Identity(static_cast<Eigen::Index>(right), static_cast<Eigen::Index>(right));
    const auto out_dim = static_cast<Eigen::Index>(left * ch.dim_out() * right);
    check_matrix_cap(static_cast<std::size_t>(out_dim), static_cast<std::size_t>(out_dim));
    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (const auto& k : ch.kraus()) {
        ComplexMatrix big = tensor(tensor(ComplexMatrix(il), k), ComplexMatrix(ir));
        out.noalias() += big * m * big.adjoint();
    }
    dims[index] = ch.dim_out();
    return out;
}

inline ComplexMatrix apply_isometry(const Isometry& v, const ComplexMatrix& rho) {
    return v.matrix * rho * v.matrix.adjoint();
}

/// V = Σ_k K_k ⊗ |k⟩^E; env_dim equals the number of Kraus operators.
inline Isometry stinespring_dilation(const QuantumChannel& ch) {
    const std::size_t env = ch.kraus().size();
    const std::size_t dout = ch.dim_out();
    ComplexMatrix v(static_cast<Eigen::Index>(dout * env), static_cast<Eigen::Index>(ch.dim_in()));
    for (std::size_t k = 0; k < env; ++k)
        for (std::size_t b = 0; b < dout; ++b)
            v.row(static_cast<Eigen::Index>(b * env + k)) = ch.kraus()[k].row(static_cast<Eigen::Index>(b));
    return Isometry{std::move(v), ch.dim_in(), dout, env};
}

/// Kraus operators of a channel whose dilation is `v` (inverse of stinespring_dilation).
inline QuantumChannel channel_from_isometry(const Isometry& v) {
    const auto defect = max_abs_entry(v.matrix.adjoint() * v.matrix -
                                      ComplexMatrix::Identity(v.matrix.cols(), v.matrix.cols()));
    if (defect > tol::kIsometry) fail(ErrorCode::InvalidState, "matrix is not an isometry");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < v.env_dim; ++k) {
        ComplexMatrix op(static_cast<Eigen::Index>(v.dim_b), static_cast<Eigen::Index>(v.dim_in));
        for (std::size_t b = 0; b < v.dim_b; ++b) op.row(static_cast<Eigen::Index>(b)) = v.matrix.row(static_cast<Eigen::Index>(b * v.env_dim + k));
        kraus.push_back(std::move(op));
    }
    return QuantumChannel(std::move(kraus));
}

/// N^c(ρ) = Tr_B V ρ V†. Its Kraus operators are F_b = (⟨b| ⊗ I_E) V, so the
/// environment basis follows the Kraus ordering of `ch`.
inline QuantumChannel complementary_channel(const QuantumChannel& ch) {
    const std::size_t env = ch.kraus().size();
    std::vector<ComplexMatrix> kraus;
    for (std::size_t b = 0; b < ch.dim_out(); ++b) {
        ComplexMatrix f(static_cast<Eigen::Index>(env), static_cast<Eigen::Index>(ch.dim_in()));
        for (std::size_t k = 0; k < env; ++k) f.row(static_cast<Eigen::Index>(k)) = ch.kraus()[k].row(static_cast<Eigen::Index>(b));
        kraus.push_back(std::move(f));
    }
    return QuantumChannel(std::move(kraus), ch.input_dims());
}

/// X̂_d(k) = Σ_s |s⟩⟨s+k|
inline ComplexMatrix shift_operator(std::size_t d, std::size_t k) {
    ComplexMatrix x = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < d; ++s) x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>((s + k) % d)) = 1.0;
    return x;
}

/// Ẑ_d(l) = Σ_s e^{i2πsl/d} |s⟩⟨s|
inline ComplexMatrix clock_operator(std::size_t d, std::size_t l) {
    ComplexMatrix z = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < d; ++s) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((s * l) % d) / static_cast<double>(d);
        z(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = std::polar(1.0, phase);
    }
    return z;
}

/// U_{l·d+k} = Ẑ_d(l) X̂_d(k), k, l ∈ [d]. d = 1 yields {[1]}, which the block
/// encodings use for one-dimensional type classes.
inline ComplexMatrix generalized_pauli(std::size_t d, std::size_t index) {
    if (index >= d * d) fail(ErrorCode::IndexError, "Pauli index out of range");
    return clock_operator(d, index / d) * shift_operator(d, index % d);
}

inline std::vector<ComplexMatrix> make_generalized_pauli(std::size_t d) {
    if (d < 2) fail(ErrorCode::DimensionMismatch, "generalized Pauli set needs d >= 2");
    std::vector<ComplexMatrix> out;
    out.reserve(d * d);
    for (std::size_t m = 0; m < d * d; ++m) out.push_back(generalized_pauli(d, m));
    return out;
}

inline void check_distribution(const std::vector<double>& p) {
    if (p.empty()) fail(ErrorCode::BadDistribution, "empty probability vector");
    double total = 0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::BadDistribution, "negative or non-finite probability");
        total += x;
    }
    if (std::abs(total - 1.0) > tol::kDistribution)
        fail(ErrorCode::BadDistribution, "probabilities sum to " + std::to_string(total));
}

/// M_p(ρ) = Σ_k p_k (Ẑ(k)⊗Ẑ(k)) ρ (Ẑ(k)⊗Ẑ(k))†, two senders of dimension d.
/// Zero-weight terms are omitted from the Kraus list.
inline QuantumChannel make_collective_phase_flip(std::size_t d, const std::vector<double>& p) {
    if (d < 2) fail(ErrorCode::DimensionMismatch, "phase-flip channel needs d >= 2");
    if (p.size() != d) fail(ErrorCode::BadDistribution, "p must have length d");
    check_distribution(p);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < d; ++k) {
        if (p[k] == 0.0) continue;
        const ComplexMatrix z = clock_operator(d, k);
        kraus.push_back(std::sqrt(p[k]) * tensor(z, z));
    }
    return QuantumChannel(std::move(kraus), {d, d}, {d, d});
}

inline QuantumChannel make_completely_dephasing(std::size_t d) {
    if (d < 2) fail(ErrorCode::DimensionMismatch, "dephasing channel needs d >= 2");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t x = 0; x < d; ++x) kraus.push_back(basis_projector(d, x));
    return QuantumChannel(std::move(kraus));
}

inline QuantumChannel make_identity_channel(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return QuantumChannel({ComplexMatrix::Identity(n, n)});
}

/// ρ ↦ I/d, Kraus {U_m / d} over the d² generalized Paulis.
inline QuantumChannel make_completely_depolarizing(std::size_t d) {
    std::vector<ComplexMatrix> kraus;
    for (auto& u : make_generalized_pauli(d)) kraus.push_back(u / static_cast<double>(d));
    return QuantumChannel(std::move(kraus));
}

/// Classical-quantum channel ρ ↦ Σ_x ⟨x|ρ|x⟩ ψ_x with pure output states ψ_x.
/// Kraus {|ψ_x⟩⟨x|}, hence N = N ∘ Δ.
inline QuantumChannel make_cq_channel(const std::vector<ComplexVector>& outputs) {
    if (outputs.empty()) fail(ErrorCode::DimensionMismatch, "cq channel needs output states");
    const std::size_t din = outputs.size();
    std::vector<ComplexMatrix> kraus;
    for (std::size_t x = 0; x < din; ++x) {
        ComplexVector psi = outputs[x].normalized();
        kraus.push_back(psi * ket(din, x).adjoint());
    }
    return QuantumChannel(std::move(kraus));
}

/// Qubit cq channel |0⟩ ↦ |0⟩, |1⟩ ↦ cos θ|0⟩ + sin θ|1⟩ (θ = π/2 is a noiseless
/// classical bit).
inline QuantumChannel make_qubit_cq_channel(double angle) {
    ComplexVector psi0(2), psi1(2);
    psi0 << 1.0, 0.0;
    psi1 << std::cos(angle), std::sin(angle);
    return make_cq_channel({psi0, psi1});
}

/// outer ∘ inner
inline QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
    if (outer.dim_in() != inner.dim_out()) fail(ErrorCode::DimensionMismatch, "composition dimension mismatch");
    std::vector<ComplexMatrix> kraus;
    for (const auto& a : outer.kraus())
        for (const auto& b : inner.kraus()) kraus.push_back(a * b);
    return QuantumChannel(std::move(kraus), inner.input_dims(), outer.output_dims());
}

inline QuantumChannel tensor_channels(const QuantumChannel& a, const QuantumChannel& b) {
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(a.kraus().size() * b.kraus().size());
    for (const auto& ka : a.kraus())
        for (const auto& kb : b.kraus()) kraus.push_back(tensor(ka, kb));
    Dims din = a.input_dims(), dout = a.output_dims();
    din.insert(din.end(), b.input_dims().begin(), b.input_dims().end());
    dout.insert(dout.end(), b.output_dims().begin(), b.output_dims().end());
    return QuantumChannel(std::move(kraus), std::move(din), std::move(dout));
}

/// N^{⊗n}: all n-fold Kronecker products of the Kraus list. Factor dims are
/// one entry per copy (the per-copy factorization is flattened).
inline QuantumChannel tensor_power_channel(const QuantumChannel& ch, std::size_t n) {
    if (n == 0) fail(ErrorCode::DimensionMismatch, "tensor power needs n >= 1");
    std::size_t din = 1, dout = 1;
    for (std::size_t i = 0; i < n; ++i) {
        din *= ch.dim_in();
        dout *= ch.dim_out();
        check_matrix_cap(dout, din);
    }
    if (n == 1) return ch;
    std::vector<ComplexMatrix> kraus{ComplexMatrix::Identity(1, 1)};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<ComplexMatrix> next;
        next.reserve(kraus.size() * ch.kraus().size());
        for (const auto& k : kraus)
            for (const auto& f : ch.kraus()) next.push_back(tensor(k, f));
        kraus = std::move(next);
    }
    return QuantumChannel(std::move(kraus), Dims(n, ch.dim_in()), Dims(n, ch.dim_out()));
}

/// Choi operator (I ⊗ N)(Φ) on R ⊗ B.
inline ComplexMatrix choi_matrix(const QuantumChannel& ch) {
    const std::size_t d = ch.dim_in();
    const ComplexVector phi = maximally_entangled(d).amplitudes();
    Dims dims{d, d};
    return apply_channel_to_factor(ch, phi * phi.adjoint(), dims, 1);
}

inline double channel_distance(const QuantumChannel& a, const QuantumChannel& b) {
    if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
        fail(ErrorCode::DimensionMismatch, "channels differ in shape");
    return trace_distance(choi_matrix(a), choi_matrix(b));
}

/// Random channel via a Haar isometry dim_in → dim_out · kraus_count.
inline QuantumChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t kraus_count, Rng& rng,
                                     Dims input_dims = {}) {
    if (dim_out * kraus_count < dim_in) fail(ErrorCode::DimensionMismatch, "isometry needs dim_out*kraus >= dim_in");
    Isometry v{random_isometry(dim_in, dim_out * kraus_count, rng), dim_in, dim_out, kraus_count};
    auto ch = channel_from_isometry(v);
    return QuantumChannel(ch.kraus(), std::move(input_dims));
}

/// True when N(|i⟩⟨i|) = |i⟩⟨i| for every basis state (within 1e-9).
inline bool is_generalized_dephasing(const QuantumChannel& ch, double tolerance = 1e-9) {
    if (ch.dim_in() != ch.dim_out()) return false;
    for (std::size_t i = 0; i < ch.dim_in(); ++i) {
        const ComplexMatrix p = basis_projector(ch.dim_in(), i);
        if (max_abs_entry(apply_channel(ch, p) - p) > tolerance) return false;
    }
    return true;
}

/// max-entry distance between (1/d²) Σ_m (U_m ⊗ I)Φ(U_m ⊗ I)† and π ⊗ π.
inline double randomization_identity_defect(std::size_t d) {
    const ComplexVector phi = maximally_entangled(d).amplitudes();
    const ComplexMatrix proj = phi * phi.adjoint();
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix avg = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& u : make_generalized_pauli(d)) {
        const ComplexMatrix big = tensor(u, ComplexMatrix::Identity(n, n));
        avg += big * proj * big.adjoint();
    }
    avg /= static_cast<double>(d * d);
    return max_abs_entry(avg - ComplexMatrix::Identity(n * n, n * n) / static_cast<double>(d * d));
}

/// max-entry distance between (I ⊗ U)|Φ⟩ and (Uᵀ ⊗ I)|Φ⟩ over all generalized Paulis.
inline double transpose_identity_defect(std::size_t d) {
    const ComplexVector phi = maximally_entangled(d).amplitudes();
    const auto n = static_cast<Eigen::Index>(d);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    double worst = 0;
    for (const auto& u : make_generalized_pauli(d)) {
        const ComplexVector lhs = tensor(id, u) * phi;
        const ComplexVector rhs = tensor(ComplexMatrix(u.transpose()), id) * phi;
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace qmacea
