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

// Finite-blocklength realization of the entanglement-assisted code: shared
// resource Ψ = φ^⊗n, block-Pauli encodings over type classes, channel
// outputs, typical projectors, square-root-measurement decoding, and the
// operator inequalities behind the error analysis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qmacea/capacity.hpp"
#include "qmacea/channels.hpp"
#include "qmacea/entropy.hpp"
#include "qmacea/qmath.hpp"
#include "qmacea/random.hpp"
#include "qmacea/typing.hpp"

namespace qmacea {

namespace tol {
inline constexpr double kSrmThreshold = 1e-10;
inline constexpr double kPovmPsd = 1e-9;
inline constexpr double kPovmSum = 1e-8;
inline constexpr double kTransposeForm = 1e-9;
inline constexpr double kAverageState = 1e-8;
inline constexpr double kCrossBlock = 1e-10;
inline constexpr double kHayashiNagaoka = 1e-8;
inline constexpr double kOperandCheck = 1e-9;
}  // namespace tol

inline constexpr std::size_t kMaxCodeDim = 4096;

// ---------------------------------------------------------------------------
// Code context: everything fixed by (N, ρ, n)

/// Per type class α: g_α ∈ [d_α²] selects a generalized Pauli and b_α a sign.
struct BlockPauliIndex {
    std::vector<std::size_t> g;
    std::vector<std::uint8_t> b;
};

enum class CodebookKind { Blocks, Paulis };

inline const char* codebook_kind_name(CodebookKind k) { return k == CodebookKind::Blocks ? "blocks" : "paulis"; }

struct CodeContext {
    QuantumChannel channel;
    DensityOperator rho;
    std::size_t n = 0;
    std::size_t d = 0;                // input dim
    std::size_t dim_in = 0;           // d^n
    std::size_t dim_out = 0;          // d_out^n
    std::vector<double> spectrum;     // eigenvalues of ρ, descending
    ComplexMatrix basis;              // eigenvectors of ρ (columns)
    ComplexMatrix basis_n;            // basis^{⊗n}
    std::vector<TypeClass> classes;   // over eigen-index sequences
    ComplexVector psi;                // Ψ on A'^n ⊗ R^n
    ComplexMatrix theta_n;            // Θ = (N^⊗n ⊗ I)Ψ on B^n ⊗ R^n
    QuantumChannel channel_n;         // N^⊗n

    Dims output_dims() const { return {dim_out, dim_in}; }
};

namespace detail {

inline std::size_t checked_code_dim(std::size_t base, std::size_t n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= base;
        if (total > kMaxCodeDim)
            fail(ErrorCode::DimensionCap, "(d_out*d_in)^n exceeds " + std::to_string(kMaxCodeDim) + "; reduce n");
    }
    return total;
}

// Interleaved (X1 Y1 X2 Y2 ...) → grouped (X^n Y^n) factor order.
inline std::vector<std::size_t> grouping_order(std::size_t n) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) order.push_back(2 * i);
    for (std::size_t i = 0; i < n; ++i) order.push_back(2 * i + 1);
    return order;
}

inline Dims interleaved_dims(std::size_t x, std::size_t y, std::size_t n) {
    Dims dims;
    for (std::size_t i = 0; i < n; ++i) {
        dims.push_back(x);
        dims.push_back(y);
    }
    return dims;
}

// Σ_k (K_k ⊗ I) |v⟩⟨v| (K_k ⊗ I)† for v on (in, ref), output ordered (out, ref).
inline ComplexMatrix apply_to_first_factor(const std::vector<ComplexMatrix>& kraus, const ComplexVector& v,
                                           std::size_t dim_ref) {
    const auto din = static_cast<Eigen::Index>(kraus.front().cols());
    const auto dr = static_cast<Eigen::Index>(dim_ref);
    // V[a][r] row-major view of v
    const ComplexMatrix amp = Eigen::Map<const ComplexMatrix>(v.data(), dr, din).transpose();
    const Eigen::Index dout = kraus.front().rows();
    ComplexMatrix out = ComplexMatrix::Zero(dout * dr, dout * dr);
    for (const auto& k : kraus) {
        const ComplexMatrix y = k * amp;  // [b][r]
        const ComplexVector w = Eigen::Map<const ComplexVector>(ComplexMatrix(y.transpose()).data(), y.size());
        out.noalias() += w * w.adjoint();
    }
    return out;
}

// (I_X ⊗ W) M (I_X ⊗ W)† with W acting on the trailing factor of size W.rows().
inline ComplexMatrix conjugate_trailing(const ComplexMatrix& m, const ComplexMatrix& w) {
    const Eigen::Index dr = w.rows();
    const Eigen::Index dx = m.rows() / dr;
    ComplexMatrix out(m.rows(), m.cols());
    const ComplexMatrix wa = w.adjoint();
    for (Eigen::Index i = 0; i < dx; ++i)
        for (Eigen::Index j = 0; j < dx; ++j)
            out.block(i * dr, j * dr, dr, dr) = w * m.block(i * dr, j * dr, dr, dr) * wa;
    return out;
}

}  // namespace detail

/// Ψ = φ^⊗n with φ = purify(ρ), regrouped to A'^n ⊗ R^n.
inline PureState build_entangled_resource(const DensityOperator& rho, std::size_t n) {
    const std::size_t d = rho.dim();
    detail::checked_code_dim(d * d, n);
    const ComplexVector phi = purify(rho).amplitudes();
    ComplexVector v = ComplexVector::Ones(1);
    for (std::size_t i = 0; i < n; ++i) v = tensor(ComplexMatrix(v), ComplexMatrix(phi)).col(0);
    const auto order = detail::grouping_order(n);
    ComplexVector grouped = permute_subsystems(v, detail::interleaved_dims(d, d, n), order);
    std::size_t dn = 1;
    for (std::size_t i = 0; i < n; ++i) dn *= d;
    return PureState(std::move(grouped), {dn, dn});
}

/// p_α = |α| λ^n(x ∈ α), one entry per type class.
inline std::vector<double> class_weights(const CodeContext& ctx) {
    std::vector<double> p;
    for (const auto& c : ctx.classes)
        p.push_back(static_cast<double>(c.size) * std::exp2(log2_sequence_probability(c.type, ctx.spectrum)));
    return p;
}

/// |⟨Ψ | Σ_α √p_α Φ_α⟩| with Φ_α = d_α^{-1/2} Σ_{x∈α} |e_x⟩|x⟩.
inline double resource_decomposition_overlap(const CodeContext& ctx) {
    const auto p = class_weights(ctx);
    ComplexVector target = ComplexVector::Zero(ctx.psi.size());
    for (std::size_t a = 0; a < ctx.classes.size(); ++a) {
        const auto& c = ctx.classes[a];
        const double w = std::sqrt(p[a] / static_cast<double>(c.members.size()));
        for (auto x : c.members)
            target += w * tensor(ComplexMatrix(ctx.basis_n.col(static_cast<Eigen::Index>(x))),
                                 ComplexMatrix(ket(ctx.dim_in, x)))
                              .col(0);
    }
    return std::abs(target.dot(ctx.psi));
}

inline CodeContext make_code_context(const QuantumChannel& channel, const DensityOperator& rho, std::size_t n) {
    if (n == 0) fail(ErrorCode::DimensionMismatch, "block length must be >= 1");
    if (rho.dim() != channel.dim_in()) fail(ErrorCode::DimensionMismatch, "ρ dim differs from channel input");
    const std::size_t d = rho.dim();
    detail::checked_code_dim(channel.dim_out() * d, n);
    detail::checked_code_dim(d * d, n);
    CodeContext ctx{channel, rho, n, d, 1, 1, {}, {}, {}, {}, {}, {}, channel};
    for (std::size_t i = 0; i < n; ++i) {
        ctx.dim_in *= d;
        ctx.dim_out *= channel.dim_out();
    }
    const auto eig = eig_hermitian(rho.matrix());
    ctx.spectrum = spectrum_of(eig);
    ctx.basis = eig.vectors;
    ctx.basis_n = tensor_power(ctx.basis, n);
    ctx.classes = enumerate_type_classes(n, d);
    ctx.psi = build_entangled_resource(rho, n).amplitudes();
    ctx.channel_n = tensor_power_channel(channel, n);
    ctx.theta_n = detail::apply_to_first_factor(ctx.channel_n.kraus(), ctx.psi, ctx.dim_in);
    return ctx;
}

// ---------------------------------------------------------------------------
// Encodings

inline BlockPauliIndex identity_index(const CodeContext& ctx) {
    return BlockPauliIndex{std::vector<std::size_t>(ctx.classes.size(), 0), std::vector<std::uint8_t>(ctx.classes.size(), 0)};
}

inline BlockPauliIndex random_block_index(const std::vector<TypeClass>& classes, Rng& rng) {
    BlockPauliIndex idx;
    for (const auto& c : classes) {
        idx.g.push_back(rng.uniform_index(c.dim() * c.dim()));
        idx.b.push_back(static_cast<std::uint8_t>(rng.uniform_index(2)));
    }
    return idx;
}

/// B_s = ⊕_α (−1)^{b_α} U_{g_α} in the sequence basis.
inline ComplexMatrix build_block_pauli(const BlockPauliIndex& idx, const std::vector<TypeClass>& classes) {
    if (idx.g.size() != classes.size() || idx.b.size() != classes.size())
        fail(ErrorCode::IndexError, "block index has " + std::to_string(idx.g.size()) + " entries for " +
                                        std::to_string(classes.size()) + " classes");
    std::size_t total = 0;
    for (const auto& c : classes) total += c.dim();
    ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t a = 0; a < classes.size(); ++a) {
        const auto& m = classes[a].members;
        const std::size_t da = m.size();
        if (idx.g[a] >= da * da) fail(ErrorCode::IndexError, "g out of range for class " + std::to_string(a));
        if (idx.b[a] > 1) fail(ErrorCode::IndexError, "sign bit must be 0 or 1");
        const ComplexMatrix p = generalized_pauli(da, idx.g[a]) * (idx.b[a] ? -1.0 : 1.0);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j)
                u(static_cast<Eigen::Index>(m[i]), static_cast<Eigen::Index>(m[j])) = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return u;
}

/// U = E^{⊗n} B E^{⊗n}† on A'^n, where B is a codeword in the sequence basis.
inline ComplexMatrix encoding_unitary(const CodeContext& ctx, const ComplexMatrix& b) {
    return ctx.basis_n * b * ctx.basis_n.adjoint();
}

/// σ = (N^⊗n ⊗ I)[(U ⊗ I)Ψ], the direct route.
inline ComplexMatrix encoded_output_state(const CodeContext& ctx, const ComplexMatrix& b) {
    const ComplexMatrix u = encoding_unitary(ctx, b);
    // (U ⊗ I) on the grouped vector: amplitude array [a][r] ↦ U [a][r]
    const ComplexMatrix amp = Eigen::Map<const ComplexMatrix>(ctx.psi.data(), static_cast<Eigen::Index>(ctx.dim_in),
                                                              static_cast<Eigen::Index>(ctx.dim_in))
                                  .transpose();
    const ComplexMatrix moved = u * amp;
    const ComplexVector v = Eigen::Map<const ComplexVector>(ComplexMatrix(moved.transpose()).data(), moved.size());
    return detail::apply_to_first_factor(ctx.channel_n.kraus(), v, ctx.dim_in);
}

/// (I ⊗ Bᵀ) Θ (I ⊗ B*), the transpose route.
inline ComplexMatrix encoded_output_state_transpose(const CodeContext& ctx, const ComplexMatrix& b) {
    return detail::conjugate_trailing(ctx.theta_n, b.transpose());
}

/// Full-space generalized Pauli of dimension d^n (superdense-coding codewords).
inline ComplexMatrix full_pauli(const CodeContext& ctx, std::size_t index) {
    return generalized_pauli(ctx.dim_in, index);
}

// ---------------------------------------------------------------------------
// Average output state

struct AverageStateReport {
    ComplexMatrix average;
    ComplexMatrix closed_form;
    double distance = 0;         // ‖average − closed_form‖₁
    double max_cross_block = 0;  // largest |entry| linking different R-classes
    bool exact = false;          // true when every s ∈ S was enumerated
    std::size_t elements = 0;
    bool pass() const { return distance <= tol::kAverageState && max_cross_block <= tol::kCrossBlock; }
};

/// Σ_α p_α N^⊗n(E^n π_α E^n†) ⊗ π_α, π_α the normalized class projector.
inline ComplexMatrix average_state_closed_form(const CodeContext& ctx) {
    const auto p = class_weights(ctx);
    const auto dr = static_cast<Eigen::Index>(ctx.dim_in);
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(ctx.dim_out) * dr, static_cast<Eigen::Index>(ctx.dim_out) * dr);
    for (std::size_t a = 0; a < ctx.classes.size(); ++a) {
        if (p[a] == 0.0) continue;
        ComplexMatrix pi = ComplexMatrix::Zero(dr, dr);
        for (auto x : ctx.classes[a].members) pi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = 1.0;
        pi /= static_cast<double>(ctx.classes[a].members.size());
        out += p[a] * tensor(apply_channel(ctx.channel_n, ComplexMatrix(ctx.basis_n * pi * ctx.basis_n.adjoint())), pi);
    }
    return out;
}

inline double set_size(const std::vector<TypeClass>& classes) {
    double s = 1;
    for (const auto& c : classes) s *= 2.0 * static_cast<double>(c.dim() * c.dim());
    return s;
}

inline constexpr std::size_t kMaxEnumeratedEncodings = 4096;

/// Average of σ_s over S: enumerated when |S| ≤ 4096, otherwise `samples`
/// uniform draws from substream (seed, 0).
inline AverageStateReport average_output_state(const CodeContext& ctx, std::size_t samples = 4096, std::uint64_t seed = 0) {
    AverageStateReport rep;
    const double size = set_size(ctx.classes);
    rep.closed_form = average_state_closed_form(ctx);
    rep.average = ComplexMatrix::Zero(rep.closed_form.rows(), rep.closed_form.cols());
    if (size <= static_cast<double>(kMaxEnumeratedEncodings)) {
        rep.exact = true;
        BlockPauliIndex idx = identity_index(ctx);
        // mixed-radix counter over (g_α, b_α)
        while (true) {
            rep.average += encoded_output_state(ctx, build_block_pauli(idx, ctx.classes));
            ++rep.elements;
            std::size_t a = 0;
            for (; a < ctx.classes.size(); ++a) {
                if (idx.b[a] == 0) {
                    idx.b[a] = 1;
                    break;
                }
                idx.b[a] = 0;
                const std::size_t da = ctx.classes[a].dim();
                if (++idx.g[a] < da * da) break;
                idx.g[a] = 0;
            }
            if (a == ctx.classes.size()) break;
        }
    } else {
        Rng rng = Rng::substream(seed, 0);
        for (std::size_t k = 0; k < samples; ++k)
            rep.average += encoded_output_state(ctx, build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes));
        rep.elements = samples;
    }
    rep.average /= static_cast<double>(rep.elements);
    rep.distance = trace_distance(rep.average, rep.closed_form);
    std::vector<std::size_t> class_of(ctx.dim_in);
    for (std::size_t a = 0; a < ctx.classes.size(); ++a)
        for (auto x : ctx.classes[a].members) class_of[x] = a;
    const std::size_t dr = ctx.dim_in;
    for (Eigen::Index i = 0; i < rep.average.rows(); ++i)
        for (Eigen::Index j = 0; j < rep.average.cols(); ++j)
            if (class_of[static_cast<std::size_t>(i) % dr] != class_of[static_cast<std::size_t>(j) % dr])
                rep.max_cross_block = std::max(rep.max_cross_block, std::abs(rep.average(i, j)));
    return rep;
}

// ---------------------------------------------------------------------------
// Decoding

struct DecoderPOVM {
    std::vector<ComplexMatrix> elements;
    std::size_t dim = 0;

    double min_eigenvalue_over_elements() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& e : elements) m = std::min(m, min_eigenvalue(e));
        return m;
    }

    /// λ_max(Σ Λ_k) − 1, ≤ 1e-8 for a sub-normalized POVM.
    double excess() const {
        ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (const auto& e : elements) sum += e;
        return max_eigenvalue(sum) - 1.0;
    }

    bool valid() const { return min_eigenvalue_over_elements() >= -tol::kPovmPsd && excess() <= tol::kPovmSum; }
};

/// Λ_k = (Σ Υ)^{-1/2} Υ_k (Σ Υ)^{-1/2}, Υ_k = Π Π_k Π.
inline DecoderPOVM build_srm_decoder(const ComplexMatrix& pi, const std::vector<ComplexMatrix>& codeword_projectors) {
    if (codeword_projectors.empty()) fail(ErrorCode::DegenerateDecoder, "no codewords");
    const Eigen::Index dim = pi.rows();
    std::vector<ComplexMatrix> upsilon;
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& pk : codeword_projectors) {
        if (pk.rows() != dim) fail(ErrorCode::DimensionMismatch, "codeword projector dim differs from Π");
        ComplexMatrix u = pi * pk * pi;
        u = (u + u.adjoint()) / 2.0;
        sum += u;
        upsilon.push_back(std::move(u));
    }
    if (max_abs_entry(sum) <= tol::kSrmThreshold) fail(ErrorCode::DegenerateDecoder, "Σ Υ vanishes");
    const ComplexMatrix s = pinv_sqrt(sum, tol::kSrmThreshold);
    DecoderPOVM povm{{}, static_cast<std::size_t>(dim)};
    for (const auto& u : upsilon) {
        ComplexMatrix l = s * u * s;
        povm.elements.push_back((l + l.adjoint()) / 2.0);
    }
    return povm;
}

// ---------------------------------------------------------------------------
// Packing simulation

struct PackingConfig {
    std::size_t n = 2;
    double rate = 0.5;
    double gamma = -1;  // > 0: codebook size N = max(1, ⌊γ D / d⌋) instead of 2^{⌊nR⌋}
    double delta = 0.1;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    CodebookKind kind = CodebookKind::Blocks;
};

struct CodebookResult {
    std::size_t trial = 0;
    std::vector<double> success;  // Tr σ_{f(k)} Λ_k
    double min_success = 0;
    double avg_success = 0;
    bool meets_bound = false;
};

struct PackingReport {
    std::size_t n = 0;
    double rate = 0;
    std::size_t codewords = 0;
    double gamma = 0;  // N d / D with measured d, D
    double delta = 0;
    double eps_measured = 0;
    double eps_pi = 0;    // 1 − min Tr σ_s Π
    double eps_pi_s = 0;  // 1 − min Tr σ_s Π_s
    double bound = 0;
    double min_success = 0;
    double avg_success = 0;
    double post_expurgation_max_error = 0;
    std::size_t best_trial = 0;
    std::uint64_t seed = 0;
    std::string kind;
    double trace_pi_s = 0;       // d
    double inverse_d = 0;        // 1/D = λ_max(Π σ̄ Π)
    double mutual_information = 0;  // I(B;R) of one copy of θ
    double p3_tightest_c = 0;
    double p4_exponent_gap = 0;
    double pass_fraction = 0;
    bool povm_valid = true;
    std::vector<CodebookResult> codebooks;
};

/// 1 − 4(ε + √(8ε)) − 8γ
inline double packing_bound(double eps, double gamma) { return 1.0 - 4.0 * (eps + std::sqrt(8.0 * eps)) - 8.0 * gamma; }

namespace detail {

// Typical projector of a bipartite state with n copies regrouped to X^n Y^n.
inline ComplexMatrix grouped_typical_projector(const ComplexMatrix& state, std::size_t dx, std::size_t dy, std::size_t n,
                                               double delta) {
    const ComplexMatrix p = typical_projector(state, n, delta).projector;
    return permute_subsystems(p, interleaved_dims(dx, dy, n), grouping_order(n));
}

// One copy of θ on (B, R).
inline ComplexMatrix single_theta(const CodeContext& ctx) {
    return apply_to_first_factor(ctx.channel.kraus(), purify(ctx.rho).amplitudes(), ctx.d);
}

}  // namespace detail

struct PackingProjectors {
    ComplexMatrix pi;        // Π_{N(ρ),δ} ⊗ Π_{λ,δ}
    ComplexMatrix pi_theta;  // Π_{θ,δ} on B^n R^n
};

inline PackingProjectors packing_projectors(const CodeContext& ctx, double delta) {
    const ComplexMatrix theta1 = detail::single_theta(ctx);
    const ComplexMatrix out = apply_channel(ctx.channel, ctx.rho.matrix());
    ComplexMatrix ref = ComplexMatrix::Zero(static_cast<Eigen::Index>(ctx.d), static_cast<Eigen::Index>(ctx.d));
    for (std::size_t i = 0; i < ctx.d; ++i) ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = ctx.spectrum[i];
    PackingProjectors p;
    p.pi = tensor(typical_projector(out, ctx.n, delta).projector, typical_projector(ref, ctx.n, delta).projector);
    p.pi_theta = detail::grouped_typical_projector(theta1, ctx.channel.dim_out(), ctx.d, ctx.n, delta);
    return p;
}

inline std::size_t codebook_size(const PackingConfig& cfg, double trace_pi_s, double inverse_d) {
    if (cfg.gamma > 0) {
        const double n = std::floor(cfg.gamma / (trace_pi_s * inverse_d));
        return static_cast<std::size_t>(std::max(1.0, n));
    }
    const double bits = std::floor(static_cast<double>(cfg.n) * cfg.rate + 1e-9);
    if (bits < 0) fail(ErrorCode::BadOperands, "rate must be non-negative");
    if (bits > 20) fail(ErrorCode::DimensionCap, "codebook larger than 2^20 codewords");
    return std::size_t{1} << static_cast<std::size_t>(bits);
}

inline std::vector<ComplexMatrix> draw_codebook(const CodeContext& ctx, CodebookKind kind, std::size_t count, Rng& rng) {
    std::vector<ComplexMatrix> words;
    if (kind == CodebookKind::Blocks) {
        for (std::size_t k = 0; k < count; ++k) words.push_back(build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes));
        return words;
    }
    // distinct full-space Paulis; the transpose identity needs a flat spectrum
    if (ctx.spectrum.front() - ctx.spectrum.back() > 1e-12)
        fail(ErrorCode::BadOperands, "Pauli codebooks need a maximally mixed input");
    const std::size_t total = ctx.dim_in * ctx.dim_in;
    if (count > total) fail(ErrorCode::BadOperands, "more Pauli codewords requested than exist");
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t k = 0; k < count; ++k) {
        std::swap(pool[k], pool[k + rng.uniform_index(total - k)]);
        words.push_back(full_pauli(ctx, pool[k]));
    }
    return words;
}

/// Random codebooks of size N decoded by the square-root measurement built
/// from Π and Π_s = (I ⊗ Bᵀ)Π_θ(I ⊗ B*). ε is measured from the codewords
/// drawn; success probabilities are exact traces.
inline PackingReport simulate_packing(const QuantumChannel& channel, const DensityOperator& rho, const PackingConfig& cfg) {
    if (cfg.trials == 0) fail(ErrorCode::BadOperands, "trials must be >= 1");
    if (!(cfg.delta > 0)) fail(ErrorCode::BadOperands, "delta must be positive");
    const auto ctx = make_code_context(channel, rho, cfg.n);
    const auto proj = packing_projectors(ctx, cfg.delta);
    const ComplexMatrix avg = average_state_closed_form(ctx);

    PackingReport rep;
    rep.n = cfg.n;
    rep.rate = cfg.rate;
    rep.delta = cfg.delta;
    rep.seed = cfg.seed;
    rep.kind = codebook_kind_name(cfg.kind);
    rep.trace_pi_s = proj.pi_theta.trace().real();
    rep.inverse_d = max_eigenvalue(ComplexMatrix(proj.pi * avg * proj.pi));
    rep.codewords = codebook_size(cfg, rep.trace_pi_s, rep.inverse_d);
    rep.gamma = static_cast<double>(rep.codewords) * rep.trace_pi_s * rep.inverse_d;
    {
        const LabeledState one(DensityOperator(detail::single_theta(ctx), {channel.dim_out(), ctx.d}), {"B", "R"});
        rep.mutual_information = mutual_information(one, {"B"}, {"R"});
        const double hab = one.entropy({"B", "R"});
        const double n = static_cast<double>(cfg.n);
        rep.p3_tightest_c = std::max(0.0, (std::log2(std::max(rep.trace_pi_s, 1.0)) / n - hab) / cfg.delta);
        const double exponent = rep.inverse_d > 0 ? -std::log2(rep.inverse_d) / n : std::numeric_limits<double>::infinity();
        rep.p4_exponent_gap = one.entropy({"B"}) + one.entropy({"R"}) - exponent;
    }

    double min_pi = 1, min_pi_s = 1;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::substream(cfg.seed, t);
        const auto words = draw_codebook(ctx, cfg.kind, rep.codewords, rng);
        std::vector<ComplexMatrix> sigmas, projectors;
        for (const auto& b : words) {
            sigmas.push_back(encoded_output_state(ctx, b));
            projectors.push_back(detail::conjugate_trailing(proj.pi_theta, b.transpose()));
            min_pi = std::min(min_pi, (sigmas.back() * proj.pi).trace().real());
            min_pi_s = std::min(min_pi_s, (sigmas.back() * projectors.back()).trace().real());
        }
        const auto povm = build_srm_decoder(proj.pi, projectors);
        rep.povm_valid = rep.povm_valid && povm.valid();
        CodebookResult cb;
        cb.trial = t;
        for (std::size_t k = 0; k < words.size(); ++k) cb.success.push_back((sigmas[k] * povm.elements[k]).trace().real());
        cb.min_success = *std::min_element(cb.success.begin(), cb.success.end());
        cb.avg_success = std::accumulate(cb.success.begin(), cb.success.end(), 0.0) / static_cast<double>(cb.success.size());
        rep.codebooks.push_back(std::move(cb));
    }
    rep.eps_pi = std::max(0.0, 1.0 - min_pi);
    rep.eps_pi_s = std::max(0.0, 1.0 - min_pi_s);
    rep.eps_measured = std::max(rep.eps_pi, rep.eps_pi_s);
    rep.bound = packing_bound(rep.eps_measured, rep.gamma);

    std::size_t meeting = 0;
    rep.min_success = 1;
    double total = 0;
    for (auto& cb : rep.codebooks) {
        cb.meets_bound = cb.avg_success >= rep.bound;
        meeting += cb.meets_bound ? 1 : 0;
        rep.min_success = std::min(rep.min_success, cb.min_success);
        total += cb.avg_success;
        if (cb.avg_success > rep.codebooks[rep.best_trial].avg_success) rep.best_trial = cb.trial;
    }
    rep.avg_success = total / static_cast<double>(rep.codebooks.size());
    rep.pass_fraction = static_cast<double>(meeting) / static_cast<double>(rep.codebooks.size());

    // Derandomize (best codebook), then expurgate its worse half.
    auto errors = rep.codebooks[rep.best_trial].success;
    for (auto& e : errors) e = 1.0 - e;
    std::sort(errors.begin(), errors.end());
    const std::size_t keep = std::max<std::size_t>(1, errors.size() / 2);
    rep.post_expurgation_max_error = errors[keep - 1];
    return rep;
}

// ---------------------------------------------------------------------------
// Operator lemmas

struct HayashiNagaokaResult {
    double margin = 0;  // λ_min(2(I−S) + 4T − (I − (S+T)^{-1/2} S (S+T)^{-1/2}))
    bool holds = false;
};

inline HayashiNagaokaResult hayashi_nagaoka_check(const ComplexMatrix& s, const ComplexMatrix& t) {
    if (s.rows() != s.cols() || t.rows() != t.cols() || s.rows() != t.rows())
        fail(ErrorCode::BadOperands, "S and T must be square and of equal size");
    const Eigen::Index d = s.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    if (hermiticity_defect(s) > tol::kOperandCheck || hermiticity_defect(t) > tol::kOperandCheck)
        fail(ErrorCode::BadOperands, "S and T must be Hermitian");
    if (min_eigenvalue(s) < -tol::kOperandCheck || max_eigenvalue(s) > 1 + tol::kOperandCheck)
        fail(ErrorCode::BadOperands, "S must satisfy 0 <= S <= I");
    if (min_eigenvalue(t) < -tol::kOperandCheck) fail(ErrorCode::BadOperands, "T must be positive semidefinite");
    const ComplexMatrix r = pinv_sqrt(s + t, tol::kSrmThreshold);
    ComplexMatrix diff = 2.0 * (id - s) + 4.0 * t - (id - r * s * r);
    diff = (diff + diff.adjoint()) / 2.0;
    HayashiNagaokaResult out;
    out.margin = min_eigenvalue(diff);
    out.holds = out.margin >= -tol::kHayashiNagaoka;
    return out;
}

/// Random operands with 0 ≤ S ≤ I (random eigenbasis, uniform spectrum) and
/// T a Ginibre state scaled by a uniform factor in [0, 2).
inline std::pair<ComplexMatrix, ComplexMatrix> random_hn_operands(std::size_t dim, Rng& rng) {
    const ComplexMatrix u = random_unitary(dim, rng);
    RealVector spec(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < spec.size(); ++i) spec(i) = rng.uniform();
    ComplexMatrix s = u * spec.cast<Complex>().asDiagonal() * u.adjoint();
    s = (s + s.adjoint()) / 2.0;
    ComplexMatrix t = random_density(dim, rng).matrix() * (2.0 * rng.uniform());
    return {s, t};
}

struct GentleMeasurementReport {
    double epsilon = 0;  // max_k 1 − Tr ρ_k Λ_k
    double bound = 0;    // √(8ε)
    std::vector<double> disturbance;
    double max_disturbance = 0;
    bool holds = false;
};

/// Coherent measurement D = Σ_j √Λ_j ⊗ |j⟩ (+ √(I − ΣΛ) ⊗ |⊥⟩) applied to a
/// purification φ_k of each ρ_k; compares (D ⊗ I)φ_k against φ_k ⊗ |k⟩.
inline GentleMeasurementReport gentle_measurement_check(const std::vector<DensityOperator>& states, const DecoderPOVM& povm) {
    if (states.size() > povm.elements.size()) fail(ErrorCode::BadOperands, "more states than POVM outcomes");
    GentleMeasurementReport rep;
    const auto d = static_cast<Eigen::Index>(povm.dim);
    const std::size_t outcomes = povm.elements.size() + 1;
    std::vector<ComplexMatrix> roots;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : povm.elements) {
        roots.push_back(sqrt_psd(e));
        sum += e;
    }
    roots.push_back(sqrt_psd(ComplexMatrix(ComplexMatrix::Identity(d, d) - sum)));
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].dim() != povm.dim) fail(ErrorCode::DimensionMismatch, "state dim differs from POVM dim");
        rep.epsilon = std::max(rep.epsilon, 1.0 - (states[k].matrix() * povm.elements[k]).trace().real());
        const ComplexVector phi = purify(states[k]).amplitudes();  // (A, R)
        const auto dr = d;
        const ComplexMatrix amp = Eigen::Map<const ComplexMatrix>(phi.data(), dr, d).transpose();  // [a][r]
        // measured vector on (A, J, R)
        ComplexVector measured = ComplexVector::Zero(d * static_cast<Eigen::Index>(outcomes) * dr);
        ComplexVector target = ComplexVector::Zero(measured.size());
        for (std::size_t j = 0; j < outcomes; ++j) {
            const ComplexMatrix branch = roots[j] * amp;
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index r = 0; r < dr; ++r) {
                    const Eigen::Index idx = (a * static_cast<Eigen::Index>(outcomes) + static_cast<Eigen::Index>(j)) * dr + r;
                    measured(idx) = branch(a, r);
                    if (j == k) target(idx) = amp(a, r);
                }
        }
        rep.disturbance.push_back(pure_state_distance(measured, target));
    }
    rep.epsilon = std::max(rep.epsilon, 0.0);
    rep.bound = std::sqrt(8.0 * rep.epsilon);
    rep.max_disturbance = rep.disturbance.empty() ? 0 : *std::max_element(rep.disturbance.begin(), rep.disturbance.end());
    // 2√(1−|⟨·⟩|²) turns 1e-16 overlap rounding into ~1e-8
    rep.holds = rep.max_disturbance <= rep.bound + 1e-7;
    return rep;
}

struct GentleInstance {
    std::vector<DensityOperator> states;
    DecoderPOVM povm;
};

/// `count` states on dimension 2·count: state k is (1 − noise)·(random state on
/// span{|2k⟩, |2k+1⟩}) + noise·(random state); Λ_k projects onto that span.
inline GentleInstance random_gentle_instance(std::size_t count, double noise, Rng& rng) {
    const std::size_t dim = 2 * count;
    const auto d = static_cast<Eigen::Index>(dim);
    GentleInstance inst;
    inst.povm.dim = dim;
    for (std::size_t k = 0; k < count; ++k) {
        ComplexMatrix local = ComplexMatrix::Zero(d, d);
        local.block(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(2 * k), 2, 2) = random_density(2, rng).matrix();
        ComplexMatrix rho = (1.0 - noise) * local + noise * random_density(dim, rng).matrix();
        inst.states.emplace_back((rho + rho.adjoint()) / 2.0);
        ComplexMatrix proj = ComplexMatrix::Zero(d, d);
        proj(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(2 * k)) = 1.0;
        proj(static_cast<Eigen::Index>(2 * k + 1), static_cast<Eigen::Index>(2 * k + 1)) = 1.0;
        inst.povm.elements.push_back(std::move(proj));
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Code conditions

/// max over sampled s of ‖U_s ρ^⊗n U_s† − ρ^⊗n‖₁.
inline double encoding_invariance_defect(const CodeContext& ctx, std::size_t samples, std::uint64_t seed) {
    const ComplexMatrix rn = tensor_power(ctx.rho.matrix(), ctx.n);
    Rng rng = Rng::substream(seed, 0);
    double worst = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const ComplexMatrix u = encoding_unitary(ctx, build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes));
        worst = std::max(worst, trace_distance(ComplexMatrix(u * rn * u.adjoint()), rn));
    }
    return worst;
}

/// max over sampled s of ‖σ_s(direct) − σ_s(transpose)‖₁.
inline double transpose_form_defect(const CodeContext& ctx, std::size_t samples, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, 0);
    double worst = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto b = build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes);
        worst = std::max(worst, trace_distance(encoded_output_state(ctx, b), encoded_output_state_transpose(ctx, b)));
    }
    return worst;
}

/// max over sampled s and random states ω of ‖Δ(UωU†) − Δ(UΔ(ω)U†)‖₁,
/// Δ the computational-basis dephasing on A'^n.
inline double dephasing_commutation_defect(const CodeContext& ctx, std::size_t states, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, 0);
    double worst = 0;
    for (std::size_t k = 0; k < states; ++k) {
        const ComplexMatrix u = encoding_unitary(ctx, build_block_pauli(random_block_index(ctx.classes, rng), ctx.classes));
        const ComplexMatrix w = random_density(ctx.dim_in, rng).matrix();
        const ComplexMatrix lhs = dephase(u * w * u.adjoint());
        const ComplexMatrix rhs = dephase(u * dephase(w) * u.adjoint());
        worst = std::max(worst, trace_distance(lhs, rhs));
    }
    return worst;
}

struct CancellationReport {
    std::vector<double> distance;  // per codeword
    std::vector<double> bound;     // √(8ε'_k) + 1e-6
    bool holds = false;
};

/// Decode-then-undo on the dilated output: for codeword k, applies
/// Σ_j (W_j† √Λ_j) ⊗ |j⟩ to (V^⊗n ⊗ W_k)Ψ and compares with (V^⊗n ⊗ I)Ψ ⊗ |k⟩.
inline CancellationReport cancellation_check(const CodeContext& ctx, const std::vector<ComplexMatrix>& words,
                                             const DecoderPOVM& povm) {
    if (words.size() != povm.elements.size()) fail(ErrorCode::BadOperands, "codewords and POVM sizes differ");
    const auto v = stinespring_dilation(ctx.channel_n);
    const auto dr = static_cast<Eigen::Index>(ctx.dim_in);
    const auto db = static_cast<Eigen::Index>(v.dim_b);
    const auto de = static_cast<Eigen::Index>(v.env_dim);
    // Γ[(b, r)][e]
    const ComplexMatrix amp = Eigen::Map<const ComplexMatrix>(ctx.psi.data(), dr, dr).transpose();  // [a][r]
    const ComplexMatrix out = v.matrix * amp;                                                         // [(b,e)][r]
    ComplexMatrix gamma(db * dr, de);
    for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index e = 0; e < de; ++e)
            for (Eigen::Index r = 0; r < dr; ++r) gamma(b * dr + r, e) = out(b * de + e, r);
    auto on_r = [&](const ComplexMatrix& w) { return tensor(ComplexMatrix::Identity(db, db), w); };
    CancellationReport rep;
    rep.holds = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
        const ComplexMatrix wk = on_r(words[k].transpose());
        const ComplexMatrix root = sqrt_psd(povm.elements[k]);
        const ComplexMatrix encoded = wk * gamma;
        const ComplexMatrix decoded = wk.adjoint() * root * encoded;  // branch j = k
        // ⟨Γ ⊗ k | decoded state⟩ = Tr Γ† decoded
        const Complex overlap = (gamma.adjoint() * decoded).trace();
        const double dist = 2.0 * std::sqrt(std::max(0.0, 1.0 - std::norm(overlap)));
        const ComplexMatrix sigma = encoded * encoded.adjoint();
        const double eps = std::max(0.0, 1.0 - (sigma * povm.elements[k]).trace().real());
        rep.distance.push_back(dist);
        rep.bound.push_back(std::sqrt(8.0 * eps) + 1e-6);
        rep.holds = rep.holds && dist <= rep.bound.back();
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Successive decoding

struct SuccessiveDecodeReport {
    QuantumChannel n1;
    QuantumChannel n1_hat;
    QuantumChannel n2;
    RatePair rates{};          // (I(A;C) via N₁, I(B;C_A C) via N₂)
    double n1_hat_rate = 0;    // I(A;C_B C) = r1
    RegionPentagon pentagon;
    double chain_rule_error = 0;  // |rates[0] − (rsum − r2)|
    double second_rate_error = 0;  // |rates[1] − r2|
    bool consistent = false;
};

inline SuccessiveDecodeReport successive_decode_rates(const QuantumChannel& m, const DensityOperator& rho1,
                                                      const DensityOperator& rho2) {
    auto n1 = first_sender_channel(m, rho2);
    auto n1_hat = first_sender_channel_with_reference(m, rho2);
    auto n2 = second_sender_channel(m, rho1);
    SuccessiveDecodeReport rep{n1, n1_hat, n2, {}, 0, region_for_inputs(m, rho1, rho2), 0, 0, false};
    rep.rates = {ea_mutual_information(n1, rho1), ea_mutual_information(n2, rho2)};
    rep.n1_hat_rate = ea_mutual_information(n1_hat, rho1);
    rep.chain_rule_error = std::abs(rep.rates[0] - (rep.pentagon.rsum - rep.pentagon.r2));
    rep.second_rate_error = std::abs(rep.rates[1] - rep.pentagon.r2);
    rep.consistent = rep.chain_rule_error <= tol::kChainRule && rep.second_rate_error <= tol::kChainRule &&
                     std::abs(rep.n1_hat_rate - rep.pentagon.r1) <= tol::kChainRule;
    return rep;
}

}  // namespace qmacea
