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

// Entanglement-assisted rate regions: θ-states, rate pentagons for fixed
// inputs, optimizers over input states, and the per-input rate bundles of the
// resource-inequality corner points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qmacea/channels.hpp"
#include "qmacea/entropy.hpp"
#include "qmacea/qmath.hpp"
#include "qmacea/random.hpp"

namespace qmacea {

namespace tol {
inline constexpr double kPentagon = 1e-9;
inline constexpr double kChainRule = 1e-9;
inline constexpr double kDephasingSlack = 1e-8;
inline constexpr double kClosedForm = 1e-8;
}  // namespace tol

// ---------------------------------------------------------------------------
// θ-states

namespace detail {

// purify() returns the vector on (system, reference); this gives the
// amplitude array indexed [system][reference].
inline ComplexMatrix purification_amplitudes(const DensityOperator& rho) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    const ComplexVector v = purify(rho).amplitudes();
    ComplexMatrix out(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        for (Eigen::Index r = 0; r < d; ++r) out(s, r) = v(s * d + r);
    return out;
}

// Sender input dims of a two-input channel.
inline std::pair<std::size_t, std::size_t> sender_dims(const QuantumChannel& m) {
    if (m.input_dims().size() != 2) fail(ErrorCode::FactorError, "channel does not declare two input factors");
    return {m.input_dims()[0], m.input_dims()[1]};
}

// Σ_k vec(X K_kᵀ) vec(X K_kᵀ)† where X is the (reference × input) amplitude array.
inline ComplexMatrix output_of_pure_input(const ComplexMatrix& x, const std::vector<ComplexMatrix>& kraus) {
    const Eigen::Index refs = x.rows();
    const Eigen::Index dout = kraus.front().rows();
    check_matrix_cap(static_cast<std::size_t>(refs * dout), static_cast<std::size_t>(refs * dout));
    ComplexMatrix out = ComplexMatrix::Zero(refs * dout, refs * dout);
    for (const auto& k : kraus) {
        const ComplexMatrix y = x * k.transpose();
        const ComplexVector v = Eigen::Map<const ComplexVector>(ComplexMatrix(y.transpose()).data(), y.size());
        out.noalias() += v * v.adjoint();
    }
    return out;
}

// Vector (I ⊗ V)|ψ⟩ for amplitude array x (reference × input), output order (ref, b, e).
inline ComplexVector dilated_vector(const ComplexMatrix& x, const Isometry& v) {
    const ComplexMatrix y = x * v.matrix.transpose();
    return Eigen::Map<const ComplexVector>(ComplexMatrix(y.transpose()).data(), y.size());
}

}  // namespace detail

/// θ^{AB} = (I ⊗ N)(φ_ρ) for a single sender, labels (A, B), or (A, B, E) when purified.
inline LabeledState build_theta_single(const QuantumChannel& n, const DensityOperator& rho, bool purified = false) {
    if (rho.dim() != n.dim_in()) fail(ErrorCode::DimensionMismatch, "input state dim differs from channel input");
    // X[r][s] with reference first
    const ComplexMatrix x = detail::purification_amplitudes(rho).transpose();
    const std::size_t da = rho.dim();
    if (!purified)
        return LabeledState(DensityOperator(detail::output_of_pure_input(x, n.kraus()), {da, n.dim_out()}), {"A", "B"});
    const auto v = stinespring_dilation(n);
    const ComplexVector psi = detail::dilated_vector(x, v);
    return LabeledState(PureState(psi, {da, v.dim_b, v.env_dim}).density(), {"A", "B", "E"});
}

struct ThetaState {
    LabeledState state;
    DensityOperator rho1;
    DensityOperator rho2;
    bool purified = false;
};

/// θ^{ABC} = (I ⊗ M)(φ₁ ⊗ φ₂), A and B purifying the two inputs; with
/// `purified` the Stinespring environment E is kept as a fourth factor.
inline ThetaState build_theta(const QuantumChannel& m, const DensityOperator& rho1, const DensityOperator& rho2,
                              bool purified = false) {
    if (rho1.dim() * rho2.dim() != m.dim_in())
        fail(ErrorCode::DimensionMismatch, "input dims " + std::to_string(rho1.dim()) + "x" + std::to_string(rho2.dim()) +
                                               " do not match channel input " + std::to_string(m.dim_in()));
    const std::size_t d1 = rho1.dim(), d2 = rho2.dim();
    const ComplexMatrix a1 = detail::purification_amplitudes(rho1);  // [a'][a]
    const ComplexMatrix a2 = detail::purification_amplitudes(rho2);  // [b'][b]
    // X[(a,b)][(a',b')] = a1[a'][a] a2[b'][b]
    const ComplexMatrix x = tensor(ComplexMatrix(a1.transpose()), ComplexMatrix(a2.transpose()));
    if (!purified) {
        DensityOperator theta(detail::output_of_pure_input(x, m.kraus()), {d1, d2, m.dim_out()});
        return ThetaState{LabeledState(std::move(theta), {"A", "B", "C"}), rho1, rho2, false};
    }
    const auto v = stinespring_dilation(m);
    const ComplexVector psi = detail::dilated_vector(x, v);
    return ThetaState{LabeledState(PureState(psi, {d1, d2, v.dim_b, v.env_dim}).density(), {"A", "B", "C", "E"}), rho1,
                      rho2, true};
}

// ---------------------------------------------------------------------------
// Pentagons

using RatePair = std::array<double, 2>;

struct RegionPentagon {
    double r1 = 0;
    double r2 = 0;
    double rsum = 0;
    std::vector<RatePair> vertices;

    bool valid(double tolerance = tol::kPentagon) const {
        return std::min(r1, r2) >= -tolerance && std::max(r1, r2) <= rsum + tolerance && rsum <= r1 + r2 + tolerance;
    }
};

inline RegionPentagon make_pentagon(double r1, double r2, double rsum) {
    RegionPentagon p{r1, r2, rsum, {}};
    const std::array<RatePair, 5> candidates{RatePair{0, 0}, RatePair{r1, 0}, RatePair{r1, rsum - r1},
                                             RatePair{rsum - r2, r2}, RatePair{0, r2}};
    for (const auto& c : candidates) {
        const bool dup = std::any_of(p.vertices.begin(), p.vertices.end(), [&](const RatePair& v) {
            return std::abs(v[0] - c[0]) <= 1e-12 && std::abs(v[1] - c[1]) <= 1e-12;
        });
        if (!dup) p.vertices.push_back(c);
    }
    return p;
}

inline RegionPentagon region_from_theta(const LabeledState& theta) {
    const double hab = theta.entropy({"A", "B"}), habc = theta.entropy({"A", "B", "C"});
    const double r1 = hab + theta.entropy({"B", "C"}) - habc - theta.entropy({"B"});
    const double r2 = hab + theta.entropy({"A", "C"}) - habc - theta.entropy({"A"});
    const double rsum = hab + theta.entropy({"C"}) - habc;
    return make_pentagon(r1, r2, rsum);
}

/// r1 = I(A;C|B), r2 = I(B;C|A), rsum = I(AB;C) of θ for inputs ρ1 ⊗ ρ2.
inline RegionPentagon region_for_inputs(const QuantumChannel& m, const DensityOperator& rho1, const DensityOperator& rho2) {
    return region_from_theta(build_theta(m, rho1, rho2).state);
}

struct CornerPoints {
    RatePair O{0, 0};
    RatePair P{0, 0};
    RatePair Q{0, 0};
    RatePair R{0, 0};
};

inline CornerPoints corner_points(const RegionPentagon& p) {
    return CornerPoints{{0, 0}, {p.r1, p.rsum - p.r1}, {p.rsum - p.r2, p.r2}, {0, p.r2}};
}

/// Closed-form region of the collective phase-flip channel:
/// (2 log d, 2 log d, 4 log d − H(p)).
inline RegionPentagon phase_flip_region_closed_form(std::size_t d, const std::vector<double>& p) {
    check_distribution(p);
    if (p.size() != d) fail(ErrorCode::BadDistribution, "p must have length d");
    const double l = std::log2(static_cast<double>(d));
    return make_pentagon(2 * l, 2 * l, 4 * l - shannon_entropy(p));
}

/// Regrouped M^{⊗n}: inputs ordered (A'₁…A'ₙ)(B'₁…B'ₙ), outputs C₁…Cₙ as one factor.
inline QuantumChannel level_n_channel(const QuantumChannel& m, std::size_t n) {
    const auto [da, db] = detail::sender_dims(m);
    if (n == 1) return m;
    const auto power = tensor_power_channel(m, n);
    Dims grouped;
    for (std::size_t i = 0; i < n; ++i) grouped.push_back(da);
    for (std::size_t i = 0; i < n; ++i) grouped.push_back(db);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        order.push_back(i);
        order.push_back(n + i);
    }
    const auto map = detail::permutation_map(grouped, order);
    std::vector<ComplexMatrix> kraus;
    for (const auto& k : power.kraus()) {
        ComplexMatrix out(k.rows(), k.cols());
        for (std::size_t col = 0; col < map.size(); ++col) out.col(static_cast<Eigen::Index>(col)) = k.col(static_cast<Eigen::Index>(map[col]));
        kraus.push_back(std::move(out));
    }
    std::size_t pa = 1, pb = 1;
    for (std::size_t i = 0; i < n; ++i) {
        pa *= da;
        pb *= db;
    }
    return QuantumChannel(std::move(kraus), {pa, pb});
}

// ---------------------------------------------------------------------------
// Effective single-sender channels of successive decoding

namespace detail {

// L[(r, c), x] = Σ_y K[c, (x, y)] amp[y][r] where the other sender's input y
// is fed half of a purification with amplitude array amp[y][r]. `first`
// selects whether x is the first (A') or second (B') input.
inline std::vector<ComplexMatrix> side_fed_kraus(const QuantumChannel& m, const ComplexMatrix& amp, bool x_is_first,
                                                 bool keep_reference) {
    const auto [da, db] = sender_dims(m);
    const std::size_t dx = x_is_first ? da : db, dy = x_is_first ? db : da;
    const std::size_t dr = static_cast<std::size_t>(amp.cols());
    const std::size_t dc = m.dim_out();
    std::vector<ComplexMatrix> out;
    for (const auto& k : m.kraus()) {
        ComplexMatrix l = ComplexMatrix::Zero(static_cast<Eigen::Index>(dr * dc), static_cast<Eigen::Index>(dx));
        for (std::size_t r = 0; r < dr; ++r)
            for (std::size_t c = 0; c < dc; ++c)
                for (std::size_t x = 0; x < dx; ++x) {
                    Complex acc = 0;
                    for (std::size_t y = 0; y < dy; ++y) {
                        const std::size_t col = x_is_first ? x * db + y : y * db + x;
                        acc += k(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(col)) *
                               amp(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(r));
                    }
                    l(static_cast<Eigen::Index>(r * dc + c), static_cast<Eigen::Index>(x)) = acc;
                }
        if (keep_reference) {
            out.push_back(std::move(l));
        } else {
            // Tracing the reference splits each Kraus operator into dr blocks.
            for (std::size_t r = 0; r < dr; ++r)
                out.push_back(l.middleRows(static_cast<Eigen::Index>(r * dc), static_cast<Eigen::Index>(dc)));
        }
    }
    return out;
}

}  // namespace detail

/// N₁ : ω ↦ M(ω ⊗ ρ₂)
inline QuantumChannel first_sender_channel(const QuantumChannel& m, const DensityOperator& rho2) {
    if (detail::sender_dims(m).second != rho2.dim()) fail(ErrorCode::DimensionMismatch, "ρ2 dim differs from second input");
    return QuantumChannel(detail::side_fed_kraus(m, detail::purification_amplitudes(rho2), true, false));
}

/// N̂₁ : ω ↦ (I ⊗ M)(ω ⊗ φ₂), output C_B ⊗ C.
inline QuantumChannel first_sender_channel_with_reference(const QuantumChannel& m, const DensityOperator& rho2) {
    if (detail::sender_dims(m).second != rho2.dim()) fail(ErrorCode::DimensionMismatch, "ρ2 dim differs from second input");
    return QuantumChannel(detail::side_fed_kraus(m, detail::purification_amplitudes(rho2), true, true), {},
                          {rho2.dim(), m.dim_out()});
}

/// N₂ : ω ↦ (I ⊗ M)(φ₁ ⊗ ω), output C_A ⊗ C.
inline QuantumChannel second_sender_channel(const QuantumChannel& m, const DensityOperator& rho1) {
    if (detail::sender_dims(m).first != rho1.dim()) fail(ErrorCode::DimensionMismatch, "ρ1 dim differs from first input");
    return QuantumChannel(detail::side_fed_kraus(m, detail::purification_amplitudes(rho1), false, true), {},
                          {rho1.dim(), m.dim_out()});
}

// ---------------------------------------------------------------------------
// Optimizers

struct OptimizerConfig {
    std::size_t starts = 8;
    double step = 0.1;
    double tol = 1e-9;
    std::size_t max_iters = 5000;
    std::uint64_t seed = 0;

    void validate() const {
        if (starts == 0 || !(step > 0) || !(tol > 0) || max_iters == 0)
            fail(ErrorCode::BadOperands, "optimizer settings must be positive");
    }
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

struct OptimizerResult {
    double value = -std::numeric_limits<double>::infinity();  // certified by direct θ evaluation
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<DensityOperator> argmax;  // one state per sender
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t best_start = 0;
};

namespace detail {

inline ComplexMatrix density_from_parameters(const ComplexMatrix& g) {
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return (m + m.adjoint()) / 2.0;
}

struct AscentResult {
    ComplexMatrix g;
    double value = 0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Normalized-gradient ascent on ρ = G G†/Tr(G G†) with central differences.
/// The step halves when a move fails to improve and grows by 1.25 otherwise.
inline AscentResult ascend(ComplexMatrix g, const std::function<double(const ComplexMatrix&)>& f,
                           const OptimizerConfig& cfg) {
    auto eval = [&](const ComplexMatrix& x) { return f(density_from_parameters(x)); };
    g /= g.norm();
    AscentResult res{g, eval(g), false, 0};
    double step = cfg.step;
    const double h = kFiniteDifferenceStep;
    ComplexMatrix grad(g.rows(), g.cols());
    bool stale = true;
    for (; res.iterations < cfg.max_iters; ++res.iterations) {
        if (stale) {
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                for (Eigen::Index r = 0; r < g.rows(); ++r) {
                    double parts[2];
                    for (int part = 0; part < 2; ++part) {
                        const Complex delta = part == 0 ? Complex(h, 0) : Complex(0, h);
                        ComplexMatrix plus = res.g, minus = res.g;
                        plus(r, c) += delta;
                        minus(r, c) -= delta;
                        parts[part] = (eval(plus) - eval(minus)) / (2 * h);
                    }
                    grad(r, c) = Complex(parts[0], parts[1]);
                }
            stale = false;
        }
        const double norm = grad.norm();
        if (norm < cfg.tol) {
            res.converged = true;
            break;
        }
        ComplexMatrix trial = res.g + (step / norm) * grad;
        trial /= trial.norm();
        const double tv = eval(trial);
        if (tv > res.value) {
            res.g = std::move(trial);
            res.value = tv;
            step *= 1.25;
            stale = true;
        } else {
            step *= 0.5;
            if (step < cfg.tol) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

inline ComplexMatrix start_parameters(std::size_t dim, std::size_t start, const OptimizerConfig& cfg) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (start == 0) return ComplexMatrix::Identity(d, d);
    Rng rng = Rng::substream(cfg.seed, start);
    return gaussian_matrix(dim, dim, rng);
}

// I(A;B) of θ = (I⊗N)(φ_ρ) as H(ρ) + H(N(ρ)) − H(N^c(ρ)).
inline double ea_objective(const QuantumChannel& n, const QuantumChannel& nc, const ComplexMatrix& rho) {
    return von_neumann_entropy(rho) + von_neumann_entropy(apply_channel(n, rho)) -
           von_neumann_entropy(apply_channel(nc, rho));
}

}  // namespace detail

/// I(A;B)_θ for θ = (I ⊗ N)(φ_ρ).
inline double ea_mutual_information(const QuantumChannel& n, const DensityOperator& rho) {
    return mutual_information(build_theta_single(n, rho), {"A"}, {"B"});
}

/// max_ρ I(A;B)_θ by multi-start ascent (start 0 is π, the rest Ginibre).
inline OptimizerResult ea_capacity_single(const QuantumChannel& n, const OptimizerConfig& cfg = {}) {
    cfg.validate();
    const auto nc = complementary_channel(n);
    const std::function<double(const ComplexMatrix&)> f = [&](const ComplexMatrix& rho) {
        return detail::ea_objective(n, nc, rho);
    };
    OptimizerResult best;
    for (std::size_t s = 0; s <= cfg.starts; ++s) {
        auto run = detail::ascend(detail::start_parameters(n.dim_in(), s, cfg), f, cfg);
        best.iterations += run.iterations;
        if (run.value > best.objective) {
            best.objective = run.value;
            best.argmax = {DensityOperator(detail::density_from_parameters(run.g))};
            best.converged = run.converged;
            best.best_start = s;
        }
    }
    best.value = ea_mutual_information(n, best.argmax.front());
    return best;
}

/// I(AB;C)_θ = H(ρ1) + H(ρ2) + H(M(ρ1⊗ρ2)) − H(M^c(ρ1⊗ρ2)).
inline double sum_rate_objective(const QuantumChannel& m, const QuantumChannel& mc, const ComplexMatrix& rho1,
                                 const ComplexMatrix& rho2) {
    const ComplexMatrix joint = tensor(rho1, rho2);
    return von_neumann_entropy(rho1) + von_neumann_entropy(rho2) + von_neumann_entropy(apply_channel(m, joint)) -
           von_neumann_entropy(apply_channel(mc, joint));
}

inline constexpr std::size_t kMaxCoordinateRounds = 50;

/// max over product inputs of I(AB;C)_θ by block-coordinate ascent, one
/// start at π⊗π plus `starts` Ginibre pairs.
inline OptimizerResult sum_rate_bound(const QuantumChannel& m, const OptimizerConfig& cfg = {}) {
    cfg.validate();
    const auto [da, db] = detail::sender_dims(m);
    const auto mc = complementary_channel(m);
    OptimizerResult best;
    for (std::size_t s = 0; s <= cfg.starts; ++s) {
        ComplexMatrix g1, g2;
        if (s == 0) {
            g1 = ComplexMatrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
            g2 = ComplexMatrix::Identity(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
        } else {
            Rng rng = Rng::substream(cfg.seed, s);
            g1 = gaussian_matrix(da, da, rng);
            g2 = gaussian_matrix(db, db, rng);
        }
        double value = -std::numeric_limits<double>::infinity();
        bool converged = false;
        std::size_t iterations = 0;
        for (std::size_t round = 0; round < kMaxCoordinateRounds; ++round) {
            const ComplexMatrix rho2 = detail::density_from_parameters(g2);
            auto a = detail::ascend(g1, [&](const ComplexMatrix& r1) { return sum_rate_objective(m, mc, r1, rho2); }, cfg);
            g1 = a.g;
            const ComplexMatrix rho1 = detail::density_from_parameters(g1);
            auto b = detail::ascend(g2, [&](const ComplexMatrix& r2) { return sum_rate_objective(m, mc, rho1, r2); }, cfg);
            g2 = b.g;
            iterations += a.iterations + b.iterations;
            const double gain = b.value - value;
            value = b.value;
            if (gain <= cfg.tol && a.converged && b.converged) {
                converged = true;
                break;
            }
        }
        best.iterations += iterations;
        if (value > best.objective) {
            best.objective = value;
            best.argmax = {DensityOperator(detail::density_from_parameters(g1)),
                           DensityOperator(detail::density_from_parameters(g2))};
            best.converged = converged;
            best.best_start = s;
        }
    }
    best.value = region_for_inputs(m, best.argmax[0], best.argmax[1]).rsum;
    return best;
}

// ---------------------------------------------------------------------------
// Union over inputs and its convex hull

struct UnionSample {
    std::vector<RegionPentagon> pentagons;
    std::vector<std::string> sources;  // "maximally-mixed", "sample", "optimized"
    bool optimizer_converged = false;
};

/// Pentagon at π⊗π, then `samples − 1` Ginibre product inputs (substream
/// (seed, k)), then the sum-rate optimizer's argmax.
inline UnionSample union_region_sample(const QuantumChannel& m, std::size_t samples, const OptimizerConfig& cfg,
                                       std::uint64_t seed) {
    if (samples == 0) fail(ErrorCode::BadOperands, "union_region_sample needs samples >= 1");
    const auto [da, db] = detail::sender_dims(m);
    UnionSample out;
    out.pentagons.push_back(region_for_inputs(m, maximally_mixed(da), maximally_mixed(db)));
    out.sources.push_back("maximally-mixed");
    for (std::size_t k = 1; k < samples; ++k) {
        Rng rng = Rng::substream(seed, k);
        const auto r1 = random_density(da, rng);
        const auto r2 = random_density(db, rng);
        out.pentagons.push_back(region_for_inputs(m, r1, r2));
        out.sources.push_back("sample");
    }
    const auto opt = sum_rate_bound(m, cfg);
    out.pentagons.push_back(region_for_inputs(m, opt.argmax[0], opt.argmax[1]));
    out.sources.push_back("optimized");
    out.optimizer_converged = opt.converged;
    return out;
}

/// Counter-clockwise hull by monotone chain, starting from the lowest-leftmost point.
inline std::vector<RatePair> convex_hull(std::vector<RatePair> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePair& a, const RatePair& b) {
                              return std::abs(a[0] - b[0]) <= 1e-12 && std::abs(a[1] - b[1]) <= 1e-12;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const RatePair& o, const RatePair& a, const RatePair& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<RatePair> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline std::vector<RatePair> union_hull(const std::vector<RegionPentagon>& pentagons) {
    std::vector<RatePair> pts;
    for (const auto& p : pentagons) pts.insert(pts.end(), p.vertices.begin(), p.vertices.end());
    return convex_hull(std::move(pts));
}

// ---------------------------------------------------------------------------
// Rate bundles of the corner-point protocols

struct ResourceCornerRates {
    double e1 = 0;  // H(A)
    double e2 = 0;  // H(B)
    RatePair classical_q{};  // (I(A;C), I(B;CA))
    RatePair classical_p{};  // (I(A;CB), I(B;C))
    // father protocols: ebits consumed → qubits sent, at each corner
    RatePair father_q_consumed{};  // (½I(A;BE), ½I(B;E))
    RatePair father_q_sent{};      // (½I(A;C), ½I(B;CA))
    RatePair father_p_consumed{};  // (½I(A;E), ½I(B;AE))
    RatePair father_p_sent{};      // (½I(A;CB), ½I(B;C))
    RatePair quantum_q{};  // (I(A⟩C), I(B⟩CA))
    RatePair quantum_p{};  // (I(A⟩BC), I(B⟩C))
};

inline ResourceCornerRates resource_corner_rates(const QuantumChannel& m, const DensityOperator& rho1,
                                                 const DensityOperator& rho2) {
    const auto theta = build_theta(m, rho1, rho2, true);
    const auto& s = theta.state;
    const LabelSet A{"A"}, B{"B"}, C{"C"}, E{"E"};
    ResourceCornerRates r;
    r.e1 = s.entropy(A);
    r.e2 = s.entropy(B);
    r.classical_q = {mutual_information(s, A, C), mutual_information(s, B, {"C", "A"})};
    r.classical_p = {mutual_information(s, A, {"C", "B"}), mutual_information(s, B, C)};
    r.father_q_consumed = {0.5 * mutual_information(s, A, {"B", "E"}), 0.5 * mutual_information(s, B, E)};
    r.father_q_sent = {0.5 * r.classical_q[0], 0.5 * r.classical_q[1]};
    r.father_p_consumed = {0.5 * mutual_information(s, A, E), 0.5 * mutual_information(s, B, {"A", "E"})};
    r.father_p_sent = {0.5 * r.classical_p[0], 0.5 * r.classical_p[1]};
    r.quantum_q = {coherent_information(s, A, C), coherent_information(s, B, {"C", "A"})};
    r.quantum_p = {coherent_information(s, A, {"B", "C"}), coherent_information(s, B, C)};
    return r;
}

// ---------------------------------------------------------------------------
// Generalized dephasing channels

struct DephasingMaximizerReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    // min over trials of I(Δρ) − I(ρ); must be ≥ −1e-8
    double min_gain = std::numeric_limits<double>::infinity();
    // max |2H(r) − H(Σ r_i φ_i) − I(diag r)|
    double closed_form_max_error = 0;
    bool pass = false;
};

/// 2H(r) − H(Σ r_i φ_i) with φ_i = N^c(|i⟩⟨i|).
inline double dephasing_closed_form(const QuantumChannel& n, const std::vector<double>& r) {
    const auto nc = complementary_channel(n);
    const auto d = static_cast<Eigen::Index>(n.dim_in());
    const auto de = static_cast<Eigen::Index>(nc.dim_out());
    ComplexMatrix mix = ComplexMatrix::Zero(de, de);
    for (Eigen::Index i = 0; i < d; ++i) mix += r[static_cast<std::size_t>(i)] * apply_channel(nc, basis_projector(n.dim_in(), static_cast<std::size_t>(i)));
    return 2 * shannon_entropy(r) - von_neumann_entropy(mix);
}

inline ComplexMatrix dephase(const ComplexMatrix& rho) { return ComplexMatrix(rho.diagonal().asDiagonal()); }

/// Checks that dephasing the input never lowers I(A;B) and that the
/// closed form matches direct evaluation on diagonal inputs.
inline DephasingMaximizerReport verify_dephasing_maximizer(const QuantumChannel& n, std::size_t trials, std::uint64_t seed) {
    if (!is_generalized_dephasing(n)) fail(ErrorCode::NotDephasing, "channel does not fix the computational basis");
    DephasingMaximizerReport rep;
    rep.trials = trials;
    rep.seed = seed;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        const auto rho = random_density(n.dim_in(), rng);
        const DensityOperator diag(dephase(rho.matrix()));
        const double i_rho = ea_mutual_information(n, rho);
        const double i_diag = ea_mutual_information(n, diag);
        rep.min_gain = std::min(rep.min_gain, i_diag - i_rho);
        std::vector<double> r(n.dim_in());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = diag.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        rep.closed_form_max_error = std::max(rep.closed_form_max_error, std::abs(dephasing_closed_form(n, r) - i_diag));
    }
    rep.pass = rep.min_gain >= -tol::kDephasingSlack && rep.closed_form_max_error <= tol::kClosedForm;
    return rep;
}

/// Norm of the simplex-tangent projection of ∇ [2H(r) − H(Σ r φ)] at the
/// uniform r, by central differences.
inline double lagrange_stationarity(const QuantumChannel& n, double h = kFiniteDifferenceStep) {
    const std::size_t d = n.dim_in();
    std::vector<double> r(d, 1.0 / static_cast<double>(d)), grad(d);
    for (std::size_t i = 0; i < d; ++i) {
        auto plus = r, minus = r;
        plus[i] += h;
        minus[i] -= h;
        grad[i] = (dephasing_closed_form(n, plus) - dephasing_closed_form(n, minus)) / (2 * h);
    }
    const double mean = std::accumulate(grad.begin(), grad.end(), 0.0) / static_cast<double>(d);
    double norm2 = 0;
    for (double g : grad) norm2 += (g - mean) * (g - mean);
    return std::sqrt(norm2);
}

struct ConcavityReport {
    std::size_t pairs = 0;
    double min_gap = std::numeric_limits<double>::infinity();  // I(mix) − mix of I
    bool pass = false;
};

/// Concavity of I(AB;C) in the joint input, on mixtures of random diagonal
/// product inputs with λ ∈ {0.25, 0.5, 0.75}.
inline ConcavityReport concavity_spot_check(const QuantumChannel& m, std::size_t pairs, std::uint64_t seed) {
    const auto [da, db] = detail::sender_dims(m);
    const QuantumChannel joint(m.kraus());
    const auto jc = complementary_channel(joint);
    auto diag_product = [&](Rng& rng) {
        const auto p1 = random_distribution(da, rng), p2 = random_distribution(db, rng);
        ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
        ComplexMatrix b = ComplexMatrix::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
        for (std::size_t i = 0; i < da; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p1[i];
        for (std::size_t i = 0; i < db; ++i) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p2[i];
        return tensor(a, b);
    };
    ConcavityReport rep;
    rep.pairs = pairs;
    for (std::size_t t = 0; t < pairs; ++t) {
        Rng rng = Rng::substream(seed, t);
        const ComplexMatrix rho = diag_product(rng), sigma = diag_product(rng);
        const double ir = detail::ea_objective(joint, jc, rho), is = detail::ea_objective(joint, jc, sigma);
        for (double lambda : {0.25, 0.5, 0.75}) {
            const double imix = detail::ea_objective(joint, jc, lambda * rho + (1 - lambda) * sigma);
            rep.min_gap = std::min(rep.min_gap, imix - (lambda * ir + (1 - lambda) * is));
        }
    }
    rep.pass = pairs == 0 || rep.min_gap >= -tol::kClosedForm;
    return rep;
}

}  // namespace qmacea
