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

// Entropic functionals (base-2 logarithms, so every value is in bits) and
// randomized checks of the entropy identities used by the converse.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qmacea/qmath.hpp"
#include "qmacea/random.hpp"

namespace qmacea {

namespace tol {
// Eigenvalues below this contribute 0 (0 log 0 := 0).
inline constexpr double kEntropyClamp = 1e-12;
}  // namespace tol

inline double shannon_entropy(std::span<const double> p) {
    double h = 0;
    for (double x : p)
        if (x > tol::kEntropyClamp) h -= x * std::log2(x);
    return h;
}

inline double shannon_entropy(const std::vector<double>& p) { return shannon_entropy(std::span<const double>(p)); }

inline double von_neumann_entropy(const ComplexMatrix& rho) {
    const auto eig = eig_hermitian(rho);
    std::vector<double> spectrum(eig.values.data(), eig.values.data() + eig.values.size());
    return shannon_entropy(spectrum);
}

inline double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.matrix()); }

using LabelSet = std::vector<std::string>;

/// A density operator whose factors carry names (A, B, C, E, ...).
class LabeledState {
public:
    LabeledState(DensityOperator state, std::vector<std::string> labels)
        : state_(std::move(state)), labels_(std::move(labels)) {
        if (labels_.size() != state_.subsystem_dims().size())
            fail(ErrorCode::LabelError, "label count differs from subsystem count");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j]) fail(ErrorCode::LabelError, "duplicate label " + labels_[i]);
    }

    const DensityOperator& state() const { return state_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::vector<std::size_t> indices(const LabelSet& part) const {
        std::vector<std::size_t> out;
        for (const auto& l : part) {
            auto it = std::find(labels_.begin(), labels_.end(), l);
            if (it == labels_.end()) fail(ErrorCode::LabelError, "unknown label " + l);
            const auto idx = static_cast<std::size_t>(it - labels_.begin());
            if (std::find(out.begin(), out.end(), idx) != out.end()) fail(ErrorCode::LabelError, "repeated label " + l);
            out.push_back(idx);
        }
        return out;
    }

    ComplexMatrix marginal(const LabelSet& part) const {
        const auto idx = indices(part);
        if (idx.empty()) return ComplexMatrix::Identity(1, 1);
        return partial_trace(state_.matrix(), state_.subsystem_dims(), idx);
    }

    /// H of the marginal on `part`; the empty set has entropy 0.
    double entropy(const LabelSet& part) const {
        if (part.empty()) return 0.0;
        return von_neumann_entropy(marginal(part));
    }

private:
    DensityOperator state_;
    std::vector<std::string> labels_;
};

namespace detail {

inline LabelSet join(std::initializer_list<const LabelSet*> parts) {
    LabelSet out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

inline void require_disjoint(std::initializer_list<const LabelSet*> parts) {
    const auto all = join(parts);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j]) fail(ErrorCode::LabelError, "label " + all[i] + " appears in more than one part");
}

}  // namespace detail

/// H(A|B) = H(AB) − H(B)
inline double conditional_entropy(const LabeledState& s, const LabelSet& a, const LabelSet& b) {
    detail::require_disjoint({&a, &b});
    return s.entropy(detail::join({&a, &b})) - s.entropy(b);
}

/// I(A;B) = H(A) + H(B) − H(AB)
inline double mutual_information(const LabeledState& s, const LabelSet& a, const LabelSet& b) {
    detail::require_disjoint({&a, &b});
    return s.entropy(a) + s.entropy(b) - s.entropy(detail::join({&a, &b}));
}

/// I(A;C|B) = H(AB) + H(BC) − H(ABC) − H(B)
inline double conditional_mutual_information(const LabeledState& s, const LabelSet& a, const LabelSet& c,
                                             const LabelSet& b) {
    detail::require_disjoint({&a, &b, &c});
    return s.entropy(detail::join({&a, &b})) + s.entropy(detail::join({&b, &c})) -
           s.entropy(detail::join({&a, &b, &c})) - s.entropy(b);
}

/// I(A⟩C) = I(A;C) − H(A)
inline double coherent_information(const LabeledState& s, const LabelSet& a, const LabelSet& c) {
    return mutual_information(s, a, c) - s.entropy(a);
}

// ---------------------------------------------------------------------------
// Randomized lemma checks

struct EntropyLemmaReport {
    std::size_t trials = 0;
    std::size_t max_dim = 0;
    std::uint64_t seed = 0;
    // max over pure ABE of |H(B|E) + H(B|A)|
    double duality_max_violation = 0;
    // min over mixed ABE of H(B) + H(B|E) − I(A;B)
    double bound_min_slack = std::numeric_limits<double>::infinity();
    bool duality_pass = true;
    bool bound_pass = true;

    bool pass() const { return duality_pass && bound_pass; }
};

inline constexpr double kDualityTolerance = 1e-8;
inline constexpr double kInequalitySlack = 1e-9;

namespace detail {

inline Dims random_tripartite_dims(std::size_t max_dim, Rng& rng) {
    const std::size_t lo = 2, span = max_dim >= lo ? max_dim - lo + 1 : 1;
    Dims dims(3);
    for (auto& d : dims) d = max_dim >= lo ? lo + rng.uniform_index(span) : max_dim;
    return dims;
}

}  // namespace detail

/// Pure tripartite states check H(B|E) = −H(B|A); mixed tripartite states check
/// I(A;B) ≤ H(B) + H(B|E). Trial k samples from substream (seed, k) for the
/// pure family and (seed, trials + k) for the mixed family.
inline EntropyLemmaReport verify_entropy_lemmas(std::size_t trials, std::size_t max_dim, std::uint64_t seed) {
    if (trials == 0) fail(ErrorCode::BadOperands, "verify_entropy_lemmas needs trials >= 1");
    EntropyLemmaReport rep;
    rep.trials = trials;
    rep.max_dim = max_dim;
    rep.seed = seed;
    const LabelSet A{"A"}, B{"B"}, E{"E"};
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        const Dims dims = detail::random_tripartite_dims(max_dim, rng);
        const auto psi = random_pure(product(dims), rng, dims);
        const LabeledState s(psi.density(), {"A", "B", "E"});
        const double v = std::abs(conditional_entropy(s, B, E) + conditional_entropy(s, B, A));
        rep.duality_max_violation = std::max(rep.duality_max_violation, v);
    }
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, trials + t);
        const Dims dims = detail::random_tripartite_dims(max_dim, rng);
        const LabeledState s(random_density(product(dims), rng, dims), {"A", "B", "E"});
        const double slack = s.entropy(B) + conditional_entropy(s, B, E) - mutual_information(s, A, B);
        rep.bound_min_slack = std::min(rep.bound_min_slack, slack);
    }
    rep.duality_pass = rep.duality_max_violation <= kDualityTolerance;
    rep.bound_pass = rep.bound_min_slack >= -kInequalitySlack;
    return rep;
}

struct SubadditivityReport {
    std::size_t trials = 0;
    std::size_t max_dim = 0;
    std::uint64_t seed = 0;
    double min_conditional_mi = std::numeric_limits<double>::infinity();
    bool pass = true;
};

/// Strong subadditivity I(A;C|B) ≥ 0 on Ginibre tripartite states.
inline SubadditivityReport verify_strong_subadditivity(std::size_t trials, std::size_t max_dim, std::uint64_t seed) {
    SubadditivityReport rep;
    rep.trials = trials;
    rep.max_dim = max_dim;
    rep.seed = seed;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        const Dims dims = detail::random_tripartite_dims(max_dim, rng);
        const LabeledState s(random_density(product(dims), rng, dims), {"A", "B", "C"});
        rep.min_conditional_mi = std::min(rep.min_conditional_mi, conditional_mutual_information(s, {"A"}, {"C"}, {"B"}));
    }
    rep.pass = trials == 0 || rep.min_conditional_mi >= -kInequalitySlack;
    return rep;
}

}  // namespace qmacea
