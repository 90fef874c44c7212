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

// Method of types: type vectors, type classes, typical sets and the typical
// subspace projectors built from them in a state's eigenbasis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "qmacea/entropy.hpp"
#include "qmacea/qmath.hpp"

namespace qmacea {

inline constexpr std::size_t kMaxSequences = std::size_t{1} << 20;
// Typicality boundary |t_a − p_a| ≤ δ is closed; this absorbs the rounding of k/n.
inline constexpr double kTypicalityBoundaryEps = 1e-12;

struct TypeVector {
    std::vector<std::size_t> counts;

    std::size_t alphabet_size() const { return counts.size(); }
    std::size_t n() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }
    double frequency(std::size_t a) const { return static_cast<double>(counts.at(a)) / static_cast<double>(n()); }

    friend bool operator==(const TypeVector&, const TypeVector&) = default;
};

/// n! / Π counts! (exact for every size the enumeration cap admits).
inline std::uint64_t multinomial(const std::vector<std::size_t>& counts) {
    std::uint64_t result = 1;
    std::size_t placed = 0;
    for (auto c : counts) {
        // C(placed + c, c) built incrementally keeps every step integral
        for (std::size_t k = 1; k <= c; ++k) {
            result = result * (placed + k) / k;
        }
        placed += c;
    }
    return result;
}

inline std::size_t checked_power(std::size_t base, std::size_t n, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / std::max<std::size_t>(base, 1)) fail(ErrorCode::DimensionCap, "alphabet^n exceeds cap");
        total *= base;
    }
    if (total > cap) fail(ErrorCode::DimensionCap, "alphabet^n exceeds cap");
    return total;
}

inline TypeVector type_of_sequence(std::span<const std::size_t> x, std::size_t alphabet_size) {
    TypeVector t{std::vector<std::size_t>(alphabet_size, 0)};
    for (auto letter : x) {
        if (letter >= alphabet_size) fail(ErrorCode::AlphabetError, "letter " + std::to_string(letter) + " out of range");
        ++t.counts[letter];
    }
    return t;
}

/// Letters of sequence `index` (composite index, first letter most significant).
inline std::vector<std::size_t> sequence_letters(std::size_t index, std::size_t n, std::size_t alphabet_size) {
    std::vector<std::size_t> letters(n);
    for (std::size_t k = n; k-- > 0;) {
        letters[k] = index % alphabet_size;
        index /= alphabet_size;
    }
    return letters;
}

struct TypeClass {
    TypeVector type;
    std::uint64_t size = 0;
    std::vector<std::size_t> members;  // ascending composite indices

    std::size_t dim() const { return members.size(); }
};

namespace detail {

inline void compositions(std::size_t remaining, std::size_t slot, std::vector<std::size_t>& current,
                         std::vector<TypeVector>& out) {
    if (slot + 1 == current.size()) {
        current[slot] = remaining;
        out.push_back(TypeVector{current});
        return;
    }
    for (std::size_t c = remaining + 1; c-- > 0;) {
        current[slot] = c;
        compositions(remaining - c, slot + 1, current, out);
    }
}

}  // namespace detail

/// Every type of length-n sequences over the alphabet, in descending
/// lexicographic order of the count vector.
inline std::vector<TypeVector> enumerate_types(std::size_t n, std::size_t alphabet_size) {
    if (alphabet_size == 0) fail(ErrorCode::AlphabetError, "empty alphabet");
    std::vector<TypeVector> out;
    std::vector<std::size_t> current(alphabet_size, 0);
    detail::compositions(n, 0, current, out);
    return out;
}

/// All type classes of length-n sequences, ordered by descending
/// lexicographic count vector (equivalently, by first occurrence when
/// sequences are scanned in index order).
inline std::vector<TypeClass> enumerate_type_classes(std::size_t n, std::size_t alphabet_size) {
    const std::size_t total = checked_power(alphabet_size, n, kMaxSequences);
    std::vector<TypeClass> classes;
    std::map<std::vector<std::size_t>, std::size_t> position;
    for (auto& t : enumerate_types(n, alphabet_size)) {
        position.emplace(t.counts, classes.size());
        classes.push_back(TypeClass{t, multinomial(t.counts), {}});
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto letters = sequence_letters(idx, n, alphabet_size);
        classes[position.at(type_of_sequence(letters, alphabet_size).counts)].members.push_back(idx);
    }
    return classes;
}

inline bool is_typical(const TypeVector& t, std::span<const double> p, double delta) {
    if (t.alphabet_size() != p.size()) fail(ErrorCode::AlphabetError, "type and distribution sizes differ");
    for (std::size_t a = 0; a < p.size(); ++a)
        if (std::abs(t.frequency(a) - p[a]) > delta + kTypicalityBoundaryEps) return false;
    return true;
}

/// log2 of p^n(x^n) for any x^n of type t (−inf when a used letter has p = 0).
inline double log2_sequence_probability(const TypeVector& t, std::span<const double> p) {
    double lp = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (t.counts[a] == 0) continue;
        if (p[a] <= 0) return -std::numeric_limits<double>::infinity();
        lp += static_cast<double>(t.counts[a]) * std::log2(p[a]);
    }
    return lp;
}

struct TypicalSet {
    std::vector<TypeClass> classes;
    std::size_t size = 0;
    double probability = 0;  // p^n of the set

    std::vector<std::size_t> sequences() const {
        std::vector<std::size_t> out;
        for (const auto& c : classes) out.insert(out.end(), c.members.begin(), c.members.end());
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline TypicalSet typical_set(const std::vector<double>& p, std::size_t n, double delta) {
    TypicalSet out;
    for (auto& c : enumerate_type_classes(n, p.size())) {
        if (!is_typical(c.type, p, delta)) continue;
        out.size += c.members.size();
        out.probability += static_cast<double>(c.size) * std::exp2(log2_sequence_probability(c.type, p));
        out.classes.push_back(std::move(c));
    }
    return out;
}

/// Σ_{x ∈ sequences} |e_x⟩⟨e_x| with |e_x⟩ = basis[:,x_1] ⊗ … ⊗ basis[:,x_n].
inline ComplexMatrix sequence_projector(const ComplexMatrix& basis, std::size_t n, std::span<const std::size_t> sequences) {
    const auto d = static_cast<std::size_t>(basis.rows());
    const std::size_t total = checked_power(d, n, 4096);
    ComplexMatrix selected(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(sequences.size()));
    for (std::size_t j = 0; j < sequences.size(); ++j) {
        const auto letters = sequence_letters(sequences[j], n, d);
        ComplexMatrix col = ComplexMatrix::Identity(1, 1);
        for (auto l : letters) col = tensor(col, ComplexMatrix(basis.col(static_cast<Eigen::Index>(l))));
        selected.col(static_cast<Eigen::Index>(j)) = col.col(0);
    }
    return selected * selected.adjoint();
}

/// Type projector Π^n_t in the product basis built from `basis` columns.
inline ComplexMatrix type_projector(const TypeVector& t, const ComplexMatrix& basis) {
    const auto d = static_cast<std::size_t>(basis.rows());
    if (t.alphabet_size() != d) fail(ErrorCode::AlphabetError, "type alphabet differs from basis size");
    const std::size_t n = t.n();
    for (const auto& c : enumerate_type_classes(n, d))
        if (c.type == t) return sequence_projector(basis, n, c.members);
    fail(ErrorCode::AlphabetError, "type not found");
}

/// log2 Tr Π^n_t against n[H − η]: returns the η this type requires.
inline double measured_eta(const TypeVector& t, double entropy_bits) {
    return entropy_bits - std::log2(static_cast<double>(multinomial(t.counts))) / static_cast<double>(t.n());
}

struct TypicalProjector {
    std::size_t n = 0;
    double delta = 0;
    std::vector<double> spectrum;  // eigenvalues of ρ, descending
    ComplexMatrix basis;           // eigenvectors of ρ
    ComplexMatrix projector;
    std::vector<TypeVector> types;
    std::size_t rank = 0;
};

inline std::vector<double> spectrum_of(const EigenDecomposition& eig) {
    std::vector<double> p(static_cast<std::size_t>(eig.values.size()));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(eig.values(static_cast<Eigen::Index>(i)), 0.0);
    return p;
}

/// Π^n_{ρ,δ} = Σ_{t ∈ τ_δ} Π^n_t in the eigenbasis of ρ.
inline TypicalProjector typical_projector(const ComplexMatrix& rho, std::size_t n, double delta) {
    const auto eig = eig_hermitian(rho);
    TypicalProjector out;
    out.n = n;
    out.delta = delta;
    out.spectrum = spectrum_of(eig);
    out.basis = eig.vectors;
    const auto set = typical_set(out.spectrum, n, delta);
    for (const auto& c : set.classes) out.types.push_back(c.type);
    const auto seqs = set.sequences();
    out.rank = seqs.size();
    out.projector = sequence_projector(out.basis, n, seqs);
    return out;
}

inline TypicalProjector typical_projector(const DensityOperator& rho, std::size_t n, double delta) {
    return typical_projector(rho.matrix(), n, delta);
}

// ---------------------------------------------------------------------------
// Property verification (exact; works on the spectrum, no matrices needed)

struct PropertyCheck {
    double value = 0;
    double bound = 0;
    double margin = 0;  // ≥ 0 when the inequality holds
    double tightest_c = 0;
    bool holds = true;
};

struct TypicalityReport {
    std::size_t n = 0;
    double delta = 0;
    double epsilon = 0;
    double entropy = 0;
    std::size_t rank = 0;
    bool empty = false;
    PropertyCheck mass;          // Tr ρ^⊗n Π ≥ 1 − ε (reported, not part of pass)
    PropertyCheck sandwich_low;  // λ_min(ΠρΠ) ≥ 2^{−n[H + cδ]}
    PropertyCheck sandwich_high; // λ_max(ΠρΠ) ≤ 2^{−n[H − cδ]}
    PropertyCheck cardinality;   // Tr Π ≤ 2^{n[H + cδ]}
    PropertyCheck type_dimension;  // min_t Tr Π_t ≥ 2^{n[H − η]}, tightest_c holds η
    double tightest_c = 0;
    double eta = 0;

    bool pass() const { return sandwich_low.holds && sandwich_high.holds && cardinality.holds && type_dimension.holds; }
};

/// The constant c is never assumed: the report carries the smallest c for
/// which the sandwich bounds hold and then tests the cardinality bound with it.
/// Likewise η is measured from the smallest typical type class.
inline TypicalityReport verify_typical_properties(const std::vector<double>& spectrum, std::size_t n, double delta,
                                                  double epsilon) {
    if (!(delta > 0)) fail(ErrorCode::BadOperands, "delta must be positive");
    TypicalityReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.epsilon = epsilon;
    rep.entropy = shannon_entropy(spectrum);
    const double nn = static_cast<double>(n);
    const double h = rep.entropy;

    double mass = 0;
    double log_min = std::numeric_limits<double>::infinity();
    double log_max = -std::numeric_limits<double>::infinity();
    double min_class_log = std::numeric_limits<double>::infinity();
    std::size_t rank = 0;
    for (const auto& t : enumerate_types(n, spectrum.size())) {
        if (!is_typical(t, spectrum, delta)) continue;
        const auto size = multinomial(t.counts);
        rank += size;
        const double lp = log2_sequence_probability(t, spectrum);
        min_class_log = std::min(min_class_log, std::log2(static_cast<double>(size)));
        if (std::isfinite(lp)) {
            mass += static_cast<double>(size) * std::exp2(lp);
            log_min = std::min(log_min, lp);
            log_max = std::max(log_max, lp);
        }
    }
    rep.rank = rank;
    rep.empty = rank == 0;

    rep.mass.value = mass;
    rep.mass.bound = 1.0 - epsilon;
    rep.mass.margin = mass - rep.mass.bound;
    rep.mass.holds = rep.mass.margin >= 0;

    if (!std::isfinite(log_min)) {
        // nothing nonzero in the typical subspace: sandwich bounds are vacuous
        rep.sandwich_low.holds = rep.sandwich_high.holds = true;
        rep.cardinality.value = static_cast<double>(rank);
        rep.cardinality.holds = rank == 0;
        rep.cardinality.bound = rank == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return rep;
    }
    const double c_low = (-log_min / nn - h) / delta;
    const double c_high = (log_max / nn + h) / delta;
    rep.tightest_c = std::max({0.0, c_low, c_high});
    const double c = rep.tightest_c;

    rep.sandwich_low.value = std::exp2(log_min);
    rep.sandwich_low.bound = std::exp2(-nn * (h + c * delta));
    rep.sandwich_low.margin = log_min + nn * (h + c * delta);  // in bits
    rep.sandwich_low.tightest_c = c_low;
    rep.sandwich_low.holds = rep.sandwich_low.margin >= -1e-9;

    rep.sandwich_high.value = std::exp2(log_max);
    rep.sandwich_high.bound = std::exp2(-nn * (h - c * delta));
    rep.sandwich_high.margin = -nn * (h - c * delta) - log_max;
    rep.sandwich_high.tightest_c = c_high;
    rep.sandwich_high.holds = rep.sandwich_high.margin >= -1e-9;

    rep.cardinality.value = static_cast<double>(rank);
    rep.cardinality.bound = std::exp2(nn * (h + c * delta));
    rep.cardinality.margin = nn * (h + c * delta) - std::log2(static_cast<double>(rank));
    rep.cardinality.tightest_c = (std::log2(static_cast<double>(rank)) / nn - h) / delta;
    rep.cardinality.holds = rep.cardinality.margin >= -1e-9;

    rep.eta = h - min_class_log / nn;
    rep.type_dimension.value = std::exp2(min_class_log);
    rep.type_dimension.bound = std::exp2(nn * (h - rep.eta));
    rep.type_dimension.margin = min_class_log - nn * (h - rep.eta);
    rep.type_dimension.tightest_c = rep.eta;
    rep.type_dimension.holds = rep.type_dimension.margin >= -1e-9;
    return rep;
}

inline TypicalityReport verify_typical_properties(const DensityOperator& rho, std::size_t n, double delta, double epsilon) {
    return verify_typical_properties(spectrum_of(eig_hermitian(rho.matrix())), n, delta, epsilon);
}

struct TypicalitySweep {
    std::vector<TypicalityReport> reports;
    bool mass_monotone = true;  // Tr ρ^⊗n Π non-decreasing along the sweep

    bool pass() const {
        return std::all_of(reports.begin(), reports.end(), [](const TypicalityReport& r) { return r.pass(); });
    }
};

inline TypicalitySweep sweep_typical_properties(const DensityOperator& rho, const std::vector<std::size_t>& ns,
                                                double delta, double epsilon) {
    TypicalitySweep sweep;
    for (auto n : ns) sweep.reports.push_back(verify_typical_properties(rho, n, delta, epsilon));
    for (std::size_t i = 1; i < sweep.reports.size(); ++i)
        if (sweep.reports[i].mass.value < sweep.reports[i - 1].mass.value - 1e-15) sweep.mass_monotone = false;
    return sweep;
}

}  // namespace qmacea
