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

// Dense complex linear algebra and quantum-state primitives.
//
// Index convention (used everywhere in the library): in a tensor product
// a ⊗ b the left factor is the most significant, so the composite index of
// (i_left, i_right) is i_left * dim_right + i_right. Multipartite states carry
// their ordered factor dimensions in `subsystem_dims`.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmacea/errors.hpp"

namespace qmacea {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kUnitNorm = 1e-12;
// Eigenvalues in [-kPsd, -kRepairFloor) trigger clip-and-renormalize; anything
// in [-kRepairFloor, 0) is treated as a numerical zero and left alone.
inline constexpr double kRepairFloor = 1e-12;
}  // namespace tol

// Largest Hilbert-space dimension a tensor product may produce, and the largest
// dense matrix (entry count) any routine will materialize.
inline constexpr std::size_t kMaxHilbertDim = std::size_t{1} << 20;
inline constexpr std::size_t kMaxMatrixEntries = std::size_t{4096} * 4096;

inline std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline void check_matrix_cap(std::size_t rows, std::size_t cols) {
    if (rows > kMaxHilbertDim || cols > kMaxHilbertDim || (cols > 1 && rows * cols > kMaxMatrixEntries))
        fail(ErrorCode::DimensionCap, "matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                                          " exceeds the dimension cap");
}

inline double max_abs_entry(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

inline double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs_entry(m - m.adjoint());
}

// ---------------------------------------------------------------------------
// Tensor products

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
    const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
    check_matrix_cap(rows, cols);
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (const auto& f : factors) out = tensor(out, f);
    return out;
}

inline ComplexMatrix tensor_power(const ComplexMatrix& m, std::size_t n) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < n; ++i) out = tensor(out, m);
    return out;
}

inline ComplexVector ket(std::size_t dim, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline ComplexMatrix basis_projector(std::size_t dim, std::size_t index) {
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    p(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return p;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EigenDecomposition {
    RealVector values;      // descending
    ComplexMatrix vectors;  // column k belongs to values(k)
};

namespace detail {

inline bool exactly_diagonal(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Complex(0.0)) return false;
    return true;
}

// Rotate the column so its first component of magnitude > 1e-10 is positive real.
inline void fix_phase(Eigen::Ref<ComplexVector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-10) {
            v *= std::conj(v(i)) / mag;
            v(i) = Complex(v(i).real(), 0.0);
            return;
        }
    }
}

}  // namespace detail

/// Eigenvalues sorted descending with a deterministic eigenvector phase. Exactly
/// diagonal inputs return the standard basis (ties keep index order), which the
/// typical-subspace and cq-channel code relies on.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "eig_hermitian needs a square matrix");
    if (!all_finite(m)) fail(ErrorCode::NotHermitian, "matrix has non-finite entries");
    if (hermiticity_defect(m) > tol::kHermitian)
        fail(ErrorCode::NotHermitian, "max |m - m^dagger| = " + std::to_string(hermiticity_defect(m)));
    const Eigen::Index n = m.rows();

    RealVector values(n);
    ComplexMatrix vectors;
    if (detail::exactly_diagonal(m)) {
        for (Eigen::Index i = 0; i < n; ++i) values(i) = m(i, i).real();
        vectors = ComplexMatrix::Identity(n, n);
    } else {
        ComplexMatrix sym = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
        values = solver.eigenvalues();
        vectors = solver.eigenvectors();
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });

    EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = values(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
        detail::fix_phase(out.vectors.col(k));
    }
    return out;
}

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
    const auto eig = eig_hermitian(m);
    RealVector mapped(eig.values.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.values(i));
    return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
    return hermitian_function(m, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

/// Pseudo-inverse square root: eigenvalues below `threshold` map to 0.
inline ComplexMatrix pinv_sqrt(const ComplexMatrix& m, double threshold) {
    return hermitian_function(m, [threshold](double x) { return x >= threshold ? 1.0 / std::sqrt(x) : 0.0; });
}

inline double min_eigenvalue(const ComplexMatrix& m) {
    const auto eig = eig_hermitian(m);
    return eig.values(eig.values.size() - 1);
}

inline double max_eigenvalue(const ComplexMatrix& m) {
    return eig_hermitian(m).values(0);
}

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
inline double trace_norm(const ComplexMatrix& m) {
    return eig_hermitian(m).values.cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Subsystem bookkeeping

namespace detail {

inline void check_dims(const Dims& dims, Eigen::Index dim) {
    if (dims.empty() || product(dims) != static_cast<std::size_t>(dim))
        fail(ErrorCode::FactorError, "subsystem dims do not multiply to " + std::to_string(dim));
}

// Digits of a composite index, most significant first.
inline void unrank(std::size_t index, const Dims& dims, std::vector<std::size_t>& digits) {
    digits.resize(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

// new index of every old composite index when subsystem order[i] moves to slot i.
inline std::vector<std::size_t> permutation_map(const Dims& dims, std::span<const std::size_t> order) {
    if (order.size() != dims.size()) fail(ErrorCode::FactorError, "permutation size mismatch");
    std::vector<bool> seen(dims.size(), false);
    for (auto o : order) {
        if (o >= dims.size() || seen[o]) fail(ErrorCode::FactorError, "invalid subsystem permutation");
        seen[o] = true;
    }
    const std::size_t total = product(dims);
    std::vector<std::size_t> map(total), digits;
    for (std::size_t idx = 0; idx < total; ++idx) {
        unrank(idx, dims, digits);
        std::size_t out = 0;
        for (auto o : order) out = out * dims[o] + digits[o];
        map[idx] = out;
    }
    return map;
}

}  // namespace detail

inline Dims permuted_dims(const Dims& dims, std::span<const std::size_t> order) {
    Dims out;
    for (auto o : order) out.push_back(dims.at(o));
    return out;
}

/// Reorders tensor factors: factor order[i] of the input becomes factor i.
inline ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, std::span<const std::size_t> order) {
    detail::check_dims(dims, m.rows());
    const auto map = detail::permutation_map(dims, order);
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
                static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)])) = m(i, j);
    return out;
}

inline ComplexVector permute_subsystems(const ComplexVector& v, const Dims& dims, std::span<const std::size_t> order) {
    detail::check_dims(dims, v.size());
    const auto map = detail::permutation_map(dims, order);
    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)])) = v(i);
    return out;
}

/// Trace over every factor not in `keep`; kept factors stay in their original
/// relative order regardless of the order given in `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::vector<std::size_t> keep) {
    detail::check_dims(dims, m.rows());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
        if (k >= dims.size()) fail(ErrorCode::FactorError, "kept subsystem " + std::to_string(k) + " undeclared");

    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) kept[k] = true;
    std::size_t keep_dim = 1, trace_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? keep_dim : trace_dim) *= dims[k];

    // groups[t][k] = full index whose traced digits encode t and kept digits encode k
    std::vector<std::vector<Eigen::Index>> groups(trace_dim, std::vector<Eigen::Index>(keep_dim));
    std::vector<std::size_t> digits;
    for (std::size_t idx = 0; idx < product(dims); ++idx) {
        detail::unrank(idx, dims, digits);
        std::size_t ki = 0, ti = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k]) ki = ki * dims[k] + digits[k];
            else ti = ti * dims[k] + digits[k];
        }
        groups[ti][ki] = static_cast<Eigen::Index>(idx);
    }

    const auto kd = static_cast<Eigen::Index>(keep_dim);
    ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
    for (const auto& g : groups)
        for (Eigen::Index b = 0; b < kd; ++b)
            for (Eigen::Index a = 0; a < kd; ++a) out(a, b) += m(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]);
    return out;
}

// ---------------------------------------------------------------------------
// States

/// Hermitian, PSD, trace-one matrix with its factorization. Construction
/// validates; eigenvalues in [-1e-9, -1e-12) are clipped and the state
/// renormalized, which is reported through repaired().
class DensityOperator {
public:
    DensityOperator(ComplexMatrix mat, Dims dims = {}) : mat_(std::move(mat)), dims_(std::move(dims)) {
        if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
            fail(ErrorCode::InvalidState, "density operator must be a non-empty square matrix");
        if (dims_.empty()) dims_ = {static_cast<std::size_t>(mat_.rows())};
        detail::check_dims(dims_, mat_.rows());
        if (!all_finite(mat_)) fail(ErrorCode::InvalidState, "non-finite entries");
        if (hermiticity_defect(mat_) > tol::kHermitian) fail(ErrorCode::NotHermitian, "density operator not Hermitian");
        mat_ = 0.5 * (mat_ + mat_.adjoint());
        if (std::abs(mat_.trace().real() - 1.0) > tol::kTrace)
            fail(ErrorCode::InvalidState, "trace " + std::to_string(mat_.trace().real()) + " differs from 1");

        auto eig = eig_hermitian(mat_);
        const double lowest = eig.values(eig.values.size() - 1);
        if (lowest < -tol::kPsd) fail(ErrorCode::InvalidState, "negative eigenvalue " + std::to_string(lowest));
        if (lowest < -tol::kRepairFloor) {
            eig.values = eig.values.cwiseMax(0.0);
            eig.values /= eig.values.sum();
            mat_ = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
            repaired_ = true;
        }
    }

    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    const ComplexMatrix& matrix() const { return mat_; }
    const Dims& subsystem_dims() const { return dims_; }
    bool repaired() const { return repaired_; }

    DensityOperator with_dims(Dims dims) const {
        DensityOperator out = *this;
        detail::check_dims(dims, mat_.rows());
        out.dims_ = std::move(dims);
        return out;
    }

private:
    ComplexMatrix mat_;
    Dims dims_;
    bool repaired_ = false;
};

class PureState {
public:
    PureState(ComplexVector amplitudes, Dims dims = {}) : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
        if (amps_.size() == 0) fail(ErrorCode::InvalidState, "empty state vector");
        if (dims_.empty()) dims_ = {static_cast<std::size_t>(amps_.size())};
        detail::check_dims(dims_, amps_.size());
        if (!all_finite(amps_)) fail(ErrorCode::InvalidState, "non-finite amplitudes");
        if (std::abs(amps_.norm() - 1.0) > tol::kUnitNorm)
            fail(ErrorCode::InvalidState, "state vector norm " + std::to_string(amps_.norm()));
    }

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const ComplexVector& amplitudes() const { return amps_; }
    const Dims& subsystem_dims() const { return dims_; }

    DensityOperator density() const { return DensityOperator(amps_ * amps_.adjoint(), dims_); }

private:
    ComplexVector amps_;
    Dims dims_;
};

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    Dims dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    return DensityOperator(tensor(a.matrix(), b.matrix()), std::move(dims));
}

inline PureState tensor(const PureState& a, const PureState& b) {
    Dims dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    ComplexMatrix v = tensor(ComplexMatrix(a.amplitudes()), ComplexMatrix(b.amplitudes()));
    return PureState(v.col(0), std::move(dims));
}

inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& keep) {
    Dims kept_dims;
    auto sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto k : sorted) {
        if (k >= rho.subsystem_dims().size()) fail(ErrorCode::FactorError, "kept subsystem undeclared");
        kept_dims.push_back(rho.subsystem_dims()[k]);
    }
    if (kept_dims.empty()) return DensityOperator(ComplexMatrix::Constant(1, 1, rho.matrix().trace()), {1});
    return DensityOperator(partial_trace(rho.matrix(), rho.subsystem_dims(), sorted), std::move(kept_dims));
}

inline DensityOperator maximally_mixed(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return DensityOperator(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

/// (1/sqrt d) sum_i |i>|i>
inline PureState maximally_entangled(std::size_t dim) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim * dim));
    for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i * dim + i)) = 1.0 / std::sqrt(double(dim));
    return PureState(std::move(v), {dim, dim});
}

/// Purification sum_i sqrt(lambda_i) |v_i>^A |i>^R on A ⊗ R, dim R = dim A,
/// eigenvalues descending (qmath eigen convention).
inline PureState purify(const DensityOperator& rho) {
    const auto eig = eig_hermitian(rho.matrix());
    const std::size_t d = rho.dim();
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
    double norm2 = 0;
    for (std::size_t i = 0; i < d; ++i) norm2 += std::max(eig.values(static_cast<Eigen::Index>(i)), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double w = std::sqrt(std::max(eig.values(static_cast<Eigen::Index>(i)), 0.0) / norm2);
        for (std::size_t a = 0; a < d; ++a)
            v(static_cast<Eigen::Index>(a * d + i)) += w * eig.vectors(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i));
    }
    v.normalize();
    return PureState(std::move(v), {d, d});
}

inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorCode::DimensionMismatch, "trace_distance of differently sized operators");
    return trace_norm(a - b);
}

/// ‖a − b‖₁ (no factor 1/2), so values lie in [0, 2].
inline double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    return trace_distance(a.matrix(), b.matrix());
}

/// ‖ζ − ψ‖₁ for pure states, 2 sqrt(1 − |⟨ζ|ψ⟩|²).
inline double pure_state_distance(const ComplexVector& zeta, const ComplexVector& psi) {
    const double overlap = std::norm(zeta.dot(psi));
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap));
}

}  // namespace qmacea
