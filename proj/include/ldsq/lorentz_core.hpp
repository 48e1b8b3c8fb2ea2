#pragma once

// Lorentzian linear algebra on R^{1,n}: inner product, likeness of vectors
// and subspaces (decided through Gram-matrix inertia), exact rank, and
// seeded Lorentz transformations for tests.

#include "ldsq/matrix.hpp"
#include "ldsq/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace ldsq {

enum class VectorClass { SpaceLike, LightLike, TimeLike };
enum class Likeness { TimeLike, SpaceLike, LightLike };

constexpr std::string_view to_string(Likeness l) {
    switch (l) {
    case Likeness::TimeLike: return "time_like";
    case Likeness::SpaceLike: return "space_like";
    case Likeness::LightLike: return "light_like";
    }
    return "?";
}

constexpr std::string_view to_string(VectorClass c) {
    switch (c) {
    case VectorClass::SpaceLike: return "space_like";
    case VectorClass::LightLike: return "light_like";
    case VectorClass::TimeLike: return "time_like";
    }
    return "?";
}

namespace detail {
inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw error(ErrorKind::DimensionMismatch, std::string(what) + ": dimension mismatch");
}
} // namespace detail

/// -x0*y0 + x1*y1 + ... + xn*yn
template <Scalar T>
T lorentz_inner(std::span<const T> x, std::span<const T> y) {
    detail::require_same_size(x.size(), y.size(), "lorentz_inner");
    if (x.empty()) return T(0);
    T s = -(x[0] * y[0]);
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}
template <Scalar T>
T lorentz_inner(const Vec<T>& x, const Vec<T>& y) {
    return lorentz_inner(std::span<const T>(x), std::span<const T>(y));
}

template <Scalar T>
T euclid_inner(std::span<const T> x, std::span<const T> y) {
    detail::require_same_size(x.size(), y.size(), "euclid_inner");
    T s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}
template <Scalar T>
T euclid_inner(const Vec<T>& x, const Vec<T>& y) {
    return euclid_inner(std::span<const T>(x), std::span<const T>(y));
}

/// diag(-1, 1, ..., 1) of size n+1.
template <Scalar T>
Matrix<T> minkowski_metric(std::size_t n) {
    Matrix<T> j = Matrix<T>::identity(n + 1);
    j(0, 0) = T(-1);
    return j;
}

template <Scalar T>
bool is_zero_vector(std::span<const T> v) {
    for (const auto& x : v)
        if (x != T(0)) return false;
    return true;
}

template <Scalar T>
VectorClass vector_likeness(std::span<const T> v) {
    if (is_zero_vector(v)) throw error(ErrorKind::ZeroVector, "likeness undefined for zero vector");
    const T q = lorentz_inner(v, v);
    double scale = 1.0;
    if constexpr (!is_exact_v<T>) scale = euclid_inner(v, v);
    const int s = decide_sign(q, scale).sign;
    if (s > 0) return VectorClass::SpaceLike;
    if (s < 0) return VectorClass::TimeLike;
    return VectorClass::LightLike;
}
template <Scalar T>
VectorClass vector_likeness(const Vec<T>& v) {
    return vector_likeness(std::span<const T>(v));
}

/// Greedy row-echelon accumulator: feeds vectors in order and reports whether
/// each one is independent of those accepted so far.
template <Scalar T>
class EchelonBuilder {
public:
    explicit EchelonBuilder(std::size_t dim, double scale = 1.0) : dim_(dim), scale_(scale) {}

    /// Returns true (and keeps the vector) when v is independent of the accepted set.
    bool add(std::span<const T> v) {
        detail::require_same_size(v.size(), dim_, "echelon");
        Vec<T> r(v.begin(), v.end());
        for (std::size_t b = 0; b < rows_.size(); ++b) {
            const std::size_t c = pivots_[b];
            if (r[c] == T(0)) continue;
            const T f = r[c] / rows_[b][c];
            for (std::size_t j = 0; j < dim_; ++j) r[j] -= f * rows_[b][j];
            r[c] = T(0);
        }
        std::size_t best = dim_;
        for (std::size_t j = 0; j < dim_; ++j) {
            const SignDecision d = decide_sign(r[j], scale_);
            borderline_ = borderline_ || d.borderline;
            if (d.sign != 0 && (best == dim_ || abs_value(r[j]) > abs_value(r[best]))) best = j;
        }
        if (best == dim_) return false;
        rows_.push_back(std::move(r));
        pivots_.push_back(best);
        return true;
    }
    bool add(const Vec<T>& v) { return add(std::span<const T>(v)); }

    std::size_t rank() const noexcept { return rows_.size(); }
    bool borderline() const noexcept { return borderline_; }

private:
    std::size_t dim_;
    double scale_;
    std::vector<Vec<T>> rows_;
    std::vector<std::size_t> pivots_;
    bool borderline_ = false;
};

/// Scale used for float tolerance decisions over a family of vectors.
template <Scalar T>
double magnitude_scale(const std::vector<Vec<T>>& vs) {
    if constexpr (is_exact_v<T>) {
        return 1.0;
    } else {
        double s = 1.0;
        for (const auto& v : vs)
            for (double x : v) s = std::max(s, std::fabs(x));
        return s;
    }
}

/// A linearly independent list of vectors in R^{1,n}.
template <Scalar T>
class SubspaceBasis {
public:
    SubspaceBasis(std::size_t n, std::vector<Vec<T>> vectors) : n_(n), vectors_(std::move(vectors)) {
        if (vectors_.empty()) throw error(ErrorKind::EmptyBasis, "subspace basis is empty");
        if (n_ < 1) throw error(ErrorKind::InvalidArgument, "ambient index n must be >= 1");
        EchelonBuilder<T> e(n_ + 1, magnitude_scale(vectors_));
        for (const auto& v : vectors_) {
            detail::require_same_size(v.size(), n_ + 1, "subspace basis");
            if (!e.add(v)) throw error(ErrorKind::InvalidArgument, "subspace basis vectors are linearly dependent");
        }
        borderline_ = e.borderline();
    }
    explicit SubspaceBasis(std::vector<Vec<T>> vectors)
        : SubspaceBasis(vectors.empty() ? 1 : vectors.front().size() - 1, std::move(vectors)) {}

    std::size_t ambient() const noexcept { return n_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    const std::vector<Vec<T>>& vectors() const noexcept { return vectors_; }
    const Vec<T>& operator[](std::size_t i) const { return vectors_[i]; }
    bool borderline() const noexcept { return borderline_; }

private:
    std::size_t n_;
    std::vector<Vec<T>> vectors_;
    bool borderline_ = false;
};

template <Scalar T>
Matrix<T> gram_matrix(const SubspaceBasis<T>& basis) {
    const std::size_t m = basis.size();
    Matrix<T> g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            g(i, j) = lorentz_inner(basis[i], basis[j]);
            g(j, i) = g(i, j);
        }
    return g;
}

/// Counts of positive, zero and negative entries of a congruent diagonal form.
struct Inertia {
    std::size_t positive = 0;
    std::size_t zero = 0;
    std::size_t negative = 0;
    bool borderline = false;
};

/// Sylvester inertia by symmetric congruence elimination. Diagonal pivots are
/// used when available; otherwise a row/column pair is added to manufacture one.
template <Scalar T>
Inertia inertia(Matrix<T> m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw error(ErrorKind::DimensionMismatch, "inertia of a non-square matrix");
    double scale = 1.0;
    if constexpr (!is_exact_v<T>) scale = std::max(1.0, max_abs(m));

    auto sym_swap = [&](std::size_t a, std::size_t b) {
        m.swap_rows(a, b);
        m.swap_cols(a, b);
    };

    Inertia out;
    std::size_t step = 0;
    while (step < n) {
        std::size_t best = step;
        for (std::size_t r = step + 1; r < n; ++r)
            if (abs_value(m(r, r)) > abs_value(m(best, best))) best = r;
        const SignDecision dd = decide_sign(m(best, best), scale);
        if (dd.sign != 0) {
            out.borderline = out.borderline || dd.borderline;
            sym_swap(step, best);
            const T p = m(step, step);
            for (std::size_t i = step + 1; i < n; ++i) {
                const T f = m(i, step) / p;
                if (f == T(0)) continue;
                for (std::size_t c = step; c < n; ++c) m(i, c) -= f * m(step, c);
                for (std::size_t r = step; r < n; ++r) m(r, i) -= f * m(r, step);
            }
            (dd.sign > 0 ? out.positive : out.negative) += 1;
            ++step;
            continue;
        }
        // every remaining diagonal entry is zero: look for an off-diagonal pivot
        std::size_t bi = n, bj = n;
        for (std::size_t i = step; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (bi == n || abs_value(m(i, j)) > abs_value(m(bi, bj))) {
                    bi = i;
                    bj = j;
                }
        if (bi == n || decide_sign(m(bi, bj), scale).sign == 0) {
            for (std::size_t i = step; i < n; ++i)
                for (std::size_t j = step; j < n; ++j)
                    out.borderline = out.borderline || decide_sign(m(i, j), scale).borderline;
            out.zero += n - step;
            break;
        }
        // row_i += row_j, col_i += col_j gives diagonal entry m_ii + 2 m_ij + m_jj
        for (std::size_t c = 0; c < n; ++c) m(bi, c) += m(bj, c);
        for (std::size_t r = 0; r < n; ++r) m(r, bi) += m(r, bj);
    }
    return out;
}

inline Likeness likeness_from_inertia(const Inertia& in) {
    if (in.negative > 0) return Likeness::TimeLike;
    if (in.zero > 0) return Likeness::LightLike;
    return Likeness::SpaceLike;
}

struct LikenessVerdict {
    Likeness likeness = Likeness::SpaceLike;
    Inertia inertia;
    bool borderline = false;
};

template <Scalar T>
LikenessVerdict subspace_likeness_detail(const SubspaceBasis<T>& basis) {
    LikenessVerdict v;
    v.inertia = inertia(gram_matrix(basis));
    v.likeness = likeness_from_inertia(v.inertia);
    v.borderline = v.inertia.borderline || basis.borderline();
    return v;
}

template <Scalar T>
Likeness subspace_likeness(const SubspaceBasis<T>& basis) {
    return subspace_likeness_detail(basis).likeness;
}

/// Likeness of the hyperplane -x0 + a1 x1 + ... + an xn = 0, read off from sum(a_i^2) vs 1.
template <Scalar T>
Likeness hyperplane_likeness(std::span<const T> alpha) {
    T s(0);
    for (const auto& a : alpha) s += a * a;
    const int sign = decide_sign(T(s - T(1))).sign;
    if (sign > 0) return Likeness::TimeLike;
    if (sign < 0) return Likeness::SpaceLike;
    return Likeness::LightLike;
}
template <Scalar T>
Likeness hyperplane_likeness(const Vec<T>& alpha) {
    return hyperplane_likeness(std::span<const T>(alpha));
}

/// Basis {(a_i, e_i)} of the hyperplane -x0 + sum a_i x_i = 0.
template <Scalar T>
SubspaceBasis<T> hyperplane_basis(std::span<const T> alpha) {
    const std::size_t n = alpha.size();
    std::vector<Vec<T>> vs;
    for (std::size_t i = 0; i < n; ++i) {
        Vec<T> v(n + 1, T(0));
        v[0] = alpha[i];
        v[i + 1] = T(1);
        vs.push_back(std::move(v));
    }
    return SubspaceBasis<T>(n, std::move(vs));
}

/// The n vectors v_i = (a_i, e_i) for i <= k and v_i = (0, e_i) for i > k.
template <Scalar T>
std::vector<Vec<T>> graph_extension_vectors(std::span<const T> alpha, std::size_t n) {
    if (alpha.empty() || alpha.size() >= n)
        throw error(ErrorKind::InvalidArgument, "graph extension needs 1 <= k < n");
    std::vector<Vec<T>> vs;
    for (std::size_t i = 0; i < n; ++i) {
        Vec<T> v(n + 1, T(0));
        if (i < alpha.size()) v[0] = alpha[i];
        v[i + 1] = T(1);
        vs.push_back(std::move(v));
    }
    return vs;
}

/// Fraction-free (Bareiss) rank of a rational matrix. Rows are scaled to
/// integers first so every intermediate division is exact.
inline std::size_t rank_exact(const Matrix<Rational>& a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < cols; ++j) {
            const BigInt d = boost::multiprecision::denominator(a(i, j));
            l = l / boost::multiprecision::gcd(l, d) * d;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const Rational scaled = a(i, j) * Rational(l);
            m[i][j] = boost::multiprecision::numerator(scaled);
        }
    }
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

/// Rank with the float pivot tolerance (exact for rationals).
template <Scalar T>
std::size_t numeric_rank(const Matrix<T>& a) {
    if constexpr (is_exact_v<T>) {
        return rank_exact(a);
    } else {
        std::vector<Vec<T>> rows;
        for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
        EchelonBuilder<T> e(a.cols(), magnitude_scale(rows));
        for (const auto& r : rows) e.add(r);
        return e.rank();
    }
}

/// Hyperbolic boost with the given rapidity in the (x0, x_axis) plane.
inline Matrix<double> boost_matrix(std::size_t n, std::size_t axis, double rapidity) {
    if (axis < 1 || axis > n) throw error(ErrorKind::InvalidArgument, "boost axis out of range");
    Matrix<double> g = Matrix<double>::identity(n + 1);
    g(0, 0) = std::cosh(rapidity);
    g(axis, axis) = std::cosh(rapidity);
    g(0, axis) = std::sinh(rapidity);
    g(axis, 0) = std::sinh(rapidity);
    return g;
}

/// Rotation by angle in the spatial (x_a, x_b) plane.
inline Matrix<double> rotation_matrix(std::size_t n, std::size_t a, std::size_t b, double angle) {
    if (a < 1 || b < 1 || a > n || b > n || a == b) throw error(ErrorKind::InvalidArgument, "rotation plane out of range");
    Matrix<double> g = Matrix<double>::identity(n + 1);
    g(a, a) = std::cos(angle);
    g(b, b) = std::cos(angle);
    g(a, b) = -std::sin(angle);
    g(b, a) = std::sin(angle);
    return g;
}

/// Seeded element of O(1,n): spatial rotations in every coordinate plane
/// interleaved with boosts of rapidity in [-1.5, 1.5] along every axis.
inline Matrix<double> random_lorentz_transform(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw error(ErrorKind::InvalidArgument, "random_lorentz_transform needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rapidity(-1.5, 1.5);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Matrix<double> g = Matrix<double>::identity(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) g = rotation_matrix(n, i, j, angle(rng)) * g;
        g = boost_matrix(n, i, rapidity(rng)) * g;
    }
    return g;
}

/// ||G^T J G - J||_inf
inline double lorentz_defect(const Matrix<double>& g) {
    const Matrix<double> j = minkowski_metric<double>(g.rows() - 1);
    return max_abs(g.transpose() * j * g - j);
}

} // namespace ldsq
