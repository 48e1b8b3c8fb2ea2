#pragma once

// Column-pivoted modified Gram-Schmidt and orthonormal basis completion for
// the small dense matrices that appear in witness construction.

#include "ldsq/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace ldsq {

/// A(:, perm) = Q * R with Q orthonormal (m x rank) and R upper trapezoidal (rank x ncols).
struct PivotedQR {
    Matrix<double> q;
    Matrix<double> r;
    std::vector<std::size_t> perm;
    std::size_t rank = 0;
};

namespace detail {
inline double norm2(const Vec<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Two passes of MGS against the accepted columns ("twice is enough").
inline void orthogonalize(Vec<double>& w, const std::vector<Vec<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& qv : basis) {
            double d = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) d += qv[i] * w[i];
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= d * qv[i];
        }
}
} // namespace detail

/// Modified Gram-Schmidt with largest-remaining-norm column pivoting.
/// Stops at max_rank columns, or earlier once the remaining norm drops below
/// 1e-10 relative to the largest column.
inline PivotedQR pivoted_mgs(const Matrix<double>& a, std::size_t max_rank = static_cast<std::size_t>(-1)) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<Vec<double>> w;
    for (std::size_t j = 0; j < n; ++j) w.push_back(a.col(j));
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < n; ++j) perm[j] = j;

    double scale = 0.0;
    for (const auto& c : w) scale = std::max(scale, detail::norm2(c));
    scale = std::max(scale, 1e-300);

    std::vector<Vec<double>> qs;
    Matrix<double> r(std::min(m, n), n);
    std::size_t rank = 0;
    const std::size_t limit = std::min({m, n, max_rank});
    for (std::size_t s = 0; s < limit; ++s) {
        std::size_t best = s;
        double best_norm = -1.0;
        for (std::size_t t = s; t < n; ++t) {
            const double nt = detail::norm2(w[t]);
            if (nt > best_norm) {
                best_norm = nt;
                best = t;
            }
        }
        if (max_rank == static_cast<std::size_t>(-1) && best_norm <= pivot_tolerance * scale) break;
        std::swap(w[s], w[best]);
        std::swap(perm[s], perm[best]);
        r.swap_cols(s, best);

        Vec<double> qv = w[s];
        detail::orthogonalize(qv, qs);
        const double nrm = detail::norm2(qv);
        if (nrm == 0.0) throw error(ErrorKind::Stage, "QR: zero column at forced rank");
        for (double& x : qv) x /= nrm;
        // R entries against the original column keep A P = Q R exact up to rounding.
        const Vec<double> orig_s = a.col(perm[s]);
        for (std::size_t t = 0; t <= s; ++t) {
            const Vec<double>& qt = t < s ? qs[t] : qv;
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += qt[i] * orig_s[i];
            r(t, s) = d;
        }
        for (std::size_t t = s + 1; t < n; ++t) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += qv[i] * w[t][i];
            for (std::size_t i = 0; i < m; ++i) w[t][i] -= d * qv[i];
        }
        qs.push_back(std::move(qv));
        ++rank;
    }
    // Fill the trailing (non-pivot) columns of R: R(t, c) = q_t . a_c.
    for (std::size_t c = rank; c < n; ++c) {
        const Vec<double> orig = a.col(perm[c]);
        for (std::size_t t = 0; t < rank; ++t) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += qs[t][i] * orig[i];
            r(t, c) = d;
        }
    }
    PivotedQR out;
    out.q = qs.empty() ? Matrix<double>(m, 0) : Matrix<double>::from_columns(qs);
    out.r = r.block(0, 0, rank, n);
    out.perm = std::move(perm);
    out.rank = rank;
    return out;
}

/// Square orthogonal matrix whose leading columns are the given orthonormal
/// columns; the rest are drawn greedily from the standard basis.
inline Matrix<double> orthonormal_completion(const Matrix<double>& q) {
    const std::size_t m = q.rows();
    std::vector<Vec<double>> basis;
    for (std::size_t j = 0; j < q.cols(); ++j) basis.push_back(q.col(j));
    while (basis.size() < m) {
        Vec<double> best;
        double best_norm = -1.0;
        for (std::size_t e = 0; e < m; ++e) {
            Vec<double> cand(m, 0.0);
            cand[e] = 1.0;
            detail::orthogonalize(cand, basis);
            const double nc = detail::norm2(cand);
            if (nc > best_norm + 1e-14) {
                best_norm = nc;
                best = std::move(cand);
            }
        }
        if (best_norm <= 1e-8) throw error(ErrorKind::Stage, "orthonormal completion failed");
        for (double& x : best) x /= best_norm;
        detail::orthogonalize(best, basis);
        const double again = detail::norm2(best);
        for (double& x : best) x /= again;
        basis.push_back(std::move(best));
    }
    return Matrix<double>::from_columns(basis);
}

/// Upper-triangular back substitution solving R x = b for square R.
inline Vec<double> back_substitute(const Matrix<double>& r, Vec<double> b) {
    const std::size_t n = r.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) b[ii] -= r(ii, j) * b[j];
        b[ii] /= r(ii, ii);
    }
    return b;
}

/// For a full-column-rank A (m x k), a regular k x k matrix B with A*B orthonormal.
inline Matrix<double> orthonormalizing_factor(const PivotedQR& qr) {
    const std::size_t k = qr.rank;
    Matrix<double> rinv(k, k);
    for (std::size_t c = 0; c < k; ++c) {
        Vec<double> e(k, 0.0);
        e[c] = 1.0;
        const Vec<double> col = back_substitute(qr.r.block(0, 0, k, k), e);
        for (std::size_t i = 0; i < k; ++i) rinv(i, c) = col[i];
    }
    Matrix<double> b(qr.perm.size(), k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < k; ++c) b(qr.perm[i], c) = rinv(i, c);
    return b;
}

} // namespace ldsq
