#pragma once

// Numerical validation of witnesses and cross-checks between the independent
// likeness criteria.

#include "ldsq/normalizer.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ldsq {

inline constexpr double default_tolerance = 1e-8;
inline constexpr std::size_t default_samples = 100;
inline constexpr std::uint64_t default_seed = 42;

struct VerificationReport {
    std::size_t samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double source_det = 0.0;
    double source_roundtrip_max = 0.0;
    double target_roundtrip_max = 0.0;
    /// Largest ||H4^T J H4 - J|| over the H4 source factors (0 when absent).
    double lorentz_defect_H4 = 0.0;
    std::map<std::string, double> checkpoint_residuals;
    bool pass = false;
    double tol = default_tolerance;
    std::uint64_t seed = default_seed;
};

/// Seeded sample points, uniform in [-1,1]^dim.
inline std::vector<Vec<double>> sample_box(std::size_t count, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec<double>> out(count, Vec<double>(dim));
    for (auto& x : out)
        for (double& c : x) c = u(rng);
    return out;
}

namespace detail {

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::fabs(a[i] - b[i]));
    return r;
}

inline Vec<double> checkpoint_expected(const Checkpoint& cp, std::span<const double> x) {
    Vec<double> out = cp.linear * x;
    double q = 0.0;
    for (std::size_t a = 0; a < cp.quadratic.rows(); ++a)
        for (std::size_t b = 0; b < cp.quadratic.cols(); ++b) q += cp.quadratic(a, b) * x[a] * x[b];
    out.push_back(q);
    return out;
}

inline Vec<double> checkpoint_actual(const Witness& w, const Checkpoint& cp, const PointConfig<double>& config,
                                     std::span<const double> x) {
    const Vec<double> hx = w.source_prefix(cp.source_prefix)(x);
    Vec<double> v = w.metric == Metric::Lorentzian ? eval_lorentz_dsq(config, hx) : eval_euclid_dsq(config, hx);
    for (std::size_t i = 0; i < cp.target_prefix; ++i) v = w.target[i].apply(v);
    return v;
}

} // namespace detail

/// Samples H o L o h against the normal form and records structural checks.
/// Checkpoint residuals are informational; they do not enter the verdict.
template <Scalar T>
VerificationReport verify_witness(const PointConfig<T>& config, const Witness& w, std::size_t samples = default_samples,
                                  double tol = default_tolerance, std::uint64_t seed = default_seed) {
    if (samples < 1) throw error(ErrorKind::InvalidArgument, "verify_witness: samples must be >= 1");
    if (!(tol > 0.0)) throw error(ErrorKind::InvalidArgument, "verify_witness: tol must be positive");
    const PointConfig<double> cd = to_double(config);
    const std::size_t n = w.normal_form.n, k = w.normal_form.k;
    if (cd.n() != n || cd.k() != k) throw error(ErrorKind::DimensionMismatch, "verify_witness: witness does not match configuration");
    if (w.source.dim() != n + 1) throw error(ErrorKind::DimensionMismatch, "verify_witness: source map dimension");

    VerificationReport rep;
    rep.samples = samples;
    rep.tol = tol;
    rep.seed = seed;
    rep.source_det = w.source.det();

    const auto xs = sample_box(samples, n + 1, seed);
    double sum = 0.0;
    for (const auto& x : xs) {
        const double r = detail::sup_distance(apply_witness(w, cd, x), eval_normal_form<double>(w.normal_form, x));
        rep.max_residual = std::max(rep.max_residual, r);
        sum += r;
    }
    rep.mean_residual = sum / static_cast<double>(samples);

    if (std::fabs(rep.source_det) > 1e-12) {
        const AffineMap inv = w.source.inverse();
        for (const auto& x : xs) rep.source_roundtrip_max = std::max(rep.source_roundtrip_max, detail::sup_distance(inv(w.source(x)), x));
    } else {
        rep.source_roundtrip_max = std::numeric_limits<double>::infinity();
    }

    const auto ys = sample_box(samples, k + 1, seed ^ 0x9e3779b97f4a7c15ULL);
    for (const auto& e : w.target) {
        for (const auto& y : ys) {
            double d;
            try {
                d = detail::sup_distance(e.apply_inverse(e.apply(y)), y);
            } catch (const error&) {
                d = std::numeric_limits<double>::infinity();
            }
            rep.target_roundtrip_max = std::max(rep.target_roundtrip_max, d);
        }
    }

    if (w.metric == Metric::Lorentzian)
        for (const SourceStage* s : w.find_source_stages("H4"))
            rep.lorentz_defect_H4 = std::max(rep.lorentz_defect_H4, lorentz_defect(s->map.linear));

    for (const auto& cp : w.checkpoints) {
        double worst = 0.0;
        for (const auto& x : xs)
            worst = std::max(worst, detail::sup_distance(detail::checkpoint_actual(w, cp, cd, x), detail::checkpoint_expected(cp, x)));
        rep.checkpoint_residuals[cp.stage] = worst;
    }

    rep.pass = rep.max_residual < tol && rep.source_roundtrip_max < tol && rep.target_roundtrip_max < tol &&
               std::fabs(rep.source_det) > 1e-12;
    return rep;
}

/// Three likeness verdicts for a general-position configuration with V /\ T = {0}.
struct LikenessCrosscheck {
    Likeness inertia;     ///< Gram-matrix inertia
    Likeness alpha_sum;   ///< sum of squared alpha from the floating orthonormalization
    Likeness hyperplane;  ///< hyperplane through V containing its spatial complement
    double alpha_square_sum = 0.0;
    bool borderline = false;
    bool agree = false;
};

/// Exact s = a0^T (A~^T A~)^{-1} a0 and the hyperplane normal
/// beta = A~ (A~^T A~)^{-1} a0 for the columns of `a` ((n+1) x j).
template <Scalar T>
std::pair<T, Vec<T>> lemma4_quantity_exact(const Matrix<T>& a) {
    const std::size_t n = a.rows() - 1, j = a.cols();
    const Matrix<T> spatial = a.block(1, 0, n, j);
    const Matrix<T> g = spatial.transpose() * spatial;
    Matrix<T> ginv;
    try {
        ginv = inverse(g);
    } catch (const error&) {
        throw error(ErrorKind::InvalidArgument, "lemma4_quantity_exact: spatial parts are dependent (time axis in V)");
    }
    const Vec<T> a0 = a.row(0);
    const Vec<T> c = ginv * a0;
    T s(0);
    for (std::size_t i = 0; i < j; ++i) s += a0[i] * c[i];
    return {s, spatial * c};
}

template <Scalar T>
LikenessCrosscheck crosscheck_likeness(const PointConfig<T>& config) {
    const ClassificationReport r = classify_lorentz(config);
    if (r.recognition_dim != r.k || r.recognition_dim > r.n || r.time_axis_in_v)
        throw error(ErrorKind::Hypothesis, "crosscheck_likeness: needs general position, k <= n and V meeting the time axis only in 0");
    LikenessCrosscheck out;
    out.inertia = *r.likeness;
    out.borderline = r.borderline;

    const Matrix<T> a = Matrix<T>::from_columns(config.differences());
    const Matrix<double> ad = to_double(a);
    const OrthonormalizedBasis ob = step3_orthonormalize(ad, false);
    out.alpha_square_sum = lemma4_quantity(ob.alpha);
    const SignDecision sd = decide_sign(out.alpha_square_sum - 1.0, 1.0);
    out.borderline = out.borderline || sd.borderline;
    out.alpha_sum = sd.sign > 0 ? Likeness::TimeLike : sd.sign < 0 ? Likeness::SpaceLike : Likeness::LightLike;

    const auto [s, beta] = lemma4_quantity_exact(a);
    out.hyperplane = hyperplane_likeness(beta);
    out.agree = out.inertia == out.alpha_sum && out.inertia == out.hyperplane;
    return out;
}

/// Evidence from enumerating integer combinations of a basis.
struct OracleEvidence {
    bool found_time_like = false;
    bool found_light_like = false;
    std::size_t combinations = 0;

    /// One-sided check against an inertia verdict.
    bool consistent_with(Likeness l) const {
        if (found_time_like && l != Likeness::TimeLike) return false;
        if (l == Likeness::SpaceLike && (found_time_like || found_light_like)) return false;
        return true;
    }
};

template <Scalar T>
OracleEvidence brute_force_likeness_oracle(const std::vector<Vec<T>>& basis, int grid_radius) {
    if (grid_radius < 0) throw error(ErrorKind::InvalidArgument, "grid radius must be non-negative");
    OracleEvidence ev;
    const std::size_t m = basis.size();
    if (m == 0) return ev;
    const std::size_t dim = basis.front().size();
    std::vector<int> c(m, -grid_radius);
    for (;;) {
        Vec<T> v(dim, T(0));
        bool nonzero_coeff = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (c[i] == 0) continue;
            nonzero_coeff = true;
            for (std::size_t d = 0; d < dim; ++d) v[d] += T(c[i]) * basis[i][d];
        }
        if (nonzero_coeff && !is_zero_vector<T>(v)) {
            ++ev.combinations;
            switch (vector_likeness<T>(v)) {
            case VectorClass::TimeLike: ev.found_time_like = true; break;
            case VectorClass::LightLike: ev.found_light_like = true; break;
            case VectorClass::SpaceLike: break;
            }
        }
        std::size_t i = 0;
        while (i < m && c[i] == grid_radius) c[i++] = -grid_radius;
        if (i == m) break;
        ++c[i];
    }
    return ev;
}

} // namespace ldsq
