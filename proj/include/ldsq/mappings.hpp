#pragma once

// Lorentzian and Euclidean distance-squared mappings, their normal forms, and
// the complete classification dispatch by recognition-subspace likeness.

#include "ldsq/lorentz_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ldsq {

/// k+1 points p_0, ..., p_k in R^{1,n}, k >= 1.
template <Scalar T>
class PointConfig {
public:
    PointConfig(std::size_t n, std::vector<Vec<T>> points) : n_(n), points_(std::move(points)) {
        if (n_ < 1) throw error(ErrorKind::InvalidArgument, "ambient index n must be >= 1");
        if (points_.size() < 2) throw error(ErrorKind::InvalidArgument, "a configuration needs at least two points");
        for (const auto& p : points_)
            if (p.size() != n_ + 1)
                throw error(ErrorKind::DimensionMismatch,
                            "point has " + std::to_string(p.size()) + " coordinates, expected n+1 = " + std::to_string(n_ + 1));
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return points_.size() - 1; }
    const std::vector<Vec<T>>& points() const noexcept { return points_; }
    const Vec<T>& operator[](std::size_t i) const { return points_[i]; }

    /// p_i - p_0 for i = 1..k.
    std::vector<Vec<T>> differences() const {
        std::vector<Vec<T>> d;
        for (std::size_t i = 1; i < points_.size(); ++i) {
            Vec<T> v(n_ + 1);
            for (std::size_t c = 0; c <= n_; ++c) v[c] = points_[i][c] - points_[0][c];
            d.push_back(std::move(v));
        }
        return d;
    }

private:
    std::size_t n_;
    std::vector<Vec<T>> points_;
};

template <Scalar T>
PointConfig<double> to_double(const PointConfig<T>& c) {
    std::vector<Vec<double>> pts;
    for (const auto& p : c.points()) pts.push_back(to_double(p));
    return PointConfig<double>(c.n(), std::move(pts));
}

namespace detail {
template <Scalar T, bool Lorentz>
Vec<T> eval_dsq(const PointConfig<T>& config, std::span<const T> x) {
    require_same_size(x.size(), config.n() + 1, "distance-squared mapping");
    Vec<T> out;
    out.reserve(config.k() + 1);
    Vec<T> diff(x.size());
    for (const auto& p : config.points()) {
        for (std::size_t c = 0; c < x.size(); ++c) diff[c] = x[c] - p[c];
        if constexpr (Lorentz)
            out.push_back(lorentz_inner(diff, diff));
        else
            out.push_back(euclid_inner(diff, diff));
    }
    return out;
}
} // namespace detail

template <Scalar T>
Vec<T> eval_lorentz_dsq(const PointConfig<T>& config, std::span<const T> x) {
    return detail::eval_dsq<T, true>(config, x);
}
template <Scalar T>
Vec<T> eval_lorentz_dsq(const PointConfig<T>& config, const Vec<T>& x) {
    return eval_lorentz_dsq(config, std::span<const T>(x));
}

template <Scalar T>
Vec<T> eval_euclid_dsq(const PointConfig<T>& config, std::span<const T> x) {
    return detail::eval_dsq<T, false>(config, x);
}
template <Scalar T>
Vec<T> eval_euclid_dsq(const PointConfig<T>& config, const Vec<T>& x) {
    return eval_euclid_dsq(config, std::span<const T>(x));
}

/// Spanning differences of V(p_0,...,p_k), its dimension, and a greedy
/// maximal independent subset of difference indices (1-based, ascending).
template <Scalar T>
struct RecognitionSubspace {
    std::vector<Vec<T>> differences;
    std::size_t dimension = 0;
    std::vector<std::size_t> independent;
    bool borderline = false;

    SubspaceBasis<T> basis(std::size_t n) const {
        std::vector<Vec<T>> vs;
        for (std::size_t i : independent) vs.push_back(differences[i - 1]);
        return SubspaceBasis<T>(n, std::move(vs));
    }
};

template <Scalar T>
RecognitionSubspace<T> recognition_subspace(const PointConfig<T>& config) {
    RecognitionSubspace<T> rs;
    rs.differences = config.differences();
    EchelonBuilder<T> e(config.n() + 1, magnitude_scale(rs.differences));
    for (std::size_t i = 0; i < rs.differences.size(); ++i)
        if (e.add(rs.differences[i])) rs.independent.push_back(i + 1);
    rs.dimension = rs.independent.size();
    rs.borderline = e.borderline();
    if constexpr (is_exact_v<T>) {
        // cross-check the greedy echelon against the fraction-free rank
        if (!rs.differences.empty() && rank_exact(Matrix<T>::from_rows(rs.differences)) != rs.dimension)
            throw error(ErrorKind::Stage, "recognition_subspace: rank mismatch between elimination routes");
    }
    return rs;
}

template <Scalar T>
bool is_general_position(const PointConfig<T>& config) {
    return recognition_subspace(config).dimension == config.k();
}

/// Whether the time axis T = R e_0 lies in V (else V and T meet only in 0).
template <Scalar T>
bool time_axis_in_subspace(const RecognitionSubspace<T>& rs, std::size_t n, bool* borderline = nullptr) {
    if (rs.dimension == 0) return false;
    std::vector<Vec<T>> vs;
    for (std::size_t i : rs.independent) vs.push_back(rs.differences[i - 1]);
    EchelonBuilder<T> e(n + 1, magnitude_scale(vs));
    for (const auto& v : vs) e.add(v);
    Vec<T> e0(n + 1, T(0));
    e0[0] = T(1);
    const bool independent = e.add(e0);
    if (borderline) *borderline = *borderline || e.borderline();
    return !independent;
}

enum class NormalFormTag {
    DefiniteFold,
    IndefiniteFold,
    LightLikeFold,
    Inclusion,
    DegenerateDefinite,
    DegenerateIndefinite,
    DegenerateLightLike,
    SamePoint,
};

constexpr std::string_view to_string(NormalFormTag t) {
    switch (t) {
    case NormalFormTag::DefiniteFold: return "definite_fold";
    case NormalFormTag::IndefiniteFold: return "indefinite_fold";
    case NormalFormTag::LightLikeFold: return "lightlike_fold";
    case NormalFormTag::Inclusion: return "inclusion";
    case NormalFormTag::DegenerateDefinite: return "degenerate_definite_fold";
    case NormalFormTag::DegenerateIndefinite: return "degenerate_indefinite_fold";
    case NormalFormTag::DegenerateLightLike: return "degenerate_lightlike_fold";
    case NormalFormTag::SamePoint: return "same_point";
    }
    return "?";
}

inline NormalFormTag normal_form_tag_from_string(std::string_view s) {
    for (auto t : {NormalFormTag::DefiniteFold, NormalFormTag::IndefiniteFold, NormalFormTag::LightLikeFold,
                   NormalFormTag::Inclusion, NormalFormTag::DegenerateDefinite, NormalFormTag::DegenerateIndefinite,
                   NormalFormTag::DegenerateLightLike, NormalFormTag::SamePoint})
        if (to_string(t) == s) return t;
    throw error(ErrorKind::Parse, "unknown normal form tag '" + std::string(s) + "'");
}

/// A normal form R^{1,n} -> R^{k+1}. `j` is the fold index (the number of
/// leading coordinate components); j = k in general position, j = n+1 for the
/// inclusion and j = 0 for the same-point form.
struct NormalForm {
    NormalFormTag tag = NormalFormTag::DefiniteFold;
    std::size_t n = 1;
    std::size_t k = 1;
    std::size_t j = 1;

    static NormalForm definite_fold(std::size_t k, std::size_t n) { return checked({NormalFormTag::DefiniteFold, n, k, k}); }
    static NormalForm indefinite_fold(std::size_t k, std::size_t n) { return checked({NormalFormTag::IndefiniteFold, n, k, k}); }
    static NormalForm lightlike_fold(std::size_t k, std::size_t n) { return checked({NormalFormTag::LightLikeFold, n, k, k}); }
    static NormalForm inclusion(std::size_t k, std::size_t n) { return checked({NormalFormTag::Inclusion, n, k, n + 1}); }
    static NormalForm degenerate_definite(std::size_t j, std::size_t k, std::size_t n) {
        return checked({NormalFormTag::DegenerateDefinite, n, k, j});
    }
    static NormalForm degenerate_indefinite(std::size_t j, std::size_t k, std::size_t n) {
        return checked({NormalFormTag::DegenerateIndefinite, n, k, j});
    }
    static NormalForm degenerate_lightlike(std::size_t j, std::size_t k, std::size_t n) {
        return checked({NormalFormTag::DegenerateLightLike, n, k, j});
    }
    static NormalForm same_point(std::size_t k, std::size_t n) { return checked({NormalFormTag::SamePoint, n, k, 0}); }

    std::size_t source_dim() const noexcept { return n + 1; }
    std::size_t target_dim() const noexcept { return k + 1; }

    /// Throws when the parameters fall outside the theorem hypotheses for the tag.
    void validate() const {
        auto fail = [&](const char* why) {
            throw error(ErrorKind::InvalidArgument, std::string("invalid ") + std::string(to_string(tag)) + " parameters: " + why);
        };
        if (n < 1 || k < 1) fail("n and k must be >= 1");
        switch (tag) {
        case NormalFormTag::DefiniteFold:
        case NormalFormTag::LightLikeFold:
            if (j != k || k > n) fail("requires j = k <= n");
            break;
        case NormalFormTag::IndefiniteFold:
            if (j != k || k >= n) fail("requires j = k < n");
            break;
        case NormalFormTag::Inclusion:
            if (j != n + 1 || k <= n) fail("requires k > n");
            break;
        case NormalFormTag::DegenerateDefinite:
        case NormalFormTag::DegenerateLightLike:
            if (j < 1 || j >= k || j > n) fail("requires 1 <= j < k and j <= n");
            break;
        case NormalFormTag::DegenerateIndefinite:
            if (j < 1 || j >= k || j >= n) fail("requires 1 <= j < k and j < n");
            break;
        case NormalFormTag::SamePoint:
            if (j != 0) fail("requires j = 0");
            break;
        }
    }

    friend bool operator==(const NormalForm&, const NormalForm&) = default;

private:
    static NormalForm checked(NormalForm f) {
        f.validate();
        return f;
    }
};

template <Scalar T>
Vec<T> eval_normal_form(const NormalForm& nf, std::span<const T> x) {
    nf.validate();
    detail::require_same_size(x.size(), nf.n + 1, "eval_normal_form");
    Vec<T> out(nf.k + 1, T(0));
    auto tail_squares = [&](std::size_t from) {
        T s(0);
        for (std::size_t i = from; i <= nf.n; ++i) s += x[i] * x[i];
        return s;
    };
    switch (nf.tag) {
    case NormalFormTag::Inclusion:
        for (std::size_t i = 0; i <= nf.n; ++i) out[i] = x[i];
        break;
    case NormalFormTag::SamePoint:
        out[0] = -(x[0] * x[0]) + tail_squares(1);
        break;
    case NormalFormTag::DefiniteFold:
    case NormalFormTag::DegenerateDefinite:
        for (std::size_t i = 0; i < nf.j; ++i) out[i] = x[i + 1];
        out[nf.j] = x[0] * x[0] + tail_squares(nf.j + 1);
        break;
    case NormalFormTag::IndefiniteFold:
    case NormalFormTag::DegenerateIndefinite:
        for (std::size_t i = 0; i < nf.j; ++i) out[i] = x[i + 1];
        out[nf.j] = -(x[0] * x[0]) + tail_squares(nf.j + 1);
        break;
    case NormalFormTag::LightLikeFold:
    case NormalFormTag::DegenerateLightLike:
        for (std::size_t i = 0; i < nf.j; ++i) out[i] = x[i + 1];
        out[nf.j] = x[0] * x[1] + tail_squares(nf.j + 1);
        break;
    }
    return out;
}
template <Scalar T>
Vec<T> eval_normal_form(const NormalForm& nf, const Vec<T>& x) {
    return eval_normal_form(nf, std::span<const T>(x));
}

struct ClassificationReport {
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t recognition_dim = 0;
    bool general_position = false;
    std::optional<Likeness> likeness;
    NormalForm normal_form;
    std::string theorem_case;
    bool borderline = false;
    /// 1-based indices of the greedy maximal independent differences.
    std::vector<std::size_t> independent;
    /// V contains the time axis (only meaningful for 1 <= j <= n).
    bool time_axis_in_v = false;
};

template <Scalar T>
ClassificationReport classify_lorentz(const PointConfig<T>& config) {
    const std::size_t n = config.n(), k = config.k();
    const RecognitionSubspace<T> rs = recognition_subspace(config);
    const std::size_t j = rs.dimension;

    ClassificationReport r;
    r.k = k;
    r.n = n;
    r.recognition_dim = j;
    r.general_position = j == k;
    r.independent = rs.independent;
    r.borderline = rs.borderline;

    if (j == 0) {
        r.normal_form = NormalForm::same_point(k, n);
        r.theorem_case = "Appendix (3)";
        return r;
    }

    const LikenessVerdict lv = subspace_likeness_detail(rs.basis(n));
    r.likeness = lv.likeness;
    r.borderline = r.borderline || lv.borderline;
    r.time_axis_in_v = j <= n && time_axis_in_subspace(rs, n, &r.borderline);
    const Likeness like = lv.likeness;

    if (j == n + 1) {
        r.normal_form = NormalForm::inclusion(k, n);
        r.theorem_case = "Theorem 1(3)";
    } else if (j == k && k < n) {
        switch (like) {
        case Likeness::TimeLike:
            r.normal_form = NormalForm::definite_fold(k, n);
            r.theorem_case = "Theorem 1(1a)";
            break;
        case Likeness::SpaceLike:
            r.normal_form = NormalForm::indefinite_fold(k, n);
            r.theorem_case = "Theorem 1(1b)";
            break;
        case Likeness::LightLike:
            r.normal_form = NormalForm::lightlike_fold(k, n);
            r.theorem_case = "Theorem 1(1c)";
            break;
        }
    } else if (j == k && k == n) {
        if (like == Likeness::LightLike) {
            r.normal_form = NormalForm::lightlike_fold(n, n);
            r.theorem_case = "Theorem 1(2b)";
        } else {
            r.normal_form = NormalForm::definite_fold(n, n);
            r.theorem_case = "Theorem 1(2a)";
        }
    } else if (j < n) {
        switch (like) {
        case Likeness::TimeLike:
            r.normal_form = NormalForm::degenerate_definite(j, k, n);
            r.theorem_case = "Appendix (1a)";
            break;
        case Likeness::SpaceLike:
            r.normal_form = NormalForm::degenerate_indefinite(j, k, n);
            r.theorem_case = "Appendix (1b)";
            break;
        case Likeness::LightLike:
            r.normal_form = NormalForm::degenerate_lightlike(j, k, n);
            r.theorem_case = "Appendix (1c)";
            break;
        }
    } else {
        // 0 < j = n < k
        if (like == Likeness::LightLike) {
            r.normal_form = NormalForm::degenerate_lightlike(n, k, n);
            r.theorem_case = "Appendix (2b)";
        } else {
            r.normal_form = NormalForm::degenerate_definite(n, k, n);
            r.theorem_case = "Appendix (2a)";
        }
    }
    return r;
}

/// Classification of the Euclidean distance-squared mapping; defined only for
/// j = k <= n (definite fold) and j = n+1 (inclusion).
template <Scalar T>
ClassificationReport classify_euclid(const PointConfig<T>& config) {
    const std::size_t n = config.n(), k = config.k();
    const RecognitionSubspace<T> rs = recognition_subspace(config);
    const std::size_t j = rs.dimension;
    ClassificationReport r;
    r.k = k;
    r.n = n;
    r.recognition_dim = j;
    r.general_position = j == k;
    r.independent = rs.independent;
    r.borderline = rs.borderline;
    if (j == k && k <= n) {
        r.normal_form = NormalForm::definite_fold(k, n);
        r.theorem_case = "Proposition 1(1)";
    } else if (j == n + 1) {
        r.normal_form = NormalForm::inclusion(k, n);
        r.theorem_case = "Proposition 1(2)";
    } else {
        throw error(ErrorKind::NotCovered, "Euclidean classification not covered by Proposition 1");
    }
    return r;
}

/// Whether the Lorentzian mapping is A-equivalent to the Euclidean one.
template <Scalar T>
bool equivalent_to_euclidean(const PointConfig<T>& config) {
    const ClassificationReport r = classify_lorentz(config);
    const std::size_t j = r.recognition_dim;
    if (j == r.n + 1) return true;
    if (j == r.k && r.k < r.n) return r.likeness == Likeness::TimeLike;
    if (j == r.k && r.k == r.n) return r.likeness != Likeness::LightLike;
    throw error(ErrorKind::NotCovered, "Euclidean comparison needs general position or a spanning configuration");
}

} // namespace ldsq
