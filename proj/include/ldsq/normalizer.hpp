#pragma once

// Explicit A-equivalence witnesses H o L o h = normal form.
//
// Conventions: maps act on column vectors. The source map h is one affine map
// (the composition of the recorded source stages, outermost first). The
// target map H is an ordered list of elementary diffeomorphisms applied
// first-to-last. Stage names follow the construction: H1 (target affine that
// strips the redundant quadratic terms), H2 (source reflection + translation),
// H3 (target change of basis), H4 (source Lorentz map 1 (+) C), H5/H7/H7'
// (source shears and scalings), H6/H6'/H5~ (target quadratic shears), H8'
// (target linear), plus bookkeeping permutations.

#include "ldsq/mappings.hpp"
#include "ldsq/qr.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ldsq {

/// x -> linear * x + translation.
struct AffineMap {
    Matrix<double> linear;
    Vec<double> translation;

    static AffineMap identity(std::size_t d) { return {Matrix<double>::identity(d), Vec<double>(d, 0.0)}; }
    static AffineMap linear_only(Matrix<double> m) {
        const std::size_t d = m.rows();
        return {std::move(m), Vec<double>(d, 0.0)};
    }

    std::size_t dim() const noexcept { return linear.rows(); }

    Vec<double> operator()(std::span<const double> x) const {
        Vec<double> y = linear * x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
        return y;
    }
    Vec<double> operator()(const Vec<double>& x) const { return (*this)(std::span<const double>(x)); }

    double det() const { return determinant(linear); }

    AffineMap inverse() const {
        AffineMap inv;
        try {
            inv.linear = ldsq::inverse(linear);
        } catch (const error&) {
            throw error(ErrorKind::InvalidArgument, "affine map has a singular linear part");
        }
        inv.translation = inv.linear * translation;
        for (double& t : inv.translation) t = -t;
        return inv;
    }

    /// (this o inner)(x) = this(inner(x))
    AffineMap after(const AffineMap& inner) const {
        AffineMap c;
        c.linear = linear * inner.linear;
        c.translation = linear * inner.translation;
        for (std::size_t i = 0; i < c.translation.size(); ++i) c.translation[i] += translation[i];
        return c;
    }
};

enum class ElementaryKind { Affine, QuadShear };

/// A global diffeomorphism of the target with an explicit inverse: either an
/// invertible affine map, or X_t <- sign * X_t + q(X) where q is a quadratic
/// form that ignores coordinate t.
struct TargetElementary {
    std::string stage;
    ElementaryKind kind = ElementaryKind::Affine;
    AffineMap affine;
    std::size_t index = 0;
    Matrix<double> quadratic;
    int sign = 1;

    static TargetElementary make_affine(std::string stage, AffineMap map) {
        TargetElementary e;
        e.stage = std::move(stage);
        e.kind = ElementaryKind::Affine;
        e.affine = std::move(map);
        return e;
    }

    static TargetElementary make_shear(std::string stage, std::size_t index, Matrix<double> q, int sign = 1) {
        TargetElementary e;
        e.stage = std::move(stage);
        e.kind = ElementaryKind::QuadShear;
        e.index = index;
        e.sign = sign;
        if (q.rows() != q.cols() || index >= q.rows()) throw error(ErrorKind::InvalidArgument, "quad-shear shape");
        if (sign != 1 && sign != -1) throw error(ErrorKind::InvalidArgument, "quad-shear sign must be +1 or -1");
        for (std::size_t i = 0; i < q.rows(); ++i) {
            if (q(i, index) != 0.0 || q(index, i) != 0.0)
                throw error(ErrorKind::InvalidArgument, "quad-shear polynomial must not involve its target coordinate");
        }
        e.quadratic = std::move(q);
        return e;
    }

    std::size_t dim() const noexcept { return kind == ElementaryKind::Affine ? affine.dim() : quadratic.rows(); }

    Vec<double> apply(std::span<const double> y) const {
        if (y.size() != dim()) throw error(ErrorKind::DimensionMismatch, "target elementary " + stage + ": dimension mismatch");
        if (kind == ElementaryKind::Affine) return affine(y);
        Vec<double> out(y.begin(), y.end());
        out[index] = sign * y[index] + shear_value(y);
        return out;
    }

    Vec<double> apply_inverse(std::span<const double> y) const {
        if (y.size() != dim()) throw error(ErrorKind::DimensionMismatch, "target elementary " + stage + ": dimension mismatch");
        if (kind == ElementaryKind::Affine) return affine.inverse()(y);
        Vec<double> out(y.begin(), y.end());
        out[index] = sign * (y[index] - shear_value(y));
        return out;
    }

    double shear_value(std::span<const double> y) const {
        double s = 0.0;
        for (std::size_t a = 0; a < quadratic.rows(); ++a)
            for (std::size_t b = 0; b < quadratic.cols(); ++b) s += quadratic(a, b) * y[a] * y[b];
        return s;
    }
};

struct SourceStage {
    std::string stage;
    AffineMap map;
};

/// Expected shape of a partial composition: component i < k is the linear
/// form linear.row(i) . x, the last component is x^T quadratic x.
struct Checkpoint {
    std::string stage;
    std::size_t source_prefix = 0;
    std::size_t target_prefix = 0;
    Matrix<double> linear;
    Matrix<double> quadratic;
};

enum class Metric { Lorentzian, Euclidean };

struct Witness {
    Metric metric = Metric::Lorentzian;
    NormalForm normal_form;
    std::string theorem_case;
    AffineMap source;
    std::vector<SourceStage> source_stages;
    std::vector<TargetElementary> target;
    std::vector<Checkpoint> checkpoints;
    /// First row of A*B in the V /\ T = {0} pipeline (empty otherwise).
    Vec<double> alpha;
    bool generic_branch = false;

    Vec<double> apply_target(std::span<const double> y) const {
        Vec<double> v(y.begin(), y.end());
        for (const auto& e : target) v = e.apply(v);
        return v;
    }
    Vec<double> apply_target(const Vec<double>& y) const { return apply_target(std::span<const double>(y)); }

    /// Composition of the first `count` source stages (outermost first).
    AffineMap source_prefix(std::size_t count) const {
        AffineMap h = AffineMap::identity(normal_form.n + 1);
        for (std::size_t i = 0; i < count && i < source_stages.size(); ++i) h = h.after(source_stages[i].map);
        return h;
    }

    /// Source stages named `name` (e.g. the Lorentz factor "H4").
    std::vector<const SourceStage*> find_source_stages(std::string_view name) const {
        std::vector<const SourceStage*> out;
        for (const auto& s : source_stages)
            if (s.stage == name) out.push_back(&s);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Individual construction steps
// ---------------------------------------------------------------------------

/// Target affine map H1 on R^{k+1}: component i-1 = (X_0 - X_i + |p_i - p_0|^2) / 2
/// with the Lorentz (or Euclidean) square, last component = X_0.
template <Scalar T>
TargetElementary step1_target(const PointConfig<T>& config, Metric metric = Metric::Lorentzian) {
    const std::size_t k = config.k();
    Matrix<double> m(k + 1, k + 1);
    Vec<double> t(k + 1, 0.0);
    const auto diffs = config.differences();
    for (std::size_t i = 1; i <= k; ++i) {
        const auto& d = diffs[i - 1];
        const T sq = metric == Metric::Lorentzian ? lorentz_inner(d, d) : euclid_inner(d, d);
        m(i - 1, 0) = 0.5;
        m(i - 1, i) = -0.5;
        t[i - 1] = 0.5 * to_double(sq);
    }
    m(k, 0) = 1.0;
    return TargetElementary::make_affine("H1", {std::move(m), std::move(t)});
}

/// Source map H2(x) = (-x_0 + p_00, x_1 + p_01, ..., x_n + p_0n); the Euclidean
/// variant is a pure translation by p_0.
template <Scalar T>
AffineMap step2_source(const PointConfig<T>& config, Metric metric = Metric::Lorentzian) {
    const std::size_t n = config.n();
    AffineMap h = AffineMap::identity(n + 1);
    if (metric == Metric::Lorentzian) h.linear(0, 0) = -1.0;
    h.translation = to_double(config[0]);
    return h;
}

/// Output of the orthonormalization step.
struct OrthonormalizedBasis {
    bool special = false;      ///< V contains the time axis
    Matrix<double> b;          ///< j x j regular matrix
    Matrix<double> c;          ///< n x n orthogonal completion
    Vec<double> alpha;         ///< first row of A*B (generic case)
};

/// B and C for the independent differences (columns of `a`, (n+1) x j).
/// Generic case: columns of A~B orthonormal, alpha = first row of AB.
/// Special case (e_0 in V): AB = [e_0 | (0; orthonormal)].
inline OrthonormalizedBasis step3_orthonormalize(const Matrix<double>& a, bool special) {
    const std::size_t np1 = a.rows(), j = a.cols();
    const std::size_t n = np1 - 1;
    const Matrix<double> spatial = a.block(1, 0, n, j);
    const Vec<double> time_row = a.row(0);
    OrthonormalizedBasis out;
    out.special = special;
    if (!special) {
        const PivotedQR qr = pivoted_mgs(spatial, j);
        out.b = orthonormalizing_factor(qr);
        const Matrix<double> ab_spatial = spatial * out.b;
        out.c = orthonormal_completion(ab_spatial);
        out.alpha.assign(j, 0.0);
        for (std::size_t c = 0; c < j; ++c)
            for (std::size_t r = 0; r < j; ++r) out.alpha[c] += time_row[r] * out.b(r, c);
        return out;
    }
    // special: the spatial block has rank j-1
    if (j == 0) throw error(ErrorKind::Stage, "step3: empty basis");
    const PivotedQR qr = pivoted_mgs(spatial, j - 1);
    const std::size_t r1 = j - 1;
    const Matrix<double> r11 = qr.r.block(0, 0, r1, r1);
    // u = e_rho - sum g_s e_{perm[s]} lies in ker(spatial); A u = (t, 0, ..., 0)
    Vec<double> g = r1 ? back_substitute(r11, qr.r.col(r1)) : Vec<double>{};
    Vec<double> u(j, 0.0);
    u[qr.perm[r1]] = 1.0;
    for (std::size_t s = 0; s < r1; ++s) u[qr.perm[s]] -= g[s];
    double t = 0.0;
    for (std::size_t c = 0; c < j; ++c) t += time_row[c] * u[c];
    if (std::fabs(t) <= 1e-12) throw error(ErrorKind::Stage, "step3: time axis not recovered from V");
    Vec<double> cvec(j);
    for (std::size_t c = 0; c < j; ++c) cvec[c] = u[c] / t;
    out.b = Matrix<double>(j, j);
    for (std::size_t c = 0; c < j; ++c) out.b(c, 0) = cvec[c];
    for (std::size_t col = 0; col < r1; ++col) {
        Vec<double> e(r1, 0.0);
        e[col] = 1.0;
        const Vec<double> rinv_col = back_substitute(r11, e);
        Vec<double> gcol(j, 0.0);
        for (std::size_t s = 0; s < r1; ++s) gcol[qr.perm[s]] = rinv_col[s];
        double time_part = 0.0;
        for (std::size_t c = 0; c < j; ++c) time_part += time_row[c] * gcol[c];
        for (std::size_t c = 0; c < j; ++c) out.b(c, col + 1) = gcol[c] - cvec[c] * time_part;
    }
    out.c = orthonormal_completion(qr.q);
    return out;
}

/// sum alpha_i^2; its position relative to 1 reproduces the likeness of V.
template <Scalar T>
T lemma4_quantity(std::span<const T> alpha) {
    T s(0);
    for (const auto& a : alpha) s += a * a;
    return s;
}
template <Scalar T>
T lemma4_quantity(const Vec<T>& alpha) {
    return lemma4_quantity(std::span<const T>(alpha));
}

namespace detail {

inline Matrix<double> permutation_matrix(const std::vector<std::size_t>& image_of) {
    // row i picks source coordinate image_of[i]: (P y)_i = y_{image_of[i]}
    Matrix<double> p(image_of.size(), image_of.size());
    for (std::size_t i = 0; i < image_of.size(); ++i) p(i, image_of[i]) = 1.0;
    return p;
}

inline void require_nonzero(double v, const char* stage) {
    if (std::fabs(v) <= 1e-12)
        throw error(ErrorKind::Stage, std::string(stage) + ": divisor too close to zero (" + std::to_string(v) + ")");
}

/// Accumulates source stages, target elementaries and checkpoints.
class WitnessAssembler {
public:
    WitnessAssembler(std::size_t n, std::size_t k) : n_(n), k_(k) {}

    void source(std::string stage, AffineMap m) { w_.source_stages.push_back({std::move(stage), std::move(m)}); }
    void target(TargetElementary e) { w_.target.push_back(std::move(e)); }
    void target_affine(std::string stage, Matrix<double> m) {
        target(TargetElementary::make_affine(std::move(stage), AffineMap::linear_only(std::move(m))));
    }
    void checkpoint(std::string stage, Matrix<double> linear, Matrix<double> quadratic) {
        w_.checkpoints.push_back({std::move(stage), w_.source_stages.size(), w_.target.size(), std::move(linear), std::move(quadratic)});
    }

    Witness finish(Metric metric, NormalForm nf, std::string theorem_case) {
        w_.metric = metric;
        w_.normal_form = nf;
        w_.theorem_case = std::move(theorem_case);
        w_.source = w_.source_prefix(w_.source_stages.size());
        return std::move(w_);
    }

    Witness& raw() { return w_; }
    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }

private:
    std::size_t n_, k_;
    Witness w_;
};

/// Points reordered so that the independent differences come first.
template <Scalar T>
std::vector<std::size_t> point_order(const ClassificationReport& r) {
    std::vector<std::size_t> order = r.independent;
    std::vector<bool> used(r.k + 1, false);
    for (std::size_t i : order) used[i] = true;
    for (std::size_t i = 1; i <= r.k; ++i)
        if (!used[i]) order.push_back(i);
    return order;
}

/// Shared prefix: point reordering, H1, H2, dependent-row elimination.
/// Returns the reordered configuration (as doubles) and the independent block A.
template <Scalar T>
std::pair<PointConfig<double>, Matrix<double>> reduce_to_independent(WitnessAssembler& as, const PointConfig<T>& config,
                                                                     const ClassificationReport& r, Metric metric) {
    const std::size_t n = config.n(), k = config.k(), j = r.recognition_dim;
    const std::vector<std::size_t> order = point_order<T>(r);
    bool identity = true;
    for (std::size_t i = 0; i < order.size(); ++i) identity = identity && order[i] == i + 1;
    std::vector<Vec<T>> pts{config[0]};
    for (std::size_t i : order) pts.push_back(config[i]);
    const PointConfig<T> reordered(n, std::move(pts));
    if (!identity) {
        std::vector<std::size_t> image(k + 1);
        image[0] = 0;
        for (std::size_t i = 0; i < order.size(); ++i) image[i + 1] = order[i];
        as.target_affine("reorder", permutation_matrix(image));
    }
    as.target(step1_target(reordered, metric));
    as.source("H2", step2_source(reordered, metric));

    const PointConfig<double> rd = to_double(reordered);
    const auto diffs = rd.differences();
    {
        Matrix<double> lin(k, n + 1);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c <= n; ++c) lin(i, c) = diffs[i][c];
        as.checkpoint("H2", std::move(lin),
                      metric == Metric::Lorentzian ? minkowski_metric<double>(n) : Matrix<double>::identity(n + 1));
    }

    std::vector<Vec<double>> ind(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(j));
    Matrix<double> a = Matrix<double>::from_columns(ind);
    if (j < k) {
        // express each dependent difference in the independent ones and cancel it
        const PivotedQR qr = pivoted_mgs(a, j);
        const Matrix<double> b = orthonormalizing_factor(qr);
        Matrix<double> elim = Matrix<double>::identity(k + 1);
        for (std::size_t m = j; m < k; ++m) {
            Vec<double> qtd(j, 0.0);
            for (std::size_t s = 0; s < j; ++s)
                for (std::size_t c = 0; c <= n; ++c) qtd[s] += qr.q(c, s) * diffs[m][c];
            const Vec<double> coeff = b * qtd;
            for (std::size_t s = 0; s < j; ++s) elim(m, s) = -coeff[s];
        }
        as.target_affine("Btilde", std::move(elim));
    }
    return {rd, std::move(a)};
}

/// Target permutation moving the last component to position j (tau padding).
inline void tau_order(WitnessAssembler& as, std::size_t j) {
    const std::size_t k = as.k();
    if (j >= k) return;
    std::vector<std::size_t> image(k + 1);
    for (std::size_t i = 0; i < j; ++i) image[i] = i;
    image[j] = k;
    for (std::size_t i = j + 1; i <= k; ++i) image[i] = i - 1;
    as.target_affine("tau", permutation_matrix(image));
}

/// Matrix of H3 acting on the target: first j components transformed by B^T.
inline Matrix<double> h3_matrix(const Matrix<double>& b, std::size_t k) {
    Matrix<double> m = Matrix<double>::identity(k + 1);
    m.set_block(0, 0, b.transpose());
    return m;
}

/// Source permutation (x_1, ..., x_j, x_0, x_{j+1}, ...) -> z.
inline Matrix<double> move_time_to_slot(std::size_t n, std::size_t j) {
    std::vector<std::size_t> image(n + 1);
    for (std::size_t i = 0; i < j; ++i) image[i] = i + 1;
    image[j] = 0;
    for (std::size_t i = j + 1; i <= n; ++i) image[i] = i;
    return permutation_matrix(image);
}

} // namespace detail

/// Remaining factors for the general-position-style core of the construction,
/// once the first j target components equal the linear forms of the
/// independent differences. Appends stages to the assembler and returns the
/// normal form reached (before tau padding).
inline void step4_reduce(detail::WitnessAssembler& as, const Matrix<double>& a, Likeness likeness, bool special) {
    using detail::require_nonzero;
    const std::size_t n = as.n(), k = as.k(), j = a.cols();
    const OrthonormalizedBasis ob = step3_orthonormalize(a, special);
    as.target_affine("H3", detail::h3_matrix(ob.b, k));
    Matrix<double> h4 = Matrix<double>::identity(n + 1);
    h4.set_block(1, 1, ob.c);
    as.source("H4", AffineMap::linear_only(h4));

    if (special) {
        Matrix<double> lin(k, n + 1);
        for (std::size_t i = 0; i < j; ++i) lin(i, i) = 1.0;
        as.checkpoint("H4", std::move(lin), minkowski_metric<double>(n));
        Matrix<double> q(k + 1, k + 1);
        q(0, 0) = 1.0;
        for (std::size_t i = 1; i < j; ++i) q(i, i) = -1.0;
        as.target(TargetElementary::make_shear("H5~", k, std::move(q)));
        as.source("H6~", AffineMap::linear_only(detail::move_time_to_slot(n, j)));
        return;
    }

    const Vec<double>& alpha = ob.alpha;
    as.raw().alpha = alpha;
    as.raw().generic_branch = true;
    {
        Matrix<double> lin(k, n + 1);
        for (std::size_t i = 0; i < j; ++i) {
            lin(i, 0) = alpha[i];
            lin(i, i + 1) = 1.0;
        }
        as.checkpoint("H4", std::move(lin), minkowski_metric<double>(n));
    }
    Matrix<double> h5 = Matrix<double>::identity(n + 1);
    for (std::size_t i = 0; i < j; ++i) h5(i + 1, 0) = -alpha[i];
    as.source("H5", AffineMap::linear_only(h5));

    const double s = lemma4_quantity(alpha);
    const double c = s - 1.0;
    if (likeness != Likeness::LightLike) {
        require_nonzero(c, "H6/H7");
        Matrix<double> q(k + 1, k + 1);
        for (std::size_t u = 0; u < j; ++u)
            for (std::size_t v = 0; v < j; ++v) q(u, v) = alpha[u] * alpha[v] / c - (u == v ? 1.0 : 0.0);
        as.target(TargetElementary::make_shear("H6", k, std::move(q)));
        Matrix<double> h7 = Matrix<double>::identity(n + 1);
        h7(0, 0) = 1.0 / std::sqrt(std::fabs(c));
        for (std::size_t i = 0; i < j; ++i) h7(0, i + 1) = alpha[i] / c;
        as.source("H7", AffineMap::linear_only(h7));
        if (likeness == Likeness::SpaceLike && j == n) {
            Matrix<double> flip = Matrix<double>::identity(k + 1);
            flip(k, k) = -1.0;
            as.target_affine("flip", std::move(flip));
        }
        return;
    }

    Matrix<double> q(k + 1, k + 1);
    for (std::size_t u = 0; u < j; ++u) q(u, u) = -1.0;
    as.target(TargetElementary::make_shear("H6'", k, std::move(q)));

    std::size_t pivot = 0;
    for (std::size_t i = 1; i < j; ++i)
        if (std::fabs(alpha[i]) > std::fabs(alpha[pivot])) pivot = i;
    Vec<double> ap = alpha;
    if (pivot != 0) {
        std::swap(ap[0], ap[pivot]);
        std::vector<std::size_t> src(n + 1), tgt(k + 1);
        for (std::size_t i = 0; i <= n; ++i) src[i] = i;
        for (std::size_t i = 0; i <= k; ++i) tgt[i] = i;
        std::swap(src[1], src[pivot + 1]);
        std::swap(tgt[0], tgt[pivot]);
        as.source("pivot", AffineMap::linear_only(detail::permutation_matrix(src)));
        as.target_affine("pivot", detail::permutation_matrix(tgt));
    }
    require_nonzero(ap[0], "H7'");
    Matrix<double> h7p = Matrix<double>::identity(n + 1);
    h7p(1, 1) = -1.0 / (2.0 * ap[0]);
    for (std::size_t i = 1; i < j; ++i) h7p(1, i + 1) = -ap[i] / ap[0];
    as.source("H7'", AffineMap::linear_only(h7p));
    Matrix<double> h8 = Matrix<double>::identity(k + 1);
    for (std::size_t i = 0; i < j; ++i) h8(0, i) = -2.0 * ap[i];
    as.target_affine("H8'", std::move(h8));
}

/// Witness for the Lorentzian distance-squared mapping of any configuration.
template <Scalar T>
Witness build_witness(const PointConfig<T>& config) {
    const ClassificationReport r = classify_lorentz(config);
    const std::size_t n = config.n(), k = config.k(), j = r.recognition_dim;
    detail::WitnessAssembler as(n, k);

    if (j == 0) {
        Matrix<double> m = Matrix<double>::identity(k + 1);
        for (std::size_t i = 1; i <= k; ++i) m(i, 0) = -1.0;
        as.target_affine("same_point", std::move(m));
        AffineMap src = AffineMap::identity(n + 1);
        src.translation = to_double(config[0]);
        as.source("translate", std::move(src));
        return as.finish(Metric::Lorentzian, r.normal_form, r.theorem_case);
    }

    auto [rd, a] = detail::reduce_to_independent(as, config, r, Metric::Lorentzian);

    if (j == n + 1) {
        as.target_affine("H3", detail::h3_matrix(inverse(a), k));
        Matrix<double> q(k + 1, k + 1);
        q(0, 0) = 1.0;
        for (std::size_t i = 1; i <= n; ++i) q(i, i) = -1.0;
        as.target(TargetElementary::make_shear("H5~", k, std::move(q)));
        return as.finish(Metric::Lorentzian, r.normal_form, r.theorem_case);
    }

    step4_reduce(as, a, *r.likeness, r.time_axis_in_v);
    detail::tau_order(as, j);
    return as.finish(Metric::Lorentzian, r.normal_form, r.theorem_case);
}

/// Witness for the Euclidean distance-squared mapping (j = k <= n or j = n+1):
/// the same pipeline with the identity metric, ending in the definite fold or
/// the inclusion.
template <Scalar T>
Witness build_euclidean_witness(const PointConfig<T>& config) {
    const ClassificationReport r = classify_euclid(config);
    const std::size_t n = config.n(), k = config.k(), j = r.recognition_dim;
    detail::WitnessAssembler as(n, k);
    auto [rd, a] = detail::reduce_to_independent(as, config, r, Metric::Euclidean);
    if (j == n + 1) {
        as.target_affine("H3", detail::h3_matrix(inverse(a), k));
        Matrix<double> q(k + 1, k + 1);
        for (std::size_t i = 0; i <= n; ++i) q(i, i) = -1.0;
        as.target(TargetElementary::make_shear("H5~", k, std::move(q)));
        return as.finish(Metric::Euclidean, r.normal_form, r.theorem_case);
    }
    const PivotedQR qr = pivoted_mgs(a, j);
    const Matrix<double> b = orthonormalizing_factor(qr);
    as.target_affine("H3", detail::h3_matrix(b, k));
    as.source("H4", AffineMap::linear_only(orthonormal_completion(a * b)));
    Matrix<double> q(k + 1, k + 1);
    for (std::size_t i = 0; i < j; ++i) q(i, i) = -1.0;
    as.target(TargetElementary::make_shear("H5~", k, std::move(q)));
    as.source("H6~", AffineMap::linear_only(detail::move_time_to_slot(n, j)));
    return as.finish(Metric::Euclidean, r.normal_form, r.theorem_case);
}

/// target_chain(L(source(x))) (or D for Euclidean witnesses).
inline Vec<double> apply_witness(const Witness& w, const PointConfig<double>& config, std::span<const double> x) {
    if (x.size() != w.normal_form.n + 1 || config.n() != w.normal_form.n || config.k() != w.normal_form.k)
        throw error(ErrorKind::DimensionMismatch, "apply_witness: dimension mismatch");
    const Vec<double> hx = w.source(x);
    const Vec<double> v = w.metric == Metric::Lorentzian ? eval_lorentz_dsq(config, hx) : eval_euclid_dsq(config, hx);
    return w.apply_target(v);
}
inline Vec<double> apply_witness(const Witness& w, const PointConfig<double>& config, const Vec<double>& x) {
    return apply_witness(w, config, std::span<const double>(x));
}

inline AffineMap invert_source(const Witness& w) { return w.source.inverse(); }

/// H^{-1}(y): elementaries inverted one by one in reverse order.
inline Vec<double> invert_target_point(const Witness& w, std::span<const double> y) {
    if (y.size() != w.normal_form.k + 1) throw error(ErrorKind::DimensionMismatch, "invert_target_point: dimension mismatch");
    Vec<double> v(y.begin(), y.end());
    for (auto it = w.target.rbegin(); it != w.target.rend(); ++it) v = it->apply_inverse(v);
    return v;
}
inline Vec<double> invert_target_point(const Witness& w, const Vec<double>& y) {
    return invert_target_point(w, std::span<const double>(y));
}

/// Fuses runs of consecutive affine elementaries; quad-shears stay in place.
inline std::vector<TargetElementary> fuse_affine_runs(const std::vector<TargetElementary>& chain) {
    std::vector<TargetElementary> out;
    for (const auto& e : chain) {
        if (e.kind == ElementaryKind::Affine && !out.empty() && out.back().kind == ElementaryKind::Affine) {
            out.back().affine = e.affine.after(out.back().affine);
            out.back().stage += "+" + e.stage;
        } else {
            out.push_back(e);
        }
    }
    return out;
}

} // namespace ldsq
