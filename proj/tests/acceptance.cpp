// Acceptance criteria, one PASS/FAIL line each. Exit status is the number of
// failed criteria.

#include "generators.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

using namespace ldsq;
using namespace ldsq::testing;

namespace {

// Tolerances and sizes.
constexpr double kSoundnessTol = 1e-8;
constexpr std::size_t kSoundnessSamples = 100;
constexpr std::size_t kConfigsPerBranch = 20;
constexpr std::size_t kInvariancePairs = 200;
constexpr std::size_t kHyperplaneDraws = 200;
constexpr std::size_t kExtensionDraws = 100;
constexpr std::size_t kOracleBases = 500;
constexpr int kOracleRadius = 4;
constexpr std::size_t kFiberConfigs = 200;
constexpr double kFiberTol = 1e-8;
constexpr double kDetFloor = 1e-12;
constexpr double kLorentzDefectTol = 1e-10;
constexpr double kRoundtripTol = 1e-10;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

PointConfig<Q> cfg(std::size_t n, std::vector<Vec<Q>> pts) { return PointConfig<Q>(n, std::move(pts)); }

Vec<Q> v3(int a, int b, int c) { return {Q(a), Q(b), Q(c)}; }

std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

void criterion1() {
    const auto f = classify_lorentz(cfg(2, {v3(0, 0, 0), v3(1, 1, 0)}));
    const auto g = classify_lorentz(cfg(2, {v3(0, 0, 0), v3(1, 2, 0)}));
    const auto h = classify_lorentz(cfg(2, {v3(0, 0, 0), v3(2, 1, 0)}));
    const bool ok = f.normal_form == NormalForm::lightlike_fold(1, 2) && g.normal_form == NormalForm::indefinite_fold(1, 2) &&
                    h.normal_form == NormalForm::definite_fold(1, 2);
    report(1, ok, "two-point golden classes",
           "f=" + std::string(to_string(f.normal_form.tag)) + " g=" + std::string(to_string(g.normal_form.tag)) +
               " h=" + std::string(to_string(h.normal_form.tag)));
}

void criterion2() {
    const auto phi = cfg(2, {v3(0, 0, 0), v3(-1, -2, -1)});
    const auto psi = cfg(2, {v3(0, 0, 0), v3(-2, -1, -1)});
    const bool e_phi = equivalent_to_euclidean(phi);
    const bool e_psi = equivalent_to_euclidean(psi);
    const auto eu = classify_euclid(phi);
    const bool ok = !e_phi && e_psi && eu.normal_form == NormalForm::definite_fold(1, 2);
    report(2, ok, "Lorentzian vs Euclidean golden comparisons",
           std::string("phi->") + (e_phi ? "true" : "false") + " psi->" + (e_psi ? "true" : "false") +
               " euclid(phi)=" + std::string(to_string(eu.normal_form.tag)));
}

struct SweepStats {
    std::size_t runs = 0, failed = 0;
    double worst = 0.0;
    std::size_t generic_runs = 0, alpha_disagree = 0;
    std::size_t structure_failed = 0;
    double worst_defect = 0.0, worst_roundtrip = 0.0, smallest_det = 1e300;
    std::string first_failure;
};

SweepStats sweep() {
    SweepStats st;
    Rng rng(20240601);
    for (Branch b : all_branches()) {
        for (std::size_t i = 0; i < kConfigsPerBranch; ++i) {
            const auto c = random_config(rng, b);
            ++st.runs;
            try {
                const Witness w = build_witness(c);
                const auto rep = verify_witness(c, w, kSoundnessSamples, kSoundnessTol, 1000 + i);
                st.worst = std::max(st.worst, rep.max_residual);
                if (!(rep.max_residual < kSoundnessTol)) {
                    ++st.failed;
                    if (st.first_failure.empty()) st.first_failure = branch_name(b) + " residual " + fmt(rep.max_residual);
                }
                const double det = std::fabs(rep.source_det);
                st.smallest_det = std::min(st.smallest_det, det);
                st.worst_defect = std::max(st.worst_defect, rep.lorentz_defect_H4);
                st.worst_roundtrip = std::max({st.worst_roundtrip, rep.target_roundtrip_max});
                if (!(det > kDetFloor) || !(rep.lorentz_defect_H4 < kLorentzDefectTol) || !(rep.target_roundtrip_max < kRoundtripTol))
                    ++st.structure_failed;
                if (w.generic_branch) {
                    ++st.generic_runs;
                    const auto r = classify_lorentz(c);
                    const SignDecision sd = decide_sign(lemma4_quantity(w.alpha) - 1.0);
                    const Likeness by_alpha = sd.sign > 0 ? Likeness::TimeLike : sd.sign < 0 ? Likeness::SpaceLike : Likeness::LightLike;
                    if (by_alpha != *r.likeness) ++st.alpha_disagree;
                }
            } catch (const std::exception& e) {
                ++st.failed;
                ++st.structure_failed;
                if (st.first_failure.empty()) st.first_failure = branch_name(b) + " threw: " + e.what();
            }
        }
    }
    return st;
}

void criterion4() {
    Rng rng(4);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < kInvariancePairs; ++t) {
        const std::size_t n = uniform_int(rng, 1, 6);
        const std::size_t j = uniform_int(rng, 1, int(n) + 1);
        const Kind kind = j == n + 1 ? Kind::Spanning : static_cast<Kind>(uniform_int(rng, 0, 3));
        const auto vs = random_subspace(rng, n, j, kind);
        const Matrix<Q> g = rational_lorentz_transform(rng, n);
        std::vector<Vec<Q>> moved;
        for (const auto& v : vs) moved.push_back(g * v);
        const Likeness before = subspace_likeness(SubspaceBasis<Q>(n, vs));
        const Likeness after = subspace_likeness(SubspaceBasis<Q>(n, moved));
        // floating transform on the strictly time- or space-like cases
        bool float_ok = true;
        if (before != Likeness::LightLike) {
            const Matrix<double> gf = random_lorentz_transform(n, 77 + t);
            std::vector<Vec<double>> mf;
            for (const auto& v : vs) mf.push_back(gf * to_double(v));
            float_ok = subspace_likeness(SubspaceBasis<double>(n, mf)) == before;
        }
        if (before != after || !float_ok) ++bad;
    }
    report(4, bad == 0, "likeness invariant under Lorentz transforms",
           std::to_string(kInvariancePairs) + " pairs, " + std::to_string(bad) + " failures");
}

void criterion5() {
    Rng rng(5);
    std::size_t bad = 0, boundary = 0;
    for (std::size_t t = 0; t < kHyperplaneDraws; ++t) {
        const std::size_t n = uniform_int(rng, 1, 6);
        Vec<Q> alpha;
        switch (t % 4) {
        case 0: // exactly on the unit sphere
            alpha = rational_unit_vector(rng, n);
            break;
        case 1:
            alpha = short_vector(rng, n);
            break;
        default:
            alpha = random_vector(rng, n, 4);
            break;
        }
        const Likeness h = hyperplane_likeness(alpha);
        const Likeness s = subspace_likeness(hyperplane_basis<Q>(alpha));
        if (t % 4 == 0) {
            ++boundary;
            if (h != Likeness::LightLike) ++bad;
        }
        if (h != s) ++bad;
    }
    report(5, bad == 0, "hyperplane likeness matches inertia",
           std::to_string(kHyperplaneDraws) + " draws incl. " + std::to_string(boundary) + " with sum alpha^2 = 1, " +
               std::to_string(bad) + " failures");
}

void criterion6() {
    Rng rng(6);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < kExtensionDraws; ++t) {
        const std::size_t n = uniform_int(rng, 2, 6);
        const std::size_t k = uniform_int(rng, 1, int(n) - 1);
        Vec<Q> alpha;
        switch (t % 3) {
        case 0: alpha = rational_unit_vector(rng, k); break;
        case 1: alpha = short_vector(rng, k); break;
        default: alpha = random_vector(rng, k, 4); break;
        }
        const auto ext = graph_extension_vectors<Q>(alpha, n);
        const std::vector<Vec<Q>> v(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(k));
        if (subspace_likeness(SubspaceBasis<Q>(n, v)) != subspace_likeness(SubspaceBasis<Q>(n, ext))) ++bad;
    }
    report(6, bad == 0, "extension to the hyperplane keeps likeness",
           std::to_string(kExtensionDraws) + " instances, " + std::to_string(bad) + " failures");
}

void criterion8() {
    Rng rng(8);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < kOracleBases; ++t) {
        const std::size_t n = uniform_int(rng, 1, 4);
        const std::size_t m = uniform_int(rng, 1, int(std::min<std::size_t>(3, n + 1)));
        const Kind kind = m == n + 1 ? Kind::Spanning : static_cast<Kind>(uniform_int(rng, 0, 4));
        const auto vs = random_subspace(rng, n, m, kind);
        const auto ev = brute_force_likeness_oracle(vs, kOracleRadius);
        if (!ev.consistent_with(subspace_likeness(SubspaceBasis<Q>(n, vs)))) ++bad;
    }
    report(8, bad == 0, "brute-force oracle never contradicts inertia",
           std::to_string(kOracleBases) + " bases, radius " + std::to_string(kOracleRadius) + ", " + std::to_string(bad) + " contradictions");
}

/// A regular point of the normal-form fiber picture, pulled back to y = L(h(x*)).
Vec<double> regular_target(Rng& rng, const PointConfig<Q>& c, ConicType type) {
    const Witness w = build_witness(c);
    const std::size_t n = c.n();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec<double> x(n + 1);
    for (auto& v : x) v = u(rng);
    switch (type) {
    case ConicType::Circle: x[0] = 0.5 + 0.5 * std::fabs(x[0]); break;
    case ConicType::EquilateralHyperbola:
        if (std::fabs(std::fabs(x[0]) - std::fabs(x[n])) < 0.2) x[n] = std::copysign(std::fabs(x[0]) + 0.5, x[n]);
        break;
    case ConicType::Parabola: x[1] = std::copysign(0.5 + 0.5 * std::fabs(x[1]), x[1]); break;
    }
    return eval_lorentz_dsq(to_double(c), w.source(x));
}

void criterion9() {
    Rng rng(9);
    std::size_t bad_type = 0, bad_points = 0, points = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < kFiberConfigs; ++t) {
        const std::size_t n = uniform_int(rng, 2, 6);
        const Kind kind = static_cast<Kind>(uniform_int(rng, 0, 3));
        const auto c = assemble(rng, n, random_subspace(rng, n, n - 1, kind), 0);
        const auto r = classify_lorentz(c);
        const ConicType type = fiber_conic_type(c);
        if (type != conic_for(*r.likeness)) ++bad_type;
        const Likeness expected_like = kind == Kind::SpaceLike ? Likeness::SpaceLike
                                       : kind == Kind::LightLike ? Likeness::LightLike
                                                                 : Likeness::TimeLike;
        if (*r.likeness != expected_like) ++bad_type;
        const Vec<double> y = regular_target(rng, c, type);
        try {
            const auto pts = sample_fiber(c, y, 16);
            const auto cd = to_double(c);
            for (const auto& x : pts) {
                const Vec<double> lx = eval_lorentz_dsq(cd, x);
                double d = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i) d = std::max(d, std::fabs(lx[i] - y[i]));
                worst = std::max(worst, d);
                ++points;
                if (!(d < kFiberTol)) ++bad_points;
            }
        } catch (const std::exception&) {
            ++bad_points;
        }
    }
    report(9, bad_type == 0 && bad_points == 0, "fiber conic types and pullback",
           std::to_string(kFiberConfigs) + " configs, " + std::to_string(points) + " points, worst " + fmt(worst) + ", " +
               std::to_string(bad_type) + " type mismatches, " + std::to_string(bad_points) + " bad points");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    const SweepStats st = sweep();
    report(3, st.failed == 0, "witness soundness sweep over 14 branches",
           std::to_string(st.runs) + " configs x " + std::to_string(kSoundnessSamples) + " samples, worst residual " + fmt(st.worst) +
               (st.first_failure.empty() ? "" : ", first failure: " + st.first_failure));
    criterion4();
    criterion5();
    criterion6();
    report(7, st.generic_runs > 0 && st.alpha_disagree == 0, "sum alpha^2 - 1 sign matches inertia",
           std::to_string(st.generic_runs) + " generic runs, " + std::to_string(st.alpha_disagree) + " disagreements");
    criterion8();
    criterion9();
    report(10, st.structure_failed == 0, "witness structure",
           "min |det| " + fmt(st.smallest_det) + ", max H4 defect " + fmt(st.worst_defect) + ", max elementary round-trip " +
               fmt(st.worst_roundtrip));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d criteria failed, %.1f s\n", failures, secs);
    return failures;
}
