#pragma once

// JSON documents for configurations, reports, witnesses and fiber samples.
// Report floats are rounded to 12 significant digits; witness coefficients
// keep full precision so a serialized witness verifies like the original.

#include "ldsq/fibers.hpp"
#include "ldsq/verifier.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

namespace ldsq {

using json = nlohmann::json;

/// Rounds to 12 significant digits (the %.12g canonical form).
inline double canonical(double v) {
    if (!std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline json canonical_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return canonical(v);
}

/// Parsed configuration document. Exactly one of exact/approx is set.
struct ConfigDocument {
    std::optional<PointConfig<Rational>> exact;
    std::optional<PointConfig<double>> approx;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::size_t> samples;
    std::optional<Vec<double>> y;
    std::optional<std::size_t> count;

    bool is_exact() const noexcept { return exact.has_value(); }
    std::size_t n() const { return exact ? exact->n() : approx->n(); }
    std::size_t k() const { return exact ? exact->k() : approx->k(); }
    PointConfig<double> as_double() const { return exact ? to_double(*exact) : *approx; }

    /// Calls f with the configuration in its native scalar type.
    template <class F>
    decltype(auto) visit(F&& f) const {
        if (exact) return f(*exact);
        return f(*approx);
    }
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw error(ErrorKind::Parse, what); }

// An entry is exact (integer or "p/q") or floating.
struct ParsedScalar {
    bool exact = true;
    Rational q;
    double d = 0.0;
};

inline ParsedScalar parse_scalar(const json& v) {
    ParsedScalar s;
    if (v.is_string()) {
        s.q = parse_rational(v.get<std::string>());
        s.d = to_double(s.q);
    } else if (v.is_number_integer()) {
        s.q = v.is_number_unsigned() ? Rational(v.get<std::uint64_t>()) : Rational(v.get<std::int64_t>());
        s.d = to_double(s.q);
    } else if (v.is_number_float()) {
        s.exact = false;
        s.d = v.get<double>();
        if (!std::isfinite(s.d)) parse_fail("non-finite coordinate");
    } else {
        parse_fail("coordinate must be a number or a \"p/q\" string");
    }
    return s;
}

template <class T>
std::optional<T> optional_field(const json& doc, const char* key) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    try {
        return doc[key].get<T>();
    } catch (const json::exception&) {
        parse_fail(std::string("field '") + key + "' has the wrong type");
    }
}

inline json matrix_json(const Matrix<double>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rows;
}

inline Matrix<double> matrix_from_json(const json& j) {
    if (!j.is_array()) parse_fail("matrix must be an array of rows");
    std::vector<Vec<double>> rows;
    for (const auto& r : j) rows.push_back(r.get<Vec<double>>());
    if (rows.empty()) return {};
    return Matrix<double>::from_rows(rows);
}

inline json affine_json(const AffineMap& a) { return {{"linear", matrix_json(a.linear)}, {"translation", a.translation}}; }

inline AffineMap affine_from_json(const json& j) {
    AffineMap a{matrix_from_json(j.at("linear")), j.at("translation").get<Vec<double>>()};
    if (a.linear.rows() != a.linear.cols() || a.translation.size() != a.linear.rows())
        parse_fail("affine map has inconsistent shape");
    return a;
}

inline std::string metric_name(Metric m) { return m == Metric::Lorentzian ? "lorentzian" : "euclidean"; }

} // namespace detail

/// Reads {n, points, seed?, tol?, samples?, y?, count?}. With force_exact, a
/// floating coordinate is an error.
inline ConfigDocument config_from_json(const json& doc, bool force_exact = false) {
    if (!doc.is_object()) detail::parse_fail("configuration must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1)
        detail::parse_fail("field 'n' must be an integer >= 1");
    if (!doc.contains("points") || !doc["points"].is_array()) detail::parse_fail("field 'points' must be an array");
    const auto n = static_cast<std::size_t>(doc["n"].get<long long>());

    std::vector<std::vector<detail::ParsedScalar>> raw;
    bool all_exact = true;
    for (const auto& p : doc["points"]) {
        if (!p.is_array()) detail::parse_fail("each point must be an array");
        std::vector<detail::ParsedScalar> row;
        for (const auto& v : p) {
            row.push_back(detail::parse_scalar(v));
            all_exact = all_exact && row.back().exact;
        }
        raw.push_back(std::move(row));
    }
    if (force_exact && !all_exact) detail::parse_fail("--exact given but the configuration has floating-point coordinates");

    ConfigDocument out;
    if (all_exact) {
        std::vector<Vec<Rational>> pts;
        for (const auto& r : raw) {
            Vec<Rational> v;
            for (const auto& s : r) v.push_back(s.q);
            pts.push_back(std::move(v));
        }
        out.exact.emplace(n, std::move(pts));
    } else {
        std::vector<Vec<double>> pts;
        for (const auto& r : raw) {
            Vec<double> v;
            for (const auto& s : r) v.push_back(s.d);
            pts.push_back(std::move(v));
        }
        out.approx.emplace(n, std::move(pts));
    }
    out.seed = detail::optional_field<std::uint64_t>(doc, "seed");
    out.tol = detail::optional_field<double>(doc, "tol");
    out.samples = detail::optional_field<std::size_t>(doc, "samples");
    out.y = detail::optional_field<Vec<double>>(doc, "y");
    out.count = detail::optional_field<std::size_t>(doc, "count");
    if (out.tol && !(*out.tol > 0)) detail::parse_fail("field 'tol' must be positive");
    if (out.samples && *out.samples < 1) detail::parse_fail("field 'samples' must be >= 1");
    return out;
}

inline ConfigDocument parse_config(std::string_view text, bool force_exact = false) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        detail::parse_fail(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc, force_exact);
}

/// Echo of the points: rationals as "p/q" strings (integers as numbers).
inline json config_to_json(const ConfigDocument& c) {
    json pts = json::array();
    if (c.exact) {
        for (const auto& p : c.exact->points()) {
            json row = json::array();
            for (const auto& v : p) {
                const BigInt num = boost::multiprecision::numerator(v);
                if (boost::multiprecision::denominator(v) == 1 && boost::multiprecision::abs(num) < BigInt(1LL << 53))
                    row.push_back(num.convert_to<long long>());
                else
                    row.push_back(format_rational(v));
            }
            pts.push_back(std::move(row));
        }
    } else {
        for (const auto& p : c.approx->points()) pts.push_back(p);
    }
    return {{"n", c.n()}, {"points", std::move(pts)}};
}

inline json normal_form_json(const NormalForm& nf) {
    return {{"tag", std::string(to_string(nf.tag))}, {"params", {{"n", nf.n}, {"k", nf.k}, {"j", nf.j}}}};
}

inline NormalForm normal_form_from_json(const json& j) {
    NormalForm nf;
    nf.tag = normal_form_tag_from_string(j.at("tag").get<std::string>());
    const json& p = j.at("params");
    nf.n = p.at("n").get<std::size_t>();
    nf.k = p.at("k").get<std::size_t>();
    nf.j = p.at("j").get<std::size_t>();
    nf.validate();
    return nf;
}

inline json report_json(const ClassificationReport& r) {
    return {{"k", r.k},
            {"n", r.n},
            {"recognition_dim", r.recognition_dim},
            {"general_position", r.general_position},
            {"likeness", r.likeness ? std::string(to_string(*r.likeness)) : std::string("undefined")},
            {"normal_form", normal_form_json(r.normal_form)},
            {"theorem_case", r.theorem_case},
            {"borderline", r.borderline},
            {"independent", r.independent},
            {"time_axis_in_v", r.time_axis_in_v}};
}

inline json elementary_json(const TargetElementary& e) {
    json j = {{"stage", e.stage}};
    if (e.kind == ElementaryKind::Affine) {
        j["kind"] = "affine";
        j["linear"] = detail::matrix_json(e.affine.linear);
        j["translation"] = e.affine.translation;
    } else {
        j["kind"] = "quad_shear";
        j["index"] = e.index;
        j["quadratic"] = detail::matrix_json(e.quadratic);
        j["sign"] = e.sign;
    }
    return j;
}

inline TargetElementary elementary_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::string stage = j.value("stage", std::string("?"));
    if (kind == "affine") return TargetElementary::make_affine(stage, detail::affine_from_json(j));
    if (kind == "quad_shear")
        return TargetElementary::make_shear(stage, j.at("index").get<std::size_t>(), detail::matrix_from_json(j.at("quadratic")),
                                            j.value("sign", 1));
    detail::parse_fail("unknown target elementary kind '" + kind + "'");
}

inline json witness_json(const Witness& w) {
    json stages = json::array();
    for (const auto& s : w.source_stages) stages.push_back({{"stage", s.stage}, {"map", detail::affine_json(s.map)}});
    json target = json::array();
    for (const auto& e : w.target) target.push_back(elementary_json(e));
    json cps = json::array();
    for (const auto& c : w.checkpoints)
        cps.push_back({{"stage", c.stage},
                       {"source_prefix", c.source_prefix},
                       {"target_prefix", c.target_prefix},
                       {"linear", detail::matrix_json(c.linear)},
                       {"quadratic", detail::matrix_json(c.quadratic)}});
    json j = {{"metric", detail::metric_name(w.metric)},
              {"normal_form", normal_form_json(w.normal_form)},
              {"theorem_case", w.theorem_case},
              {"source", detail::affine_json(w.source)},
              {"source_stages", std::move(stages)},
              {"target", std::move(target)},
              {"checkpoints", std::move(cps)}};
    if (w.generic_branch) j["alpha"] = w.alpha;
    return j;
}

/// Rebuilds a witness. The composed source map is authoritative; stages are
/// kept for structural checks.
inline Witness witness_from_json(const json& j) {
    try {
        Witness w;
        const std::string metric = j.value("metric", std::string("lorentzian"));
        if (metric != "lorentzian" && metric != "euclidean") detail::parse_fail("unknown metric '" + metric + "'");
        w.metric = metric == "lorentzian" ? Metric::Lorentzian : Metric::Euclidean;
        w.normal_form = normal_form_from_json(j.at("normal_form"));
        w.theorem_case = j.value("theorem_case", std::string());
        w.source = detail::affine_from_json(j.at("source"));
        if (j.contains("source_stages"))
            for (const auto& s : j["source_stages"])
                w.source_stages.push_back({s.at("stage").get<std::string>(), detail::affine_from_json(s.at("map"))});
        for (const auto& e : j.at("target")) w.target.push_back(elementary_from_json(e));
        if (j.contains("checkpoints"))
            for (const auto& c : j["checkpoints"])
                w.checkpoints.push_back({c.at("stage").get<std::string>(), c.at("source_prefix").get<std::size_t>(),
                                         c.at("target_prefix").get<std::size_t>(), detail::matrix_from_json(c.at("linear")),
                                         detail::matrix_from_json(c.at("quadratic"))});
        if (j.contains("alpha")) {
            w.alpha = j["alpha"].get<Vec<double>>();
            w.generic_branch = true;
        }
        if (w.source.dim() != w.normal_form.n + 1) detail::parse_fail("witness source map does not match n");
        for (const auto& e : w.target)
            if (e.dim() != w.normal_form.k + 1) detail::parse_fail("witness target map '" + e.stage + "' does not match k");
        return w;
    } catch (const json::exception& e) {
        detail::parse_fail(std::string("malformed witness: ") + e.what());
    }
}

inline json verification_json(const VerificationReport& r) {
    json cps = json::object();
    for (const auto& [stage, v] : r.checkpoint_residuals) cps[stage] = canonical_number(v);
    return {{"samples", r.samples},
            {"max_residual", canonical_number(r.max_residual)},
            {"mean_residual", canonical_number(r.mean_residual)},
            {"source_det", canonical_number(r.source_det)},
            {"source_roundtrip_max", canonical_number(r.source_roundtrip_max)},
            {"target_roundtrip_max", canonical_number(r.target_roundtrip_max)},
            {"lorentz_defect_H4", canonical_number(r.lorentz_defect_H4)},
            {"checkpoint_residuals", std::move(cps)},
            {"verdict", r.pass ? "pass" : "fail"},
            {"tol", canonical_number(r.tol)},
            {"seed", r.seed}};
}

inline json fiber_json(ConicType type, std::span<const double> y, const std::vector<Vec<double>>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        json row = json::array();
        for (double v : p) row.push_back(canonical_number(v));
        arr.push_back(std::move(row));
    }
    json yj = json::array();
    for (double v : y) yj.push_back(canonical_number(v));
    return {{"conic_type", std::string(to_string(type))}, {"y", std::move(yj)}, {"count", pts.size()}, {"points", std::move(arr)}};
}

/// CSV with header x0,x1,...,xn and %.12g fields.
inline std::string fiber_csv(std::size_t n, const std::vector<Vec<double>>& pts) {
    std::ostringstream os;
    for (std::size_t i = 0; i <= n; ++i) os << (i ? "," : "") << 'x' << i;
    os << '\n';
    char buf[64];
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", p[i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace ldsq
