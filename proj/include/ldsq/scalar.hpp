#pragma once

// Scalar regimes: exact rationals for classification and rank decisions,
// doubles for witness construction and numerical verification.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace ldsq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ErrorKind {
    DimensionMismatch,
    ZeroVector,
    EmptyBasis,
    InvalidArgument,
    NotCovered,
    Hypothesis,
    SingularFiber,
    Stage,
    Parse,
};

class error : public std::runtime_error {
public:
    error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

/// Pivots at or below this (relative) magnitude count as zero on the float path.
inline constexpr double pivot_tolerance = 1e-10;
/// Nonzero decision quantities below this magnitude mark a float verdict as borderline.
inline constexpr double borderline_tolerance = 1e-9;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return boost::multiprecision::abs(x); }

/// Outcome of deciding the sign of a computed quantity.
struct SignDecision {
    int sign = 0;
    bool borderline = false;
};

/// Exact sign for rationals. For doubles, |x| <= 1e-10 * scale is zero and
/// any nonzero |x| < 1e-9 * scale is flagged borderline.
inline SignDecision decide_sign(const Rational& x, double = 1.0) {
    return {x > 0 ? 1 : (x < 0 ? -1 : 0), false};
}

inline SignDecision decide_sign(double x, double scale = 1.0) {
    const double a = std::fabs(x);
    const double s = scale > 1.0 ? scale : 1.0;
    SignDecision d;
    d.borderline = x != 0.0 && a < borderline_tolerance * s;
    if (a <= pivot_tolerance * s) {
        d.sign = 0;
    } else {
        d.sign = x > 0 ? 1 : -1;
    }
    return d;
}

/// Parses "p/q", "p" (integers, optional sign) into an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        if (s.empty()) throw error(ErrorKind::Parse, "empty integer in rational literal");
        std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (i == s.size()) throw error(ErrorKind::Parse, "malformed rational literal");
        for (std::size_t c = i; c < s.size(); ++c) {
            if (!std::isdigit(static_cast<unsigned char>(s[c])))
                throw error(ErrorKind::Parse, "malformed rational literal '" + std::string(s) + "'");
        }
        BigInt v(std::string(s.substr(i)));
        return s.front() == '-' ? BigInt(-v) : v;
    };
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const BigInt num = parse_int(trim(text.substr(0, slash)));
    const BigInt den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw error(ErrorKind::Parse, "rational literal with zero denominator");
    return Rational(num, den);
}

/// "p/q" (or "p" when q = 1).
inline std::string format_rational(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

template <Scalar T>
std::vector<double> to_double(const std::vector<T>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
}

} // namespace ldsq
