#pragma once

// Fibers L^{-1}(y) of n-point configurations in R^{1,n}: conic type and
// sampled points, pulled back through the witness.

#include "ldsq/normalizer.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace ldsq {

enum class ConicType { Circle, EquilateralHyperbola, Parabola };

constexpr std::string_view to_string(ConicType c) {
    switch (c) {
    case ConicType::Circle: return "circle";
    case ConicType::EquilateralHyperbola: return "equilateral_hyperbola";
    case ConicType::Parabola: return "parabola";
    }
    return "?";
}

constexpr ConicType conic_for(Likeness l) {
    switch (l) {
    case Likeness::TimeLike: return ConicType::Circle;
    case Likeness::SpaceLike: return ConicType::EquilateralHyperbola;
    case Likeness::LightLike: return ConicType::Parabola;
    }
    return ConicType::Circle;
}

/// Parameter windows for emitted samples.
struct FiberWindow {
    double rapidity = 3.0; ///< hyperbola: |t| <= rapidity
    double span = 3.0;     ///< parabola: x_n in [-span, span]
};

namespace detail {
template <Scalar T>
ClassificationReport require_fiber_hypotheses(const PointConfig<T>& config) {
    if (config.k() + 1 != config.n())
        throw error(ErrorKind::Hypothesis, "fiber: needs exactly n points in R^{1,n} (k = n-1)");
    const ClassificationReport r = classify_lorentz(config);
    if (!r.general_position) throw error(ErrorKind::Hypothesis, "fiber: points are not in general position");
    return r;
}
} // namespace detail

template <Scalar T>
ConicType fiber_conic_type(const PointConfig<T>& config) {
    return conic_for(*detail::require_fiber_hypotheses(config).likeness);
}

/// `count` points x with L(x) = y, spread over the fiber. Throws SingularFiber
/// when y is not a regular value with non-empty fiber.
template <Scalar T>
std::vector<Vec<double>> sample_fiber(const PointConfig<T>& config, std::span<const double> y, std::size_t count,
                                      const FiberWindow& window = {}) {
    const ConicType type = fiber_conic_type(config);
    const std::size_t n = config.n(), k = config.k();
    detail::require_same_size(y.size(), k + 1, "sample_fiber target value");
    if (!(window.rapidity > 0.0) || !(window.span > 0.0)) throw error(ErrorKind::InvalidArgument, "fiber window must be positive");

    const Witness w = build_witness(config);
    const Vec<double> z = w.apply_target(y);
    double scale = 1.0;
    for (double v : z) scale = std::max(scale, std::fabs(v));
    const double eps = 1e-12 * scale;
    const double c = z[k];
    const bool regular = type == ConicType::Circle ? c > eps
                         : type == ConicType::EquilateralHyperbola ? std::fabs(c) > eps
                                                                   : std::fabs(z[0]) > eps;
    if (!regular) throw error(ErrorKind::SingularFiber, "singular or empty fiber");

    // normal-form fiber: x_{i+1} = z_i for i < k, conic in (x_0, x_n)
    Vec<double> base(n + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) base[i + 1] = z[i];

    std::vector<Vec<double>> out;
    out.reserve(count);
    auto grid = [](std::size_t i, std::size_t total, double lo, double hi) {
        return total <= 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(total - 1);
    };
    for (std::size_t i = 0; i < count; ++i) {
        Vec<double> x = base;
        switch (type) {
        case ConicType::Circle: {
            const double r = std::sqrt(c);
            const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(count, 1));
            x[0] = r * std::cos(th);
            x[n] = r * std::sin(th);
            break;
        }
        case ConicType::EquilateralHyperbola: {
            const double r = std::sqrt(std::fabs(c));
            const double t = grid(i / 2, (count + 1) / 2, -window.rapidity, window.rapidity);
            const double branch = i % 2 == 0 ? 1.0 : -1.0;
            if (c > 0) {
                x[n] = branch * r * std::cosh(t);
                x[0] = r * std::sinh(t);
            } else {
                x[0] = branch * r * std::cosh(t);
                x[n] = r * std::sinh(t);
            }
            break;
        }
        case ConicType::Parabola: {
            // k = n-1 >= 1, so x_1 is a fixed coordinate on the fiber
            const double x1 = z[0];
            x[n] = grid(i, count, -window.span, window.span);
            x[0] = (c - x[n] * x[n]) / x1;
            break;
        }
        }
        out.push_back(w.source(x));
    }
    return out;
}

template <Scalar T>
std::vector<Vec<double>> sample_fiber(const PointConfig<T>& config, const Vec<double>& y, std::size_t count,
                                      const FiberWindow& window = {}) {
    return sample_fiber(config, std::span<const double>(y), count, window);
}

} // namespace ldsq
