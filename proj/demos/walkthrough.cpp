// Classify a few configurations, build and verify their witnesses, and sample a fiber.

#include "ldsq/ldsq.hpp"

#include <iostream>

namespace {

using ldsq::PointConfig;
using ldsq::Rational;
using ldsq::Vec;

PointConfig<Rational> two_points(std::initializer_list<Rational> p1) {
    return PointConfig<Rational>(2, {Vec<Rational>(3, Rational(0)), Vec<Rational>(p1)});
}

int show(const std::string& label, const PointConfig<Rational>& c) {
    const auto report = ldsq::classify_lorentz(c);
    const auto w = ldsq::build_witness(c);
    const auto v = ldsq::verify_witness(c, w);
    std::cout << label << ": " << ldsq::to_string(report.normal_form.tag) << " (" << report.theorem_case << "), likeness "
              << (report.likeness ? std::string(ldsq::to_string(*report.likeness)) : std::string("undefined"))
              << ", max residual " << v.max_residual << ", verdict " << (v.pass ? "pass" : "fail") << '\n';
    return v.pass ? 0 : 1;
}

} // namespace

int main() {
    int failures = 0;
    failures += show("f (1,1,0)", two_points({1, 1, 0}));
    failures += show("g (1,2,0)", two_points({1, 2, 0}));
    failures += show("h (2,1,0)", two_points({2, 1, 0}));
    failures += show("phi (-1,-2,-1)", two_points({-1, -2, -1}));
    failures += show("psi (-2,-1,-1)", two_points({-2, -1, -1}));

    const auto g = two_points({1, 2, 0});
    const auto eu = ldsq::classify_euclid(g);
    std::cout << "g under the Euclidean metric: " << ldsq::to_string(eu.normal_form.tag) << '\n';

    const Vec<double> y{1.0, -1.0};
    const auto pts = ldsq::sample_fiber(g, y, 6);
    std::cout << "fiber of g over (1,-1) has conic type " << ldsq::to_string(ldsq::fiber_conic_type(g)) << ":\n";
    const auto gd = ldsq::to_double(g);
    for (const auto& x : pts) {
        const auto lx = ldsq::eval_lorentz_dsq(gd, x);
        std::cout << "  x = (" << x[0] << ", " << x[1] << ", " << x[2] << ")  L(x) = (" << lx[0] << ", " << lx[1] << ")\n";
    }
    return failures;
}
