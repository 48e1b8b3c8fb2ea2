// ldsq: classify, build, verify and sample Lorentzian distance-squared mappings.
//
// Exit codes: 0 success, 1 verification failed, 2 usage, parse or math errors.

#include "ldsq/ldsq.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

using ldsq::json;

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path);
    if (!in) throw ldsq::error(ldsq::ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_input(path));
    } catch (const json::parse_error& e) {
        throw ldsq::error(ldsq::ErrorKind::Parse, "malformed JSON in '" + path + "': " + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

struct Options {
    std::string config = "-";
    std::string witness;
    bool exact = false;
    bool euclidean = false;
    bool csv = false;
    std::optional<double> tol;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::vector<double> y;
    std::optional<std::size_t> count;
    double rapidity = 3.0;
    double span = 3.0;
};

int cmd_classify(const Options& o) {
    const auto doc = ldsq::config_from_json(read_json(o.config), o.exact);
    const auto report = doc.visit([&](const auto& c) {
        return o.euclidean ? ldsq::classify_euclid(c) : ldsq::classify_lorentz(c);
    });
    json out = ldsq::report_json(report);
    if (!o.euclidean && report.recognition_dim == report.k && report.k <= report.n && !report.time_axis_in_v) {
        const auto cc = doc.visit([](const auto& c) { return ldsq::crosscheck_likeness(c); });
        out["alpha_square_sum"] = ldsq::canonical_number(cc.alpha_square_sum);
    }
    emit(out);
    return 0;
}

int cmd_witness(const Options& o) {
    const auto doc = ldsq::config_from_json(read_json(o.config), o.exact);
    const auto w = doc.visit([&](const auto& c) { return o.euclidean ? ldsq::build_euclidean_witness(c) : ldsq::build_witness(c); });
    json out = ldsq::witness_json(w);
    out["config"] = ldsq::config_to_json(doc);
    emit(out);
    return 0;
}

int cmd_verify(const Options& o) {
    const json wj = read_json(o.witness);
    const ldsq::Witness w = ldsq::witness_from_json(wj);
    ldsq::ConfigDocument doc;
    if (!o.config.empty() && o.config != "-") {
        doc = ldsq::config_from_json(read_json(o.config), o.exact);
    } else if (wj.contains("config")) {
        doc = ldsq::config_from_json(wj["config"], o.exact);
    } else {
        doc = ldsq::config_from_json(read_json("-"), o.exact);
    }
    const std::size_t samples = o.samples.value_or(doc.samples.value_or(ldsq::default_samples));
    const double tol = o.tol.value_or(doc.tol.value_or(ldsq::default_tolerance));
    const std::uint64_t seed = o.seed.value_or(doc.seed.value_or(ldsq::default_seed));
    const auto rep = doc.visit([&](const auto& c) { return ldsq::verify_witness(c, w, samples, tol, seed); });
    emit(ldsq::verification_json(rep));
    return rep.pass ? 0 : 1;
}

int cmd_fiber(const Options& o) {
    const auto doc = ldsq::config_from_json(read_json(o.config), o.exact);
    ldsq::Vec<double> y = o.y;
    if (y.empty()) {
        if (!doc.y) throw ldsq::error(ldsq::ErrorKind::InvalidArgument, "fiber: no target value (use --y or a 'y' field)");
        y = *doc.y;
    }
    const std::size_t count = o.count.value_or(doc.count.value_or(16));
    const ldsq::FiberWindow window{o.rapidity, o.span};
    const auto type = doc.visit([](const auto& c) { return ldsq::fiber_conic_type(c); });
    const auto pts = doc.visit([&](const auto& c) { return ldsq::sample_fiber(c, y, count, window); });
    if (o.csv)
        std::cout << ldsq::fiber_csv(doc.n(), pts);
    else
        emit(ldsq::fiber_json(type, y, pts));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lorentzian distance-squared mappings: classification, witnesses, verification, fibers"};
    app.require_subcommand(1);
    Options o;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config,config", o.config, "configuration JSON file ('-' for stdin)");
        sub->add_flag("--exact", o.exact, "force the exact rational path; floating coordinates are an error");
    };

    auto* classify = app.add_subcommand("classify", "classify the mapping of a configuration");
    add_config(classify);
    classify->add_flag("--euclidean", o.euclidean, "classify the Euclidean distance-squared mapping instead");

    auto* witness = app.add_subcommand("witness", "construct the coordinate-change witness");
    add_config(witness);
    witness->add_flag("--euclidean", o.euclidean, "build the Euclidean witness instead");

    auto* verify = app.add_subcommand("verify", "check a witness by sampling");
    verify->add_option("--witness,witness", o.witness, "witness JSON file")->required();
    verify->add_option("--config", o.config, "configuration JSON (default: the one embedded in the witness)");
    verify->add_flag("--exact", o.exact, "force the exact rational path");
    verify->add_option("--tol", o.tol, "residual tolerance (default 1e-8)")->check(CLI::PositiveNumber);
    verify->add_option("--samples", o.samples, "number of sample points (default 100)")->check(CLI::PositiveNumber);
    verify->add_option("--seed", o.seed, "sampling seed (default 42)");

    auto* fiber = app.add_subcommand("fiber", "sample a non-singular fiber of an n-point configuration");
    add_config(fiber);
    fiber->add_option("--y", o.y, "target value y (k+1 numbers)")->delimiter(',');
    fiber->add_option("--count", o.count, "number of points (default 16)");
    fiber->add_flag("--csv", o.csv, "emit CSV with header x0,...,xn");
    fiber->add_option("--rapidity", o.rapidity, "hyperbola window |t| <= R (default 3)")->check(CLI::PositiveNumber);
    fiber->add_option("--span", o.span, "parabola window x_n in [-S,S] (default 3)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify) return cmd_classify(o);
        if (*witness) return cmd_witness(o);
        if (*verify) return cmd_verify(o);
        if (*fiber) return cmd_fiber(o);
    } catch (const ldsq::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
