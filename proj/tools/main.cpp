// condqubit command-line front end.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "condqubit/brute_force.hpp"
#include "condqubit/entropy.hpp"
#include "condqubit/error.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/io.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/state_factory.hpp"
#include "condqubit/verify.hpp"

namespace cq = condqubit;

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kIoError = 3 };

// Family given either as a JSON file (--spec) or as --family plus flags.
struct FamilyOptions {
    std::string family;
    std::string spec_path;
    std::map<std::string, double> reals;
    std::map<std::string, int> ints;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--family", family,
                        "pure-mix | two-pure-mix | rank2-separable | spin-aligned");
        cmd->add_option("--spec", spec_path, "FamilySpec JSON file (any family, incl. schmidt-mix, raw)");
        // angles in radians
        for (const auto& [flag, key] :
             std::initializer_list<std::pair<const char*, const char*>>{
                 {"--p", "p"}, {"--beta", "beta"}, {"--p1", "p1"}, {"--p2", "p2"},
                 {"--beta1", "beta1"}, {"--beta2", "beta2"}, {"--gamma", "gamma"},
                 {"--eta", "eta"}, {"--p-plus", "p_plus"}, {"--p-minus", "p_minus"},
                 {"--theta-a", "theta_a"}, {"--theta-b", "theta_b"}, {"--s", "s"},
                 {"--theta", "theta"}}) {
            cmd->add_option(flag, reals[key])->description(std::string(key) + (is_angle(key) ? " (radians)" : ""));
        }
        cmd->add_option("--dA", ints["dA"], "qudit dimension");
        cmd_ = cmd;
    }

    cq::FamilySpec build() const
    {
        if (!spec_path.empty()) {
            if (!family.empty()) {
                throw cq::Error(cq::ErrorCode::Validation, "use either --spec or --family, not both");
            }
            cq::Json j;
            try {
                j = cq::Json::parse(cq::read_text_file(spec_path));
            } catch (const cq::Json::parse_error& e) {
                throw cq::Error(cq::ErrorCode::Validation, std::string("spec is not valid JSON: ") + e.what());
            }
            return cq::family_from_json(j);
        }
        if (family.empty()) {
            throw cq::Error(cq::ErrorCode::Validation, "--family or --spec is required");
        }
        cq::Json j = {{"family", family}};
        for (const auto& [key, value] : reals) {
            if (given(key)) {
                j[key] = value;
            }
        }
        if (given("dA")) {
            j["dA"] = ints.at("dA");
        }
        return cq::family_from_json(j);
    }

private:
    CLI::App* cmd_ = nullptr;

    static bool is_angle(const std::string& key)
    {
        return key.find("beta") == 0 || key.find("theta") == 0 || key == "gamma" || key == "eta";
    }

    bool given(const std::string& key) const
    {
        std::string flag = "--" + key;
        for (auto& c : flag) {
            c = c == '_' ? '-' : c;
        }
        return cmd_->count(flag) > 0;
    }
};

void emit(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        cq::write_text_file(out, text);
    }
}

int cmd_sample_set(const FamilyOptions& fo, long long n, std::uint64_t seed, int threads, const std::string& format,
                   const std::string& out)
{
    if (n < 0) {
        throw cq::Error(cq::ErrorCode::Validation, "--n must be >= 0");
    }
    if (out.empty()) {
        throw cq::Error(cq::ErrorCode::Validation, "--out is required");
    }
    const auto state = cq::make_state(fo.build());
    const auto cloud = cq::sample_cloud(state, static_cast<std::size_t>(n), seed, threads);
    if (format == "json") {
        cq::Json j = cq::cloud_to_json(cloud);
        j["family"] = cq::family_to_json(fo.build());
        j["seed"] = seed;
        cq::write_text_file(out, j.dump(1) + "\n");
    } else {
        std::ostringstream csv;
        cq::write_cloud_csv(csv, cloud);
        cq::write_text_file(out, csv.str());
    }

    cq::Vec3 lo = cq::Vec3::Constant(std::numeric_limits<double>::infinity());
    cq::Vec3 hi = -lo;
    double rmax = 0.0;
    for (const auto& c : cloud) {
        lo = lo.cwiseMin(c.r_b);
        hi = hi.cwiseMax(c.r_b);
        rmax = std::max(rmax, c.r_b.norm());
    }
    std::printf("samples   %zu (requested %lld)\n", cloud.size(), n);
    if (!cloud.empty()) {
        std::printf("x range   [%.6f, %.6f]\ny range   [%.6f, %.6f]\nz range   [%.6f, %.6f]\n",
                    lo.x(), hi.x(), lo.y(), hi.y(), lo.z(), hi.z());
        std::printf("max |r|   %.6f\n", rmax);
    }
    std::printf("wrote     %s\n", out.c_str());
    return kOk;
}

int cmd_geometry(const FamilyOptions& fo, const std::string& out)
{
    const auto spec = fo.build();
    cq::make_state(spec); // feasibility
    const auto desc = cq::describe_set(spec);
    cq::Json j = cq::descriptor_to_json(desc);
    j["family"] = cq::family_to_json(spec);
    emit(out, j.dump(2) + "\n");
    return kOk;
}

struct MinOptions {
    std::string entropy = "vn";
    std::string method = "both";
    int restarts = 32;
    int grid_density = 16;
    int threads = 1;
    bool full_space = false;
};

int cmd_min_entropy(const FamilyOptions& fo, const MinOptions& mo, std::uint64_t seed, const std::string& out)
{
    const auto f = cq::parse_entropy(mo.entropy);
    if (mo.method != "analytic" && mo.method != "brute" && mo.method != "both") {
        throw cq::Error(cq::ErrorCode::Validation, "--method must be analytic, brute or both");
    }
    const auto spec = fo.build();
    const auto state = cq::make_state(spec);

    std::optional<cq::MinimizationResult> analytic;
    if (mo.method != "brute") {
        analytic = cq::analytic_min(spec, f);
        if (!analytic) {
            throw cq::Error(cq::ErrorCode::UnsupportedFamily,
                            "no closed-form minimum for this family and entropy; use --method brute");
        }
    }
    std::optional<cq::MinimizationResult> brute;
    if (mo.method != "analytic") {
        cq::BruteForceConfig cfg;
        cfg.restarts = mo.restarts;
        cfg.grid_density = mo.grid_density;
        cfg.seed = seed;
        cfg.threads = mo.threads;
        cfg.full_space = mo.full_space;
        if (analytic) {
            cfg.reference = analytic->value;
        }
        brute = cq::brute_force_min(state, f, cfg);
    }

    cq::Json j = {{"family", cq::family_to_json(spec)}, {"entropy", cq::entropy_name(f)}};
    int code = kOk;
    if (analytic) {
        j["analytic"] = cq::result_to_json(*analytic);
    }
    if (brute) {
        j["brute"] = cq::result_to_json(*brute);
    }
    if (analytic && brute) {
        const double diff = brute->value - analytic->value;
        j["difference"] = diff;
        if (std::abs(diff) > 1e-6) {
            code = kVerifyFailed;
        }
    }
    emit(out, j.dump(2) + "\n");
    if (!out.empty() && out != "-") {
        if (analytic) {
            std::printf("analytic  %.17g  (%s)\n", analytic->value, analytic->method.c_str());
        }
        if (brute) {
            std::printf("brute     %.17g\n", brute->value);
        }
        if (analytic && brute) {
            std::printf("diff      %.3e\n", brute->value - analytic->value);
        }
    }
    if (code != kOk) {
        std::cerr << "analytic and brute-force minima differ by more than 1e-6\n";
    }
    return code;
}

// "a:b:n" -> n evenly spaced points from a to b inclusive
std::vector<double> parse_range(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw cq::Error(cq::ErrorCode::Validation, "--thetas expects start:stop:count");
    }
    double a = 0.0, b = 0.0;
    long n = 0;
    try {
        std::size_t pos = 0;
        a = std::stod(parts[0], &pos);
        if (pos != parts[0].size()) throw std::invalid_argument("a");
        b = std::stod(parts[1], &pos);
        if (pos != parts[1].size()) throw std::invalid_argument("b");
        n = std::stol(parts[2], &pos);
        if (pos != parts[2].size()) throw std::invalid_argument("n");
    } catch (const std::exception&) {
        throw cq::Error(cq::ErrorCode::Validation, "--thetas expects start:stop:count");
    }
    if (n < 1) {
        throw cq::Error(cq::ErrorCode::Validation, "--thetas count must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

int cmd_spin_curve(double s, double p_plus, const std::string& thetas, const std::string& out)
{
    cq::spin_dimension(s);
    const auto grid = parse_range(thetas);
    for (double th : grid) {
        if (th < 0.0 || th > M_PI / 2 + 1e-12) {
            throw cq::Error(cq::ErrorCode::Validation, "theta must lie in [0, pi/2]");
        }
    }
    if (p_plus < 0.0 || p_plus > 1.0) {
        throw cq::Error(cq::ErrorCode::Validation, "--p-plus must lie in [0, 1]");
    }
    std::ostringstream csv;
    csv << "theta,s2,theta_eff,min_angle,avg_plus_x,avg_plus_y,avg_plus_z,avg_minus_x,avg_minus_y,avg_minus_z\n";
    auto f = [](double x) { return cq::format_double(x); };
    for (double th : grid) {
        const auto r = cq::spin_min(s, std::min(th, M_PI / 2), p_plus);
        csv << f(th) << ',' << f(r.s2) << ',' << f(r.theta_eff) << ',' << f(r.min_angle);
        for (const auto& v : r.spin_averages) {
            csv << ',' << f(v.x()) << ',' << f(v.y()) << ',' << f(v.z());
        }
        csv << '\n';
    }
    emit(out, csv.str());
    return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed)
{
    const auto results = cq::run_suite(suite, seed);
    return cq::print_report(std::cout, results) ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Conditional qubit sets and measurement-dependent conditional entropies"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out;

    auto* sample = app.add_subcommand("sample-set", "Haar-sampled conditional Bloch vectors (x,y,z,q,p) as CSV or JSON");
    FamilyOptions sample_family;
    sample_family.attach(sample);
    long long n = 100000;
    int threads = 1;
    sample->add_option("--n", n, "number of random kets")->capture_default_str();
    sample->add_option("--seed", seed, "master seed")->capture_default_str();
    sample->add_option("--threads", threads, "worker threads (output does not depend on it)")->capture_default_str();
    std::string format = "csv";
    sample->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sample->add_option("--out", out, "output path");

    auto* geometry = app.add_subcommand("geometry", "Analytic set descriptor as JSON");
    FamilyOptions geometry_family;
    geometry_family.attach(geometry);
    geometry->add_option("--out", out, "output JSON path (stdout when omitted)");

    auto* minent = app.add_subcommand("min-entropy", "Minimum conditional entropy as JSON");
    FamilyOptions min_family;
    min_family.attach(minent);
    MinOptions mo;
    minent->add_option("--entropy", mo.entropy, "vn | linear | tsallis:q")->capture_default_str();
    minent->add_option("--method", mo.method, "analytic | brute | both")->capture_default_str();
    minent->add_option("--restarts", mo.restarts, "random restarts of the brute-force search")->capture_default_str();
    minent->add_option("--grid-density", mo.grid_density, "Haar candidates screened per restart")
        ->capture_default_str();
    minent->add_option("--threads", mo.threads, "worker threads (result does not depend on it)")
        ->capture_default_str();
    minent->add_flag("--full-space", mo.full_space, "search the whole qudit instead of the support of rho_A");
    minent->add_option("--seed", seed, "master seed")->capture_default_str();
    minent->add_option("--out", out, "output JSON path (stdout when omitted)");

    auto* spin = app.add_subcommand("spin-curve", "Minimum quadratic conditional entropy of aligned spin pairs vs theta");
    double s = 1.0, p_plus = 0.5;
    std::string thetas = "0:1.5707963267948966:200";
    spin->add_option("--s", s, "spin (1/2, 1, 3/2, ...)")->capture_default_str();
    spin->add_option("--p-plus", p_plus, "weight of |theta theta>")->capture_default_str();
    spin->add_option("--thetas", thetas, "start:stop:count in radians")->capture_default_str();
    spin->add_option("--out", out, "output CSV path (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suites and print a pass/fail table");
    std::string suite = "all";
    verify->add_option("--suite", suite, "states | geometry | entropy | all")->capture_default_str();
    verify->add_option("--seed", seed, "master seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (*sample) {
            return cmd_sample_set(sample_family, n, seed, threads, format, out);
        }
        if (*geometry) {
            return cmd_geometry(geometry_family, out);
        }
        if (*minent) {
            return cmd_min_entropy(min_family, mo, seed, out);
        }
        if (*spin) {
            return cmd_spin_curve(s, p_plus, thetas, out);
        }
        if (*verify) {
            return cmd_verify(suite, seed);
        }
    } catch (const cq::Error& e) {
        std::cerr << "error (" << cq::to_string(e.code()) << "): " << e.what() << '\n';
        return e.code() == cq::ErrorCode::Io ? kIoError : kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}
