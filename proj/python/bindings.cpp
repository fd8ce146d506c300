#include <pybind11/complex.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "condqubit/brute_force.hpp"
#include "condqubit/entropy.hpp"
#include "condqubit/error.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/io.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/verify.hpp"

namespace py = pybind11;
namespace cq = condqubit;

namespace {

// specs cross the boundary as JSON text; the Python side wraps dicts
cq::FamilySpec parse_spec(const std::string& text)
{
    cq::Json j;
    try {
        j = cq::Json::parse(text);
    } catch (const cq::Json::parse_error& e) {
        throw cq::Error(cq::ErrorCode::Validation, std::string("spec is not valid JSON: ") + e.what());
    }
    return cq::family_from_json(j);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "condqubit C++ core";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::exception<cq::Error>(m, "CondqubitError", PyExc_ValueError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const cq::Error& e) {
            const std::string msg = std::string(cq::to_string(e.code())) + ": " + e.what();
            if (e.code() == cq::ErrorCode::Io) {
                py::set_error(PyExc_OSError, msg.c_str());
            } else {
                py::set_error(error_type.get_stored(), msg.c_str());
            }
        }
    });

    m.def("state", [](const std::string& spec) { return cq::make_state(parse_spec(spec)).rho(); });

    m.def("fano", [](const std::string& spec) {
        return cq::fano_to_json(cq::make_state(parse_spec(spec)).fano()).dump();
    });

    m.def("describe_set", [](const std::string& spec) {
        return cq::descriptor_to_json(cq::describe_set(parse_spec(spec))).dump();
    });

    m.def(
        "sample_cloud",
        [](const std::string& spec, std::size_t n, std::uint64_t seed, int threads) {
            const auto state = cq::make_state(parse_spec(spec));
            std::vector<cq::CloudPoint> cloud;
            {
                py::gil_scoped_release release;
                cloud = cq::sample_cloud(state, n, seed, threads);
            }
            cq::RMatrix out(static_cast<Eigen::Index>(cloud.size()), 5);
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(i);
                out.row(r) << cloud[i].r_b.x(), cloud[i].r_b.y(), cloud[i].r_b.z(), cloud[i].q, cloud[i].p;
            }
            return out;
        },
        py::arg("spec"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("conditional_state", [](const std::string& spec, const cq::CVector& ket) {
        const auto co = cq::conditional_state(cq::make_state(parse_spec(spec)), ket);
        return py::make_tuple(cq::Vec3(co.r_b), co.probability);
    });

    m.def(
        "min_entropy",
        [](const std::string& spec, const std::string& entropy, const std::string& method, int restarts,
           std::uint64_t seed, bool full_space) {
            const auto fs = parse_spec(spec);
            const auto f = cq::parse_entropy(entropy);
            if (method == "analytic") {
                const auto r = cq::analytic_min(fs, f);
                if (!r) {
                    throw cq::Error(cq::ErrorCode::UnsupportedFamily, "no closed form for this family and entropy");
                }
                return cq::result_to_json(*r).dump();
            }
            if (method != "brute") {
                throw cq::Error(cq::ErrorCode::Validation, "method must be 'analytic' or 'brute'");
            }
            cq::BruteForceConfig c;
            c.restarts = restarts;
            c.seed = seed;
            c.full_space = full_space;
            const auto state = cq::make_state(fs);
            py::gil_scoped_release release;
            return cq::result_to_json(cq::brute_force_min(state, f, c)).dump();
        },
        py::arg("spec"), py::arg("entropy") = "linear", py::arg("method") = "analytic", py::arg("restarts") = 32,
        py::arg("seed") = 0, py::arg("full_space") = false);

    m.def(
        "ellipsoid_params",
        [](double p, double q, double beta, int dA, std::optional<double> p0) {
            const auto e = cq::ellipsoid_params(p, q, beta, dA, p0);
            py::dict d;
            d["a"] = e.a;
            d["b"] = e.b;
            d["e"] = e.e;
            d["zc"] = e.zc;
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("beta"), py::arg("dA"), py::arg("p0") = py::none());

    m.def("rank2_optimal_angle", &cq::rank2_optimal_angle, py::arg("p_plus"), py::arg("p_minus"), py::arg("theta_a"));
    m.def("rank2_s2_min", &cq::rank2_s2_min, py::arg("p_plus"), py::arg("p_minus"), py::arg("theta_a"),
          py::arg("theta_b"));
    m.def("spin_s2_curve", &cq::spin_s2_curve, py::arg("s"), py::arg("theta"), py::arg("p_plus") = 0.5);
    m.def("spin_max_angle", &cq::spin_max_angle, py::arg("s"));

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed) {
            std::vector<py::tuple> rows;
            std::vector<cq::CheckResult> results;
            {
                py::gil_scoped_release release;
                results = cq::run_suite(suite, seed);
            }
            for (const auto& r : results) {
                rows.push_back(py::make_tuple(r.suite, r.name, r.passed, r.detail));
            }
            return rows;
        },
        py::arg("suite") = "states", py::arg("seed") = 0);
}
