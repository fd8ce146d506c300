#include "condqubit/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "condqubit/error.hpp"

namespace condqubit {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& family)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw Error(ErrorCode::Validation,
                        "unknown key '" + it.key() + "' for family " + family);
        }
    }
}

double num(const Json& j, const char* key, double fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number()) {
        throw Error(ErrorCode::Validation, std::string("'") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

double required(const Json& j, const char* key)
{
    if (!j.contains(key)) {
        throw Error(ErrorCode::Validation, std::string("missing required key '") + key + "'");
    }
    return num(j, key, 0.0);
}

int integer(const Json& j, const char* key, int fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number_integer()) {
        throw Error(ErrorCode::Validation, std::string("'") + key + "' must be an integer");
    }
    return j.at(key).get<int>();
}

CMatrix matrix_from_json(const Json& re, const Json* im)
{
    if (!re.is_array() || re.empty()) {
        throw Error(ErrorCode::Validation, "rho_re must be a non-empty array of rows");
    }
    const auto n = static_cast<Eigen::Index>(re.size());
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = re.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw Error(ErrorCode::Shape, "rho_re must be square");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    if (im != nullptr) {
        if (!im->is_array() || static_cast<Eigen::Index>(im->size()) != n) {
            throw Error(ErrorCode::Shape, "rho_im must match rho_re");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const Json& row = im->at(static_cast<std::size_t>(i));
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw Error(ErrorCode::Shape, "rho_im must match rho_re");
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                m(i, k) += Complex(0.0, row.at(static_cast<std::size_t>(k)).get<double>());
            }
        }
    }
    return m;
}

} // namespace

FamilySpec family_from_json(const Json& j)
{
    try {
        if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
            throw Error(ErrorCode::Validation, "family spec must be an object with a string 'family'");
        }
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "pure-mix") {
            check_keys(j, {"family", "p", "beta", "dA"}, fam);
            return PureMix{required(j, "p"), required(j, "beta"), integer(j, "dA", 2)};
        }
        if (fam == "two-pure-mix") {
            check_keys(j, {"family", "p1", "p2", "beta1", "beta2", "gamma", "eta", "dA"}, fam);
            return TwoPureMix{required(j, "p1"), required(j, "p2"), required(j, "beta1"),
                              required(j, "beta2"), num(j, "gamma", 0.0), num(j, "eta", 0.0),
                              integer(j, "dA", 4)};
        }
        if (fam == "rank2-separable") {
            check_keys(j, {"family", "p_plus", "p_minus", "theta_a", "theta_b", "dA"}, fam);
            Rank2Separable r;
            r.p_plus = num(j, "p_plus", 0.5);
            if (j.contains("p_minus")) {
                r.p_minus = num(j, "p_minus", 0.0);
            }
            r.theta_a = required(j, "theta_a");
            r.theta_b = required(j, "theta_b");
            r.dA = integer(j, "dA", 2);
            return r;
        }
        if (fam == "spin-aligned") {
            check_keys(j, {"family", "s", "theta", "p_plus"}, fam);
            return SpinAligned{required(j, "s"), required(j, "theta"), num(j, "p_plus", 0.5)};
        }
        if (fam == "schmidt-mix") {
            check_keys(j, {"family", "components", "dA", "p0"}, fam);
            SchmidtMix m;
            m.dA = integer(j, "dA", 2);
            if (j.contains("p0")) {
                m.p0 = num(j, "p0", 0.0);
            }
            if (!j.contains("components") || !j.at("components").is_array()) {
                throw Error(ErrorCode::Validation, "schmidt-mix needs a 'components' array");
            }
            for (const auto& c : j.at("components")) {
                if (!c.is_object()) {
                    throw Error(ErrorCode::Validation, "schmidt-mix component must be an object");
                }
                check_keys(c, {"weight", "schmidt", "gamma", "eta"}, fam + " component");
                SchmidtComponent sc;
                sc.weight = required(c, "weight");
                if (!c.contains("schmidt") || !c.at("schmidt").is_array()) {
                    throw Error(ErrorCode::Validation, "component needs a 'schmidt' array");
                }
                sc.schmidt = c.at("schmidt").get<std::vector<double>>();
                sc.gamma = num(c, "gamma", 0.0);
                sc.eta = num(c, "eta", 0.0);
                m.components.push_back(std::move(sc));
            }
            return m;
        }
        if (fam == "raw") {
            check_keys(j, {"family", "rho_re", "rho_im", "dA"}, fam);
            if (!j.contains("rho_re")) {
                throw Error(ErrorCode::Validation, "raw family needs 'rho_re'");
            }
            RawState r;
            r.rho = matrix_from_json(j.at("rho_re"), j.contains("rho_im") ? &j.at("rho_im") : nullptr);
            r.dA = integer(j, "dA", static_cast<int>(r.rho.rows() / 2));
            return r;
        }
        throw Error(ErrorCode::Validation, "unknown family '" + fam + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Validation, std::string("malformed family spec: ") + e.what());
    }
}

Json family_to_json(const FamilySpec& spec)
{
    struct Visitor {
        Json operator()(const PureMix& s) const
        {
            return {{"family", "pure-mix"}, {"p", s.p}, {"beta", s.beta}, {"dA", s.dA}};
        }
        Json operator()(const TwoPureMix& s) const
        {
            return {{"family", "two-pure-mix"}, {"p1", s.p1}, {"p2", s.p2},
                    {"beta1", s.beta1}, {"beta2", s.beta2}, {"gamma", s.gamma},
                    {"eta", s.eta}, {"dA", s.dA}};
        }
        Json operator()(const Rank2Separable& s) const
        {
            Json j = {{"family", "rank2-separable"}, {"p_plus", s.p_plus},
                      {"theta_a", s.theta_a}, {"theta_b", s.theta_b}, {"dA", s.dA}};
            if (s.p_minus) {
                j["p_minus"] = *s.p_minus;
            }
            return j;
        }
        Json operator()(const SpinAligned& s) const
        {
            return {{"family", "spin-aligned"}, {"s", s.s}, {"theta", s.theta}, {"p_plus", s.p_plus}};
        }
        Json operator()(const SchmidtMix& s) const
        {
            Json comps = Json::array();
            for (const auto& c : s.components) {
                comps.push_back({{"weight", c.weight}, {"schmidt", c.schmidt},
                                 {"gamma", c.gamma}, {"eta", c.eta}});
            }
            Json j = {{"family", "schmidt-mix"}, {"components", comps}, {"dA", s.dA}};
            if (s.p0) {
                j["p0"] = *s.p0;
            }
            return j;
        }
        Json operator()(const RawState& s) const
        {
            Json re = Json::array(), im = Json::array();
            for (Eigen::Index i = 0; i < s.rho.rows(); ++i) {
                Json rr = Json::array(), ii = Json::array();
                for (Eigen::Index k = 0; k < s.rho.cols(); ++k) {
                    rr.push_back(s.rho(i, k).real());
                    ii.push_back(s.rho(i, k).imag());
                }
                re.push_back(rr);
                im.push_back(ii);
            }
            return {{"family", "raw"}, {"rho_re", re}, {"rho_im", im}, {"dA", s.dA}};
        }
    };
    return std::visit(Visitor{}, spec);
}

Json vec_to_json(const Vec3& v)
{
    return Json::array({v.x(), v.y(), v.z()});
}

Json ellipsoid_to_json(const EllipsoidDescriptor& e)
{
    return {{"a", e.a}, {"b", e.b}, {"e", e.e}, {"zc", e.zc}, {"axis", vec_to_json(e.axis)}};
}

Json descriptor_to_json(const SetDescriptor& d)
{
    struct Visitor {
        Json operator()(const FilledEllipsoid& s) const
        {
            return {{"ellipsoid", ellipsoid_to_json(s.ellipsoid)}};
        }
        Json operator()(const HullOfEllipsoids& s) const
        {
            Json es = Json::array(), ps = Json::array();
            for (const auto& e : s.ellipsoids) {
                es.push_back(ellipsoid_to_json(e));
            }
            for (const auto& p : s.points) {
                ps.push_back(vec_to_json(p));
            }
            return {{"ellipsoids", es}, {"points", ps}};
        }
        Json operator()(const IceCream& s) const
        {
            return {{"ellipsoid", ellipsoid_to_json(s.ellipsoid)}, {"vertex", vec_to_json(s.vertex)}};
        }
        Json operator()(const Triangle& s) const
        {
            return {{"vertices", Json::array({vec_to_json(s.v0), vec_to_json(s.v1), vec_to_json(s.v2)})}};
        }
        Json operator()(const Segment& s) const
        {
            return {{"endpoints", Json::array({vec_to_json(s.p0), vec_to_json(s.p1)})}};
        }
        Json operator()(const Point& s) const { return {{"point", vec_to_json(s.p)}}; }
        Json operator()(const PancakeHull& s) const
        {
            return {{"ellipse",
                     {{"center", vec_to_json(s.ellipse.center)},
                      {"axis_u", vec_to_json(s.ellipse.axis_u)},
                      {"axis_v", vec_to_json(s.ellipse.axis_v)}}},
                    {"with_origin", s.with_origin}};
        }
    };
    Json j = std::visit(Visitor{}, d);
    j["kind"] = descriptor_kind(d);
    return j;
}

Json measurement_to_json(const RankOneMeasurement& m)
{
    Json out = Json::array();
    for (const auto& e : m.elements) {
        Json re = Json::array(), im = Json::array();
        for (Eigen::Index i = 0; i < e.ket.size(); ++i) {
            re.push_back(e.ket(i).real());
            im.push_back(e.ket(i).imag());
        }
        out.push_back({{"weight", e.weight}, {"ket_re", re}, {"ket_im", im}});
    }
    return out;
}

Json result_to_json(const MinimizationResult& r)
{
    const auto& d = r.diagnostics;
    Json diag = {{"iterations", d.iterations}, {"evaluations", d.evaluations},
                 {"restarts", d.restarts}, {"best_restart", d.best_restart},
                 {"residual", d.residual}, {"converged", d.converged},
                 {"certified", d.certified}, {"warnings", d.warnings}};
    if (d.reference) {
        diag["reference"] = *d.reference;
    }
    return {{"value", r.value}, {"method", r.method},
            {"measurement", measurement_to_json(r.measurement)}, {"diagnostics", diag}};
}

Json fano_to_json(const FanoData& f)
{
    Json c = Json::array();
    for (Eigen::Index i = 0; i < f.correlations.rows(); ++i) {
        c.push_back(Json::array({f.correlations(i, 0), f.correlations(i, 1), f.correlations(i, 2)}));
    }
    return {{"r_a", std::vector<double>(f.r_a.data(), f.r_a.data() + f.r_a.size())},
            {"r_b", vec_to_json(f.r_b)},
            {"correlations", c}};
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json cloud_to_json(const std::vector<CloudPoint>& cloud)
{
    Json rows = Json::array();
    for (const auto& c : cloud) {
        rows.push_back({c.r_b.x(), c.r_b.y(), c.r_b.z(), c.q, c.p});
    }
    return {{"columns", {"x", "y", "z", "q", "p"}}, {"rows", std::move(rows)}};
}

void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& cloud)
{
    os << "x,y,z,q,p\n";
    for (const auto& c : cloud) {
        os << format_double(c.r_b.x()) << ',' << format_double(c.r_b.y()) << ','
           << format_double(c.r_b.z()) << ',' << format_double(c.q) << ',' << format_double(c.p)
           << '\n';
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::Io, "write to '" + path + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot move output into '" + path + "'");
    }
}

} // namespace condqubit
