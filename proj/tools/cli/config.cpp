#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include <boost/math/interpolators/makima.hpp>

#include "csv.hpp"
#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"

namespace isofield::cli {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_validation("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail_validation("malformed JSON in '" + path + "': " + e.what());
    }
}

JsonReader::JsonReader(const json& in, json& resolved, std::string path)
    : in_(in), resolved_(resolved), path_(std::move(path)) {
    require(in_.is_object(), path_ + ": expected a JSON object");
    if (!resolved_.is_object()) resolved_ = in_;
}

bool JsonReader::has(const std::string& key) const { return in_.contains(key); }

const json& JsonReader::raw(const std::string& key) {
    if (!in_.contains(key)) fail_validation("missing key '" + where(key) + "'");
    used_.insert(key);
    return in_.at(key);
}

JsonReader JsonReader::object(const std::string& key) {
    const json& j = raw(key);
    return JsonReader(j, resolved_[key], where(key));
}

void JsonReader::finish() const {
    for (const auto& [k, v] : in_.items())
        if (!used_.count(k)) fail_validation("unknown key '" + where(k) + "'");
}

SpectralMeasure parse_atoms(const json& j, const std::string& where) {
    require(j.is_array(), where + ": expected an array of [lambda, mass] pairs");
    std::vector<Atom> atoms;
    for (const auto& a : j) {
        require(a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number(),
                where + ": each atom must be [lambda, mass]");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    return SpectralMeasure(std::move(atoms));
}

VectorSpectralPair parse_vector_pair(JsonReader r) {
    const auto p1 = r.has("phi1") ? parse_atoms(r.raw("phi1"), r.where("phi1")) : SpectralMeasure();
    const auto p2 = r.has("phi2") ? parse_atoms(r.raw("phi2"), r.where("phi2")) : SpectralMeasure();
    const auto norm = r.get_or<std::string>("normalization", "canonical");
    r.finish();
    VectorNormalization n;
    if (norm == "canonical")
        n = VectorNormalization::canonical;
    else if (norm == "yaglom")
        n = VectorNormalization::yaglom;
    else
        fail_validation("unknown normalization '" + norm + "' (canonical or yaglom)");
    VectorSpectralPair pair(p1, p2, n);
    pair.validate();
    return pair;
}

namespace {

RadialFn table_function(const std::string& file) {
    const auto t = read_csv_file(file);
    const std::size_t cr = t.column("r"), cv = t.column("value");
    std::vector<double> x, y;
    for (const auto& row : t.rows) {
        x.push_back(parse_double(row[cr], file + ": r"));
        y.push_back(parse_double(row[cv], file + ": value"));
    }
    require(x.size() >= 4, file + ": a radial table needs at least 4 rows");
    for (std::size_t k = 1; k < x.size(); ++k) require(x[k] > x[k - 1], file + ": r must be strictly increasing");
    const double lo = x.front(), hi = x.back();
    auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x), std::move(y));
    return [spline, lo, hi, file](double r) {
        if (r < lo || r > hi) fail_validation(file + ": r = " + format_number(r) + " outside the tabulated range");
        return (*spline)(r);
    };
}

}  // namespace

RadialFn parse_radial(JsonReader r, const std::string& base_dir) {
    const auto type = r.get<std::string>("type");
    RadialFn f;
    if (type == "gaussian" || type == "exponential") {
        const double a = r.get_or<double>("amplitude", 1.0);
        const double len = r.get<double>("length");
        require(len > 0.0, r.where("length") + " must be positive");
        if (type == "gaussian")
            f = [a, len](double x) { return a * std::exp(-(x / len) * (x / len)); };
        else
            f = [a, len](double x) { return a * std::exp(-std::abs(x) / len); };
    } else if (type == "bessel_atom") {
        const int n = r.get_or<int>("order", 0);
        const double lambda = r.get<double>("lambda");
        const double mass = r.get_or<double>("mass", 1.0);
        require(n >= 0 && lambda >= 0.0, r.where("type") + ": bessel_atom needs order >= 0 and lambda >= 0");
        f = [n, lambda, mass](double x) { return mass * spherical_bessel(n, lambda * x); };
    } else if (type == "constant") {
        const double v = r.get<double>("value");
        f = [v](double) { return v; };
    } else if (type == "table") {
        std::filesystem::path p = r.get<std::string>("file");
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        f = table_function(p.string());
    } else {
        fail_validation("unknown radial function type '" + type + "' at " + r.where("type"));
    }
    r.finish();
    return f;
}

CorrModel parse_model(const json& in, json& resolved, const std::string& base_dir) {
    JsonReader r(in, resolved, "model");
    CorrModel m;
    const auto basis = r.get<std::string>("basis");
    if (basis == "SCALAR") {
        m.kind = CorrModel::Kind::scalar;
        m.scalar = parse_atoms(r.raw("atoms"), r.where("atoms"));
        m.dimension = r.get_or<int>("dimension", 3);
        require(m.dimension >= 2, "model.dimension must be at least 2");
    } else if (basis == "VECTOR") {
        m.kind = CorrModel::Kind::vector;
        m.pair = parse_vector_pair(r.object("spectral"));
        const auto route = r.get_or<std::string>("route", "harmonic");
        require(route == "harmonic" || route == "yaglom", "model.route must be harmonic or yaglom");
        m.yaglom_route = route == "yaglom";
    } else {
        m.kind = CorrModel::Kind::kernel;
        m.kernels.basis = basis_from_name(basis);
        m.kernels.rank = m.kernels.basis == KernelBasis::l_rank1 ? 1 : 2;
        const json& coeffs = r.raw("coeffs");
        require(coeffs.is_array(), "model.coeffs must be an array");
        json& rc = resolved["coeffs"];
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            m.kernels.coeffs.push_back(
                parse_radial(JsonReader(coeffs[k], rc[k], "model.coeffs[" + std::to_string(k) + "]"), base_dir));
        m.kernels.validate();
    }
    r.finish();
    return m;
}

std::vector<std::string> model_index_names(const CorrModel& m) {
    if (m.kind == CorrModel::Kind::scalar) return {};
    if (m.kind == CorrModel::Kind::vector || m.kernels.rank == 1) return {"i", "j"};
    return {"i", "j", "k", "l"};
}

std::vector<TensorEntry> evaluate_model(const CorrModel& m, const Vec3& sep) {
    std::vector<TensorEntry> out;
    auto push3 = [&](const Mat3& M) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.push_back({{i + 1, j + 1}, M(i, j)});
    };
    switch (m.kind) {
        case CorrModel::Kind::scalar:
            out.push_back({{}, scalar_corr(norm(sep), m.scalar, m.dimension)});
            break;
        case CorrModel::Kind::vector:
            push3(m.yaglom_route ? vector_corr_yaglom(sep, m.pair) : vector_corr(sep, m.pair));
            break;
        case CorrModel::Kind::kernel: {
            if (m.kernels.rank == 1) {
                push3(rank1_corr(sep, m.kernels));
                break;
            }
            const Tensor4 T = m.kernels.basis == KernelBasis::h_inplane ? inplane_corr(sep, m.kernels)
                                                                        : rank2_corr(sep, m.kernels);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) out.push_back({{i + 1, j + 1, k + 1, l + 1}, T(i, j, k, l)});
            break;
        }
    }
    return out;
}

std::string field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::scalar: return "scalar";
        case FieldKind::vector: return "vector";
        case FieldKind::dyadic: return "dyadic";
    }
    return "";
}

std::vector<std::string> component_names(FieldKind k) {
    switch (k) {
        case FieldKind::scalar: return {"s"};
        case FieldKind::vector: return {"x", "y", "z"};
        case FieldKind::dyadic: return {"11", "12", "21", "22"};
    }
    return {};
}

SimulationPlan parse_plan(const json& in, json& resolved, FieldKind kind) {
    JsonReader r(in, resolved, "plan");
    SimulationPlan p;
    p.kind = kind;
    const auto k = r.get_or<std::string>("kind", field_kind_name(kind));
    require(k == field_kind_name(kind), "plan.kind '" + k + "' does not match the subcommand '" + field_kind_name(kind) + "'");
    p.ell_max = r.get_or<int>("ell_max", 16);
    p.realizations = r.get_or<int>("realizations", 1);
    const json& pts = r.raw("points");
    require(pts.is_array(), "plan.points must be an array of [x, y, z]");
    for (const auto& q : pts) {
        require(q.is_array() && q.size() == 3 && q[0].is_number() && q[1].is_number() && q[2].is_number(),
                "plan.points: each point must be [x, y, z]");
        p.points.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>()});
    }
    switch (kind) {
        case FieldKind::scalar:
            p.spectral = parse_atoms(r.raw("spectral"), "plan.spectral");
            break;
        case FieldKind::vector:
            p.pair = parse_vector_pair(r.object("spectral"));
            break;
        case FieldKind::dyadic:
            p.pair = parse_vector_pair(r.object("a"));
            p.pair_b = parse_vector_pair(r.object("b"));
            p.mu = r.get_or<double>("mu", 0.0);
            p.s = r.get_or<double>("s", 1.0);
            break;
    }
    r.finish();
    p.validate();
    return p;
}

std::vector<std::pair<int, int>> parse_pairs(const json& in) {
    json resolved;
    JsonReader r(in, resolved, "pairs");
    const json& arr = r.raw("pairs");
    r.finish();
    require(arr.is_array(), "pairs.pairs must be an array of [p, q]");
    std::vector<std::pair<int, int>> out;
    for (const auto& a : arr) {
        require(a.is_array() && a.size() == 2 && a[0].is_number_integer() && a[1].is_number_integer(),
                "pairs.pairs: each entry must be [p, q] with integer point indices");
        out.emplace_back(a[0].get<int>(), a[1].get<int>());
    }
    return out;
}

namespace {

Eigen::Matrix4d parse_matrix4(const json& j, const std::string& where) {
    require(j.is_array() && j.size() == 4, where + ": expected a 4x4 matrix over (Theta, E, B, V)");
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i) {
        require(j[i].is_array() && j[i].size() == 4, where + ": expected a 4x4 matrix over (Theta, E, B, V)");
        for (int k = 0; k < 4; ++k) {
            require(j[i][k].is_number(), where + ": matrix entries must be numbers");
            M(i, k) = j[i][k].get<double>();
        }
    }
    return M;
}

}  // namespace

AngularPowerSpectrum parse_spectrum(const json& in, json& resolved, int ell_max, bool& enforce_parity) {
    require(ell_max >= 0, "ell_max must be non-negative");
    JsonReader r(in, resolved, "spectrum");
    const auto model = r.get<std::string>("model");
    AngularPowerSpectrum s;
    if (model == "power_law") {
        const Eigen::Matrix4d A = parse_matrix4(r.raw("amplitude"), "spectrum.amplitude");
        s = AngularPowerSpectrum::power_law(ell_max, A, r.get<double>("alpha"));
    } else if (model == "table") {
        s = AngularPowerSpectrum::zeros(ell_max);
        const json& cells = r.raw("cells");
        require(cells.is_array(), "spectrum.cells must be an array");
        for (std::size_t k = 0; k < cells.size(); ++k) {
            json ignored;
            JsonReader c(cells[k], ignored, "spectrum.cells[" + std::to_string(k) + "]");
            const int ell = c.get<int>("ell");
            const Eigen::Matrix4d M = parse_matrix4(c.raw("C"), c.where("C"));
            c.finish();
            require(ell >= 0, "spectrum.cells: ell must be non-negative");
            if (ell <= ell_max) s.C[ell] = M;
        }
    } else {
        fail_validation("unknown spectrum model '" + model + "' (power_law or table)");
    }
    if (r.has("ell_min")) {
        JsonReader m = r.object("ell_min");
        const char* names[4] = {"Theta", "E", "B", "V"};
        for (int c = 0; c < 4; ++c) s.ell_min[c] = m.get_or<int>(names[c], s.ell_min[c]);
        m.finish();
    } else {
        r.get_or<json>("ell_min", json{{"Theta", s.ell_min[0]}, {"E", s.ell_min[1]}, {"B", s.ell_min[2]}, {"V", s.ell_min[3]}});
    }
    if (model == "power_law") {
        // Re-apply the masks after ell_min overrides.
        for (int l = 0; l <= ell_max; ++l) s.C[l] = s.effective(l);
    }
    enforce_parity = r.get_or<bool>("enforce_parity", false);
    r.finish();
    s.validate(enforce_parity);
    return s;
}

}  // namespace isofield::cli
