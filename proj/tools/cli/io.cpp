#include "io.hpp"

#include <cmath>
#include <map>

#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"

namespace isofield::cli {

namespace {

std::vector<std::string> labels_for(int components) {
    switch (components) {
        case 1: return {"s"};
        case 3: return {"x", "y", "z"};
        case 4: return {"11", "12", "21", "22"};
        default: break;
    }
    std::vector<std::string> out;
    for (int c = 0; c < components; ++c) out.push_back(std::to_string(c));
    return out;
}

}  // namespace

void write_realization(std::ostream& out, const FieldRealization& real, const CsvMeta& meta) {
    CsvWriter w(out);
    w.meta(meta);
    w.header({"realization", "point", "x", "y", "z", "component", "value"});
    const auto labels = labels_for(real.components);
    for (int r = 0; r < real.realizations; ++r)
        for (int p = 0; p < real.points; ++p) {
            const Vec3& x = real.plan.points[p];
            for (int c = 0; c < real.components; ++c) w.row(r, p, x[0], x[1], x[2], labels[c], real.at(r, p, c));
        }
}

LoadedRealization read_realization(const CsvTable& t) {
    const std::size_t cr = t.column("realization"), cp = t.column("point"), cx = t.column("x"), cy = t.column("y"),
                      cz = t.column("z"), cc = t.column("component"), cv = t.column("value");
    LoadedRealization out;
    std::map<std::string, int> comp_index;
    int max_r = -1, max_p = -1;
    for (const auto& row : t.rows) {
        max_r = std::max<int>(max_r, static_cast<int>(parse_int(row[cr], "realization")));
        max_p = std::max<int>(max_p, static_cast<int>(parse_int(row[cp], "point")));
        if (!comp_index.count(row[cc])) {
            comp_index[row[cc]] = static_cast<int>(out.components.size());
            out.components.push_back(row[cc]);
        }
    }
    require(!t.rows.empty(), "realization CSV has no data rows");
    const int R = max_r + 1, P = max_p + 1, C = static_cast<int>(out.components.size());
    require(static_cast<std::size_t>(R) * P * C == t.rows.size(),
            "realization CSV is not a complete (realization, point, component) array");
    FieldRealization& f = out.real;
    f.realizations = R;
    f.points = P;
    f.components = C;
    f.values.assign(t.rows.size(), std::nan(""));
    out.points.assign(P, Vec3{std::nan(""), 0, 0});
    std::vector<char> seen(t.rows.size(), 0);
    for (const auto& row : t.rows) {
        const int r = static_cast<int>(parse_int(row[cr], "realization"));
        const int p = static_cast<int>(parse_int(row[cp], "point"));
        require(r >= 0 && p >= 0, "realization CSV: negative index");
        const int c = comp_index[row[cc]];
        const std::size_t k = (static_cast<std::size_t>(r) * P + p) * C + c;
        require(!seen[k], "realization CSV: duplicate row for realization " + row[cr] + ", point " + row[cp]);
        seen[k] = 1;
        f.values[k] = parse_double(row[cv], "value");
        const Vec3 x{parse_double(row[cx], "x"), parse_double(row[cy], "y"), parse_double(row[cz], "z")};
        if (std::isnan(out.points[p][0]))
            out.points[p] = x;
        else
            require(out.points[p] == x, "realization CSV: point " + row[cp] + " has inconsistent coordinates");
    }
    f.plan.points = out.points;
    f.plan.realizations = R;
    return out;
}

void write_correlation_estimates(std::ostream& out, const std::vector<CorrelationEstimate>& est,
                                 const std::vector<std::string>& components, const CsvMeta& meta) {
    CsvWriter w(out);
    w.meta(meta);
    w.header({"p", "q", "a", "b", "value", "stderr"});
    for (const auto& e : est)
        for (int a = 0; a < e.value.rows(); ++a)
            for (int b = 0; b < e.value.cols(); ++b)
                w.row(e.p, e.q, components[a], components[b], e.value(a, b), e.std_error(a, b));
}

void write_stokes_map(std::ostream& out, const StokesMap& map, const CsvMeta& meta) {
    CsvWriter w(out);
    w.meta(meta);
    w.header({"theta", "phi", "Theta", "Q", "U", "V"});
    for (std::size_t k = 0; k < map.grid.size(); ++k) {
        const auto& v = map.values[k];
        w.row(map.grid[k].theta, map.grid[k].phi, v[0], v[1], v[2], v[3]);
    }
}

StokesMap read_stokes_map(const CsvTable& t) {
    static const char* names[6] = {"theta", "phi", "Theta", "Q", "U", "V"};
    require(t.header.size() == 6, "map CSV must have exactly the columns theta, phi, Theta, Q, U, V");
    for (int c = 0; c < 6; ++c)
        require(t.header[c] == names[c], "map CSV must have exactly the columns theta, phi, Theta, Q, U, V");
    StokesMap m;
    for (const auto& row : t.rows) {
        m.grid.push_back({parse_double(row[0], "theta"), parse_double(row[1], "phi")});
        m.values.push_back({parse_double(row[2], "Theta"), parse_double(row[3], "Q"), parse_double(row[4], "U"),
                            parse_double(row[5], "V")});
    }
    require(!m.grid.empty(), "map CSV has no data rows");
    return m;
}

int infer_grid_rows(const StokesMap& map) {
    const std::size_t n = map.grid.size();
    int rows = 1;
    while (static_cast<std::size_t>(rows) * (2 * rows - 1) < n) ++rows;
    require(static_cast<std::size_t>(rows) * (2 * rows - 1) == n,
            "map has " + std::to_string(n) + " nodes; expected n_theta * (2 n_theta - 1) Gauss-Legendre nodes");
    const auto q = sphere_grid(rows);
    for (std::size_t k = 0; k < n; ++k)
        require(std::abs(q.nodes[k].theta - map.grid[k].theta) < 1e-12 && std::abs(q.nodes[k].phi - map.grid[k].phi) < 1e-12,
                "map nodes do not match the Gauss-Legendre grid with " + std::to_string(rows) + " rows");
    return rows;
}

void write_cell(std::ostream& out, const CellEstimate& est, const CsvMeta& meta) {
    static const char* comp = "TEBV";
    CsvWriter w(out);
    w.meta(meta);
    w.header({"ell", "pair", "value", "stderr"});
    for (int l = 0; l <= est.ell_max; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                w.row(l, std::string{comp[i], comp[j]}, est.mean[l](i, j), est.std_error[l](i, j));
}

CsvMeta make_meta(const std::string& command, const nlohmann::json& config, std::optional<std::uint64_t> seed) {
    return {command, config.dump(), seed};
}

void emit_simulation(std::ostream& out, const SimulationPlan& plan, const nlohmann::json& config) {
    const auto real = simulate(plan);
    static const char* kinds[3] = {"simulate scalar", "simulate vector", "simulate dyadic"};
    write_realization(out, real, make_meta(kinds[static_cast<int>(plan.kind)], config, plan.master_seed));
}

void emit_cmb_synth(std::ostream& out, const AngularPowerSpectrum& spec, int grid_rows, std::uint64_t seed,
                    const nlohmann::json& config) {
    require(grid_rows >= 1, "grid must have at least one row");
    const auto alm = synthesize_alm(spec, seed);
    const auto map = alm_to_stokes(alm, SphereBasis(sphere_grid(grid_rows).nodes, spec.ell_max));
    write_stokes_map(out, map, make_meta("cmb synth", config, seed));
}

}  // namespace isofield::cli
