#include "app.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "io.hpp"
#include "isofield/coupling.hpp"
#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"
#include "verify.hpp"

namespace isofield::cli {

namespace {

struct Options {
    // harmonics
    int spin = 0, ell = 0, m = 0, ell_max = -1, grid = 0;
    double theta = 0.0, phi = 0.0;
    // gg check
    double tol = 1e-8;
    // files
    std::string out, model, plan, pairs, spec, sep;
    std::vector<std::string> in;
    std::uint64_t seed = 0;
    std::vector<int> only;
};

// Output goes to a buffer first so that a failing command leaves no partial file.
void deliver(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail_validation("cannot write '" + path + "'");
    f << text;
    if (!f) fail_validation("error writing '" + path + "'");
}

std::string base_dir(const std::string& path) { return std::filesystem::path(path).parent_path().string(); }

Vec3 parse_sep(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(parse_double(part, "--sep"));
    require(v.size() == 3, "--sep must be \"x,y,z\"");
    return {v[0], v[1], v[2]};
}

std::string file_config_hash(const CsvTable& t) {
    for (const auto& c : t.comments) {
        const auto k = c.find("config_hash=");
        if (k != std::string::npos) return c.substr(k + 12, 16);
    }
    return "";
}

int harmonics_eval(const Options& o, std::ostream& out) {
    const cplx v = spin_harmonic(o.spin, o.ell, o.m, {o.theta, o.phi});
    std::ostringstream s;
    CsvWriter w(s);
    w.header({"re", "im"});
    w.row(v.real(), v.imag());
    deliver(s.str(), o.out, out);
    return 0;
}

int harmonics_table(const Options& o, std::ostream& out) {
    require(o.ell_max >= 0, "--ell-max must be non-negative");
    require(o.grid >= 1, "--grid must be at least 1");
    const auto q = sphere_grid(o.grid);
    std::ostringstream s;
    CsvWriter w(s);
    w.meta(make_meta("harmonics table", {{"ell_max", o.ell_max}, {"grid", o.grid}, {"spin", o.spin}}, std::nullopt));
    w.header({"ell", "m", "spin", "theta", "phi", "re", "im"});
    for (const auto& p : q.nodes) {
        const auto y = spin_harmonics_all(o.spin, o.ell_max, p);
        for (int l = std::abs(o.spin); l <= o.ell_max; ++l)
            for (int m = -l; m <= l; ++m) {
                const cplx v = y[lm_index(l, m)];
                w.row(l, m, o.spin, p.theta, p.phi, v.real(), v.imag());
            }
    }
    deliver(s.str(), o.out, out);
    return 0;
}

int gg_table(const Options& o, std::ostream& out) {
    require(o.ell_max >= 0, "--ell-max must be non-negative");
    const GGTable table(o.ell_max);
    std::ostringstream s;
    CsvWriter w(s);
    w.meta(make_meta("gg table", {{"ell_max", o.ell_max}}, std::nullopt));
    w.header({"ell", "ell1", "ell2", "m", "m1", "m2", "value"});
    for (int l1 = 0; l1 <= o.ell_max; ++l1)
        for (int l2 = 0; l2 <= o.ell_max; ++l2)
            for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) {
                const GGBlock* b = table.block(l, l1, l2);
                if (!b) continue;
                for (int m = -l; m <= l; ++m)
                    for (int m1 = -l1; m1 <= l1; ++m1)
                        for (int m2 = -l2; m2 <= l2; ++m2) w.row(l, l1, l2, m, m1, m2, (*b)(m, m1, m2));
            }
    deliver(s.str(), o.out, out);
    return 0;
}

int gg_check(const Options& o, std::ostream& out, std::ostream& err) {
    const int L = o.ell_max < 0 ? 6 : o.ell_max;
    const auto g = gaunt_consistency(L);
    const bool ok = g.max_error < o.tol;
    std::ostringstream s;
    s << "gaunt check ell_max=" << L << " triples=" << g.triples << " max_error=" << format_number(g.max_error)
      << " tolerance=" << format_number(o.tol) << (ok ? " PASS" : " FAIL") << '\n';
    deliver(s.str(), o.out, out);
    if (!ok) err << "gg check: closed-form Gaunt integrals disagree with quadrature\n";
    return ok ? 0 : 2;
}

int corr_eval(const Options& o, std::ostream& out) {
    json resolved;
    const auto m = parse_model(load_json_file(o.model), resolved, base_dir(o.model));
    const Vec3 sep = parse_sep(o.sep);
    std::ostringstream s;
    CsvWriter w(s);
    w.meta(make_meta("corr eval", {{"model", resolved}, {"sep", {sep[0], sep[1], sep[2]}}}, std::nullopt));
    auto names = model_index_names(m);
    names.push_back("value");
    w.header(names);
    for (const auto& e : evaluate_model(m, sep)) {
        std::string line;
        for (int i : e.index) line += std::to_string(i) + ",";
        s << line << format_number(e.value) << '\n';
    }
    deliver(s.str(), o.out, out);
    return 0;
}

int simulate_cmd(FieldKind kind, const Options& o, std::ostream& out) {
    json resolved;
    SimulationPlan p = parse_plan(load_json_file(o.plan), resolved, kind);
    p.master_seed = o.seed;
    std::ostringstream s;
    emit_simulation(s, p, {{"plan", resolved}, {"seed", o.seed}});
    deliver(s.str(), o.out, out);
    return 0;
}

int estimate_corr(const Options& o, std::ostream& out) {
    require(o.in.size() == 1, "estimate corr takes exactly one --in file");
    const auto t = read_csv_file(o.in[0]);
    const auto loaded = read_realization(t);
    const auto pairs = parse_pairs(load_json_file(o.pairs));
    const auto est = estimate_correlation(loaded.real, pairs);
    json pj = json::array();
    for (const auto& [p, q] : pairs) pj.push_back({p, q});
    std::ostringstream s;
    write_correlation_estimates(s, est, loaded.components,
                                make_meta("estimate corr", {{"input_config_hash", file_config_hash(t)}, {"pairs", pj}}, std::nullopt));
    deliver(s.str(), o.out, out);
    return 0;
}

int cmb_synth(const Options& o, std::ostream& out) {
    require(o.ell_max >= 0, "--ell-max must be non-negative");
    require(o.grid >= 1, "--grid must be at least 1");
    json resolved;
    bool parity = false;
    const auto spec = parse_spectrum(load_json_file(o.spec), resolved, o.ell_max, parity);
    std::ostringstream s;
    emit_cmb_synth(s, spec, o.grid, o.seed, {{"spec", resolved}, {"ell_max", o.ell_max}, {"grid", o.grid}, {"seed", o.seed}});
    deliver(s.str(), o.out, out);
    return 0;
}

int cmb_cell(const Options& o, std::ostream& out) {
    require(!o.in.empty(), "cmb cell needs at least one --in map");
    std::vector<StokesMap> maps;
    std::vector<std::string> hashes;
    int rows = -1;
    for (const auto& path : o.in) {
        const auto t = read_csv_file(path);
        maps.push_back(read_stokes_map(t));
        hashes.push_back(file_config_hash(t));
        const int r = infer_grid_rows(maps.back());
        require(rows < 0 || r == rows, "all maps must share one grid ('" + path + "' differs)");
        rows = r;
    }
    const int L = o.ell_max < 0 ? rows - 1 : o.ell_max;
    require(L <= rows - 1, "--ell-max exceeds what a " + std::to_string(rows) + "-row grid resolves (" +
                               std::to_string(rows - 1) + ")");
    const auto quad = sphere_grid(rows);
    const SphereBasis basis(quad.nodes, L);
    std::vector<AlmSet> alms;
    for (const auto& m : maps) alms.push_back(stokes_to_alm(m, quad, basis));
    const auto est = alms.size() == 1 ? estimate_cell(alms[0]) : estimate_cell(alms);
    std::ostringstream s;
    write_cell(s, est, make_meta("cmb cell", {{"ell_max", L}, {"maps", alms.size()}, {"input_config_hashes", hashes}}, std::nullopt));
    deliver(s.str(), o.out, out);
    return 0;
}

int verify_cmd(Budget b, const Options& o, std::ostream& out, std::ostream& err) {
    const auto report = verify_all(b, o.only);
    deliver(report.to_json().dump(2) + "\n", o.out, out);
    for (const auto& r : report.results)
        err << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << " (" << std::setprecision(3) << r.seconds << " s)\n";
    return report.passed() ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"isofield: isotropic random fields on R^3 and the sphere"};
    app.require_subcommand(1);
    Options o;

    auto* harm = app.add_subcommand("harmonics", "spin-weighted spherical harmonics")->require_subcommand(1);
    auto* h_eval = harm->add_subcommand("eval", "value of sY_lm at one point");
    h_eval->add_option("--spin", o.spin)->default_val(0);
    h_eval->add_option("--ell", o.ell)->required();
    h_eval->add_option("--m", o.m)->required();
    h_eval->add_option("--theta", o.theta)->required();
    h_eval->add_option("--phi", o.phi)->required();
    h_eval->add_option("--out", o.out);
    auto* h_table = harm->add_subcommand("table", "harmonics on a Gauss-Legendre grid");
    h_table->add_option("--ell-max", o.ell_max)->required();
    h_table->add_option("--grid", o.grid, "Gauss-Legendre rows")->required();
    h_table->add_option("--spin", o.spin)->default_val(0);
    h_table->add_option("--out", o.out);

    auto* gg = app.add_subcommand("gg", "real-basis coupling coefficients")->require_subcommand(1);
    auto* g_table = gg->add_subcommand("table", "all coefficients with l1, l2 <= ell_max");
    g_table->add_option("--ell-max", o.ell_max)->required();
    g_table->add_option("--out", o.out);
    auto* g_check = gg->add_subcommand("check", "Gaunt closed form against quadrature");
    g_check->add_option("--ell-max", o.ell_max, "default 6");
    g_check->add_option("--tol", o.tol)->default_val(1e-8);
    g_check->add_option("--out", o.out);

    auto* corr = app.add_subcommand("corr", "two-point correlation tensors")->require_subcommand(1);
    auto* c_eval = corr->add_subcommand("eval", "evaluate a model at one separation");
    c_eval->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
    c_eval->add_option("--sep", o.sep, "\"x,y,z\"")->required();
    c_eval->add_option("--out", o.out);

    auto* sim = app.add_subcommand("simulate", "Gaussian field realizations")->require_subcommand(1);
    std::vector<std::pair<CLI::App*, FieldKind>> sim_kinds;
    for (FieldKind k : {FieldKind::scalar, FieldKind::vector, FieldKind::dyadic}) {
        auto* s = sim->add_subcommand(field_kind_name(k));
        s->add_option("--plan", o.plan)->required()->check(CLI::ExistingFile);
        s->add_option("--seed", o.seed)->required();
        s->add_option("--out", o.out);
        sim_kinds.emplace_back(s, k);
    }

    auto* est = app.add_subcommand("estimate", "empirical statistics")->require_subcommand(1);
    auto* e_corr = est->add_subcommand("corr", "cross-covariances with standard errors");
    e_corr->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
    e_corr->add_option("--pairs", o.pairs)->required()->check(CLI::ExistingFile);
    e_corr->add_option("--out", o.out);

    auto* cmb = app.add_subcommand("cmb", "Stokes-parameter maps on the sphere")->require_subcommand(1);
    auto* m_synth = cmb->add_subcommand("synth", "synthesize a map from a spectrum");
    m_synth->add_option("--spec", o.spec)->required()->check(CLI::ExistingFile);
    m_synth->add_option("--ell-max", o.ell_max)->required();
    m_synth->add_option("--grid", o.grid, "Gauss-Legendre rows")->required();
    m_synth->add_option("--seed", o.seed)->required();
    m_synth->add_option("--out", o.out);
    auto* m_cell = cmb->add_subcommand("cell", "estimate C_l from one map or an ensemble of maps");
    m_cell->add_option("--in", o.in, "map CSV; repeat for an ensemble")->required()->check(CLI::ExistingFile);
    m_cell->add_option("--ell-max", o.ell_max);
    m_cell->add_option("--out", o.out);

    auto* ver = app.add_subcommand("verify", "run the acceptance checks")->require_subcommand(1);
    auto* v_fast = ver->add_subcommand("fast", "reduced Monte Carlo sizes");
    auto* v_full = ver->add_subcommand("full", "full Monte Carlo sizes");
    for (auto* v : {v_fast, v_full}) {
        v->add_option("--out", o.out);
        v->add_option("--only", o.only, "criterion ids")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (h_eval->parsed()) return harmonics_eval(o, out);
        if (h_table->parsed()) return harmonics_table(o, out);
        if (g_table->parsed()) return gg_table(o, out);
        if (g_check->parsed()) return gg_check(o, out, err);
        if (c_eval->parsed()) return corr_eval(o, out);
        for (const auto& [s, k] : sim_kinds)
            if (s->parsed()) return simulate_cmd(k, o, out);
        if (e_corr->parsed()) return estimate_corr(o, out);
        if (m_synth->parsed()) return cmb_synth(o, out);
        if (m_cell->parsed()) return cmb_cell(o, out);
        if (v_fast->parsed()) return verify_cmd(Budget::fast, o, out, err);
        if (v_full->parsed()) return verify_cmd(Budget::full, o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::validation ? 1 : 2;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no command\n";
    return 1;
}

}  // namespace isofield::cli
