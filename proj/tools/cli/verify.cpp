#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "config.hpp"
#include "csv.hpp"
#include "io.hpp"
#include "isofield/coupling.hpp"
#include "isofield/correlation.hpp"
#include "isofield/error.hpp"
#include "isofield/linalg.hpp"
#include "isofield/parallel.hpp"
#include "isofield/simulate.hpp"
#include "isofield/special_fn.hpp"
#include "isofield/sphere.hpp"

namespace isofield::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Vec3 random_unit(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    for (;;) {
        const Vec3 v{n(g), n(g), n(g)};
        const double r = norm(v);
        if (r > 1e-8) return (1.0 / r) * v;
    }
}

CriterionResult criterion(int id, std::string name) {
    CriterionResult c;
    c.id = id;
    c.name = std::move(name);
    return c;
}

SphericalPoint random_point(std::mt19937_64& g) { return SphericalPoint::from_vector(random_unit(g)); }

// Fraction of entries outside k standard errors, and the worst |diff| / SE.
struct SeTally {
    int checked = 0;
    int outside = 0;
    double worst = 0.0;

    void add(double diff, double se, double k = 3.0) {
        ++checked;
        const double z = se > 0.0 ? std::abs(diff) / se : (diff == 0.0 ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        if (!(std::abs(diff) <= k * se)) ++outside;
    }
};

CriterionResult gg_anchors() {
    auto c = criterion(1, "GG anchors g0[1,1] and g2[1,1]");
    const GGBlock& b0 = gg_block(0, 1, 1);
    const GGBlock& b2 = gg_block(2, 1, 1);
    const double diag2[3] = {-1.0, 2.0, -1.0};
    double err = 0.0;
    for (int m1 = -1; m1 <= 1; ++m1)
        for (int m2 = -1; m2 <= 1; ++m2) {
            err = std::max(err, std::abs(b0(0, m1, m2) - (m1 == m2 ? 1.0 / std::sqrt(3.0) : 0.0)));
            err = std::max(err, std::abs(b2(0, m1, m2) - (m1 == m2 ? diag2[m1 + 1] / std::sqrt(6.0) : 0.0)));
        }
    c.measured = err;
    c.tolerance = 1e-12;
    c.passed = err < c.tolerance;
    c.detail = "max abs deviation from (1/sqrt3) I and (1/sqrt6) diag(-1,2,-1)";
    return c;
}

CriterionResult gaunt_criterion() {
    auto c = criterion(2, "Gaunt closed form vs quadrature, l <= 6");
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = gaunt_consistency(6);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.measured = g.max_error;
    c.tolerance = 1e-8;
    c.passed = g.max_error < c.tolerance && secs < 30.0;
    c.detail = std::to_string(g.triples) + " (l,m) triples; " + fmt(secs) + " s of 30 s allowed";
    return c;
}

CriterionResult m_to_l() {
    auto c = criterion(3, "M to L identities at 100 random separations");
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> rad(0.05, 2.0);
    double err = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Vec3 r = rad(g) * random_unit(g);
        const auto r1 = m_to_l_rank1(r);
        for (int k = 0; k < 2; ++k) err = std::max(err, (r1.M[k] - r1.L_side[k]).cwiseAbs().maxCoeff());
        const auto r2 = m_to_l_rank2(r);
        for (int k = 0; k < 5; ++k)
            for (int n = 0; n < 81; ++n) err = std::max(err, std::abs(r2.M[k].data()[n] - r2.L_side[k].data()[n]));
    }
    c.measured = err;
    c.tolerance = 1e-10;
    c.passed = err < c.tolerance;
    c.detail = "rank 1 (M1, M2) and rank 2 (M1..M5), |r| in [0.05, 2]";
    return c;
}

CriterionResult rayleigh() {
    auto c = criterion(4, "Rayleigh partial sum at ell_max 30");
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double err = 0.0;
    for (int t = 0; t < 200; ++t) {
        const double kr = 5.0 * u(g);
        const double k = 0.2 + 2.0 * u(g);
        const Vec3 kv = k * random_unit(g), rv = (kr / k) * random_unit(g);
        const cplx exact = std::exp(cplx(0.0, dot(kv, rv)));
        err = std::max(err, std::abs(rayleigh_partial_sum(kv, rv, 30) - exact));
    }
    c.measured = err;
    c.tolerance = 1e-8;
    c.passed = err < c.tolerance;
    c.detail = "200 random (k, r) with |k||r| <= 5";
    return c;
}

CriterionResult scalar_mc(Budget b) {
    auto c = criterion(5, "scalar Monte Carlo vs j0(lambda r)");
    const auto t0 = std::chrono::steady_clock::now();
    const double lambda = 1.0, mass = 1.0;
    SimulationPlan p;
    p.kind = FieldKind::scalar;
    p.spectral = SpectralMeasure({{lambda, mass}});
    p.ell_max = 20;
    p.realizations = b == Budget::full ? 10000 : 2000;
    p.master_seed = 5;
    std::mt19937_64 g(55);
    p.points.push_back({0, 0, 0});
    for (int k = 1; k <= 10; ++k) p.points.push_back((0.3 * k) * random_unit(g));
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= 10; ++k) pairs.emplace_back(0, k);
    const auto est = estimate_correlation(simulate(p), pairs);
    SeTally tally;
    for (const auto& e : est) {
        const double x = lambda * norm(p.points[e.q]);
        tally.add(e.value(0, 0) - mass * std::sin(x) / x, e.std_error(0, 0));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.measured = tally.worst;
    c.tolerance = 3.0;
    c.passed = tally.outside == 0 && secs < 120.0;
    c.detail = std::to_string(p.realizations) + " realizations, 10 separations in [0.3, 3]; worst |diff|/SE shown; " +
               fmt(secs) + " s";
    return c;
}

CriterionResult vector_mc(Budget b) {
    auto c = criterion(6, "vector Monte Carlo vs harmonic vector kernel");
    const auto t0 = std::chrono::steady_clock::now();
    const VectorSpectralPair pair(SpectralMeasure({{0.8, 1.0}}), SpectralMeasure({{1.2, 0.6}}), VectorNormalization::canonical);
    SimulationPlan p;
    p.kind = FieldKind::vector;
    p.pair = pair;
    p.ell_max = 8;
    p.realizations = b == Budget::full ? 10000 : 2000;
    p.master_seed = 6;
    std::mt19937_64 g(66);
    p.points.push_back({0, 0, 0});
    for (int k = 1; k <= 5; ++k) p.points.push_back((0.2 * k) * random_unit(g));
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= 5; ++k) pairs.emplace_back(k, 0);
    const auto est = estimate_correlation(simulate(p), pairs);
    SeTally tally;
    for (const auto& e : est) {
        const Mat3 B = vector_corr(p.points[e.p] - p.points[e.q], pair);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) tally.add(e.value(i, j) - B(i, j), e.std_error(i, j));
    }
    double min_eig = INFINITY;
    for (int n = 1; n <= 2; ++n) min_eig = std::min(min_eig, min_eigenvalue(vector_coefficient_covariance(n, p.ell_max)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.measured = tally.worst;
    c.tolerance = 3.0;
    c.passed = tally.outside == 0 && min_eig >= -1e-9 && secs < 600.0;
    c.detail = std::to_string(p.realizations) + " realizations, 5 separations x 9 entries; worst |diff|/SE shown; " +
               "coefficient covariance min eigenvalue " + fmt(min_eig) + "; " + fmt(secs) + " s";
    return c;
}

CriterionResult restrictions() {
    auto c = criterion(7, "solenoidal/irrotational f-g, H-T and damage round trips");
    double fg = 0.0;
    const std::vector<std::pair<RadialFn, RadialFn>> sol = {
        {[](double r) { return std::exp(-r * r); }, [](double r) { return (1 - r * r) * std::exp(-r * r); }},
        {[](double r) { return std::exp(-r); }, [](double r) { return (1 - r / 2) * std::exp(-r); }},
    };
    const std::vector<std::pair<RadialFn, RadialFn>> irr = {
        {[](double r) { return std::exp(-r * r); }, [](double r) { return (1 - 2 * r * r) * std::exp(-r * r); }},
        {[](double r) { return std::exp(-r); }, [](double r) { return (1 - r) * std::exp(-r); }},
    };
    for (int k = 1; k <= 100; ++k) {
        const double r = 0.05 * k;
        for (const auto& [f, g] : sol) fg = std::max(fg, std::abs(solenoidal_g_from_f(f, 3)(r) - g(r)));
        for (const auto& [g, f] : irr) fg = std::max(fg, std::abs(irrotational_f_from_g(g)(r) - f(r)));
    }
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ur(0.2, 3.0);
    double ht = 0.0, dmg = 0.0, residual_max = 0.0;
    for (int t = 0; t < 100; ++t) {
        const InplaneH h{u(gen), u(gen), u(gen), u(gen)};
        const double r = ur(gen);
        const auto T = inplane_T_from_H(h, r);
        const auto back = inplane_H_from_T(T.T1111, T.T2222, T.T1122, T.T1212, r);
        const double sc = std::max({1.0, std::abs(h.H1), std::abs(h.H2), std::abs(h.H4), std::abs(h.H5)});
        ht = std::max({ht, std::abs(back.H1 - h.H1) / sc, std::abs(back.H2 - h.H2) / sc, std::abs(back.H4 - h.H4) / sc,
                       std::abs(back.H5 - h.H5) / sc});
        std::array<double, 5> A{u(gen), u(gen), u(gen), u(gen), u(gen)};
        const auto M = damage_M_from_A(A);
        const auto d = damage_A_from_M({M[0], M[1], M[2], M[3], M[4], M[5]});
        for (int k = 0; k < 5; ++k) dmg = std::max(dmg, std::abs(d.A[k] - A[k]));
        residual_max = std::max(residual_max, std::abs(d.residual));
    }
    c.measured = std::max({fg / 1e-8, ht / 1e-12, dmg / 1e-12});
    c.tolerance = 1.0;
    c.passed = fg < 1e-8 && ht < 1e-12 && dmg < 1e-12;
    c.detail = "f-g max error " + fmt(fg) + " (tol 1e-8); H-T " + fmt(ht) + " (tol 1e-12); damage A-M " + fmt(dmg) +
               " (tol 1e-12); residual M2-M4-2M6 max " + fmt(residual_max) + "; measured is the worst error/tolerance";
    return c;
}

AngularPowerSpectrum random_spectrum(int L, std::uint64_t seed, bool parity) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> n;
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) M(i, j) = n(g);
    Eigen::Matrix4d A = M * M.transpose();
    if (parity) {
        const double bb = A(kB, kB);
        A.row(kB).setZero();
        A.col(kB).setZero();
        A(kB, kB) = bb;
    }
    return AngularPowerSpectrum::power_law(L, A, 1.0);
}

CriterionResult sphere_round_trips() {
    auto c = criterion(8, "sphere round trips and parity at ell_max 16");
    const int L = 16;
    const auto spec = random_spectrum(L, 8, false);
    const auto alm = synthesize_alm(spec, 88);
    const auto quad = sphere_quadrature_for(L);
    const SphereBasis basis(quad.nodes, L);
    const auto map = alm_to_stokes(alm, basis);
    const double rt = stokes_to_alm(map, quad, basis).max_abs_diff(alm);
    const auto real = complex_to_real(alm);
    double cr = real_to_complex(real).max_abs_diff(alm);
    const auto rq = real_basis_expansion(map, quad, L);
    for (std::size_t k = 0; k < real.theta.size(); ++k)
        cr = std::max({cr, std::abs(rq.theta[k] - real.theta[k]), std::abs(rq.q2[k] - real.q2[k]),
                       std::abs(rq.qm2[k] - real.qm2[k]), std::abs(rq.v[k] - real.v[k])});
    const auto par = parity_transform(alm);
    const double inv = parity_transform(par).max_abs_diff(alm);
    std::mt19937_64 g(80);
    std::vector<SphericalPoint> pts, anti;
    for (int k = 0; k < 200; ++k) {
        pts.push_back(random_point(g));
        anti.push_back(pts.back().antipode());
    }
    const auto a = alm_to_stokes(par, pts), b = alm_to_stokes(alm, anti);
    double ap = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k)
        ap = std::max({ap, std::abs(a.values[k][0] - b.values[k][0]), std::abs(a.values[k][1] - b.values[k][1]),
                       std::abs(a.values[k][2] + b.values[k][2]), std::abs(a.values[k][3] - b.values[k][3])});
    c.measured = std::max(rt, cr);
    c.tolerance = 1e-8;
    c.passed = rt < 1e-8 && cr < 1e-8 && inv == 0.0 && ap < 1e-10;
    c.detail = "synthesis-analysis " + fmt(rt) + "; complex-real " + fmt(cr) + " (tol 1e-8); parity involution " + fmt(inv) +
               " (exact); antipodal map check " + fmt(ap) + " (tol 1e-10)";
    return c;
}

CriterionResult cmb_ensemble(Budget b) {
    auto c = criterion(9, "CMB ensemble spectrum recovery");
    const auto t0 = std::chrono::steady_clock::now();
    const int L = 8;
    const auto spec = random_spectrum(L, 9, true);
    spec.validate(true);
    const int N = b == Budget::full ? 1000 : 200;
    const auto quad = sphere_grid(L + 1);
    const SphereBasis basis(quad.nodes, L);
    std::vector<AlmSet> ens(N);
    for (int k = 0; k < N; ++k)
        ens[k] = stokes_to_alm(alm_to_stokes(synthesize_alm(spec, 9000 + k), basis), quad, basis);
    const auto est = estimate_cell(ens);
    SeTally tally, odd;
    int structural = 0;
    for (int l = 0; l <= L; ++l) {
        const Eigen::Matrix4d C = spec.effective(l);
        const double scale = std::max(1.0, C.diagonal().maxCoeff());
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                if (C(i, i) == 0.0 || C(j, j) == 0.0) {
                    if (std::abs(est.mean[l](i, j)) > 1e-12 * scale) ++structural;
                    continue;
                }
                const double diff = est.mean[l](i, j) - C(i, j);
                tally.add(diff, est.std_error[l](i, j));
                if (i == kB || j == kB)
                    if (i != j) odd.add(diff, est.std_error[l](i, j));
            }
    }
    Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
    A(kTheta, kE) = A(kE, kTheta) = 0.5;
    A.row(kV).setZero();
    A.col(kV).setZero();
    const auto nov = AngularPowerSpectrum::power_law(L, A, 1.0);
    bool v_zero = true;
    for (int k = 0; k < 20; ++k)
        for (const auto& v : alm_to_stokes(synthesize_alm(nov, 700 + k), basis).values) v_zero &= v[3] == 0.0;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.measured = tally.worst;
    c.tolerance = 3.0;
    c.passed = tally.outside == 0 && odd.outside == 0 && structural == 0 && v_zero && secs < 300.0;
    c.detail = std::to_string(N) + " maps at ell_max " + std::to_string(L) + " through synthesis and analysis; " +
               std::to_string(tally.checked) + " entries, worst |diff|/SE shown; TB/EB/BV worst " + fmt(odd.worst) +
               " SE; " + std::to_string(structural) + " structurally zero entries above 1e-12 relative; V identically zero: " + (v_zero ? "yes" : "no") + "; " + fmt(secs) + " s";
    return c;
}

CriterionResult determinism() {
    auto c = criterion(10, "byte-identical CSV data rows across 1, 2, 8 threads");
    const std::vector<std::pair<FieldKind, std::string>> plans = {
        {FieldKind::scalar, R"({"ell_max": 10, "realizations": 40, "points": [[0,0,0],[0.5,0.2,-0.1],[1,1,1]],
                              "spectral": [[0.5, 1.0], [1.5, 0.25]]})"},
        {FieldKind::vector, R"({"ell_max": 6, "realizations": 40, "points": [[0,0,0],[0.3,0.1,0.2]],
                              "spectral": {"phi1": [[0.8, 1.0]], "phi2": [[1.2, 0.5]]}})"},
        {FieldKind::dyadic, R"({"ell_max": 4, "realizations": 40, "points": [[0,0,0],[0.3,0.1,0.2]], "mu": 0.5, "s": 2.0,
                              "a": {"phi1": [[1.0, 1.0]]}, "b": {"phi2": [[0.7, 1.0]]}})"},
    };
    std::vector<std::function<std::string()>> jobs;
    for (const auto& [kind, text] : plans) {
        jobs.push_back([kind = kind, text = text] {
            json resolved;
            SimulationPlan p = parse_plan(json::parse(text), resolved, kind);
            p.master_seed = 1234;
            std::ostringstream out;
            emit_simulation(out, p, json{{"plan", resolved}, {"seed", 1234}});
            return out.str();
        });
    }
    jobs.push_back([] {
        json resolved;
        bool parity = false;
        const json in = json::parse(R"({"model": "power_law", "alpha": 2.0,
            "amplitude": [[1,0.3,0,0.1],[0.3,0.5,0,0],[0,0,0.2,0],[0.1,0,0,0.3]]})");
        const auto spec = parse_spectrum(in, resolved, 12, parity);
        std::ostringstream out;
        emit_cmb_synth(out, spec, 13, 77, json{{"spec", resolved}, {"ell_max", 12}, {"grid", 13}, {"seed", 77}});
        return out.str();
    });
    int mismatches = 0;
    for (const auto& job : jobs) {
        std::vector<std::vector<std::string>> rows;
        for (int t : {1, 2, 8}) {
            set_thread_count(t);
            rows.push_back(data_lines(job()));
        }
        set_thread_count(0);
        for (std::size_t k = 1; k < rows.size(); ++k) mismatches += rows[k] != rows[0];
    }
    c.measured = mismatches;
    c.tolerance = 0.0;
    c.passed = mismatches == 0;
    c.detail = "simulate scalar/vector/dyadic and cmb synth outputs compared across thread counts";
    return c;
}

}  // namespace

GauntCheck gaunt_consistency(int ell_max) {
    require(ell_max >= 0, "gaunt check: ell_max must be non-negative");
    const auto quad = sphere_quadrature_for((3 * ell_max + 1) / 2 + 1);
    const int n = lm_count(ell_max);
    std::vector<std::vector<double>> Y;
    for (const auto& p : quad.nodes) Y.push_back(real_harmonics_all(ell_max, p));
    std::vector<double> worst(n, 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
        const int l1 = static_cast<int>(std::sqrt(static_cast<double>(a)));
        const int m1 = static_cast<int>(a) - l1 * l1 - l1;
        std::vector<double> w(quad.nodes.size());
        for (int b = 0; b < n; ++b) {
            const int l2 = static_cast<int>(std::sqrt(static_cast<double>(b)));
            const int m2 = b - l2 * l2 - l2;
            for (std::size_t k = 0; k < w.size(); ++k) w[k] = quad.weights[k] * Y[k][a] * Y[k][b];
            for (int c = 0; c < n; ++c) {
                const int l3 = static_cast<int>(std::sqrt(static_cast<double>(c)));
                const int m3 = c - l3 * l3 - l3;
                double q = 0.0;
                for (std::size_t k = 0; k < w.size(); ++k) q += w[k] * Y[k][c];
                worst[a] = std::max(worst[a], std::abs(q - gaunt_real(l1, m1, l2, m2, l3, m3)));
            }
        }
    });
    return {*std::max_element(worst.begin(), worst.end()), static_cast<long long>(n) * n * n};
}

bool VerifyReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["budget"] = budget == Budget::full ? "full" : "fast";
    j["passed"] = passed();
    j["criteria"] = nlohmann::json::array();
    for (const auto& r : results)
        j["criteria"].push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"passed", r.passed},
                                 {"measured", r.measured},
                                 {"tolerance", r.tolerance},
                                 {"seconds", r.seconds},
                                 {"detail", r.detail}});
    return j;
}

VerifyReport verify_all(Budget budget, const std::vector<int>& only) {
    const std::vector<std::pair<int, std::function<CriterionResult()>>> all = {
        {1, gg_anchors},
        {2, gaunt_criterion},
        {3, m_to_l},
        {4, rayleigh},
        {5, [budget] { return scalar_mc(budget); }},
        {6, [budget] { return vector_mc(budget); }},
        {7, restrictions},
        {8, sphere_round_trips},
        {9, [budget] { return cmb_ensemble(budget); }},
        {10, determinism},
    };
    VerifyReport report;
    report.budget = budget;
    for (const auto& [id, run] : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.results.push_back(std::move(r));
    }
    return report;
}

}  // namespace isofield::cli
