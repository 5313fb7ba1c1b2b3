#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "isofield/coupling.hpp"
#include "isofield/error.hpp"
#include "isofield/linalg.hpp"
#include "isofield/parallel.hpp"
#include "isofield/rng.hpp"
#include "isofield/simulate.hpp"
#include "oracles.hpp"

using namespace isofield;

namespace {

SimulationPlan scalar_plan(std::vector<Atom> atoms, std::vector<Vec3> pts, int reps, std::uint64_t seed, int L = 16) {
    SimulationPlan p;
    p.kind = FieldKind::scalar;
    p.spectral = SpectralMeasure(std::move(atoms));
    p.points = std::move(pts);
    p.realizations = reps;
    p.master_seed = seed;
    p.ell_max = L;
    return p;
}

// Covariance of the truncated expansion between points x and y, assembled directly from the coefficient law.
Mat3 truncated_vector_cov(const VectorSpectralPair& pair, int L, const Vec3& x, const Vec3& y) {
    const auto c = pair.to_canonical();
    const Mat3& Q = m_basis_from_cartesian();
    Mat3 out = Mat3::Zero();
    for (int n = 1; n <= 2; ++n) {
        const auto& phi = (n == 1) ? c.phi1 : c.phi2;
        if (phi.empty()) continue;
        const Eigen::MatrixXd C = vector_coefficient_covariance(n, L);
        for (const auto& a : phi.atoms()) {
            auto basis = [&](const Vec3& p) {
                Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, C.rows());
                const auto Y = real_harmonics_all(L, SphericalPoint::from_vector(p));
                const auto j = spherical_bessel_all(L, a.lambda * norm(p));
                for (int i = 0; i < 3; ++i)
                    for (int l = 0; l <= L; ++l)
                        for (int m = -l; m <= l; ++m)
                            B(i, vector_coeff_index(L, i, l, m)) = Y[lm_index(l, m)] * j[l];
                return Eigen::MatrixXd(Q.transpose() * B);
            };
            out += a.mass * basis(x) * C * basis(y).transpose();
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("philox known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal stream moments and reproducibility") {
    NormalStream a(7), b(7), c(7, 1);
    double s = 0, s2 = 0, s3 = 0, s4 = 0;
    const int N = 200000;
    bool differ = false;
    for (int i = 0; i < N; ++i) {
        const double x = a.normal();
        CHECK_MESSAGE(x == b.normal(), "streams with the same seed must agree");
        differ |= (x != c.normal());
        s += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    CHECK(differ);
    CHECK(std::abs(s / N) < 4 * std::sqrt(1.0 / N));
    CHECK(std::abs(s2 / N - 1) < 4 * std::sqrt(2.0 / N));
    CHECK(std::abs(s3 / N) < 4 * std::sqrt(15.0 / N));
    CHECK(std::abs(s4 / N - 3) < 4 * std::sqrt(96.0 / N));
    NormalStream u(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    CHECK(substream_seed(1, 2) != substream_seed(2, 1));
    CHECK(substream_seed(5, 0) == substream_seed(5, 0));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    set_thread_count(3);
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) fail_numerical("boom"); }), Error);
    set_thread_count(0);
    CHECK(thread_count() >= 1);
}

TEST_CASE("psd factor") {
    Eigen::MatrixXd C(3, 3);
    C << 2, 1, 0, 1, 2, 0, 0, 0, 0;
    const Eigen::MatrixXd A = psd_factor(C);
    CHECK((A * A.transpose() - C).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(A.row(2).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(1, 1) = -1e-3;
    CHECK_THROWS_AS(psd_factor(bad), Error);
    Eigen::MatrixXd tiny = Eigen::MatrixXd::Identity(2, 2);
    tiny(1, 1) = -1e-12;
    CHECK_NOTHROW(psd_factor(tiny));
}

}  // TEST_SUITE

TEST_SUITE("simulate") {

TEST_CASE("plan validation") {
    SimulationPlan p = scalar_plan({{1.0, 1.0}}, {{0, 0, 0}}, 1, 0);
    p.ell_max = -1;
    CHECK_THROWS_AS(p.validate(), Error);
    p.ell_max = 2;
    p.points.clear();
    CHECK_THROWS_AS(p.validate(), Error);
    p.points = {{0, 0, 0}};
    p.realizations = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("zero-wavenumber atom gives constant fields") {
    const auto real = simulate(scalar_plan({{0.0, 2.0}}, {{0, 0, 0}, {1, 2, 3}, {-4, 0.5, 2}}, 4000, 99));
    std::vector<double> x;
    for (int r = 0; r < real.realizations; ++r) {
        CHECK(real.at(r, 0, 0) == doctest::Approx(real.at(r, 1, 0)).epsilon(1e-14));
        CHECK(real.at(r, 0, 0) == doctest::Approx(real.at(r, 2, 0)).epsilon(1e-14));
        x.push_back(real.at(r, 0, 0));
    }
    const auto m = sample_covariance(x, x);
    CHECK(std::abs(m.value - 2.0) < 3 * m.std_error);
}

TEST_CASE("simulation is deterministic across thread counts") {
    const auto plan = scalar_plan({{0.5, 1.0}, {1.5, 0.5}}, {{0, 0, 0}, {1, 0, 0}, {0, 2, 1}}, 64, 1234);
    set_thread_count(1);
    const auto a = simulate(plan);
    set_thread_count(4);
    const auto b = simulate(plan);
    set_thread_count(0);
    CHECK(a.values == b.values);
    VectorSpectralPair pair(SpectralMeasure({{1.0, 1.0}}), SpectralMeasure({{0.5, 0.5}}), VectorNormalization::canonical);
    SimulationPlan v = plan;
    v.kind = FieldKind::vector;
    v.pair = pair;
    v.ell_max = 4;
    set_thread_count(1);
    const auto c = simulate(v);
    set_thread_count(3);
    const auto d = simulate(v);
    set_thread_count(0);
    CHECK(c.values == d.values);
    v.master_seed = 1235;
    CHECK(simulate(v).values != c.values);
}

TEST_CASE("scalar monte carlo matches the correlation function") {
    const double lambda = 1.2, mass = 1.5;
    std::vector<Vec3> pts{{0, 0, 0}};
    for (double r : {0.5, 1.0, 2.0, 3.0}) pts.push_back({r * 0.6, r * 0.8, 0.0});
    const auto real = simulate(scalar_plan({{lambda, mass}}, pts, 4000, 2024, 14));
    const auto est = estimate_correlation(real, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {2, 4}});
    for (const auto& e : est) {
        const double r = norm(pts[e.p] - pts[e.q]);
        const double expect = scalar_corr(r, SpectralMeasure({{lambda, mass}}));
        INFO("r=" << r);
        CHECK(std::abs(e.value(0, 0) - expect) < 3 * e.std_error(0, 0));
    }
}

TEST_CASE("simulated values are gaussian") {
    const auto real = simulate(scalar_plan({{0.8, 1.0}}, {{0.3, -0.2, 0.9}}, 10000, 77, 8));
    const double N = real.realizations;
    double m = 0;
    for (double v : real.values) m += v;
    m /= N;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : real.values) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= N;
    const double skew = m3 / N / std::pow(m2, 1.5), kurt = m4 / N / (m2 * m2);
    CHECK(std::abs(skew) < 4 * std::sqrt(6.0 / N));
    CHECK(std::abs(kurt - 3.0) < 4 * std::sqrt(24.0 / N));
    CHECK(real.gaussian);
}

TEST_CASE("truncation tail is small for a single atom") {
    std::vector<Vec3> pts{{0, 0, 0}, {0.5, 0.5, 0.0}};
    const auto a = simulate(scalar_plan({{1.0, 1.0}}, pts, 2000, 5, 8));
    const auto b = simulate(scalar_plan({{1.0, 1.0}}, pts, 2000, 5, 12));
    const auto ea = estimate_correlation(a, {{0, 1}}), eb = estimate_correlation(b, {{0, 1}});
    CHECK(std::abs(ea[0].value(0, 0) - eb[0].value(0, 0)) < ea[0].std_error(0, 0));
}

TEST_CASE("vector coefficient covariance structure") {
    const int L = 4;
    for (int n = 1; n <= 2; ++n) {
        const Eigen::MatrixXd C = vector_coefficient_covariance(n, L);
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(min_eigenvalue(C) >= -1e-9);
        for (int i = 0; i < 3; ++i) {
            const double d = C(vector_coeff_index(L, i, 0, 0), vector_coeff_index(L, i, 0, 0));
            CHECK(d == doctest::Approx(4 * oracle::pi / 3));
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(C(vector_coeff_index(L, i, 0, 0), vector_coeff_index(L, j, 0, 0)) == 0.0);
        }
        for (int l = 0; l <= L; ++l)
            for (int lp = 0; lp <= L; ++lp) {
                if ((l - lp) % 2 == 0 && std::abs(l - lp) <= 2) continue;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int m = -l; m <= l; ++m)
                            for (int mp = -lp; mp <= lp; ++mp)
                                CHECK(C(vector_coeff_index(L, i, l, m), vector_coeff_index(L, j, lp, mp)) == 0.0);
            }
    }
    const VectorSpectralPair pair(SpectralMeasure({{1.0, 2.0}}), SpectralMeasure(), VectorNormalization::canonical);
    const auto E = vector_expansion_covariance(pair, 2, 1, 0);
    CHECK((E - 2.0 * vector_coefficient_covariance(1, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(vector_expansion_covariance(pair, 2, 1, 3), Error);
}

TEST_CASE("coefficient law reproduces the vector kernel") {
    const VectorSpectralPair pair(SpectralMeasure({{0.6, 1.0}, {1.1, 0.5}}), SpectralMeasure({{0.9, 0.7}}),
                                  VectorNormalization::canonical);
    std::mt19937_64 g(51);
    for (int t = 0; t < 10; ++t) {
        const Vec3 x = oracle::random_vector(g, 0.5), y = oracle::random_vector(g, 0.5);
        const Mat3 got = truncated_vector_cov(pair, 14, x, y);
        CHECK((got - vector_corr(x - y, pair)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("phi2-only field at a point has isotropic covariance") {
    const VectorSpectralPair pair(SpectralMeasure(), SpectralMeasure({{1.0, 1.0}}), VectorNormalization::canonical);
    SimulationPlan p;
    p.kind = FieldKind::vector;
    p.pair = pair;
    p.ell_max = 6;
    p.points = {{0.2, -0.1, 0.3}};
    p.realizations = 4000;
    p.master_seed = 8;
    const auto est = estimate_correlation(simulate(p), {{0, 0}});
    const Mat3 expect = vector_corr({0, 0, 0}, pair);
    CHECK((expect - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff() < 1e-14);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(est[0].value(i, j) - expect(i, j)) < 3.5 * est[0].std_error(i, j));
}

TEST_CASE("dyadic fields") {
    const VectorSpectralPair pa(SpectralMeasure({{1.0, 1.0}}), SpectralMeasure(), VectorNormalization::canonical);
    const VectorSpectralPair pb(SpectralMeasure(), SpectralMeasure({{0.7, 2.0}}), VectorNormalization::canonical);
    SimulationPlan p;
    p.kind = FieldKind::dyadic;
    p.pair = pa;
    p.pair_b = pb;
    p.mu = 0.8;
    p.s = 0.0;
    p.ell_max = 4;
    p.points = {{0, 0, 0}, {0.5, 0.1, 0.2}};
    p.realizations = 10;
    p.master_seed = 3;
    const auto fixed = simulate(p);
    for (int r = 0; r < 10; ++r)
        for (int q = 0; q < 2; ++q) {
            CHECK(fixed.at(r, q, 0) == 0.8);
            CHECK(fixed.at(r, q, 1) == 0.0);
            CHECK(fixed.at(r, q, 3) == 0.8);
        }
    p.s = 1.5;
    p.realizations = 6000;
    const auto real = simulate(p);
    const double va = vector_corr({0, 0, 0}, pa)(0, 0), vb = vector_corr({0, 0, 0}, pb)(0, 0);
    std::vector<double> c11, c12;
    for (int r = 0; r < real.realizations; ++r) {
        c11.push_back(real.at(r, 1, 0));
        c12.push_back(real.at(r, 1, 1));
    }
    const auto var = sample_covariance(c11, c11);
    CHECK(std::abs(var.value - p.s * p.s * va * vb) < 3 * var.std_error);
    std::vector<double> ones(c11.size(), 1.0);
    auto mean_se = [](const std::vector<double>& v) {
        const double n = v.size();
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, std::sqrt(s / (n - 1) / n)};
    };
    const auto [m11, se11] = mean_se(c11);
    const auto [m12, se12] = mean_se(c12);
    CHECK(std::abs(m11 - 0.8) < 3 * se11);
    CHECK(std::abs(m12) < 3 * se12);
}

TEST_CASE("estimator properties") {
    FieldRealization f;
    f.realizations = 5;
    f.points = 2;
    f.components = 1;
    f.values.assign(10, 1.25);
    const auto e = estimate_correlation(f, {{0, 1}});
    CHECK(e[0].value(0, 0) == 0.0);
    CHECK(e[0].std_error(0, 0) == 0.0);

    const auto real = simulate(scalar_plan({{1.0, 1.0}}, {{0, 0, 0}, {1, 0, 0}}, 200, 17, 6));
    FieldRealization perm = real;
    std::vector<int> order(200);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(3));
    for (int r = 0; r < 200; ++r)
        for (int q = 0; q < 2; ++q) perm.at(r, q, 0) = real.at(order[r], q, 0);
    const auto a = estimate_correlation(real, {{0, 1}, {1, 1}}), b = estimate_correlation(perm, {{0, 1}, {1, 1}});
    for (int k = 0; k < 2; ++k) {
        CHECK(a[k].value(0, 0) == b[k].value(0, 0));
        CHECK(a[k].std_error(0, 0) == b[k].std_error(0, 0));
    }
    const auto two = sample_covariance({1.0, 2.0}, {1.0, 3.0});
    CHECK(two.value == doctest::Approx(1.0));
    CHECK(std::isnan(two.std_error));
    CHECK_THROWS_AS(estimate_correlation(real, {{0, 5}}), Error);
}

}  // TEST_SUITE
