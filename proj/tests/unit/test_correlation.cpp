#include <cmath>
#include <random>

#include "doctest.h"
#include "isofield/correlation.hpp"
#include "isofield/error.hpp"
#include "isofield/linalg.hpp"
#include "isofield/special_fn.hpp"
#include "oracles.hpp"

using namespace isofield;

namespace {

RadialFn constant(double c) {
    return [c](double) { return c; };
}

RadialKernelSet kernel(KernelBasis b, const std::vector<double>& values) {
    RadialKernelSet k;
    k.rank = (b == KernelBasis::l_rank1) ? 1 : 2;
    k.basis = b;
    for (double v : values) k.coeffs.push_back(constant(v));
    return k;
}

double bessel_j0_series(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -(x * x / 4.0) / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

VectorSpectralPair mixed_pair() {
    return {SpectralMeasure({{0.7, 1.3}, {1.9, 0.4}}), SpectralMeasure({{1.1, 0.8}}), VectorNormalization::canonical};
}

double gl_integral(const std::function<double(double)>& f, double a, double b) {
    const auto rule = oracle::golub_welsch_sphere(40, 1);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = std::cos(rule.nodes[k].theta);
        s += rule.weights[k] / (2 * oracle::pi) * f(0.5 * (b - a) * x + 0.5 * (a + b));
    }
    return 0.5 * (b - a) * s;
}

}  // namespace

TEST_SUITE("correlation") {

TEST_CASE("spectral measure validation") {
    CHECK_THROWS_AS(SpectralMeasure({{1.0, -1.0}}), Error);
    CHECK_THROWS_AS(SpectralMeasure({{1.0, 1.0}, {0.5, 1.0}}), Error);
    const SpectralMeasure m({{0.0, 0.5}, {2.0, 1.5}});
    CHECK(m.total_mass() == 2.0);
    CHECK(m.zero_atom_mass() == 0.5);
    CHECK(m.has_zero_atom());
}

TEST_CASE("vector pair zero-atom conditions") {
    const SpectralMeasure a({{0.0, 1.0}}), b({{0.0, 0.5}});
    CHECK_NOTHROW(VectorSpectralPair(a, b, VectorNormalization::canonical).validate());
    CHECK_THROWS_AS(VectorSpectralPair(a, b, VectorNormalization::yaglom).validate(), Error);
    CHECK_NOTHROW(VectorSpectralPair(a, a, VectorNormalization::yaglom).validate());
}

TEST_CASE("scalar correlation") {
    const SpectralMeasure phi({{0.5, 2.0}, {1.5, 0.25}});
    CHECK(scalar_corr(0.0, phi) == doctest::Approx(2.25));
    const SpectralMeasure one({{1.0, 3.0}});
    for (double r : {0.1, 1.0, 4.0}) CHECK(scalar_corr(r, one) == doctest::Approx(3.0 * std::sin(r) / r).epsilon(1e-14));
    CHECK(scalar_corr(1.0, SpectralMeasure({{2.0, 1.5}}), 2) == doctest::Approx(1.5 * bessel_j0_series(2.0)).epsilon(1e-13));
    CHECK(scalar_corr(0.0, SpectralMeasure({{2.0, 1.5}}), 5) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("scalar correlation matrices are positive semidefinite") {
    std::mt19937_64 g(41);
    const SpectralMeasure phi({{0.0, 0.3}, {0.8, 1.0}, {2.5, 0.6}});
    for (int t = 0; t < 10; ++t) {
        std::vector<Vec3> pts;
        for (int i = 0; i < 20; ++i) pts.push_back(oracle::random_vector(g, 2.0));
        Eigen::MatrixXd C(20, 20);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) C(i, j) = scalar_corr(norm(pts[i] - pts[j]), phi);
        CHECK(min_eigenvalue(C) >= -1e-9);
    }
}

TEST_CASE("vector correlation at the origin and on an axis") {
    const VectorSpectralPair p(SpectralMeasure({{1.0, 1.0}}), SpectralMeasure(), VectorNormalization::canonical);
    CHECK((vector_corr({0, 0, 0}, p) - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff() < 1e-15);
    const Mat3 R = vector_corr({1.7, 0, 0}, mixed_pair());
    CHECK(std::abs(R(0, 1)) < 1e-14);
    CHECK(std::abs(R(0, 2)) < 1e-14);
    CHECK(std::abs(R(1, 2)) < 1e-14);
    CHECK(R(1, 1) == doctest::Approx(R(2, 2)).epsilon(1e-14));
    const auto [bll, bkk] = longitudinal_transverse(1.7, mixed_pair());
    CHECK(R(0, 0) == doctest::Approx(bll).epsilon(1e-12));
    CHECK(R(1, 1) == doctest::Approx(bkk).epsilon(1e-12));
}

TEST_CASE("harmonic and longitudinal/transverse routes agree") {
    std::mt19937_64 g(42);
    const auto p = mixed_pair();
    for (int t = 0; t < 100; ++t) {
        const Vec3 r = oracle::random_vector(g, 2.0);
        CHECK((vector_corr(r, p) - vector_corr_yaglom(r, p)).cwiseAbs().maxCoeff() < 1e-10);
    }
    const VectorSpectralPair y = p.to_yaglom();
    CHECK(y.normalization == VectorNormalization::yaglom);
    CHECK((vector_corr({0.3, 0.2, -1.0}, y) - vector_corr({0.3, 0.2, -1.0}, p)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("vector correlation transforms covariantly") {
    std::mt19937_64 g(43);
    const auto p = mixed_pair();
    for (int t = 0; t < 50; ++t) {
        const Vec3 r = oracle::random_vector(g, 2.0);
        const Mat3 Rot = oracle::random_rotation(g);
        const Mat3 lhs = vector_corr(from_eigen(Rot * to_eigen(r)), p);
        const Mat3 rhs = Rot * vector_corr(r, p) * Rot.transpose();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((vector_corr(r, p) - vector_corr(-1.0 * r, p).transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("longitudinal and lateral functions") {
    const auto p = mixed_pair();
    auto kern = [&](const Vec3& r) { return vector_corr(r, p); };
    const auto o = longitudinal_lateral(kern, 0.0);
    CHECK(o.f == doctest::Approx(1.0));
    CHECK(o.g == doctest::Approx(1.0));
    CHECK_THROWS_AS(longitudinal_lateral([](const Vec3&) { return Mat3(Mat3::Zero()); }, 1.0), Error);
}

TEST_CASE("the first canonical part is solenoidal, the second irrotational") {
    const VectorSpectralPair sol(SpectralMeasure({{0.9, 1.0}, {1.6, 0.5}}), SpectralMeasure(), VectorNormalization::canonical);
    const VectorSpectralPair irr(SpectralMeasure(), SpectralMeasure({{0.9, 1.0}, {1.6, 0.5}}), VectorNormalization::canonical);
    auto f_of = [](const VectorSpectralPair& p) {
        return [p](double r) { return longitudinal_lateral([&](const Vec3& v) { return vector_corr(v, p); }, r).f; };
    };
    auto g_of = [](const VectorSpectralPair& p) {
        return [p](double r) { return longitudinal_lateral([&](const Vec3& v) { return vector_corr(v, p); }, r).g; };
    };
    const RadialFn g_pred = solenoidal_g_from_f(f_of(sol), 3);
    const RadialFn f_pred = irrotational_f_from_g(g_of(irr));
    for (double r = 0.25; r <= 5.0; r += 0.25) {
        CHECK(std::abs(g_pred(r) - g_of(sol)(r)) < 1e-8);
        CHECK(std::abs(f_pred(r) - f_of(irr)(r)) < 1e-8);
    }
}

TEST_CASE("solenoidal and irrotational relations on closed forms") {
    const RadialFn one = constant(1.0);
    CHECK(solenoidal_g_from_f(one, 3)(2.0) == doctest::Approx(1.0));
    CHECK(irrotational_f_from_g(constant(2.5))(1.3) == doctest::Approx(2.5));
    const RadialFn gauss = [](double r) { return std::exp(-r * r); };
    const RadialFn expo = [](double r) { return std::exp(-r); };
    const RadialFn gs = solenoidal_g_from_f(gauss, 3);
    const RadialFn fi = irrotational_f_from_g(expo);
    const RadialFn s2 = solenoidal_g_from_f(expo, 2);
    for (double r = 0.0; r <= 5.0; r += 0.1) {
        CHECK(std::abs(gs(r) - (1.0 - r * r) * std::exp(-r * r)) < 1e-8);
        CHECK(std::abs(fi(r) - (1.0 - r) * std::exp(-r)) < 1e-8);
        CHECK(std::abs(s2(r) - fi(r)) < 1e-12);
    }
}

TEST_CASE("irrotational relation inverted by integration") {
    const RadialFn g = [](double r) { return std::exp(-r) * std::cos(0.5 * r); };
    const RadialFn f = irrotational_f_from_g(g);
    for (double r = 0.1; r <= 5.0; r += 0.3) {
        const double back = gl_integral(f, 0.0, r) / r;
        CHECK(std::abs(back - g(r)) < 1e-8);
    }
}

TEST_CASE("basis names and arities") {
    for (auto b : {KernelBasis::l_rank1, KernelBasis::l_rank2_lomakin, KernelBasis::k_rank2, KernelBasis::h_inplane,
                   KernelBasis::s_damage})
        CHECK(basis_from_name(basis_name(b)) == b);
    CHECK_THROWS_AS(basis_from_name("nope"), Error);
    CHECK(basis_arity(KernelBasis::k_rank2) == 5);
    CHECK(basis_arity(KernelBasis::h_inplane) == 4);
    CHECK_THROWS_AS(kernel(KernelBasis::k_rank2, {1, 2}).validate(), Error);
}

TEST_CASE("rank-2 K-basis component cases") {
    const double K0 = 0.7, K1 = -0.3, K2 = 0.45, K3 = 0.2, K4 = -0.15;
    const auto k = kernel(KernelBasis::k_rank2, {K0, K1, K2, K3, K4});
    const double r1 = 1.3;
    const Tensor4 t = rank2_corr({r1, 0, 0}, k);
    CHECK(t(0, 0, 0, 0) == doctest::Approx(K0 + 2 * K1 + 2 * r1 * r1 * K2 + 4 * r1 * r1 * K3 + std::pow(r1, 4) * K4));
    CHECK(std::abs(t(0, 0, 0, 1)) < 1e-15);
    std::mt19937_64 g(44);
    for (int n = 0; n < 20; ++n) {
        const Vec3 r = oracle::random_vector(g);
        const Tensor4 u = rank2_corr(r, k);
        CHECK(u(0, 0, 0, 1) ==
              doctest::Approx(r[0] * r[1] * (K2 + 2 * K3) + std::pow(r[0], 3) * r[1] * K4).epsilon(1e-12));
        CHECK(u(1, 1, 1, 1) == doctest::Approx(K0 + 2 * K1 + 2 * r[1] * r[1] * K2 + 4 * r[1] * r[1] * K3 +
                                               std::pow(r[1], 4) * K4));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        CHECK(u(i, j, a, b) == doctest::Approx(u(j, i, a, b)));
                        CHECK(u(i, j, a, b) == doctest::Approx(u(i, j, b, a)));
                    }
    }
    const Tensor4 iso = rank2_corr({0.4, 1.0, -0.2}, kernel(KernelBasis::k_rank2, {2.0, 0, 0, 0, 0}));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) CHECK(iso(i, j, a, b) == (i == j && a == b ? 2.0 : 0.0));
}

TEST_CASE("rank-2 kernels transform covariantly") {
    std::mt19937_64 g(45);
    const auto k = kernel(KernelBasis::k_rank2, {0.7, -0.3, 0.45, 0.2, -0.15});
    const auto lom = kernel(KernelBasis::l_rank2_lomakin, {0.3, 1.0, 0.2, 0.4, -0.1, 0.3});
    for (int t = 0; t < 20; ++t) {
        const Vec3 r = oracle::random_vector(g);
        const Mat3 R = oracle::random_rotation(g);
        const Vec3 gr = from_eigen(R * to_eigen(r));
        CHECK((rank2_corr(gr, k) - rank2_corr(r, k).rotated(R)).max_abs() < 1e-10);
        CHECK((rank2_corr(gr, lom) - rank2_corr(r, lom).rotated(R)).max_abs() < 1e-10);
    }
}

TEST_CASE("lomakin constraint is enforced") {
    CHECK_NOTHROW(kernel(KernelBasis::l_rank2_lomakin, {0.3, 1.0, 0.2, 0.4, -0.1, 0.3}).validate());
    const auto bad = kernel(KernelBasis::l_rank2_lomakin, {0.3, 1.0, 0.2, 0.4, -0.1, 0.5});
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(rank2_corr({1, 0, 0}, bad), Error);
}

TEST_CASE("in-plane H-T connection") {
    const InplaneH iso = inplane_H_from_T(1.5, 1.5, 1.5, 0.0, 0.8);
    CHECK(iso.H1 == 1.5);
    CHECK(iso.H2 == 0.0);
    CHECK(iso.H4 == 0.0);
    CHECK(iso.H5 == 0.0);
    CHECK(inplane_H_from_T(1, 2, 3, 0.37, 1.1).H2 == 0.37);
    CHECK_THROWS_AS(inplane_H_from_T(1, 1, 1, 0, 0.0), Error);
    std::mt19937_64 g(46);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const InplaneH h{u(g), u(g), u(g), u(g)};
        const double r = 0.2 + std::abs(u(g));
        RadialKernelSet k;
        k.rank = 2;
        k.basis = KernelBasis::h_inplane;
        k.coeffs = {constant(h.H1), constant(h.H2), constant(h.H4), constant(h.H5)};
        const Tensor4 T = inplane_corr({r, 0, 0}, k);
        const InplaneT tf = inplane_T_from_H(h, r);
        CHECK(T(0, 0, 0, 0) == doctest::Approx(tf.T1111).epsilon(1e-14));
        CHECK(T(1, 1, 1, 1) == doctest::Approx(tf.T2222).epsilon(1e-14));
        CHECK(T(0, 0, 1, 1) == doctest::Approx(tf.T1122).epsilon(1e-14));
        CHECK(T(0, 1, 0, 1) == doctest::Approx(tf.T1212).epsilon(1e-14));
        const InplaneH back = inplane_H_from_T(T(0, 0, 0, 0), T(1, 1, 1, 1), T(0, 0, 1, 1), T(0, 1, 0, 1), r);
        CHECK(std::abs(back.H1 - h.H1) < 1e-12);
        CHECK(std::abs(back.H2 - h.H2) < 1e-12);
        CHECK(std::abs(back.H4 - h.H4) < 1e-12);
        CHECK(std::abs(back.H5 - h.H5) < 1e-12);
    }
}

TEST_CASE("reynolds energy correlation") {
    CHECK(reynolds_energy_corr({1, 0, 0, 0, 0}) == 2.25);
    CHECK(reynolds_energy_corr({0, 0, 0, 0, 0}) == 0.0);
    std::mt19937_64 g(47);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const std::array<double, 5> S{n(g), n(g), n(g), n(g), n(g)};
        CHECK(std::abs(reynolds_energy_corr(S) - reynolds_energy_by_contraction(S)) < 1e-12);
    }
}

TEST_CASE("damage A and M relations") {
    const DamageA ex = damage_A_from_M({0, 0, 0, 1, 0, 0.5});
    CHECK(ex.A[0] == 1.0);
    CHECK(ex.A[1] == 0.5);
    CHECK(ex.A[2] == -1.0);
    CHECK(ex.A[3] == -0.5);
    CHECK(ex.A[4] == 1.0);
    CHECK(ex.residual == -2.0);
    std::mt19937_64 g(48);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const std::array<double, 5> A{n(g), n(g), n(g), n(g), n(g)};
        const auto M = damage_M_from_A(A);
        CHECK(M[6] == 0.0);
        const DamageA back = damage_A_from_M({M[0], M[1], M[2], M[3], M[4], M[5]});
        CHECK(std::abs(back.residual) < 1e-13);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(back.A[i] - A[i]) < 1e-12);
    }
}

TEST_CASE("fabric tensors") {
    const auto q = sphere_quadrature(12, 25);
    std::vector<std::pair<Vec3, double>> uniform, tilted;
    const double eps = 0.3;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const Vec3 n = q.nodes[k].unit_vector();
        uniform.push_back({n, q.weights[k]});
        tilted.push_back({n, q.weights[k] * (1.0 + eps * fabric_f2(n)(2, 2))});
    }
    const auto u = fabric_tensors(uniform);
    CHECK(u.D0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.Dij.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(u.Dijkl.max_abs() < 1e-14);
    const auto t = fabric_tensors(tilted);
    const Eigen::Vector3d expect(-eps / 3, -eps / 3, 2 * eps / 3);
    CHECK((t.Dij - Mat3(expect.asDiagonal())).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(t.Dij.trace()) < 1e-14);
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) tr += t.Dijkl(i, i, 0, 1) + t.Dijkl(i, i, 2, 2);
    CHECK(std::abs(tr) < 1e-13);
    CHECK_THROWS_AS(fabric_tensors({}), Error);
}

TEST_CASE("ogden tensors") {
    const auto I2 = ogden_tensor(2);
    CHECK(I2[0] == 1.0);
    CHECK(I2[1] == 0.0);
    const auto I4 = ogden_tensor(4);
    // I4 is idempotent and maps a symmetric matrix to itself.
    for (int a = 0; a < 81; ++a) {
        double s = 0.0;
        for (int k = 0; k < 9; ++k) s += I4[(a / 9) * 9 + k] * I4[k * 9 + a % 9];
        CHECK(s == doctest::Approx(I4[a]));
    }
    const auto I6 = ogden_tensor(6);
    auto at = [&](int a, int b, int c, int d, int e, int f) { return I6[((((a * 3 + b) * 3 + c) * 3 + d) * 3 + e) * 3 + f]; };
    for (int n = 0; n < 729; ++n) {
        const int a = n / 243, b = (n / 81) % 3, c = (n / 27) % 3, d = (n / 9) % 3, e = (n / 3) % 3, f = n % 3;
        CHECK(at(a, b, c, d, e, f) == doctest::Approx(at(b, a, c, d, e, f)));
        CHECK(at(a, b, c, d, e, f) == doctest::Approx(at(a, b, d, c, e, f)));
        CHECK(at(a, b, c, d, e, f) == doctest::Approx(at(a, b, e, f, c, d)));
    }
    CHECK_THROWS_AS(ogden_tensor(3), Error);
}

TEST_CASE("M to L identities") {
    std::mt19937_64 g(49);
    for (int t = 0; t < 100; ++t) {
        const Vec3 r = oracle::random_vector(g, 1.5);
        const auto a = m_to_l_rank1(r);
        for (int n = 0; n < 2; ++n) CHECK((a.M[n] - a.L_side[n]).cwiseAbs().maxCoeff() < 1e-10);
        const auto b = m_to_l_rank2(r);
        for (int n = 0; n < 5; ++n) CHECK((b.M[n] - b.L_side[n]).max_abs() < 1e-10);
    }
    const auto z = m_to_l_rank2({0, 0, 0});
    for (int n = 2; n < 5; ++n) CHECK(z.M[n].max_abs() == 0.0);
    CHECK(m_to_l_rank1({0, 0, 0}).M[1].cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
