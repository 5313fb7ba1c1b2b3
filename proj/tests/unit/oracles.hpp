#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "isofield/special_fn.hpp"
#include "isofield/types.hpp"

namespace oracle {

using isofield::cplx;
using isofield::Vec3;

inline constexpr double pi = std::numbers::pi;

// j_l(x) by its power series in long double.
inline double bessel_series(int l, double x) {
    long double df = 1.0L;
    for (int k = 1; k <= 2 * l + 1; k += 2) df *= k;
    const long double xx = x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -(xx * xx / 2.0L) / (k * (2.0L * l + 2.0L * k + 1.0L));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(std::pow(xx, l) / df * sum);
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
}

// Spin-weighted harmonic from the stereographic coordinate zeta = e^{i phi} cot(theta/2).
inline cplx spin_harmonic_zeta(int s, int l, int m, cplx zeta) {
    if (std::abs(s) > l || std::abs(m) > l) return 0.0;
    const double rho = std::abs(zeta);
    const double phi = std::arg(zeta);
    const double fac = std::tgamma(l + m + 1.0) * std::tgamma(l - m + 1.0) * (2 * l + 1) /
                       (4.0 * pi * std::tgamma(l + s + 1.0) * std::tgamma(l - s + 1.0));
    const double pre = ((m % 2 == 0) ? 1.0 : -1.0) * std::sqrt(fac);
    double t = 0.0;
    for (int r = 0; r <= l - s; ++r) {
        const int k = r + s - m;
        if (k < 0 || k > l + s) continue;
        const double sgn = (((l - r - s) % 2 + 2) % 2 == 0) ? 1.0 : -1.0;
        t += binom(l - s, r) * binom(l + s, k) * sgn * std::pow(rho, 2 * r + s - m);
    }
    return pre * std::pow(1.0 + rho * rho, -l) * t * std::exp(cplx(0.0, m * phi));
}

inline isofield::SphericalPoint random_point(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {std::acos(1.0 - 2.0 * u(g)), 2.0 * pi * u(g)};
}

inline Vec3 random_vector(std::mt19937_64& g, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {scale * n(g), scale * n(g), scale * n(g)};
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Quaterniond q(n(g), n(g), n(g), n(g));
    q.normalize();
    return q.toRotationMatrix();
}

// Plain Gauss-Legendre times trapezoid rule built from Eigen's tridiagonal eigen-solver (Golub-Welsch).
struct Rule {
    std::vector<isofield::SphericalPoint> nodes;
    std::vector<double> weights;
};

inline Rule golub_welsch_sphere(int nt, int np) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nt, nt);
    for (int k = 1; k < nt; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (int i = 0; i < nt; ++i) {
        const double x = es.eigenvalues()(i);
        const double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        for (int j = 0; j < np; ++j) {
            r.nodes.push_back({std::acos(x), 2.0 * pi * j / np});
            r.weights.push_back(w * 2.0 * pi / np);
        }
    }
    return r;
}

}  // namespace oracle
