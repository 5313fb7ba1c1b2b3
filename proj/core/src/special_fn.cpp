#include "isofield/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isofield/error.hpp"

namespace isofield {

namespace {

constexpr double pi = std::numbers::pi;

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

long double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    k = std::min(k, n - k);
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

long double jacobi(int n, int a, int b, long double x) {
    if (n == 0) return 1.0L;
    long double p0 = 1.0L;
    long double p1 = (a + 1) + 0.5L * (a + b + 2) * (x - 1.0L);
    for (int k = 2; k <= n; ++k) {
        const long double c = 2 * k + a + b;
        const long double a1 = 2.0L * k * (k + a + b) * (c - 2);
        const long double a2 = (c - 1) * (c * (c - 2) * x + static_cast<long double>(a * a - b * b));
        const long double a3 = 2.0L * (k + a - 1) * (k + b - 1) * c;
        const long double p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace

SphericalPoint SphericalPoint::from_vector(const Vec3& v) {
    const double r = norm(v);
    if (r == 0.0) return {0.0, 0.0};
    double phi = std::atan2(v[1], v[0]);
    if (phi < 0.0) phi += 2.0 * pi;
    return {std::acos(std::clamp(v[2] / r, -1.0, 1.0)), phi};
}

SphericalPoint SphericalPoint::from_zeta(std::optional<cplx> zeta) {
    if (!zeta) return {0.0, 0.0};
    const double a = std::abs(*zeta);
    if (a == 0.0) return {pi, 0.0};
    double phi = std::arg(*zeta);
    if (phi < 0.0) phi += 2.0 * pi;
    return {2.0 * std::atan(1.0 / a), phi};
}

std::optional<cplx> SphericalPoint::zeta() const {
    if (theta == 0.0) return std::nullopt;
    return std::polar(std::cos(theta / 2.0) / std::sin(theta / 2.0), phi);
}

Vec3 SphericalPoint::unit_vector() const {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

SphericalPoint SphericalPoint::antipode() const {
    double p = phi + pi;
    if (p >= 2.0 * pi) p -= 2.0 * pi;
    return {pi - theta, p};
}

std::vector<double> spherical_bessel_all(int ell_max, double x) {
    require(ell_max >= 0, "spherical_bessel: ell must be non-negative");
    std::vector<double> j(static_cast<std::size_t>(ell_max) + 1, 0.0);
    if (x < 0.0) {
        j = spherical_bessel_all(ell_max, -x);
        for (int l = 1; l <= ell_max; l += 2) j[l] = -j[l];
        return j;
    }
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double j0 = std::sin(x) / x;
    j[0] = j0;
    if (ell_max == 0) return j;
    double j1 = 0.0;
    if (x < 1.0) {
        // Power series; the closed form cancels for small x.
        double term = x / 3.0;
        j1 = term;
        for (int k = 1; k < 30 && std::abs(term) > 1e-18 * std::abs(j1); ++k) {
            term *= -x * x / (2.0 * k * (2.0 * k + 3.0));
            j1 += term;
        }
    } else {
        j1 = (j0 - std::cos(x)) / x;
    }

    // Downward recurrence from well above max(ell_max, x).
    const double top = std::max(static_cast<double>(ell_max), x);
    const int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * (top + 1.0)));
    std::vector<double> f(static_cast<std::size_t>(ell_max) + 2, 0.0);
    double next = 0.0, cur = 1e-300;
    for (int k = start; k >= 1; --k) {
        const double prev = (2.0 * k + 1.0) / x * cur - next;
        next = cur;
        cur = prev;
        if (k - 1 <= ell_max + 1) f[k - 1] = cur;
        if (k <= ell_max + 1) f[k] = next;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            for (int i = k - 1; i <= ell_max + 1; ++i) f[i] *= 1e-250;
        }
    }
    const double scale = (std::abs(j0) >= std::abs(j1)) ? j0 / f[0] : j1 / f[1];
    for (int l = 0; l <= ell_max; ++l) j[l] = f[l] * scale;
    j[0] = j0;
    j[1] = j1;

    // Forward recurrence is stable below the turning point l ~ x.
    const int lf = std::min(ell_max, static_cast<int>(std::floor(x)));
    double a = j0, b = j1;
    for (int l = 1; l < lf; ++l) {
        const double c = (2.0 * l + 1.0) / x * b - a;
        a = b;
        b = c;
        j[l + 1] = c;
    }
    return j;
}

double spherical_bessel(int ell, double x) { return spherical_bessel_all(ell, x)[ell]; }

std::vector<double> normalized_legendre_all(int ell_max, double ct, double st) {
    std::vector<double> P(lm_count(ell_max), 0.0);
    P[0] = 1.0 / std::sqrt(4.0 * pi);
    for (int m = 1; m <= ell_max; ++m)
        P[lm_index(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * P[lm_index(m - 1, m - 1)];
    for (int m = 0; m < ell_max; ++m) P[lm_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * P[lm_index(m, m)];
    for (int m = 0; m <= ell_max; ++m) {
        for (int l = m + 2; l <= ell_max; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
            const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                       (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            P[lm_index(l, m)] = a * (ct * P[lm_index(l - 1, m)] - b * P[lm_index(l - 2, m)]);
        }
    }
    return P;
}

std::vector<double> real_harmonics_all(int ell_max, const SphericalPoint& p) {
    const auto P = normalized_legendre_all(ell_max, std::cos(p.theta), std::sin(p.theta));
    std::vector<double> Y(lm_count(ell_max), 0.0);
    const double s2 = std::sqrt(2.0);
    for (int l = 0; l <= ell_max; ++l) {
        Y[lm_index(l, 0)] = P[lm_index(l, 0)];
        for (int m = 1; m <= l; ++m) {
            const double v = s2 * P[lm_index(l, m)];
            Y[lm_index(l, m)] = v * std::cos(m * p.phi);
            Y[lm_index(l, -m)] = -parity_sign(m) * v * std::sin(m * p.phi);
        }
    }
    return Y;
}

double real_harmonic(int ell, int m, const SphericalPoint& p) {
    require(ell >= 0 && std::abs(m) <= ell, "real_harmonic: |m| must not exceed ell");
    return real_harmonics_all(ell, p)[lm_index(ell, m)];
}

std::vector<cplx> complex_harmonics_all(int ell_max, const SphericalPoint& p) {
    const auto P = normalized_legendre_all(ell_max, std::cos(p.theta), std::sin(p.theta));
    std::vector<cplx> Y(lm_count(ell_max));
    for (int l = 0; l <= ell_max; ++l) {
        for (int m = 0; m <= l; ++m) {
            const cplx v = P[lm_index(l, m)] * std::polar(1.0, m * p.phi);
            Y[lm_index(l, m)] = v;
            if (m > 0) Y[lm_index(l, -m)] = parity_sign(m) * std::conj(v);
        }
    }
    return Y;
}

cplx complex_harmonic(int ell, int m, const SphericalPoint& p) {
    require(ell >= 0 && std::abs(m) <= ell, "complex_harmonic: |m| must not exceed ell");
    return complex_harmonics_all(ell, p)[lm_index(ell, m)];
}

double wigner_d(int j, int mp, int m, double beta) {
    require(j >= 0 && std::abs(m) <= j && std::abs(mp) <= j, "wigner_d: orders out of range");
    const int k = std::min({j + m, j - m, j + mp, j - mp});
    int a = 0, lambda = 0;
    if (k == j + m) {
        a = mp - m;
        lambda = mp - m;
    } else if (k == j - m) {
        a = m - mp;
    } else if (k == j + mp) {
        a = m - mp;
    } else {
        a = mp - m;
        lambda = mp - m;
    }
    const int b = 2 * j - 2 * k - a;
    const long double norm2 = binomial(2 * j - k, k + a) / binomial(k + b, b);
    const long double half = static_cast<long double>(beta) / 2.0L;
    const long double val = std::sqrt(norm2) * std::pow(std::sin(half), a) * std::pow(std::cos(half), b) *
                            jacobi(k, a, b, std::cos(static_cast<long double>(beta)));
    return parity_sign(lambda) * static_cast<double>(val);
}

cplx spin_harmonic(int spin, int ell, int m, const SphericalPoint& p) {
    require(ell >= 0 && std::abs(m) <= ell, "spin_harmonic: |m| must not exceed ell");
    if (std::abs(spin) > ell) return 0.0;
    const double c = parity_sign(spin) * std::sqrt((2.0 * ell + 1.0) / (4.0 * pi));
    return c * wigner_d(ell, m, -spin, p.theta) * std::polar(1.0, m * p.phi);
}

std::vector<cplx> spin_harmonics_all(int spin, int ell_max, const SphericalPoint& p) {
    std::vector<cplx> Y(lm_count(ell_max), 0.0);
    if (std::abs(spin) > ell_max) return Y;
    const double c = std::cos(p.theta);
    const double sign = parity_sign(spin);
    const int mp = -spin;
    // Three-term recurrence in l of d^l_{m,mp}(theta), seeded by the closed form.
    for (int m = -ell_max; m <= ell_max; ++m) {
        const int l0 = std::max(std::abs(m), std::abs(mp));
        const cplx phase = std::polar(1.0, m * p.phi);
        auto store = [&](int l, double d) {
            Y[lm_index(l, m)] = sign * std::sqrt((2.0 * l + 1.0) / (4.0 * pi)) * d * phase;
        };
        double prev = 0.0, cur = wigner_d(l0, m, mp, p.theta);
        store(l0, cur);
        int l = l0;
        if (l == 0 && ell_max >= 1) {
            prev = cur;
            cur = wigner_d(1, m, mp, p.theta);
            store(1, cur);
            l = 1;
        }
        for (; l < ell_max; ++l) {
            const double L = l, L1 = l + 1.0;
            const double a = L * std::sqrt((L1 * L1 - m * m) * (L1 * L1 - mp * mp));
            const double b = (2.0 * L + 1.0) * (L * L1 * c - static_cast<double>(m) * mp);
            const double g = L1 * std::sqrt((L * L - m * m) * (L * L - mp * mp));
            const double next = (b * cur - g * prev) / a;
            prev = cur;
            cur = next;
            store(l + 1, cur);
        }
    }
    return Y;
}

cplx wigner_D_m0(int ell, int m, const SphericalPoint& p) {
    return std::polar(1.0, -m * p.phi) * wigner_d(ell, m, 0, p.theta);
}

double wigner_theta_m0(int ell, int m, const SphericalPoint& p) {
    return 2.0 * std::sqrt(pi) / std::sqrt(2.0 * ell + 1.0) * real_harmonic(ell, m, p);
}

EthFactor eth_on_basis(int s, int ell, EthDirection direction) {
    const int target = (direction == EthDirection::raise) ? s + 1 : s - 1;
    if (ell < 0 || std::abs(s) > ell || std::abs(target) > ell) return {0.0, false};
    if (direction == EthDirection::raise)
        return {std::sqrt(static_cast<double>(ell - s) * (ell + s + 1)), true};
    return {-std::sqrt(static_cast<double>(ell + s) * (ell - s + 1)), true};
}

cplx rayleigh_partial_sum(const Vec3& k, const Vec3& r, int ell_max) {
    require(ell_max >= 0, "rayleigh_partial_sum: ell_max must be non-negative");
    const double kr = norm(k) * norm(r);
    const auto j = spherical_bessel_all(ell_max, kr);
    const auto Yk = real_harmonics_all(ell_max, SphericalPoint::from_vector(k));
    const auto Yr = real_harmonics_all(ell_max, SphericalPoint::from_vector(r));
    cplx sum = 0.0;
    cplx il = 1.0;
    for (int l = 0; l <= ell_max; ++l) {
        double s = 0.0;
        for (int m = -l; m <= l; ++m) s += Yk[lm_index(l, m)] * Yr[lm_index(l, m)];
        sum += 4.0 * pi * il * j[l] * s;
        il *= cplx(0.0, 1.0);
    }
    return sum;
}

}  // namespace isofield
