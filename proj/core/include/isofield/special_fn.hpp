#pragma once

#include <optional>
#include <vector>

#include "isofield/types.hpp"

namespace isofield {

struct HarmonicIndex {
    int ell = 0;
    int m = 0;
    int spin = 0;
};

// Colatitude theta in [0, pi], longitude phi in [0, 2pi).
struct SphericalPoint {
    double theta = 0.0;
    double phi = 0.0;

    static SphericalPoint from_vector(const Vec3& v);
    // zeta = e^{i phi} cot(theta/2); nullopt stands for the point at infinity (north pole).
    static SphericalPoint from_zeta(std::optional<cplx> zeta);
    std::optional<cplx> zeta() const;
    Vec3 unit_vector() const;
    SphericalPoint antipode() const;
};

struct QuadratureRule {
    std::vector<SphericalPoint> nodes;
    std::vector<double> weights;
    int n_theta = 0;
    int n_phi = 0;
    // Products of harmonics up to this total degree are integrated exactly.
    int degree = 0;
};

// Index of (ell, m) in a packed array of all harmonics with ell <= L.
constexpr int lm_index(int ell, int m) { return ell * ell + ell + m; }
constexpr int lm_count(int ell_max) { return (ell_max + 1) * (ell_max + 1); }

double spherical_bessel(int ell, double x);
// j_0(x) ... j_{ell_max}(x).
std::vector<double> spherical_bessel_all(int ell_max, double x);

// Fully normalized associated Legendre values with Condon-Shortley phase:
// Y_{l,m}(theta, phi) = P[lm_index(l,m)] e^{i m phi} for m >= 0. Entries for m < 0 are zero.
std::vector<double> normalized_legendre_all(int ell_max, double cos_theta, double sin_theta);

double real_harmonic(int ell, int m, const SphericalPoint& p);
// All real harmonics with ell <= L at p, packed by lm_index.
std::vector<double> real_harmonics_all(int ell_max, const SphericalPoint& p);

cplx complex_harmonic(int ell, int m, const SphericalPoint& p);
std::vector<cplx> complex_harmonics_all(int ell_max, const SphericalPoint& p);

// Small Wigner d^l_{m1 m2}(beta), Jacobi-polynomial form.
double wigner_d(int ell, int m1, int m2, double beta);

cplx spin_harmonic(int spin, int ell, int m, const SphericalPoint& p);
inline cplx spin_harmonic(const HarmonicIndex& idx, const SphericalPoint& p) {
    return spin_harmonic(idx.spin, idx.ell, idx.m, p);
}
// Packed by lm_index; zero where ell < |spin|.
std::vector<cplx> spin_harmonics_all(int spin, int ell_max, const SphericalPoint& p);

// D^l_{m0}(phi, theta, 0) = e^{-i m phi} d^l_{m0}(theta).
cplx wigner_D_m0(int ell, int m, const SphericalPoint& p);
// Real matrix entries theta_{m0} of the real irreducible representation: 2 sqrt(pi)/sqrt(2l+1) Y^m_l.
double wigner_theta_m0(int ell, int m, const SphericalPoint& p);

enum class EthDirection { raise, lower };

struct EthFactor {
    double value = 0.0;
    bool in_range = true;
};

// Coefficient c with eth sY_lm = c (s+1)Y_lm, or ethbar sY_lm = c (s-1)Y_lm.
EthFactor eth_on_basis(int spin, int ell, EthDirection direction);

// sum_{l<=L} 4 pi i^l j_l(|k||r|) sum_m Y^m_l(k^) Y^m_l(r^)
cplx rayleigh_partial_sum(const Vec3& k, const Vec3& r, int ell_max);

// Gauss-Legendre nodes on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);
// n_theta Gauss-Legendre colatitudes by n_phi uniform longitudes.
QuadratureRule sphere_quadrature(int n_theta, int n_phi);
// Exact for products up to degree 2 ell_max.
QuadratureRule sphere_quadrature_for(int ell_max);
// n_theta rows, 2 n_theta - 1 longitudes.
QuadratureRule sphere_grid(int n_theta);

}  // namespace isofield
