#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "isofield/special_fn.hpp"

namespace isofield {

enum StokesComponent : int { kTheta = 0, kE = 1, kB = 2, kV = 3 };

struct AngularPowerSpectrum {
    int ell_max = 0;
    std::array<int, 4> ell_min{2, 2, 2, 0};
    std::vector<Eigen::Matrix4d> C;  // index ell, components (Theta, E, B, V)

    static AngularPowerSpectrum zeros(int ell_max);
    // C_l = A l^{-alpha} for l >= max(1, ell_min).
    static AngularPowerSpectrum power_law(int ell_max, const Eigen::Matrix4d& A, double alpha);

    // Symmetry, PSD and ell_min checks; with enforce_parity also C^{Theta B} = C^{EB} = C^{BV} = 0.
    void validate(bool enforce_parity = false) const;
    bool satisfies_parity(double tol = 0.0) const;
    // C_l with rows and columns of components below their ell_min zeroed.
    Eigen::Matrix4d effective(int ell) const;
};

struct AlmSet {
    int ell_max = 0;
    std::array<std::vector<cplx>, 4> a;  // packed by lm_index

    AlmSet() = default;
    explicit AlmSet(int L);
    cplx& operator()(int comp, int l, int m) { return a[comp][lm_index(l, m)]; }
    cplx operator()(int comp, int l, int m) const { return a[comp][lm_index(l, m)]; }
    double max_abs_diff(const AlmSet& o) const;
};

struct SpinAlm {
    int ell_max = 0;
    std::vector<cplx> plus;   // a^(2)
    std::vector<cplx> minus;  // a^(-2)
};

SpinAlm spin_from_eb(const AlmSet& alm);
// Fills E and B of `alm` from the spin coefficients.
void eb_from_spin(const SpinAlm& s, AlmSet& alm);

struct StokesMap {
    std::vector<SphericalPoint> grid;
    std::vector<std::array<double, 4>> values;  // Theta, Q, U, V
};

// Harmonic values on a fixed grid, reused across synthesis and analysis.
class SphereBasis {
public:
    SphereBasis(std::vector<SphericalPoint> grid, int ell_max);
    const std::vector<SphericalPoint>& grid() const { return grid_; }
    int ell_max() const { return L_; }
    const std::vector<cplx>& y0(std::size_t node) const { return y0_[node]; }
    const std::vector<cplx>& y2(std::size_t node) const { return y2_[node]; }
    const std::vector<cplx>& ym2(std::size_t node) const { return ym2_[node]; }

private:
    std::vector<SphericalPoint> grid_;
    int L_;
    std::vector<std::vector<cplx>> y0_, y2_, ym2_;
};

AlmSet synthesize_alm(const AngularPowerSpectrum& spec, std::uint64_t seed);

StokesMap alm_to_stokes(const AlmSet& alm, const SphereBasis& basis);
StokesMap alm_to_stokes(const AlmSet& alm, const std::vector<SphericalPoint>& grid);

// Quadrature nodes must coincide with map.grid.
AlmSet stokes_to_alm(const StokesMap& map, const QuadratureRule& quad, const SphereBasis& basis);
AlmSet stokes_to_alm(const StokesMap& map, const QuadratureRule& quad, int ell_max);

struct EthFields {
    int ell_max = 0;
    std::vector<cplx> e;  // coefficients of (ethbar^2 P+ + eth^2 P-) / 2
    std::vector<cplx> b;  // coefficients of -i (ethbar^2 P+ - eth^2 P-) / 2
};

EthFields eb_via_eth(const SpinAlm& s);

struct CellEstimate {
    int ell_max = 0;
    std::vector<Eigen::Matrix4d> mean;
    std::vector<Eigen::Matrix4d> std_error;
};

// Per-realization (2l+1)^{-1} sum_m Re(a a^dagger), averaged; SE from the spread over realizations.
CellEstimate estimate_cell(const std::vector<AlmSet>& ensemble);
// Single realization; SE from the spread over m.
CellEstimate estimate_cell(const AlmSet& alm);

// Theta, E, V -> (-1)^l a_lm; B -> (-1)^{l+1} a_lm.
AlmSet parity_transform(const AlmSet& alm);

struct RealAlm {
    int ell_max = 0;
    std::vector<double> theta, q2, qm2, v;  // a^Theta, 2a^{Q,U}, -2a^{Q,U}, a^V
};

RealAlm complex_to_real(const AlmSet& alm);
AlmSet real_to_complex(const RealAlm& r);
RealAlm real_basis_expansion(const StokesMap& map, const QuadratureRule& quad, int ell_max);
// Covariance of (a^Theta, 2a, -2a, a^V) at order m for a spectrum matrix C.
Eigen::Matrix4d real_basis_covariance(const Eigen::Matrix4d& C, int m);

}  // namespace isofield
