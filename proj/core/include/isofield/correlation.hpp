#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isofield/types.hpp"

namespace isofield {

struct Atom {
    double lambda = 0.0;
    double mass = 0.0;
};

// Finite atomic measure on [0, inf).
class SpectralMeasure {
public:
    SpectralMeasure() = default;
    explicit SpectralMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const;
    double zero_atom_mass() const;
    bool has_zero_atom() const { return zero_atom_mass() > 0.0; }
    double max_lambda() const { return atoms_.empty() ? 0.0 : atoms_.back().lambda; }
    SpectralMeasure scaled(double s) const;

private:
    std::vector<Atom> atoms_;
};

// canonical: the harmonic (GG-built) kernel with Phi1({0}) = 2 Phi2({0}).
// yaglom: longitudinal/transverse form with Phi1({0}) = Phi2({0}).
enum class VectorNormalization { yaglom, canonical };

struct VectorSpectralPair {
    SpectralMeasure phi1;
    SpectralMeasure phi2;
    VectorNormalization normalization = VectorNormalization::canonical;

    VectorSpectralPair() = default;
    VectorSpectralPair(SpectralMeasure p1, SpectralMeasure p2, VectorNormalization n);

    void validate() const;
    // Same field, expressed in the other normalization.
    VectorSpectralPair to_canonical() const;
    VectorSpectralPair to_yaglom() const;
    double variance() const;  // trace of the covariance at r = 0, divided by 3
};

using RadialFn = std::function<double(double)>;

// sum mass * 2^{(d-2)/2} Gamma(d/2) J_{(d-2)/2}(lr) / (lr)^{(d-2)/2}
double scalar_corr(double r, const SpectralMeasure& phi, int d = 3);

// Harmonic route: j0, j2, GG matrices and theta_{m0}.
Mat3 vector_corr(const Vec3& rvec, const VectorSpectralPair& pair);
// Longitudinal/transverse route via cylindrical Bessel functions, d = 3.
Mat3 vector_corr_yaglom(const Vec3& rvec, const VectorSpectralPair& pair);
// B_ll and B_kk of the longitudinal/transverse form.
std::pair<double, double> longitudinal_transverse(double r, const VectorSpectralPair& pair);

struct LongLat {
    double f = 0.0;
    double g = 0.0;
};

// f = R_pp / R_pp(0) along the separation, g = R_nn / R_nn(0) normal to it.
LongLat longitudinal_lateral(const std::function<Mat3(const Vec3&)>& kernel, double r);

double central_difference(const RadialFn& f, double r);
RadialFn solenoidal_g_from_f(RadialFn f, int n);
RadialFn irrotational_f_from_g(RadialFn g);

// Basis tensors. The vector argument is used as given (not normalized).
Mat3 l_rank1(int which, const Vec3& r);
Tensor4 l_rank2(int which, const Vec3& r);
// Ogden tensor of rank 2, 4 or 6, flattened row-major.
std::vector<double> ogden_tensor(int rank);

enum class KernelBasis { l_rank1, l_rank2_lomakin, k_rank2, h_inplane, s_damage };

std::string basis_name(KernelBasis b);
KernelBasis basis_from_name(const std::string& s);
std::size_t basis_arity(KernelBasis b);

struct RadialKernelSet {
    int rank = 2;
    KernelBasis basis = KernelBasis::k_rank2;
    std::vector<RadialFn> coeffs;

    // Throws on arity mismatch or a violated Lomakin constraint at sampled radii.
    void validate(double r_max = 10.0) const;
};

Mat3 rank1_corr(const Vec3& rvec, const RadialKernelSet& kernels);
// l_rank2_lomakin, k_rank2 (raw r) or s_damage (unit r).
Tensor4 rank2_corr(const Vec3& rvec, const RadialKernelSet& kernels);
// 2-d in-plane kernel from H1, H2, H4, H5; components with an index 2 are zero.
Tensor4 inplane_corr(const Vec3& rvec, const RadialKernelSet& kernels);

struct InplaneH {
    double H1 = 0.0, H2 = 0.0, H4 = 0.0, H5 = 0.0;
};

struct InplaneT {
    double T1111 = 0.0, T2222 = 0.0, T1122 = 0.0, T1212 = 0.0;
};

InplaneH inplane_H_from_T(double T1111, double T2222, double T1122, double T1212, double r);
InplaneT inplane_T_from_H(const InplaneH& h, double r);

double reynolds_energy_corr(const std::array<double, 5>& S);
// (1/4) sum_m S_m J^(m)_{iikk} with the K-form tensors built on a unit vector.
double reynolds_energy_by_contraction(const std::array<double, 5>& S);

struct DamageA {
    std::array<double, 5> A{};
    double residual = 0.0;  // M2 - M4 - 2 M6
};

DamageA damage_A_from_M(const std::array<double, 6>& M);
// M1..M7 for the damage kernel with coefficients S1..S5 (n along the separation).
std::array<double, 7> damage_M_from_S(const std::array<double, 5>& S);
std::array<double, 7> damage_M_from_A(const std::array<double, 5>& A);

struct FabricTensors {
    double D0 = 0.0;
    Mat3 Dij = Mat3::Zero();
    Tensor4 Dijkl;
};

Mat3 fabric_f2(const Vec3& n);
Tensor4 fabric_f4(const Vec3& n);
// Samples (n, w) with sum w g(n) approximating the integral of p(n) g(n) over the sphere.
FabricTensors fabric_tensors(const std::vector<std::pair<Vec3, double>>& samples);

struct MToLRank1 {
    std::array<Mat3, 2> M;
    std::array<Mat3, 2> L_side;
};

struct MToLRank2 {
    std::array<Tensor4, 5> M;
    std::array<Tensor4, 5> L_side;
};

// Both sides in Cartesian components. M from GG sums, L_side from the printed conversions.
MToLRank1 m_to_l_rank1(const Vec3& rvec);
MToLRank2 m_to_l_rank2(const Vec3& rvec);

}  // namespace isofield
