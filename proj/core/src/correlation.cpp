#include "isofield/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isofield/coupling.hpp"
#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"

namespace isofield {

namespace {

constexpr double pi = std::numbers::pi;

// J_nu(x) / x^nu, continuous at x = 0.
double bessel_over_power(double nu, double x) {
    if (x < 1e-3) {
        double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
        double sum = term;
        const double q = -(x * x) / 4.0;
        for (int k = 1; k < 6; ++k) {
            term *= q / (k * (k + nu));
            sum += term;
        }
        return sum;
    }
    return std::cyl_bessel_j(nu, x) / std::pow(x, nu);
}

// sum_m g^{m[i,j]}_{2[1,1]} theta_{m0}(n) in Cartesian components.
Mat3 harmonic_quadrupole(const Vec3& n) {
    const GGBlock& g = gg_block(2, 1, 1);
    const SphericalPoint p = SphericalPoint::from_vector(n);
    Mat3 s = Mat3::Zero();
    for (int m = -2; m <= 2; ++m) {
        const double th = wigner_theta_m0(2, m, p);
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) s(i + 1, j + 1) += g(m, i, j) * th;
    }
    const Mat3& Q = m_basis_from_cartesian();
    return Q.transpose() * s * Q;
}

Vec3 unit_or_zero(const Vec3& r) {
    const double n = norm(r);
    return n > 0.0 ? (1.0 / n) * r : Vec3{0.0, 0.0, 0.0};
}

}  // namespace

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        require(std::isfinite(atoms_[k].lambda) && atoms_[k].lambda >= 0.0, "spectral measure: lambda must be >= 0");
        require(std::isfinite(atoms_[k].mass) && atoms_[k].mass > 0.0, "spectral measure: mass must be positive");
        if (k > 0) require(atoms_[k].lambda > atoms_[k - 1].lambda, "spectral measure: lambdas must be strictly increasing");
    }
}

double SpectralMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    return s;
}

double SpectralMeasure::zero_atom_mass() const {
    return (!atoms_.empty() && atoms_.front().lambda == 0.0) ? atoms_.front().mass : 0.0;
}

SpectralMeasure SpectralMeasure::scaled(double s) const {
    if (s == 0.0) return SpectralMeasure();
    std::vector<Atom> a = atoms_;
    for (auto& x : a) x.mass *= s;
    return SpectralMeasure(std::move(a));
}

VectorSpectralPair::VectorSpectralPair(SpectralMeasure p1, SpectralMeasure p2, VectorNormalization n)
    : phi1(std::move(p1)), phi2(std::move(p2)), normalization(n) {
    validate();
}

void VectorSpectralPair::validate() const {
    const double a = phi1.zero_atom_mass(), b = phi2.zero_atom_mass();
    const double tol = 1e-12 * std::max(1.0, std::max(a, b));
    if (normalization == VectorNormalization::yaglom) {
        require(std::abs(a - b) <= tol, "vector spectral pair: yaglom normalization needs Phi1({0}) = Phi2({0})");
    } else {
        require(std::abs(a - 2.0 * b) <= tol, "vector spectral pair: canonical normalization needs Phi1({0}) = 2 Phi2({0})");
    }
}

VectorSpectralPair VectorSpectralPair::to_canonical() const {
    if (normalization == VectorNormalization::canonical) return *this;
    VectorSpectralPair c;
    c.phi1 = phi2.scaled(2.0);
    c.phi2 = phi1;
    c.normalization = VectorNormalization::canonical;
    return c;
}

VectorSpectralPair VectorSpectralPair::to_yaglom() const {
    if (normalization == VectorNormalization::yaglom) return *this;
    VectorSpectralPair y;
    y.phi1 = phi2;
    y.phi2 = phi1.scaled(0.5);
    y.normalization = VectorNormalization::yaglom;
    return y;
}

double VectorSpectralPair::variance() const {
    const auto c = to_canonical();
    return (c.phi1.total_mass() + c.phi2.total_mass()) / 3.0;
}

double scalar_corr(double r, const SpectralMeasure& phi, int d) {
    require(r >= 0.0, "scalar_corr: r must be non-negative");
    require(d >= 2, "scalar_corr: dimension must be at least 2");
    const double nu = (d - 2) / 2.0;
    const double c = std::pow(2.0, nu) * std::tgamma(d / 2.0);
    double s = 0.0;
    for (const auto& a : phi.atoms()) {
        const double x = a.lambda * r;
        if (d == 3)
            s += a.mass * spherical_bessel(0, x);
        else
            s += a.mass * c * bessel_over_power(nu, x);
    }
    return s;
}

Mat3 vector_corr(const Vec3& rvec, const VectorSpectralPair& pair) {
    const VectorSpectralPair c = pair.to_canonical();
    const double r = norm(rvec);
    const Mat3 S = (r > 0.0) ? harmonic_quadrupole(rvec) : Mat3::Zero();
    const Mat3 I = Mat3::Identity();
    Mat3 R = Mat3::Zero();
    for (const auto& a : c.phi1.atoms()) {
        const auto j = spherical_bessel_all(2, a.lambda * r);
        R += a.mass * (j[0] / 3.0 * I + j[2] / std::sqrt(6.0) * S);
    }
    for (const auto& a : c.phi2.atoms()) {
        const auto j = spherical_bessel_all(2, a.lambda * r);
        R += a.mass * (j[0] / 3.0 * I - std::sqrt(2.0 / 3.0) * j[2] * S);
    }
    return R;
}

std::pair<double, double> longitudinal_transverse(double r, const VectorSpectralPair& pair) {
    const VectorSpectralPair y = pair.to_yaglom();
    const double c = std::sqrt(2.0) * std::tgamma(1.5);
    double bll = 0.0, bkk = 0.0;
    for (const auto& a : y.phi1.atoms()) {
        const double x = a.lambda * r;
        const double j32 = bessel_over_power(1.5, x);
        bll += a.mass * c * (j32 - x * x * bessel_over_power(2.5, x));
        bkk += a.mass * c * j32;
    }
    for (const auto& a : y.phi2.atoms()) {
        const double x = a.lambda * r;
        const double j32 = bessel_over_power(1.5, x);
        bll += a.mass * c * 2.0 * j32;
        bkk += a.mass * c * (bessel_over_power(0.5, x) - j32);
    }
    return {bll, bkk};
}

Mat3 vector_corr_yaglom(const Vec3& rvec, const VectorSpectralPair& pair) {
    const double r = norm(rvec);
    const auto [bll, bkk] = longitudinal_transverse(r, pair);
    const Vec3 n = unit_or_zero(rvec);
    return (bll - bkk) * l_rank1(2, n) + bkk * Mat3::Identity();
}

LongLat longitudinal_lateral(const std::function<Mat3(const Vec3&)>& kernel, double r) {
    require(r >= 0.0, "longitudinal_lateral: r must be non-negative");
    const Mat3 R0 = kernel({0.0, 0.0, 0.0});
    if (!(R0(0, 0) > 0.0) || !(R0(1, 1) > 0.0)) fail_numerical("longitudinal_lateral: zero variance, degenerate field");
    const Mat3 R = kernel({r, 0.0, 0.0});
    return {R(0, 0) / R0(0, 0), R(1, 1) / R0(1, 1)};
}

double central_difference(const RadialFn& f, double r) {
    const double h = 1e-5 * std::max(std::abs(r), 1.0);
    return (f(r + h) - f(r - h)) / (2.0 * h);
}

RadialFn solenoidal_g_from_f(RadialFn f, int n) {
    require(n >= 2, "solenoidal_g_from_f: dimension must be at least 2");
    return [f = std::move(f), n](double r) { return f(r) + r * central_difference(f, r) / (n - 1); };
}

RadialFn irrotational_f_from_g(RadialFn g) {
    return [g = std::move(g)](double r) { return g(r) + r * central_difference(g, r); };
}

std::string basis_name(KernelBasis b) {
    switch (b) {
        case KernelBasis::l_rank1: return "L_RANK1";
        case KernelBasis::l_rank2_lomakin: return "L_RANK2_LOMAKIN";
        case KernelBasis::k_rank2: return "K_RANK2";
        case KernelBasis::h_inplane: return "H_INPLANE";
        case KernelBasis::s_damage: return "S_DAMAGE";
    }
    return "";
}

KernelBasis basis_from_name(const std::string& s) {
    for (KernelBasis b : {KernelBasis::l_rank1, KernelBasis::l_rank2_lomakin, KernelBasis::k_rank2,
                          KernelBasis::h_inplane, KernelBasis::s_damage})
        if (basis_name(b) == s) return b;
    fail_validation("unknown kernel basis '" + s + "'");
}

std::size_t basis_arity(KernelBasis b) {
    switch (b) {
        case KernelBasis::l_rank1: return 2;
        case KernelBasis::l_rank2_lomakin: return 6;
        case KernelBasis::k_rank2: return 5;
        case KernelBasis::h_inplane: return 4;
        case KernelBasis::s_damage: return 5;
    }
    return 0;
}

void RadialKernelSet::validate(double r_max) const {
    const int want_rank = (basis == KernelBasis::l_rank1) ? 1 : 2;
    require(rank == want_rank, "kernel set: rank " + std::to_string(rank) + " does not match basis " + basis_name(basis));
    require(coeffs.size() == basis_arity(basis), "kernel set: basis " + basis_name(basis) + " needs " +
                                                     std::to_string(basis_arity(basis)) + " coefficient functions");
    for (const auto& c : coeffs) require(static_cast<bool>(c), "kernel set: empty coefficient function");
    if (basis == KernelBasis::l_rank2_lomakin) {
        for (int k = 0; k <= 32; ++k) {
            const double r = r_max * k / 32.0;
            const double v = coeffs[3](r) + 2.0 * coeffs[5](r) - coeffs[1](r);
            const double scale = std::max({1.0, std::abs(coeffs[1](r)), std::abs(coeffs[3](r)), std::abs(coeffs[5](r))});
            if (std::abs(v) > 1e-10 * scale)
                fail_validation("kernel set: Lomakin constraint P4 + 2 P6 - P2 = 0 violated at r = " + std::to_string(r));
        }
    }
}

Mat3 rank1_corr(const Vec3& rvec, const RadialKernelSet& k) {
    require(k.basis == KernelBasis::l_rank1 && k.coeffs.size() == 2, "rank1_corr: needs an L_RANK1 kernel set");
    const double r = norm(rvec);
    return k.coeffs[0](r) * l_rank1(1, rvec) + k.coeffs[1](r) * l_rank1(2, rvec);
}

Tensor4 rank2_corr(const Vec3& rvec, const RadialKernelSet& k) {
    const double r = norm(rvec);
    std::array<double, 5> c{};
    Vec3 v = rvec;
    switch (k.basis) {
        case KernelBasis::l_rank2_lomakin: {
            require(k.coeffs.size() == 6, "rank2_corr: Lomakin basis needs six functions P1..P6");
            std::array<double, 6> P;
            for (int i = 0; i < 6; ++i) P[i] = k.coeffs[i](r);
            if (std::abs(P[3] + 2.0 * P[5] - P[1]) > 1e-10 * std::max({1.0, std::abs(P[1]), std::abs(P[3]), std::abs(P[5])}))
                fail_validation("rank2_corr: Lomakin constraint P4 + 2 P6 - P2 = 0 violated");
            c = {P[3], P[5], P[4] - P[5], P[2] - P[3], P[0] + P[1] - 2.0 * P[2] - 4.0 * P[4]};
            v = unit_or_zero(rvec);
            break;
        }
        case KernelBasis::k_rank2:
        case KernelBasis::s_damage: {
            require(k.coeffs.size() == 5, "rank2_corr: K/S basis needs five functions");
            std::array<double, 5> K;
            for (int i = 0; i < 5; ++i) K[i] = k.coeffs[i](r);
            // K0 L1 + K1 L2 + K2 L4 + K3 L3 + K4 L5
            c = {K[0], K[1], K[3], K[2], K[4]};
            if (k.basis == KernelBasis::s_damage) v = unit_or_zero(rvec);
            break;
        }
        default: fail_validation("rank2_corr: basis must be L_RANK2_LOMAKIN, K_RANK2 or S_DAMAGE");
    }
    Tensor4 t;
    for (int n = 0; n < 5; ++n)
        if (c[n] != 0.0) t += l_rank2(n + 1, v) * c[n];
    return t;
}

Tensor4 inplane_corr(const Vec3& rvec, const RadialKernelSet& k) {
    require(k.basis == KernelBasis::h_inplane && k.coeffs.size() == 4, "inplane_corr: needs an H_INPLANE kernel set");
    const Vec3 v{rvec[0], rvec[1], 0.0};
    const double r = norm(v);
    const double H1 = k.coeffs[0](r), H2 = k.coeffs[1](r), H4 = k.coeffs[2](r), H5 = k.coeffs[3](r);
    Tensor4 t = l_rank2(1, v) * H1 + l_rank2(2, v) * H2 + l_rank2(4, v) * H4 + l_rank2(5, v) * H5;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (i == 2 || j == 2 || a == 2 || b == 2) t(i, j, a, b) = 0.0;
    return t;
}

MToLRank1 m_to_l_rank1(const Vec3& rvec) {
    const double r = norm(rvec);
    const GGBlock& g0 = gg_block(0, 1, 1);
    const Mat3& Q = m_basis_from_cartesian();
    Mat3 A;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) A(i + 1, j + 1) = g0(0, i, j);
    MToLRank1 out;
    out.M[0] = Q.transpose() * A * Q;
    out.M[1] = (r > 0.0) ? Mat3(r * r * harmonic_quadrupole(rvec)) : Mat3(Mat3::Zero());
    out.L_side[0] = l_rank1(1, rvec) / std::sqrt(3.0);
    out.L_side[1] = -r * r / std::sqrt(6.0) * l_rank1(1, rvec) + std::sqrt(1.5) * l_rank1(2, rvec);
    return out;
}

MToLRank2 m_to_l_rank2(const Vec3& rvec) {
    const double r = norm(rvec);
    const SphericalPoint p = SphericalPoint::from_vector(rvec);
    const GGBlock& g011 = gg_block(0, 1, 1);
    const GGBlock& g211 = gg_block(2, 1, 1);
    const GGBlock& g022 = gg_block(0, 2, 2);
    const GGBlock& g222 = gg_block(2, 2, 2);
    const GGBlock& g422 = gg_block(4, 2, 2);

    double t2[5] = {}, t4[9] = {};
    if (r > 0.0) {
        for (int m = -2; m <= 2; ++m) t2[m + 2] = wigner_theta_m0(2, m, p);
        for (int m = -4; m <= 4; ++m) t4[m + 4] = wigner_theta_m0(4, m, p);
    }
    double S[3][3] = {};
    for (int m = -2; m <= 2; ++m)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) S[i][j] += g211(m, i - 1, j - 1) * t2[m + 2];

    std::array<Tensor4, 5> M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double Aij = g011(0, i - 1, j - 1), Akl = g011(0, k - 1, l - 1);
                    M[0](i, j, k, l) = Aij * Akl;
                    M[2](i, j, k, l) = r * r / std::sqrt(2.0) * (Aij * S[k][l] + S[i][j] * Akl);
                    double m2 = 0.0, m4 = 0.0, m5 = 0.0;
                    for (int a = -2; a <= 2; ++a)
                        for (int b = -2; b <= 2; ++b) {
                            const double pab = g211(a, i - 1, j - 1) * g211(b, k - 1, l - 1);
                            if (pab == 0.0) continue;
                            m2 += g022(0, a, b) * pab;
                            for (int m = -2; m <= 2; ++m) m4 += g222(m, a, b) * pab * t2[m + 2];
                            for (int m = -4; m <= 4; ++m) m5 += g422(m, a, b) * pab * t4[m + 4];
                        }
                    M[1](i, j, k, l) = m2;
                    M[3](i, j, k, l) = r * r * m4;
                    M[4](i, j, k, l) = r * r * r * r * m5;
                }

    const Mat3 Qt = m_basis_from_cartesian().transpose();
    MToLRank2 out;
    for (int n = 0; n < 5; ++n) out.M[n] = M[n].rotated(Qt);

    const Tensor4 L1 = l_rank2(1, rvec), L2 = l_rank2(2, rvec), L3 = l_rank2(3, rvec), L4 = l_rank2(4, rvec),
                  L5 = l_rank2(5, rvec);
    const double r2 = r * r, r4 = r2 * r2;
    const double s5 = std::sqrt(5.0), s7 = std::sqrt(7.0), s14 = std::sqrt(14.0), s70 = std::sqrt(70.0);
    out.L_side[0] = L1 * (1.0 / 3.0);
    out.L_side[1] = L1 * (-1.0 / (3.0 * s5)) + L2 * (1.0 / (2.0 * s5));
    out.L_side[2] = L1 * (-r2 / 3.0) + L4 * 0.5;
    out.L_side[3] = L1 * (r2 * 2.0 * std::sqrt(2.0) / (3.0 * s7)) + L2 * (-r2 / s14) + L3 * (3.0 / (2.0 * s14)) +
                    L4 * (-std::sqrt(2.0 / 7.0));
    out.L_side[4] = (L1 + L2) * (r4 / (2.0 * s70)) + (L3 + L4) * (-r2 * s5 / (2.0 * s14)) +
                    L5 * (std::sqrt(35.0) / (2.0 * std::sqrt(2.0)));
    return out;
}

}  // namespace isofield
