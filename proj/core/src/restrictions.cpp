#include <cmath>
#include <numbers>

#include "isofield/correlation.hpp"
#include "isofield/error.hpp"

namespace isofield {

namespace {
double kd(int i, int j) { return i == j ? 1.0 : 0.0; }
}  // namespace

InplaneH inplane_H_from_T(double T1111, double T2222, double T1122, double T1212, double r) {
    require(r > 0.0, "inplane_H_from_T: r must be positive");
    const double r2 = r * r;
    InplaneH h;
    h.H2 = T1212;
    h.H1 = T2222 - 2.0 * T1212;
    h.H4 = (T1122 - T2222 + 2.0 * T1212) / r2;
    h.H5 = (T1111 + T2222 - 2.0 * T1122 - 4.0 * T1212) / (r2 * r2);
    return h;
}

InplaneT inplane_T_from_H(const InplaneH& h, double r) {
    const double r2 = r * r;
    InplaneT t;
    t.T1111 = h.H1 + 2.0 * h.H2 + 2.0 * r2 * h.H4 + r2 * r2 * h.H5;
    t.T2222 = h.H1 + 2.0 * h.H2;
    t.T1122 = h.H1 + r2 * h.H4;
    t.T1212 = h.H2;
    return t;
}

double reynolds_energy_corr(const std::array<double, 5>& S) {
    return 2.25 * S[0] + 1.5 * S[1] + 1.5 * S[2] + S[3] + 0.25 * S[4];
}

double reynolds_energy_by_contraction(const std::array<double, 5>& S) {
    RadialKernelSet k;
    k.rank = 2;
    k.basis = KernelBasis::s_damage;
    for (double s : S) k.coeffs.push_back([s](double) { return s; });
    const Tensor4 t = rank2_corr({0.6, -0.48, 0.64}, k);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sum += t(i, i, j, j);
    return 0.25 * sum;
}

DamageA damage_A_from_M(const std::array<double, 6>& M) {
    DamageA d;
    d.A[0] = M[3];
    d.A[1] = M[5];
    d.A[2] = M[2] - M[3];
    d.A[3] = M[4] - M[5];
    d.A[4] = M[0] - M[2] - 4.0 * M[4] + 2.0 * M[5];
    d.residual = M[1] - M[3] - 2.0 * M[5];
    return d;
}

std::array<double, 7> damage_M_from_S(const std::array<double, 5>& S) {
    RadialKernelSet k;
    k.rank = 2;
    k.basis = KernelBasis::s_damage;
    for (double s : S) k.coeffs.push_back([s](double) { return s; });
    const Tensor4 t = rank2_corr({1.0, 0.0, 0.0}, k);
    return {t(0, 0, 0, 0), t(1, 1, 1, 1), t(0, 0, 1, 1), t(1, 1, 2, 2), t(0, 1, 0, 1), t(1, 2, 1, 2), t(0, 0, 0, 1)};
}

std::array<double, 7> damage_M_from_A(const std::array<double, 5>& A) {
    return damage_M_from_S({A[0], A[1], A[2], A[3], A[4] - A[2]});
}

Mat3 fabric_f2(const Vec3& n) {
    Mat3 f;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f(i, j) = n[i] * n[j] - kd(i, j) / 3.0;
    return f;
}

Tensor4 fabric_f4(const Vec3& n) {
    Tensor4 f;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double six = kd(i, j) * n[k] * n[l] + kd(i, k) * n[j] * n[l] + kd(i, l) * n[j] * n[k] +
                                       kd(j, k) * n[i] * n[l] + kd(j, l) * n[i] * n[k] + kd(k, l) * n[i] * n[j];
                    const double three = kd(i, j) * kd(k, l) + kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k);
                    f(i, j, k, l) = n[i] * n[j] * n[k] * n[l] - six / 7.0 + three / 35.0;
                }
    return f;
}

FabricTensors fabric_tensors(const std::vector<std::pair<Vec3, double>>& samples) {
    require(!samples.empty(), "fabric_tensors: no samples");
    const double c = 1.0 / (4.0 * std::numbers::pi);
    FabricTensors out;
    for (const auto& [n, w] : samples) {
        out.D0 += c * w;
        out.Dij += c * 7.5 * w * fabric_f2(n);
        out.Dijkl += fabric_f4(n) * (c * 945.0 / 24.0 * w);
    }
    return out;
}

}  // namespace isofield
