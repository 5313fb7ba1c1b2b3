#include "isofield/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isofield/coupling.hpp"
#include "isofield/error.hpp"
#include "isofield/linalg.hpp"
#include "isofield/parallel.hpp"
#include "isofield/rng.hpp"

namespace isofield {

namespace {

constexpr cplx I{0.0, 1.0};

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void check_ell_max(int L, const char* where) {
    require(L >= 0, std::string(where) + ": ell_max must be non-negative");
}

}  // namespace

AngularPowerSpectrum AngularPowerSpectrum::zeros(int ell_max) {
    check_ell_max(ell_max, "AngularPowerSpectrum");
    AngularPowerSpectrum s;
    s.ell_max = ell_max;
    s.C.assign(static_cast<std::size_t>(ell_max) + 1, Eigen::Matrix4d::Zero());
    return s;
}

AngularPowerSpectrum AngularPowerSpectrum::power_law(int ell_max, const Eigen::Matrix4d& A, double alpha) {
    require(std::isfinite(alpha), "power_law: alpha must be finite");
    AngularPowerSpectrum s = zeros(ell_max);
    for (int l = 1; l <= ell_max; ++l) s.C[l] = A * std::pow(static_cast<double>(l), -alpha);
    for (int l = 0; l <= ell_max; ++l) s.C[l] = s.effective(l);
    return s;
}

Eigen::Matrix4d AngularPowerSpectrum::effective(int ell) const {
    Eigen::Matrix4d M = C.at(static_cast<std::size_t>(ell));
    for (int c = 0; c < 4; ++c)
        if (ell < ell_min[c]) {
            M.row(c).setZero();
            M.col(c).setZero();
        }
    return M;
}

void AngularPowerSpectrum::validate(bool enforce_parity) const {
    check_ell_max(ell_max, "AngularPowerSpectrum");
    require(C.size() == static_cast<std::size_t>(ell_max) + 1, "AngularPowerSpectrum: need one matrix per ell");
    for (int c = 0; c < 4; ++c) require(ell_min[c] >= 0, "AngularPowerSpectrum: ell_min must be non-negative");
    require(ell_min[kE] >= 2 && ell_min[kB] >= 2, "AngularPowerSpectrum: E and B need ell_min >= 2");
    for (int l = 0; l <= ell_max; ++l) {
        const Eigen::Matrix4d& M = C[l];
        require(M.allFinite(), "AngularPowerSpectrum: non-finite entry at ell " + std::to_string(l));
        const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
        require((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                "AngularPowerSpectrum: C_l not symmetric at ell " + std::to_string(l));
        const double me = min_eigenvalue(effective(l));
        if (me < -1e-9 * scale)
            fail_numerical("AngularPowerSpectrum: C_l not positive semidefinite at ell " + std::to_string(l) +
                           " (min eigenvalue " + std::to_string(me) + ")");
    }
    if (enforce_parity) require(satisfies_parity(), "AngularPowerSpectrum: parity requires C^{TB} = C^{EB} = C^{BV} = 0");
}

bool AngularPowerSpectrum::satisfies_parity(double tol) const {
    for (const auto& M : C)
        for (int c : {kTheta, kE, kV})
            if (std::abs(M(c, kB)) > tol || std::abs(M(kB, c)) > tol) return false;
    return true;
}

AlmSet::AlmSet(int L) : ell_max(L) {
    check_ell_max(L, "AlmSet");
    for (auto& v : a) v.assign(static_cast<std::size_t>(lm_count(L)), cplx{});
}

double AlmSet::max_abs_diff(const AlmSet& o) const {
    require(ell_max == o.ell_max, "AlmSet: ell_max mismatch");
    double d = 0.0;
    for (int c = 0; c < 4; ++c)
        for (std::size_t k = 0; k < a[c].size(); ++k) d = std::max(d, std::abs(a[c][k] - o.a[c][k]));
    return d;
}

SpinAlm spin_from_eb(const AlmSet& alm) {
    SpinAlm s;
    s.ell_max = alm.ell_max;
    const std::size_t n = alm.a[kE].size();
    s.plus.resize(n);
    s.minus.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.plus[k] = alm.a[kE][k] + I * alm.a[kB][k];
        s.minus[k] = alm.a[kE][k] - I * alm.a[kB][k];
    }
    return s;
}

void eb_from_spin(const SpinAlm& s, AlmSet& alm) {
    require(s.ell_max == alm.ell_max, "eb_from_spin: ell_max mismatch");
    for (std::size_t k = 0; k < s.plus.size(); ++k) {
        alm.a[kE][k] = 0.5 * (s.plus[k] + s.minus[k]);
        alm.a[kB][k] = -0.5 * I * (s.plus[k] - s.minus[k]);
    }
}

SphereBasis::SphereBasis(std::vector<SphericalPoint> grid, int ell_max) : grid_(std::move(grid)), L_(ell_max) {
    check_ell_max(ell_max, "SphereBasis");
    const std::size_t n = grid_.size();
    y0_.resize(n);
    y2_.resize(n);
    ym2_.resize(n);
    parallel_for(n, [&](std::size_t k) {
        y0_[k] = complex_harmonics_all(L_, grid_[k]);
        y2_[k] = spin_harmonics_all(2, L_, grid_[k]);
        ym2_[k] = spin_harmonics_all(-2, L_, grid_[k]);
    });
}

AlmSet synthesize_alm(const AngularPowerSpectrum& spec, std::uint64_t seed) {
    spec.validate(false);
    const int L = spec.ell_max;
    AlmSet out(L);
    parallel_for(static_cast<std::size_t>(L) + 1, [&](std::size_t ls) {
        const int l = static_cast<int>(ls);
        const Eigen::MatrixXd A = psd_factor(spec.effective(l));
        NormalStream rng(substream_seed(seed, ls), 0);
        Eigen::Vector4d x, y;
        for (int c = 0; c < 4; ++c) x(c) = rng.normal();
        const Eigen::Vector4d u0 = A * x;
        for (int c = 0; c < 4; ++c) out(c, l, 0) = u0(c);
        for (int m = 1; m <= l; ++m) {
            for (int c = 0; c < 4; ++c) x(c) = rng.normal();
            for (int c = 0; c < 4; ++c) y(c) = rng.normal();
            const Eigen::Vector4d u = A * x, v = A * y;
            for (int c = 0; c < 4; ++c) {
                const cplx z = cplx(u(c), v(c)) / std::sqrt(2.0);
                out(c, l, m) = z;
                out(c, l, -m) = sign_pow(m) * std::conj(z);
            }
        }
    });
    return out;
}

StokesMap alm_to_stokes(const AlmSet& alm, const SphereBasis& basis) {
    require(basis.ell_max() >= alm.ell_max, "alm_to_stokes: basis ell_max too small");
    const SpinAlm s = spin_from_eb(alm);
    const std::size_t n = basis.grid().size();
    StokesMap map;
    map.grid = basis.grid();
    map.values.resize(n);
    const int count = lm_count(alm.ell_max);
    std::vector<double> residue(n, 0.0), scale(n, 0.0);
    parallel_for(n, [&](std::size_t k) {
        const auto& y0 = basis.y0(k);
        const auto& y2 = basis.y2(k);
        const auto& ym2 = basis.ym2(k);
        cplx t{}, v{}, pp{}, pm{};
        for (int j = 0; j < count; ++j) {
            t += alm.a[kTheta][j] * y0[j];
            v += alm.a[kV][j] * y0[j];
            pp += s.plus[j] * y2[j];
            pm += s.minus[j] * ym2[j];
        }
        const cplx q = 0.5 * (pp + pm);
        const cplx u = -0.5 * I * (pp - pm);
        map.values[k] = {t.real(), q.real(), u.real(), v.real()};
        residue[k] = std::max({std::abs(t.imag()), std::abs(v.imag()), std::abs(q.imag()), std::abs(u.imag())});
        scale[k] = std::max({std::abs(t), std::abs(v), std::abs(pp), std::abs(pm)});
    });
    const double r = *std::max_element(residue.begin(), residue.end());
    const double sc = std::max(1.0, *std::max_element(scale.begin(), scale.end()));
    if (r > 1e-10 * sc)
        fail_numerical("alm_to_stokes: imaginary residue " + std::to_string(r) + "; coefficients violate the reality condition");
    return map;
}

StokesMap alm_to_stokes(const AlmSet& alm, const std::vector<SphericalPoint>& grid) {
    return alm_to_stokes(alm, SphereBasis(grid, alm.ell_max));
}

AlmSet stokes_to_alm(const StokesMap& map, const QuadratureRule& quad, const SphereBasis& basis) {
    const std::size_t n = quad.nodes.size();
    require(map.values.size() == n && basis.grid().size() == n, "stokes_to_alm: map, basis and quadrature sizes differ");
    const int L = basis.ell_max();
    require(2 * L <= quad.degree, "stokes_to_alm: quadrature not exact to degree 2 ell_max");
    const int count = lm_count(L);
    AlmSet out(L);
    SpinAlm s;
    s.ell_max = L;
    s.plus.assign(static_cast<std::size_t>(count), cplx{});
    s.minus.assign(static_cast<std::size_t>(count), cplx{});
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
        cplx t{}, v{}, pp{}, pm{};
        for (std::size_t k = 0; k < n; ++k) {
            const auto& x = map.values[k];
            const double w = quad.weights[k];
            t += w * x[0] * std::conj(basis.y0(k)[j]);
            v += w * x[3] * std::conj(basis.y0(k)[j]);
            pp += w * cplx(x[1], x[2]) * std::conj(basis.y2(k)[j]);
            pm += w * cplx(x[1], -x[2]) * std::conj(basis.ym2(k)[j]);
        }
        out.a[kTheta][j] = t;
        out.a[kV][j] = v;
        s.plus[j] = pp;
        s.minus[j] = pm;
    });
    eb_from_spin(s, out);
    return out;
}

AlmSet stokes_to_alm(const StokesMap& map, const QuadratureRule& quad, int ell_max) {
    return stokes_to_alm(map, quad, SphereBasis(quad.nodes, ell_max));
}

EthFields eb_via_eth(const SpinAlm& s) {
    EthFields f;
    f.ell_max = s.ell_max;
    const int count = lm_count(s.ell_max);
    require(s.plus.size() == static_cast<std::size_t>(count) && s.minus.size() == static_cast<std::size_t>(count),
            "eb_via_eth: coefficient array size mismatch");
    f.e.assign(static_cast<std::size_t>(count), cplx{});
    f.b.assign(static_cast<std::size_t>(count), cplx{});
    for (int l = 2; l <= s.ell_max; ++l) {
        const double lower = eth_on_basis(2, l, EthDirection::lower).value * eth_on_basis(1, l, EthDirection::lower).value;
        const double raise = eth_on_basis(-2, l, EthDirection::raise).value * eth_on_basis(-1, l, EthDirection::raise).value;
        for (int m = -l; m <= l; ++m) {
            const int j = lm_index(l, m);
            const cplx a = lower * s.plus[j];
            const cplx b = raise * s.minus[j];
            f.e[j] = 0.5 * (a + b);
            f.b[j] = -0.5 * I * (a - b);
        }
    }
    return f;
}

namespace {

Eigen::Matrix4d mode_product(const AlmSet& alm, int l, int m) {
    Eigen::Matrix4d M;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) M(a, b) = (alm(a, l, m) * std::conj(alm(b, l, m))).real();
    return M;
}

Eigen::Matrix4d cell_of(const AlmSet& alm, int l) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (int m = -l; m <= l; ++m) M += mode_product(alm, l, m);
    return M / (2.0 * l + 1.0);
}

}  // namespace

CellEstimate estimate_cell(const std::vector<AlmSet>& ensemble) {
    require(!ensemble.empty(), "estimate_cell: empty ensemble");
    const int L = ensemble.front().ell_max;
    for (const auto& a : ensemble) require(a.ell_max == L, "estimate_cell: ell_max mismatch within ensemble");
    const double n = static_cast<double>(ensemble.size());
    CellEstimate e;
    e.ell_max = L;
    e.mean.assign(static_cast<std::size_t>(L) + 1, Eigen::Matrix4d::Zero());
    e.std_error.assign(static_cast<std::size_t>(L) + 1, Eigen::Matrix4d::Zero());
    for (int l = 0; l <= L; ++l) {
        std::vector<Eigen::Matrix4d> per;
        per.reserve(ensemble.size());
        for (const auto& a : ensemble) per.push_back(cell_of(a, l));
        Eigen::Matrix4d mean = Eigen::Matrix4d::Zero();
        for (const auto& p : per) mean += p;
        mean /= n;
        Eigen::Matrix4d var = Eigen::Matrix4d::Zero();
        for (const auto& p : per) var += (p - mean).cwiseAbs2();
        e.mean[l] = mean;
        if (ensemble.size() < 2)
            e.std_error[l].setConstant(std::numeric_limits<double>::quiet_NaN());
        else
            e.std_error[l] = (var / (n - 1.0) / n).cwiseSqrt();
    }
    return e;
}

CellEstimate estimate_cell(const AlmSet& alm) {
    const int L = alm.ell_max;
    CellEstimate e;
    e.ell_max = L;
    e.mean.resize(static_cast<std::size_t>(L) + 1);
    e.std_error.resize(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l) {
        e.mean[l] = cell_of(alm, l);
        if (l == 0) {
            e.std_error[l].setConstant(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        // Modes m >= 0 with weights 1 (m = 0) and 2 (m > 0); z_m estimates C_l.
        Eigen::Matrix4d var = Eigen::Matrix4d::Zero();
        double sw2 = 1.0, sw = 1.0;
        var += (mode_product(alm, l, 0) - e.mean[l]).cwiseAbs2();
        for (int m = 1; m <= l; ++m) {
            const Eigen::Matrix4d z = 0.5 * (mode_product(alm, l, m) + mode_product(alm, l, -m));
            var += (z - e.mean[l]).cwiseAbs2();
            sw += 2.0;
            sw2 += 4.0;
        }
        var /= static_cast<double>(l);
        e.std_error[l] = (var * sw2 / (sw * sw)).cwiseSqrt();
    }
    return e;
}

AlmSet parity_transform(const AlmSet& alm) {
    AlmSet out = alm;
    for (int l = 0; l <= alm.ell_max; ++l) {
        const double s = sign_pow(l);
        for (int m = -l; m <= l; ++m) {
            out(kTheta, l, m) *= s;
            out(kE, l, m) *= s;
            out(kV, l, m) *= s;
            out(kB, l, m) *= -s;
        }
    }
    return out;
}

namespace {

// b = conj(U) a for one ell.
void to_real_block(const std::vector<std::vector<cplx>>& U, const std::vector<cplx>& a, int l, std::vector<cplx>& b) {
    b.assign(static_cast<std::size_t>(2 * l + 1), cplx{});
    for (int m = -l; m <= l; ++m)
        for (int mu = -l; mu <= l; ++mu) b[m + l] += std::conj(U[m + l][mu + l]) * a[lm_index(l, mu)];
}

}  // namespace

RealAlm complex_to_real(const AlmSet& alm) {
    const int L = alm.ell_max;
    const std::size_t n = static_cast<std::size_t>(lm_count(L));
    RealAlm r;
    r.ell_max = L;
    r.theta.assign(n, 0.0);
    r.q2.assign(n, 0.0);
    r.qm2.assign(n, 0.0);
    r.v.assign(n, 0.0);
    const SpinAlm s = spin_from_eb(alm);
    double residue = 0.0, scale = 1.0;
    std::vector<cplx> b;
    for (int l = 0; l <= L; ++l) {
        const auto U = real_basis_change(l);
        for (int c : {kTheta, kV}) {
            to_real_block(U, alm.a[c], l, b);
            auto& dst = (c == kTheta) ? r.theta : r.v;
            for (int m = -l; m <= l; ++m) {
                dst[lm_index(l, m)] = b[m + l].real();
                residue = std::max(residue, std::abs(b[m + l].imag()));
                scale = std::max(scale, std::abs(b[m + l]));
            }
        }
        for (int m = -l; m <= l; ++m) {
            const int j = lm_index(l, m);
            r.q2[j] = 0.5 * s.plus[j].real();
            r.qm2[j] = 0.5 * s.plus[j].imag();
            // Reality: a^(-2)_{l,m} = (-1)^m conj(a^(2)_{l,-m}).
            const cplx expect = sign_pow(m) * std::conj(s.plus[lm_index(l, -m)]);
            residue = std::max(residue, std::abs(s.minus[j] - expect));
            scale = std::max(scale, std::abs(s.minus[j]));
        }
    }
    if (residue > 1e-10 * scale)
        fail_numerical("complex_to_real: coefficients violate the reality condition (residue " + std::to_string(residue) + ")");
    return r;
}

AlmSet real_to_complex(const RealAlm& r) {
    const int L = r.ell_max;
    const std::size_t n = static_cast<std::size_t>(lm_count(L));
    require(r.theta.size() == n && r.q2.size() == n && r.qm2.size() == n && r.v.size() == n,
            "real_to_complex: coefficient array size mismatch");
    AlmSet out(L);
    SpinAlm s;
    s.ell_max = L;
    s.plus.assign(n, cplx{});
    s.minus.assign(n, cplx{});
    for (int l = 0; l <= L; ++l) {
        const auto U = real_basis_change(l);
        for (int mu = -l; mu <= l; ++mu) {
            cplx t{}, v{};
            for (int m = -l; m <= l; ++m) {
                t += U[m + l][mu + l] * r.theta[lm_index(l, m)];
                v += U[m + l][mu + l] * r.v[lm_index(l, m)];
            }
            out(kTheta, l, mu) = t;
            out(kV, l, mu) = v;
        }
        for (int m = -l; m <= l; ++m) {
            const int j = lm_index(l, m);
            s.plus[j] = 2.0 * cplx(r.q2[j], r.qm2[j]);
        }
    }
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) s.minus[lm_index(l, m)] = sign_pow(m) * std::conj(s.plus[lm_index(l, -m)]);
    eb_from_spin(s, out);
    return out;
}

RealAlm real_basis_expansion(const StokesMap& map, const QuadratureRule& quad, int ell_max) {
    return complex_to_real(stokes_to_alm(map, quad, ell_max));
}

Eigen::Matrix4d real_basis_covariance(const Eigen::Matrix4d& C, int m) {
    Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
    R(0, 0) = C(kTheta, kTheta);
    R(3, 3) = C(kV, kV);
    R(0, 3) = R(3, 0) = C(kTheta, kV);
    if (m == 0) {
        R(1, 1) = C(kE, kE) / 4.0;
        R(2, 2) = C(kB, kB) / 4.0;
        R(1, 2) = R(2, 1) = C(kE, kB) / 4.0;
        R(0, 1) = R(1, 0) = C(kTheta, kE) / 2.0;
        R(0, 2) = R(2, 0) = C(kTheta, kB) / 2.0;
        R(3, 1) = R(1, 3) = C(kV, kE) / 2.0;
        R(3, 2) = R(2, 3) = C(kV, kB) / 2.0;
        return R;
    }
    const double k = 1.0 / (2.0 * std::sqrt(2.0));
    R(1, 1) = R(2, 2) = (C(kE, kE) + C(kB, kB)) / 8.0;
    if (m > 0) {
        R(0, 1) = R(1, 0) = k * C(kTheta, kE);
        R(0, 2) = R(2, 0) = k * C(kTheta, kB);
        R(3, 1) = R(1, 3) = k * C(kV, kE);
        R(3, 2) = R(2, 3) = k * C(kV, kB);
    } else {
        R(0, 1) = R(1, 0) = k * C(kTheta, kB);
        R(0, 2) = R(2, 0) = -k * C(kTheta, kE);
        R(3, 1) = R(1, 3) = k * C(kV, kB);
        R(3, 2) = R(2, 3) = -k * C(kV, kE);
    }
    return R;
}

}  // namespace isofield
