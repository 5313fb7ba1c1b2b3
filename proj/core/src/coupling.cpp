#include "isofield/coupling.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <numbers>
#include <shared_mutex>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"

namespace isofield {

namespace {

namespace mp = boost::multiprecision;

const std::vector<mp::cpp_int>& factorials() {
    static const std::vector<mp::cpp_int> table = [] {
        std::vector<mp::cpp_int> f(400);
        f[0] = 1;
        for (std::size_t n = 1; n < f.size(); ++n) f[n] = f[n - 1] * static_cast<unsigned>(n);
        return f;
    }();
    return table;
}

const mp::cpp_int& fact(int n) {
    if (n < 0 || n >= static_cast<int>(factorials().size())) fail_validation("clebsch_gordan: degree too large");
    return factorials()[n];
}

double rational_to_double(const mp::cpp_rational& q) {
    using big = mp::cpp_bin_float_100;
    const big v = big(mp::numerator(q)) / big(mp::denominator(q));
    return v.convert_to<double>();
}

double sign_of(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

bool triangle(int l, int l1, int l2) {
    return l >= 0 && l1 >= 0 && l2 >= 0 && std::abs(l1 - l2) <= l && l <= l1 + l2;
}

double clebsch_gordan(int l1, int m1, int l2, int m2, int l, int m) {
    require(l1 >= 0 && l2 >= 0 && l >= 0, "clebsch_gordan: negative degree");
    require(std::abs(m1) <= l1 && std::abs(m2) <= l2 && std::abs(m) <= l, "clebsch_gordan: |m| exceeds degree");
    if (m != m1 + m2 || !triangle(l, l1, l2)) return 0.0;

    mp::cpp_rational sum = 0;
    const int kmin = std::max({0, l2 - l - m1, l1 - l + m2});
    const int kmax = std::min({l1 + l2 - l, l1 - m1, l2 + m2});
    for (int k = kmin; k <= kmax; ++k) {
        const mp::cpp_int den = fact(k) * fact(l1 + l2 - l - k) * fact(l1 - m1 - k) * fact(l2 + m2 - k) *
                                fact(l - l2 + m1 + k) * fact(l - l1 - m2 + k);
        const mp::cpp_rational term(1, den);
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    if (sum == 0) return 0.0;
    const mp::cpp_rational pre =
        mp::cpp_rational(mp::cpp_int(2 * l + 1) * fact(l + l1 - l2) * fact(l - l1 + l2) * fact(l1 + l2 - l),
                         fact(l1 + l2 + l + 1)) *
        mp::cpp_rational(fact(l + m) * fact(l - m) * fact(l1 - m1) * fact(l1 + m1) * fact(l2 - m2) * fact(l2 + m2));
    const mp::cpp_rational sq = sum * sum * pre;
    const double mag = std::sqrt(rational_to_double(sq));
    return sum > 0 ? mag : -mag;
}

std::vector<std::vector<cplx>> real_basis_change(int l) {
    const int n = 2 * l + 1;
    std::vector<std::vector<cplx>> U(n, std::vector<cplx>(n, 0.0));
    const double r = 1.0 / std::numbers::sqrt2;
    const cplx i(0.0, 1.0);
    for (int m = -l; m <= l; ++m) {
        auto& row = U[m + l];
        if (m > 0) {
            row[m + l] += r;
            row[-m + l] += sign_of(m) * r;
        } else if (m == 0) {
            row[l] = 1.0;
        } else {
            row[m + l] += r / i;
            row[-m + l] += -sign_of(m) * r / i;
        }
    }
    return U;
}

GGBlock compute_gg_block(int l, int l1, int l2) {
    GGBlock b;
    b.l = l;
    b.l1 = l1;
    b.l2 = l2;
    const std::size_t n = static_cast<std::size_t>(2 * l + 1) * (2 * l1 + 1) * (2 * l2 + 1);
    b.values.assign(n, 0.0);
    if (!triangle(l, l1, l2)) return b;
    if (l1 < l2) {
        const GGBlock t = compute_gg_block(l, l2, l1);
        const double sgn = ((l1 + l2 - l) % 2 == 0) ? 1.0 : -1.0;
        for (int m = -l; m <= l; ++m)
            for (int m1 = -l1; m1 <= l1; ++m1)
                for (int m2 = -l2; m2 <= l2; ++m2) b.at(m, m1, m2) = sgn * t(m, m2, m1);
        return b;
    }

    std::vector<double> cg(static_cast<std::size_t>(2 * l1 + 1) * (2 * l2 + 1), 0.0);
    for (int mu1 = -l1; mu1 <= l1; ++mu1)
        for (int mu2 = -l2; mu2 <= l2; ++mu2)
            if (std::abs(mu1 + mu2) <= l)
                cg[(mu1 + l1) * (2 * l2 + 1) + (mu2 + l2)] = clebsch_gordan(l1, mu1, l2, mu2, l, mu1 + mu2);

    const auto U = real_basis_change(l);
    const auto U1 = real_basis_change(l1);
    const auto U2 = real_basis_change(l2);
    std::vector<cplx> G(n, 0.0);
    std::size_t idx = 0;
    for (int m = -l; m <= l; ++m) {
        for (int m1 = -l1; m1 <= l1; ++m1) {
            for (int m2 = -l2; m2 <= l2; ++m2, ++idx) {
                cplx s = 0.0;
                const int mus1[2] = {m1, -m1};
                const int mus2[2] = {m2, -m2};
                for (int a = 0; a < (m1 == 0 ? 1 : 2); ++a) {
                    for (int c = 0; c < (m2 == 0 ? 1 : 2); ++c) {
                        const int mu1 = mus1[a], mu2 = mus2[c], mu = mu1 + mu2;
                        if (std::abs(mu) > l) continue;
                        const cplx u = U[m + l][mu + l];
                        if (u == 0.0) continue;
                        s += U1[m1 + l1][mu1 + l1] * U2[m2 + l2][mu2 + l2] * std::conj(u) *
                             cg[(mu1 + l1) * (2 * l2 + 1) + (mu2 + l2)];
                    }
                }
                G[idx] = s;
            }
        }
    }

    std::size_t imax = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(G[k]) > std::abs(G[imax]) * (1.0 + 1e-12)) imax = k;
    const cplx phase = G[imax] / std::abs(G[imax]);
    double max_imag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = G[k] / phase;
        max_imag = std::max(max_imag, std::abs(v.imag()));
        b.values[k] = v.real();
    }
    if (max_imag > 1e-12)
        fail_numerical("godunov_gordienko: imaginary residue " + std::to_string(max_imag) + " in block (" +
                       std::to_string(l) + "," + std::to_string(l1) + "," + std::to_string(l2) + ")");

    double ref = b(0, 0, 0);
    if (std::abs(ref) <= 1e-12) {
        ref = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            if (std::abs(b.values[k]) > 1e-12) {
                ref = b.values[k];
                break;
            }
        }
    }
    for (auto& v : b.values) {
        if (ref < 0.0) v = -v;
        if (std::abs(v) < 1e-15) v = 0.0;
    }
    return b;
}

GGTable::GGTable(int ell_max) : ell_max_(ell_max) {
    require(ell_max >= 0, "GGTable: ell_max must be non-negative");
    for (int l1 = 0; l1 <= ell_max; ++l1)
        for (int l2 = 0; l2 <= ell_max; ++l2)
            for (int l = std::abs(l1 - l2); l <= l1 + l2; ++l) blocks_.emplace(std::make_tuple(l, l1, l2), compute_gg_block(l, l1, l2));
}

const GGBlock* GGTable::block(int l, int l1, int l2) const {
    auto it = blocks_.find({l, l1, l2});
    return it == blocks_.end() ? nullptr : &it->second;
}

double GGTable::operator()(int l, int m, int l1, int m1, int l2, int m2) const {
    const GGBlock* b = block(l, l1, l2);
    if (!b || std::abs(m) > l || std::abs(m1) > l1 || std::abs(m2) > l2) return 0.0;
    return (*b)(m, m1, m2);
}

namespace {
constexpr char kMagic[8] = {'I', 'S', 'O', 'F', 'G', 'G', '0', '1'};
}

void GGTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_validation("GGTable::save: cannot open " + path);
    out.write(kMagic, sizeof kMagic);
    const std::int32_t lm = ell_max_;
    const std::int64_t count = static_cast<std::int64_t>(blocks_.size());
    out.write(reinterpret_cast<const char*>(&lm), sizeof lm);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const auto& [key, b] : blocks_) {
        const std::int32_t h[3] = {b.l, b.l1, b.l2};
        out.write(reinterpret_cast<const char*>(h), sizeof h);
        out.write(reinterpret_cast<const char*>(b.values.data()),
                  static_cast<std::streamsize>(b.values.size() * sizeof(double)));
    }
}

GGTable GGTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_validation("GGTable::load: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || !std::equal(magic, magic + 8, kMagic)) fail_validation("GGTable::load: bad header in " + path);
    std::int32_t lm = 0;
    std::int64_t count = 0;
    in.read(reinterpret_cast<char*>(&lm), sizeof lm);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    GGTable t;
    t.ell_max_ = lm;
    for (std::int64_t c = 0; c < count; ++c) {
        std::int32_t h[3];
        in.read(reinterpret_cast<char*>(h), sizeof h);
        GGBlock b;
        b.l = h[0];
        b.l1 = h[1];
        b.l2 = h[2];
        b.values.resize(static_cast<std::size_t>(2 * b.l + 1) * (2 * b.l1 + 1) * (2 * b.l2 + 1));
        in.read(reinterpret_cast<char*>(b.values.data()), static_cast<std::streamsize>(b.values.size() * sizeof(double)));
        if (!in) fail_validation("GGTable::load: truncated file " + path);
        t.blocks_.emplace(std::make_tuple(b.l, b.l1, b.l2), std::move(b));
    }
    return t;
}

const GGBlock& gg_block(int l, int l1, int l2) {
    static std::shared_mutex mutex;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<GGBlock>> cache;
    const auto key = std::make_tuple(l, l1, l2);
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto blk = std::make_unique<GGBlock>(compute_gg_block(l, l1, l2));
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(blk));
    return *it->second;
}

double godunov_gordienko(int l, int m, int l1, int m1, int l2, int m2) {
    require(std::abs(m) <= l && std::abs(m1) <= l1 && std::abs(m2) <= l2, "godunov_gordienko: |m| exceeds degree");
    if (!triangle(l, l1, l2)) return 0.0;
    return gg_block(l, l1, l2)(m, m1, m2);
}

double gaunt_real(int l1, int m1, int l2, int m2, int l3, int m3) {
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return 0.0;
    if (!triangle(l3, l1, l2)) return 0.0;
    const GGBlock& b = gg_block(l3, l1, l2);
    const double pre = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) / (4.0 * std::numbers::pi * (2.0 * l3 + 1.0)));
    return pre * b(m3, m1, m2) * b(0, 0, 0);
}

const Mat3& m_basis_from_cartesian() {
    static const Mat3 Q = [] {
        Mat3 q;
        const double s = std::sqrt(4.0 * std::numbers::pi / 3.0);
        const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int m = -1; m <= 1; ++m)
            for (int c = 0; c < 3; ++c) q(m + 1, c) = s * real_harmonic(1, m, SphericalPoint::from_vector(axes[c]));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (std::abs(q(i, j) - std::round(q(i, j))) > 1e-12) fail_numerical("l=1 real basis is not axis-aligned");
                q(i, j) = std::round(q(i, j));
            }
        if ((q * q.transpose() - Mat3::Identity()).norm() > 1e-12) fail_numerical("l=1 real basis is not orthogonal");
        return q;
    }();
    return Q;
}

}  // namespace isofield
