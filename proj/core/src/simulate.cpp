#include "isofield/simulate.hpp"

#include <cmath>
#include <numbers>

#include "isofield/coupling.hpp"
#include "isofield/error.hpp"
#include "isofield/linalg.hpp"
#include "isofield/parallel.hpp"
#include "isofield/rng.hpp"
#include "isofield/special_fn.hpp"

namespace isofield {

namespace {

constexpr double pi = std::numbers::pi;

struct AtomBasis {
    Eigen::MatrixXd G;  // rows (point, component), columns coefficient draws
};

SphericalPoint direction(const Vec3& x) { return SphericalPoint::from_vector(x); }

// Rows (p, c): sqrt(4 pi) Y^m_l(x^_p) j_l(lambda |x_p|) sqrt(mass).
Eigen::MatrixXd scalar_basis(const std::vector<Vec3>& pts, int L, const Atom& a) {
    Eigen::MatrixXd B(static_cast<Eigen::Index>(pts.size()), lm_count(L));
    const double pre = std::sqrt(4.0 * pi * a.mass);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const auto Y = real_harmonics_all(L, direction(pts[p]));
        const auto j = spherical_bessel_all(L, a.lambda * norm(pts[p]));
        for (int l = 0; l <= L; ++l)
            for (int m = -l; m <= l; ++m)
                B(static_cast<Eigen::Index>(p), lm_index(l, m)) = pre * Y[lm_index(l, m)] * j[l];
    }
    return B;
}

// Rows (p, cartesian c), columns (i, l, m) with i in the m-basis.
Eigen::MatrixXd vector_basis(const std::vector<Vec3>& pts, int L, double lambda) {
    const int D = 3 * lm_count(L);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3 * static_cast<Eigen::Index>(pts.size()), D);
    const Mat3& Q = m_basis_from_cartesian();
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const auto Y = real_harmonics_all(L, direction(pts[p]));
        const auto j = spherical_bessel_all(L, lambda * norm(pts[p]));
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 3; ++i) {
                if (Q(i, c) == 0.0) continue;
                for (int l = 0; l <= L; ++l)
                    for (int m = -l; m <= l; ++m)
                        B(3 * static_cast<Eigen::Index>(p) + c, vector_coeff_index(L, i, l, m)) =
                            Q(i, c) * Y[lm_index(l, m)] * j[l];
            }
    }
    return B;
}

std::vector<AtomBasis> vector_atom_bases(const VectorSpectralPair& pair, const std::vector<Vec3>& pts, int L) {
    const VectorSpectralPair c = pair.to_canonical();
    std::vector<AtomBasis> out;
    for (int n = 1; n <= 2; ++n) {
        const SpectralMeasure& phi = (n == 1) ? c.phi1 : c.phi2;
        if (phi.empty()) continue;
        const Eigen::MatrixXd A = psd_factor(vector_coefficient_covariance(n, L));
        for (const auto& a : phi.atoms()) out.push_back({std::sqrt(a.mass) * vector_basis(pts, L, a.lambda) * A});
    }
    return out;
}

void draw_into(const std::vector<AtomBasis>& bases, NormalStream& rng, Eigen::VectorXd& out) {
    out.setZero();
    for (const auto& b : bases) {
        Eigen::VectorXd xi(b.G.cols());
        for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = rng.normal();
        out.noalias() += b.G * xi;
    }
}

FieldRealization make_output(const SimulationPlan& plan) {
    FieldRealization out;
    out.plan = plan;
    out.realizations = plan.realizations;
    out.points = static_cast<int>(plan.points.size());
    out.components = plan.components();
    out.values.assign(static_cast<std::size_t>(out.realizations) * out.points * out.components, 0.0);
    return out;
}

}  // namespace

void SimulationPlan::validate() const {
    require(ell_max >= 0, "simulation plan: ell_max must be non-negative");
    require(realizations >= 1, "simulation plan: realizations must be at least 1");
    require(!points.empty(), "simulation plan: points must be non-empty");
    for (const auto& p : points)
        require(std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]), "simulation plan: non-finite point");
    if (kind == FieldKind::vector || kind == FieldKind::dyadic) pair.validate();
    if (kind == FieldKind::dyadic) pair_b.validate();
}

int SimulationPlan::components() const {
    switch (kind) {
        case FieldKind::scalar: return 1;
        case FieldKind::vector: return 3;
        case FieldKind::dyadic: return 4;
    }
    return 0;
}

Eigen::MatrixXd vector_coefficient_covariance(int n, int L) {
    require(n == 1 || n == 2, "vector_coefficient_covariance: n must be 1 or 2");
    require(L >= 0, "vector_coefficient_covariance: ell_max must be non-negative");
    const double cn = (n == 1) ? -1.0 / std::sqrt(6.0) : 2.0 / std::sqrt(6.0);
    const int D = 3 * lm_count(L);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(D, D);
    const GGBlock& g211 = gg_block(2, 1, 1);
    for (int l = 0; l <= L; ++l) {
        for (int lp = 0; lp <= L; ++lp) {
            if ((lp - l) % 2 != 0) continue;
            const bool has0 = (l == lp);
            const bool has2 = triangle(2, l, lp);
            if (!has0 && !has2) continue;
            const double phase = (((lp - l) / 2) % 2 == 0) ? 1.0 : -1.0;
            const double pre = 4.0 * pi * phase * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0));
            const GGBlock* b0 = has0 ? &gg_block(0, l, lp) : nullptr;
            const GGBlock* b2 = has2 ? &gg_block(2, l, lp) : nullptr;
            const double b0_000 = b0 ? (*b0)(0, 0, 0) : 0.0;
            const double b2_000 = b2 ? (*b2)(0, 0, 0) : 0.0;
            for (int m = -l; m <= l; ++m)
                for (int mp = -lp; mp <= lp; ++mp)
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) {
                            double t = 0.0;
                            if (b0 && i == j) t += (*b0)(0, m, mp) * b0_000 / 3.0;
                            if (b2 && b2_000 != 0.0) {
                                double s = 0.0;
                                for (int k = -2; k <= 2; ++k) s += g211(k, i - 1, j - 1) * (*b2)(k, m, mp);
                                t += cn / 5.0 * b2_000 * s;
                            }
                            if (t != 0.0) C(vector_coeff_index(L, i, l, m), vector_coeff_index(L, j, lp, mp)) = pre * t;
                        }
        }
    }
    return C;
}

Eigen::MatrixXd vector_expansion_covariance(const VectorSpectralPair& pair, int ell_max, int n, std::size_t atom) {
    const VectorSpectralPair c = pair.to_canonical();
    const SpectralMeasure& phi = (n == 1) ? c.phi1 : c.phi2;
    require(atom < phi.atoms().size(), "vector_expansion_covariance: atom index out of range");
    Eigen::MatrixXd C = phi.atoms()[atom].mass * vector_coefficient_covariance(n, ell_max);
    const double me = min_eigenvalue(C);
    if (me < -1e-9 * std::max(1.0, C.cwiseAbs().maxCoeff()))
        fail_numerical("vector expansion covariance is not PSD: min eigenvalue " + std::to_string(me));
    return C;
}

FieldRealization simulate_scalar(const SimulationPlan& plan) {
    require(plan.kind == FieldKind::scalar, "simulate_scalar: plan kind must be scalar");
    plan.validate();
    std::vector<AtomBasis> bases;
    for (const auto& a : plan.spectral.atoms()) bases.push_back({scalar_basis(plan.points, plan.ell_max, a)});
    FieldRealization out = make_output(plan);
    const std::size_t P = plan.points.size();
    parallel_for(static_cast<std::size_t>(plan.realizations), [&](std::size_t r) {
        NormalStream rng(substream_seed(plan.master_seed, r), 0);
        Eigen::VectorXd v(static_cast<Eigen::Index>(P));
        draw_into(bases, rng, v);
        for (std::size_t p = 0; p < P; ++p) out.values[r * P + p] = v(static_cast<Eigen::Index>(p));
    });
    return out;
}

FieldRealization simulate_vector(const SimulationPlan& plan) {
    require(plan.kind == FieldKind::vector, "simulate_vector: plan kind must be vector");
    plan.validate();
    const auto bases = vector_atom_bases(plan.pair, plan.points, plan.ell_max);
    FieldRealization out = make_output(plan);
    const std::size_t N = plan.points.size() * 3;
    parallel_for(static_cast<std::size_t>(plan.realizations), [&](std::size_t r) {
        NormalStream rng(substream_seed(plan.master_seed, r), 0);
        Eigen::VectorXd v(static_cast<Eigen::Index>(N));
        draw_into(bases, rng, v);
        for (std::size_t k = 0; k < N; ++k) out.values[r * N + k] = v(static_cast<Eigen::Index>(k));
    });
    return out;
}

FieldRealization simulate_dyadic(const SimulationPlan& plan) {
    require(plan.kind == FieldKind::dyadic, "simulate_dyadic: plan kind must be dyadic");
    plan.validate();
    const auto ba = vector_atom_bases(plan.pair, plan.points, plan.ell_max);
    const auto bb = vector_atom_bases(plan.pair_b, plan.points, plan.ell_max);
    FieldRealization out = make_output(plan);
    const std::size_t P = plan.points.size();
    parallel_for(static_cast<std::size_t>(plan.realizations), [&](std::size_t r) {
        const std::uint64_t seed = substream_seed(plan.master_seed, r);
        NormalStream ra(seed, 0), rb(seed, 1);
        Eigen::VectorXd a(static_cast<Eigen::Index>(3 * P)), b(static_cast<Eigen::Index>(3 * P));
        draw_into(ba, ra, a);
        draw_into(bb, rb, b);
        for (std::size_t p = 0; p < P; ++p)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double v = (i == j ? plan.mu : 0.0) +
                                     plan.s * a(static_cast<Eigen::Index>(3 * p + i)) * b(static_cast<Eigen::Index>(3 * p + j));
                    out.values[(r * P + p) * 4 + 2 * i + j] = v;
                }
    });
    return out;
}

FieldRealization simulate(const SimulationPlan& plan) {
    switch (plan.kind) {
        case FieldKind::scalar: return simulate_scalar(plan);
        case FieldKind::vector: return simulate_vector(plan);
        case FieldKind::dyadic: return simulate_dyadic(plan);
    }
    fail_validation("simulate: unknown field kind");
}

}  // namespace isofield
