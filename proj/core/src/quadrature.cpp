#include <cmath>
#include <numbers>

#include "isofield/error.hpp"
#include "isofield/special_fn.hpp"

namespace isofield {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    require(n >= 1, "gauss_legendre: need at least one node");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

QuadratureRule sphere_quadrature(int n_theta, int n_phi) {
    require(n_theta >= 1 && n_phi >= 1, "sphere_quadrature: node counts must be positive");
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    QuadratureRule q;
    q.n_theta = n_theta;
    q.n_phi = n_phi;
    q.degree = std::min(2 * n_theta - 1, n_phi - 1);
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    // Descending cos(theta): rows run from north to south.
    for (int i = n_theta - 1; i >= 0; --i) {
        const double theta = std::acos(x[i]);
        for (int j = 0; j < n_phi; ++j) {
            q.nodes.push_back({theta, j * dphi});
            q.weights.push_back(w[i] * dphi);
        }
    }
    return q;
}

QuadratureRule sphere_quadrature_for(int ell_max) { return sphere_quadrature(ell_max + 1, 2 * ell_max + 1); }

QuadratureRule sphere_grid(int n_theta) { return sphere_quadrature(n_theta, 2 * n_theta - 1); }

}  // namespace isofield
