#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isofield/correlation.hpp"
#include "isofield/special_fn.hpp"

namespace isofield {

enum class FieldKind { scalar, vector, dyadic };

struct SimulationPlan {
    FieldKind kind = FieldKind::scalar;
    SpectralMeasure spectral;    // scalar fields
    VectorSpectralPair pair;     // vector fields; first factor of a dyadic field
    VectorSpectralPair pair_b;   // second factor of a dyadic field
    double mu = 0.0;             // dyadic mean shear
    double s = 1.0;              // dyadic fluctuation scale
    int ell_max = 16;
    std::vector<Vec3> points;
    int realizations = 1;
    std::uint64_t master_seed = 0;

    void validate() const;
    int components() const;
};

struct FieldRealization {
    SimulationPlan plan;
    int realizations = 0;
    int points = 0;
    int components = 0;
    bool gaussian = true;
    std::vector<double> values;  // (realization, point, component), row-major

    double& at(int r, int p, int c) {
        return values[(static_cast<std::size_t>(r) * points + p) * components + c];
    }
    double at(int r, int p, int c) const {
        return values[(static_cast<std::size_t>(r) * points + p) * components + c];
    }
};

FieldRealization simulate_scalar(const SimulationPlan& plan);
FieldRealization simulate_vector(const SimulationPlan& plan);
FieldRealization simulate_dyadic(const SimulationPlan& plan);
FieldRealization simulate(const SimulationPlan& plan);

// Coefficient index of (i, l, m), i in the m-basis of l = 1 (0, 1, 2 for -1, 0, 1).
inline int vector_coeff_index(int ell_max, int i, int l, int m) { return i * lm_count(ell_max) + l * l + l + m; }

// Unit-mass covariance of the expansion coefficients of the n-th part (n = 1, 2), canonical normalization.
Eigen::MatrixXd vector_coefficient_covariance(int n, int ell_max);
// Covariance of the coefficients for the given atom of Phi_n: mass times the unit-mass matrix.
Eigen::MatrixXd vector_expansion_covariance(const VectorSpectralPair& pair, int ell_max, int n, std::size_t atom);

struct CorrelationEstimate {
    int p = 0;
    int q = 0;
    Eigen::MatrixXd value;   // components x components, E[X_p,a X_q,b] - means
    Eigen::MatrixXd std_error; // jackknife standard errors
};

// Unbiased sample cross-covariances with jackknife standard errors. Sums are taken in sorted order,
// so the result does not depend on the order of realizations.
std::vector<CorrelationEstimate> estimate_correlation(const FieldRealization& real,
                                                      const std::vector<std::pair<int, int>>& pairs);

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Covariance of two samples with jackknife SE.
MomentEstimate sample_covariance(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace isofield
