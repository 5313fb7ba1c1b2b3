#include "isofield/linalg.hpp"

#include <string>
#include <vector>

#include "isofield/error.hpp"

namespace isofield {

double min_eigenvalue(const Eigen::MatrixXd& C) {
    if (C.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& C, double tol) {
    const Eigen::Index n = C.rows();
    if (C.cols() != n) fail_validation("psd_factor: matrix is not square");
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff()))
        fail_numerical("psd_factor: matrix is not symmetric");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (C.row(i).cwiseAbs().maxCoeff() != 0.0) keep.push_back(i);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    if (keep.empty()) return A;
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd S(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) S(a, b) = C(keep[a], keep[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.maxCoeff());
    if (ev.minCoeff() < -tol * scale)
        fail_numerical("covariance is not positive semi-definite: min eigenvalue " + std::to_string(ev.minCoeff()));
    for (Eigen::Index i = 0; i < k; ++i) ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
    const Eigen::MatrixXd F = es.eigenvectors() * ev.asDiagonal();
    for (Eigen::Index a = 0; a < k; ++a) A.row(keep[a]).head(k) = F.row(a);
    return A;
}

}  // namespace isofield
