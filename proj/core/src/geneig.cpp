#include "qkud/geneig.hpp"

#include <cmath>

namespace qkud {

RegularizedSolution solve_gevp(const Matrix& m, const Matrix& s, double threshold) {
    if (m.rows() != m.cols() || s.rows() != s.cols() || m.rows() != s.rows())
        throw InvalidArgument("M and S must be square with equal dimension");
    if (threshold <= 0.0)
        throw InvalidArgument("threshold must be positive");

    Eigen::SelfAdjointEigenSolver<Matrix> s_solver(((s + s.adjoint()) / 2.0).eval());
    if (s_solver.info() != Eigen::Success)
        throw ConvergenceFailure("overlap eigensolver did not converge");
    Eigen::VectorXd sigma = s_solver.eigenvalues();
    const Matrix& v = s_solver.eigenvectors();

    if (sigma.size() > 0 && sigma[0] < -1e-12)
        throw NotPSD("overlap eigenvalue " + std::to_string(sigma[0]));
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        sigma[k] = std::max(sigma[k], 0.0);

    const double sigma_max = sigma.size() ? sigma[sigma.size() - 1] : 0.0;
    const double cutoff = threshold * sigma_max;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma[k] > 0.0 && sigma[k] >= cutoff)
            kept.push_back(k);
    if (kept.empty())
        throw EmptyRetainedSubspace("every overlap eigenvalue fell below threshold");

    const auto kd = static_cast<Eigen::Index>(kept.size());
    Matrix w(s.rows(), kd);
    double sigma_min_kept = sigma[kept.front()];
    for (Eigen::Index j = 0; j < kd; ++j)
        w.col(j) = v.col(kept[static_cast<std::size_t>(j)]) /
                   std::sqrt(sigma[kept[static_cast<std::size_t>(j)]]);

    const Matrix a = w.adjoint() * m * w;
    Eigen::SelfAdjointEigenSolver<Matrix> a_solver(((a + a.adjoint()) / 2.0).eval());
    if (a_solver.info() != Eigen::Success)
        throw ConvergenceFailure("projected eigensolver did not converge");

    RegularizedSolution out;
    out.eigvals = a_solver.eigenvalues();
    out.eigvecs = w * a_solver.eigenvectors();
    out.kept_dim = static_cast<int>(kd);
    out.discarded = static_cast<int>(s.rows() - kd);
    out.cond_s = sigma_max / sigma_min_kept;
    return out;
}

} // namespace qkud
