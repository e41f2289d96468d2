#pragma once

#include "qkud/pauli.hpp"

namespace qkud {

/// Solution of the regularized generalized eigenvalue problem MC = SCE.
/// Eigenvectors are columns in the original basis; cond_s is the ratio of
/// largest to smallest retained overlap eigenvalue.
struct RegularizedSolution {
    Eigen::VectorXd eigvals;
    Matrix eigvecs;
    int kept_dim = 0;
    int discarded = 0;
    double cond_s = 1.0;
};

/// Canonical orthogonalization: eigendecompose S, drop directions with
/// sigma < threshold * sigma_max, whiten, solve the standard Hermitian
/// problem W^dagger M W, map eigenvectors back through W.
///
/// S eigenvalues below -1e-12 raise NotPSD; small negatives in
/// [-1e-12, 0) are clipped to zero and discarded.
RegularizedSolution solve_gevp(const Matrix& m, const Matrix& s, double threshold);

} // namespace qkud
