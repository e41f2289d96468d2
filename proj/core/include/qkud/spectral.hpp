#pragma once

#include <cstdint>
#include <functional>

#include "qkud/pauli.hpp"

namespace qkud {

/// Full eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvectors as unitary columns. Immutable once built; every unitary
/// e^{-i theta H} and matrix function f(H) is applied exactly through it.
struct SpectralCache {
    Eigen::VectorXd eigvals;
    Matrix eigvecs;

    Eigen::Index dim() const { return eigvals.size(); }
};

/// Throws NotHermitian if h deviates from its adjoint beyond tolerance,
/// ConvergenceFailure if the eigensolver does not converge.
SpectralCache hermitian_eigendecompose(const Matrix& h);

/// e^{-i theta H} v.
Statevector evolve(const SpectralCache& cache, double theta, const Statevector& v);

/// U diag(f(lambda)) U^dagger v. Throws if f is non-finite at an eigenvalue.
Statevector apply_func(const SpectralCache& cache, const std::function<double(double)>& f,
                       const Statevector& v);

/// <u|v>, conjugate-linear in the first argument.
Complex inner(const Statevector& u, const Statevector& v);

/// Computational basis state |index> on n qubits. Qubit 0 is the most
/// significant bit of the index.
Statevector basis_state(int n_qubits, std::uint64_t index);

/// Uniform superposition |+...+>.
Statevector plus_state(int n_qubits);

} // namespace qkud
