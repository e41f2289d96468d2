#include "qkud/spectral.hpp"

#include <cmath>

namespace qkud {

SpectralCache hermitian_eigendecompose(const Matrix& h) {
    if (h.rows() != h.cols())
        throw InvalidArgument("matrix is not square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw NotHermitian("asymmetry " + std::to_string(asym));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(((h + h.adjoint()) / 2.0).eval());
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("Hermitian eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {
Statevector spectral_apply(const SpectralCache& cache, const Statevector& v,
                           const std::function<Complex(double)>& g) {
    if (v.size() != cache.dim())
        throw DimensionMismatch("statevector dimension " + std::to_string(v.size()) +
                                " != " + std::to_string(cache.dim()));
    Eigen::VectorXcd u = cache.eigvecs.adjoint() * v;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const Complex gk = g(cache.eigvals[k]);
        if (!std::isfinite(gk.real()) || !std::isfinite(gk.imag()))
            throw InvalidArgument("non-finite spectral function at eigenvalue " +
                                  std::to_string(cache.eigvals[k]));
        u[k] *= gk;
    }
    return cache.eigvecs * u;
}
} // namespace

Statevector evolve(const SpectralCache& cache, double theta, const Statevector& v) {
    return spectral_apply(cache, v, [theta](double x) {
        return std::exp(Complex{0.0, -theta * x});
    });
}

Statevector apply_func(const SpectralCache& cache, const std::function<double(double)>& f,
                       const Statevector& v) {
    return spectral_apply(cache, v, [&f](double x) { return Complex{f(x), 0.0}; });
}

Complex inner(const Statevector& u, const Statevector& v) {
    if (u.size() != v.size())
        throw DimensionMismatch("inner product dimensions differ");
    return u.dot(v); // Eigen's dot conjugates the first argument
}

Statevector basis_state(int n_qubits, std::uint64_t index) {
    const auto d = std::uint64_t{1} << n_qubits;
    if (index >= d)
        throw InvalidArgument("basis index out of range");
    Statevector v = Statevector::Zero(static_cast<Eigen::Index>(d));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return v;
}

Statevector plus_state(int n_qubits) {
    const auto d = std::uint64_t{1} << n_qubits;
    return Statevector::Constant(static_cast<Eigen::Index>(d),
                                 Complex{1.0 / std::sqrt(static_cast<double>(d)), 0.0});
}

} // namespace qkud
