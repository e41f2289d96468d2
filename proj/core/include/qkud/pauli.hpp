#pragma once

#include <complex>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkud/errors.hpp"

namespace qkud {

using Complex = std::complex<double>;
using Statevector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// One weighted Pauli word. The word is a string over {I,X,Y,Z}; the
/// leftmost character acts on qubit 0. Qubit 0 is the most significant
/// bit of the statevector index, so the word lines up with the binary
/// expansion of the basis index read left to right.
struct PauliTerm {
    Complex coeff;
    std::string word;
};

/// Sparse Hermitian-by-convention Hamiltonian as a sum of Pauli words.
/// Canonical form: terms sorted lexicographically by word, duplicate
/// words merged, terms with |coeff| < 1e-15 dropped. Immutable after
/// construction.
class PauliSum {
  public:
    PauliSum(int n_qubits, std::vector<PauliTerm> terms);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return std::size_t{1} << n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    bool is_hermitian(double tol = 1e-14) const;

    /// H|v> term by term, without materializing a dense matrix.
    Statevector apply(const Statevector& v) const;

    /// Dense 2^n x 2^n image, symmetrized. Throws DimensionTooLarge above
    /// dense_limit qubits and NotHermitian if the asymmetry before
    /// symmetrization exceeds 1e-12.
    Matrix to_dense(int dense_limit = 12) const;

    /// Deterministic text form (one term per line, sorted by word).
    std::string serialize() const;

  private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// Parses the Pauli text format: one `<real> <imag> <word>` per line,
/// `#` starts a comment, blank lines ignored. n_qubits is inferred from
/// the word length.
PauliSum parse_pauli_file(std::istream& in);
PauliSum parse_pauli_string(const std::string& text);

} // namespace qkud
