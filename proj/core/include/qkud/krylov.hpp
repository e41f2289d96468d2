#pragma once

#include <optional>
#include <vector>

#include "qkud/geneig.hpp"
#include "qkud/pauli.hpp"
#include "qkud/spectral.hpp"

namespace qkud {

enum class Method { Qkud, Qrte };

enum class StopReason { ConvergedByDelta, MaxIterReached, SubspaceExhausted };

struct KrylovConfig {
    Method method = Method::Qkud;
    double epsilon = 0.1;  // QKUD error parameter
    double delta_t = 0.1;  // QRTE time step
    int max_iter = 50;
    double stop_delta = 1e-9;
    double gevp_threshold = 1e-12;
    bool normalize_vectors = true;
};

struct KrylovSubspace {
    std::vector<Statevector> vectors;
    std::vector<double> scales; // norm factors pulled out when normalizing
    Matrix m_mat; // <Psi_i| H |Psi_j>
    Matrix s_mat; // <Psi_i | Psi_j>
};

struct IterationRow {
    int iter = 0;
    double e_min = 0.0;
    double e_exact_gap = 0.0; // e_min minus exact ground energy
    double cond_s = 1.0;
    int kept_dim = 0;
};

struct ConvergenceRecord {
    std::vector<IterationRow> rows;
    StopReason status = StopReason::MaxIterReached;
};

struct RunResult {
    ConvergenceRecord record;
    KrylovSubspace subspace;
};

/// One QKUD recursion step: (1/2eps)(X + X^dagger)|prev> with
/// X = i e^{-i eps H}, equal to (sin(eps H)/eps)|prev>.
Statevector qkud_step(const Statevector& prev, double epsilon, const SpectralCache& cache);

/// One QRTE step: e^{-i dt H}|prev>.
Statevector qrte_step(const Statevector& prev, double delta_t, const SpectralCache& cache);

/// M[i][j] = <Psi_i|H|Psi_j>, S[i][j] = <Psi_i|Psi_j>, both Hermitized by
/// averaging with their conjugate transposes.
std::pair<Matrix, Matrix> assemble_matrices(const std::vector<Statevector>& vectors,
                                            const PauliSum& h);

/// Iterative subspace loop: step, (optionally) normalize, extend M and S,
/// solve the regularized GEVP, record one row per iteration. Stops on
/// |E_n - E_{n-1}| < stop_delta, max_iter, or the retained dimension
/// stagnating for 3 consecutive iterations.
RunResult run(const KrylovConfig& config, const PauliSum& h, const Statevector& psi0);

/// General (non-Hermitian) unitary decomposition: splits A into Hermitian
/// and anti-Hermitian parts and applies the four-unitary combination
/// (1/2eps)(X + X^dagger + Y1 - Y2); the result is Av + O(eps^2).
Statevector general_unitary_decomposition_apply(const Matrix& a, double epsilon,
                                                const Statevector& v);

} // namespace qkud
