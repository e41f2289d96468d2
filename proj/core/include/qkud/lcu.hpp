#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qkud/krylov.hpp"
#include "qkud/pauli.hpp"
#include "qkud/spectral.hpp"

namespace qkud {

/// One term of the binomial expansion of (X + X^dagger)^n: the frequency
/// multiplies eps*H in e^{-i m eps H}; the coefficient carries the binomial
/// factor and the i^m phase. The 1/(2 eps)^n prefactor is tracked separately
/// on the owning expansion.
struct FrequencyCoefficient {
    int freq = 0;
    Complex coeff;
};

struct BinomialExpansion {
    int order = 0; // prefactor is 1/(2 eps)^order
    std::vector<FrequencyCoefficient> terms;
};

/// Terms of (X + X^dagger)^n with X = i e^{-i eps H}:
/// sum_k C(n,k) i^{n-2k} e^{-i(n-2k) eps H}. Orders above 30 are rejected
/// (binomial overflow guard).
BinomialExpansion binomial_phase_coeffs(int order);

enum class Observable { Hamiltonian, Identity };

/// Identifies the primitive expectation value
/// <psi0| e^{+i m eps H} O e^{+i n eps H} |psi0>.
struct PrimitiveKey {
    int m = 0;
    int n = 0;
    Observable obs = Observable::Identity;

    bool operator<(const PrimitiveKey& o) const {
        return std::tie(obs, m, n) < std::tie(o.obs, o.m, o.n);
    }
    bool operator==(const PrimitiveKey& o) const {
        return obs == o.obs && m == o.m && n == o.n;
    }
};

/// Quad-precision complex value (GCC extension type). Primitives are kept in
/// quad because the recombination's alternating sums amplify storage roundoff
/// by up to ~1e15 within the supported (order, eps) range; double-stored
/// primitives could not meet the 1e-9 direct-path equivalence.
struct QuadComplex {
    __float128 re = 0;
    __float128 im = 0;

    bool operator==(const QuadComplex& o) const { return re == o.re && im == o.im; }
    bool operator!=(const QuadComplex& o) const { return !(*this == o); }
};

/// Measured primitives keyed on canonical (m, n, obs); only one of each
/// conjugate pair G(m,n) = conj(G(-m,-n)) is stored.
struct PrimitiveTable {
    double epsilon = 0.0;
    double noise_sigma = 0.0; // 0 = exact
    /// Relative precision of the stored entries: quad for natively measured
    /// tables, double for tables deserialized from JSON (re/im are doubles).
    double entry_eps = 1.93e-34;
    std::map<PrimitiveKey, QuadComplex> entries;

    static PrimitiveKey canonical(const PrimitiveKey& key, bool& conjugate);

    /// Throws MissingPrimitive when the canonical key is absent.
    Complex lookup(int m, int n, Observable obs) const;
    QuadComplex lookup_quad(int m, int n, Observable obs) const;

    nlohmann::json to_json() const;
    static PrimitiveTable from_json(const nlohmann::json& j);
};

/// Exact statevector evaluation of one primitive (double view of the quad
/// measurement). cache must be the eigendecomposition of h.
Complex measure_primitive(const PrimitiveKey& key, double epsilon,
                          const SpectralCache& cache, const Statevector& psi0,
                          const PauliSum& h);

/// Populates all canonical primitives with |m|, |n| <= max_order for both
/// observables.
PrimitiveTable build_primitive_table(int max_order, double epsilon,
                                     const SpectralCache& cache, const Statevector& psi0,
                                     const PauliSum& h);

/// Classical recombination of primitives into M and S for the subspace
/// {Psi_0 ... Psi_max_order}. Accumulates in quad precision with the
/// 1/(2 eps)^{j+k} prefactor applied once per element; throws PrecisionLoss
/// when the worst-case cancellation estimate times the table's entry
/// precision exceeds loss_tolerance (i.e. the result may carry a relative
/// error beyond the tolerance).
std::pair<Matrix, Matrix> assemble_matrices_lcu(int max_order, double epsilon,
                                                const PrimitiveTable& table,
                                                double loss_tolerance = 1e-9);

/// Gaussian perturbation of each stored primitive (real and imaginary
/// parts independently), deterministic for a fixed seed; the table stays
/// closed under conjugation because only canonical keys are stored.
PrimitiveTable inject_shot_noise(const PrimitiveTable& table, double sigma,
                                 std::uint64_t seed);

/// Iterative solve loop routed through the primitive table instead of
/// explicit Krylov vectors; mirrors krylov::run. max_iter is capped at 30
/// by the binomial guard. noise_sigma > 0 perturbs the table once, up
/// front, before any recombination.
RunResult run_lcu(const KrylovConfig& config, const PauliSum& h, const Statevector& psi0,
                  double noise_sigma = 0.0, std::uint64_t seed = 0);

} // namespace qkud
