#include "qkud/krylov.hpp"

#include <cmath>

namespace qkud {

Statevector qkud_step(const Statevector& prev, double epsilon, const SpectralCache& cache) {
    if (epsilon <= 0.0)
        throw InvalidArgument("epsilon must be positive");
    // (i/2eps)(e^{-i eps H} - e^{+i eps H}) = sin(eps H)/eps, applied in the
    // sin form: the explicit difference of the two evolutions cancels
    // catastrophically as eps -> 0
    return apply_func(
        cache, [epsilon](double x) { return std::sin(epsilon * x) / epsilon; }, prev);
}

Statevector qrte_step(const Statevector& prev, double delta_t, const SpectralCache& cache) {
    if (delta_t <= 0.0)
        throw InvalidArgument("delta_t must be positive");
    return evolve(cache, delta_t, prev);
}

std::pair<Matrix, Matrix> assemble_matrices(const std::vector<Statevector>& vectors,
                                            const PauliSum& h) {
    if (vectors.empty())
        throw InvalidArgument("no Krylov vectors");
    const auto k = static_cast<Eigen::Index>(vectors.size());
    std::vector<Statevector> hv;
    hv.reserve(vectors.size());
    for (const auto& v : vectors)
        hv.push_back(h.apply(v));
    Matrix m(k, k), s(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            m(i, j) = inner(vectors[static_cast<std::size_t>(i)],
                            hv[static_cast<std::size_t>(j)]);
            s(i, j) = inner(vectors[static_cast<std::size_t>(i)],
                            vectors[static_cast<std::size_t>(j)]);
        }
    return {((m + m.adjoint()) / 2.0).eval(), ((s + s.adjoint()) / 2.0).eval()};
}

RunResult run(const KrylovConfig& config, const PauliSum& h, const Statevector& psi0) {
    if (config.max_iter < 1)
        throw InvalidArgument("max_iter must be >= 1");
    if (!h.is_hermitian())
        throw NonHermitianHamiltonian("solver requires a Hermitian PauliSum");
    const double norm0 = psi0.norm();
    if (norm0 < 1e-14)
        throw ZeroInitialState("psi0 has zero norm");

    const SpectralCache cache = hermitian_eigendecompose(h.to_dense());
    const double e_exact = cache.eigvals[0];

    RunResult res;
    auto& sub = res.subspace;
    sub.vectors.push_back(psi0 / norm0);
    sub.scales.push_back(norm0);

    // growing M and S; Hv cached per vector
    std::vector<Statevector> hv{h.apply(sub.vectors[0])};
    Matrix m = Matrix::Zero(1, 1), s = Matrix::Zero(1, 1);
    m(0, 0) = inner(sub.vectors[0], hv[0]);
    s(0, 0) = inner(sub.vectors[0], sub.vectors[0]);

    auto solve_and_record = [&](int iter) {
        RegularizedSolution sol;
        try {
            sol = solve_gevp(((m + m.adjoint()) / 2.0).eval(),
                             ((s + s.adjoint()) / 2.0).eval(), config.gevp_threshold);
        } catch (const NotPSD& e) {
            throw GevpFailure(e.what());
        } catch (const EmptyRetainedSubspace& e) {
            throw GevpFailure(e.what());
        }
        IterationRow row;
        row.iter = iter;
        row.e_min = sol.eigvals[0];
        row.e_exact_gap = sol.eigvals[0] - e_exact;
        row.cond_s = sol.cond_s;
        row.kept_dim = sol.kept_dim;
        res.record.rows.push_back(row);
    };

    solve_and_record(0);

    int stagnant = 0;
    res.record.status = StopReason::MaxIterReached;
    for (int n = 1; n <= config.max_iter; ++n) {
        Statevector next = config.method == Method::Qkud
                               ? qkud_step(sub.vectors.back(), config.epsilon, cache)
                               : qrte_step(sub.vectors.back(), config.delta_t, cache);
        double scale = 1.0;
        if (config.normalize_vectors) {
            scale = next.norm();
            if (scale < 1e-300)
                throw GevpFailure("Krylov vector collapsed to zero");
            next /= scale;
        }
        sub.vectors.push_back(next);
        sub.scales.push_back(scale);
        hv.push_back(h.apply(next));

        const auto k = static_cast<Eigen::Index>(sub.vectors.size());
        m.conservativeResize(k, k);
        s.conservativeResize(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            m(i, k - 1) = inner(sub.vectors[static_cast<std::size_t>(i)], hv.back());
            m(k - 1, i) = std::conj(m(i, k - 1));
            s(i, k - 1) = inner(sub.vectors[static_cast<std::size_t>(i)], next);
            s(k - 1, i) = std::conj(s(i, k - 1));
        }
        m(k - 1, k - 1) = Complex{m(k - 1, k - 1).real(), 0.0};
        s(k - 1, k - 1) = Complex{s(k - 1, k - 1).real(), 0.0};

        solve_and_record(n);

        const auto& rows = res.record.rows;
        const auto& cur = rows[rows.size() - 1];
        const auto& prev = rows[rows.size() - 2];
        if (std::abs(cur.e_min - prev.e_min) < config.stop_delta) {
            res.record.status = StopReason::ConvergedByDelta;
            break;
        }
        stagnant = cur.kept_dim <= prev.kept_dim ? stagnant + 1 : 0;
        if (stagnant >= 3) {
            res.record.status = StopReason::SubspaceExhausted;
            break;
        }
    }

    sub.m_mat = ((m + m.adjoint()) / 2.0).eval();
    sub.s_mat = ((s + s.adjoint()) / 2.0).eval();
    return res;
}

Statevector general_unitary_decomposition_apply(const Matrix& a, double epsilon,
                                                const Statevector& v) {
    if (a.rows() != a.cols())
        throw InvalidArgument("matrix must be square");
    if (epsilon <= 0.0)
        throw InvalidArgument("epsilon must be positive");
    if (a.rows() != v.size())
        throw DimensionMismatch("matrix/vector dimensions differ");
    // A = S + P with S Hermitian and P anti-Hermitian; P = iK, K Hermitian.
    const Matrix s_part = ((a + a.adjoint()) / 2.0).eval();
    const Matrix k_part = ((a - a.adjoint()) / (2.0 * Complex{0.0, 1.0})).eval();
    const SpectralCache s_cache = hermitian_eigendecompose(s_part);
    const SpectralCache k_cache = hermitian_eigendecompose(k_part);
    // (1/2eps)(X + X^dagger)v = sin(eps S)/eps v
    Statevector out = qkud_step(v, epsilon, s_cache);
    // (1/2eps)(Y1 - Y2)v = (1/2eps)(e^{i eps K} - e^{-i eps K})v = i sin(eps K)/eps v
    out += Complex{0.0, 1.0} *
           apply_func(
               k_cache, [epsilon](double x) { return std::sin(epsilon * x) / epsilon; }, v);
    return out;
}

} // namespace qkud
