#include "qkud/lcu.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>
#include <quadmath.h>

namespace qkud {

namespace {

constexpr double kDoubleEps = 2.23e-16;

QuadComplex quad_conj(const QuadComplex& v) {
    return {v.re, -v.im};
}

// <psi0| e^{+i m eps H} O e^{+i n eps H} |psi0>; both observables commute
// with H, so the primitive reduces to the spectral sum
//   sum_i w_i o_i e^{i (m+n) eps lambda_i},  w_i = |<phi_i|psi0>|^2
QuadComplex measure_primitive_quad(const PrimitiveKey& key, double epsilon,
                                   const SpectralCache& cache, const Statevector& psi0) {
    if (epsilon <= 0.0)
        throw InvalidArgument("epsilon must be positive");
    const Statevector proj = cache.eigvecs.adjoint() * psi0;
    const __float128 eps_q = epsilon;
    const auto mn = static_cast<__float128>(key.m + key.n);
    QuadComplex acc;
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
        __float128 w = static_cast<__float128>(proj[i].real()) * proj[i].real() +
                       static_cast<__float128>(proj[i].imag()) * proj[i].imag();
        if (key.obs == Observable::Hamiltonian)
            w *= static_cast<__float128>(cache.eigvals[i]);
        const __float128 theta = mn * eps_q * static_cast<__float128>(cache.eigvals[i]);
        acc.re += w * cosq(theta);
        acc.im += w * sinq(theta);
    }
    return acc;
}

Complex i_power(int p) {
    switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

double binomial(int n, int k) {
    // exact in double for n <= 30
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}


} // namespace

BinomialExpansion binomial_phase_coeffs(int order) {
    if (order < 0 || order > 30)
        throw InvalidArgument("order must be in [0, 30]");
    BinomialExpansion out;
    out.order = order;
    for (int k = 0; k <= order; ++k) {
        const int freq = order - 2 * k;
        out.terms.push_back({freq, binomial(order, k) * i_power(freq)});
    }
    return out;
}

PrimitiveKey PrimitiveTable::canonical(const PrimitiveKey& key, bool& conjugate) {
    conjugate = key.m < 0 || (key.m == 0 && key.n < 0);
    return conjugate ? PrimitiveKey{-key.m, -key.n, key.obs} : key;
}

QuadComplex PrimitiveTable::lookup_quad(int m, int n, Observable obs) const {
    bool conjugate = false;
    const PrimitiveKey key = canonical({m, n, obs}, conjugate);
    const auto it = entries.find(key);
    if (it == entries.end())
        throw MissingPrimitive("primitive (" + std::to_string(m) + ", " +
                               std::to_string(n) + ") not in table");
    return conjugate ? quad_conj(it->second) : it->second;
}

Complex PrimitiveTable::lookup(int m, int n, Observable obs) const {
    const QuadComplex v = lookup_quad(m, n, obs);
    return {static_cast<double>(v.re), static_cast<double>(v.im)};
}

nlohmann::json PrimitiveTable::to_json() const {
    nlohmann::json entries_json = nlohmann::json::array();
    for (const auto& [key, value] : entries) {
        entries_json.push_back({{"m", key.m},
                                {"n", key.n},
                                {"obs", key.obs == Observable::Hamiltonian ? "H" : "I"},
                                {"re", static_cast<double>(value.re)},
                                {"im", static_cast<double>(value.im)}});
    }
    return {{"epsilon", epsilon}, {"noise_sigma", noise_sigma}, {"entries", entries_json}};
}

PrimitiveTable PrimitiveTable::from_json(const nlohmann::json& j) {
    PrimitiveTable table;
    table.epsilon = j.at("epsilon").get<double>();
    table.noise_sigma = j.value("noise_sigma", 0.0);
    table.entry_eps = kDoubleEps; // JSON stores doubles
    for (const auto& e : j.at("entries")) {
        const std::string obs = e.at("obs").get<std::string>();
        if (obs != "H" && obs != "I")
            throw InvalidArgument("unknown observable tag '" + obs + "'");
        PrimitiveKey key{e.at("m").get<int>(), e.at("n").get<int>(),
                         obs == "H" ? Observable::Hamiltonian : Observable::Identity};
        bool conjugate = false;
        const PrimitiveKey ck = PrimitiveTable::canonical(key, conjugate);
        QuadComplex value{e.at("re").get<double>(), e.at("im").get<double>()};
        table.entries[ck] = conjugate ? quad_conj(value) : value;
    }
    return table;
}

Complex measure_primitive(const PrimitiveKey& key, double epsilon,
                          const SpectralCache& cache, const Statevector& psi0,
                          const PauliSum& h) {
    (void)h; // the observable acts through the spectral cache of h
    const QuadComplex v = measure_primitive_quad(key, epsilon, cache, psi0);
    return {static_cast<double>(v.re), static_cast<double>(v.im)};
}

PrimitiveTable build_primitive_table(int max_order, double epsilon,
                                     const SpectralCache& cache, const Statevector& psi0,
                                     const PauliSum& h) {
    (void)h;
    PrimitiveTable table;
    table.epsilon = epsilon;
    for (Observable obs : {Observable::Identity, Observable::Hamiltonian})
        for (int m = -max_order; m <= max_order; ++m)
            for (int n = -max_order; n <= max_order; ++n) {
                bool conjugate = false;
                const PrimitiveKey key = PrimitiveTable::canonical({m, n, obs}, conjugate);
                if (table.entries.count(key))
                    continue;
                table.entries[key] = measure_primitive_quad(key, epsilon, cache, psi0);
            }
    return table;
}

std::pair<Matrix, Matrix> assemble_matrices_lcu(int max_order, double epsilon,
                                                const PrimitiveTable& table,
                                                double loss_tolerance) {
    if (max_order < 0)
        throw InvalidArgument("max_order must be >= 0");
    if (epsilon <= 0.0)
        throw InvalidArgument("epsilon must be positive");
    const auto dim = static_cast<Eigen::Index>(max_order + 1);

    std::vector<BinomialExpansion> expansions;
    for (int j = 0; j <= max_order; ++j)
        expansions.push_back(binomial_phase_coeffs(j));

    Matrix m(dim, dim), s(dim, dim);
    double max_abs_sum = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index k = 0; k < dim; ++k) {
            // prefactor 1/(2 eps)^{j+k}, applied once per element
            __float128 pref = 1;
            for (Eigen::Index p = 0; p < j + k; ++p)
                pref /= 2 * static_cast<__float128>(epsilon);
            for (Observable obs : {Observable::Hamiltonian, Observable::Identity}) {
                // quad-precision accumulation: the alternating binomial sum can
                // cancel by ~1e15 at eps=0.05, order 6, and the contract is 1e-9
                __float128 acc_re = 0, acc_im = 0;
                long double abs_acc = 0.0L;
                for (const auto& left : expansions[static_cast<std::size_t>(j)].terms)
                    for (const auto& right : expansions[static_cast<std::size_t>(k)].terms) {
                        const Complex c = std::conj(left.coeff) * right.coeff;
                        const QuadComplex g = table.lookup_quad(left.freq, -right.freq, obs);
                        const __float128 cr = c.real(), ci = c.imag();
                        acc_re += cr * g.re - ci * g.im;
                        acc_im += cr * g.im + ci * g.re;
                        abs_acc += std::abs(c) *
                                   std::hypot(static_cast<double>(g.re),
                                              static_cast<double>(g.im));
                    }
                acc_re *= pref;
                acc_im *= pref;
                abs_acc *= static_cast<long double>(pref);
                max_abs_sum = std::max(max_abs_sum, static_cast<double>(abs_acc));
                auto& target = obs == Observable::Hamiltonian ? m : s;
                target(j, k) = Complex(static_cast<double>(acc_re),
                                       static_cast<double>(acc_im));
            }
        }

    const double scale = std::max(m.cwiseAbs().maxCoeff(), s.cwiseAbs().maxCoeff());
    if (scale > 0.0 && (max_abs_sum / scale) * table.entry_eps > loss_tolerance)
        throw PrecisionLoss("recombination condition estimate " +
                            std::to_string(max_abs_sum / scale) +
                            " at entry precision " + std::to_string(table.entry_eps) +
                            " exceeds loss tolerance " + std::to_string(loss_tolerance));

    return {((m + m.adjoint()) / 2.0).eval(), ((s + s.adjoint()) / 2.0).eval()};
}

PrimitiveTable inject_shot_noise(const PrimitiveTable& table, double sigma,
                                 std::uint64_t seed) {
    if (sigma < 0.0)
        throw InvalidArgument("sigma must be non-negative");
    PrimitiveTable out = table;
    out.noise_sigma = sigma;
    if (sigma == 0.0)
        return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    // std::map iteration order is deterministic, so the draw sequence is too
    for (auto& [key, value] : out.entries) {
        value.re += gauss(rng);
        value.im += gauss(rng);
    }
    return out;
}

RunResult run_lcu(const KrylovConfig& config, const PauliSum& h, const Statevector& psi0,
                  double noise_sigma, std::uint64_t seed) {
    if (config.max_iter < 1 || config.max_iter > 30)
        throw InvalidArgument("lcu path supports max_iter in [1, 30]");
    if (config.method != Method::Qkud)
        throw InvalidArgument("lcu path applies to the QKUD method only");
    if (!h.is_hermitian())
        throw NonHermitianHamiltonian("solver requires a Hermitian PauliSum");
    const double norm0 = psi0.norm();
    if (norm0 < 1e-14)
        throw ZeroInitialState("psi0 has zero norm");

    const SpectralCache cache = hermitian_eigendecompose(h.to_dense());
    const double e_exact = cache.eigvals[0];

    PrimitiveTable table =
        build_primitive_table(config.max_iter, config.epsilon, cache, psi0 / norm0, h);
    if (noise_sigma > 0.0)
        table = inject_shot_noise(table, noise_sigma, seed);

    RunResult res;
    res.record.status = StopReason::MaxIterReached;
    int stagnant = 0;
    for (int n = 0; n <= config.max_iter; ++n) {
        auto [m, s] = assemble_matrices_lcu(n, config.epsilon, table);
        if (config.normalize_vectors) {
            // rescale each basis vector to unit norm using the S diagonal
            Eigen::VectorXd d(s.rows());
            for (Eigen::Index i = 0; i < s.rows(); ++i)
                d[i] = 1.0 / std::sqrt(std::max(s(i, i).real(), 1e-300));
            m = (d.asDiagonal() * m * d.asDiagonal()).eval();
            s = (d.asDiagonal() * s * d.asDiagonal()).eval();
        }
        if (table.noise_sigma > 0.0) {
            // shot noise can push S slightly indefinite; project onto its PSD part
            // so the strict GEVP contract still applies to what we hand it
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            s = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
        }
        res.subspace.m_mat = m;
        res.subspace.s_mat = s;
        RegularizedSolution sol;
        try {
            sol = solve_gevp(m, s, config.gevp_threshold);
        } catch (const NotPSD& e) {
            throw GevpFailure(e.what());
        } catch (const EmptyRetainedSubspace& e) {
            throw GevpFailure(e.what());
        }
        IterationRow row;
        row.iter = n;
        row.e_min = sol.eigvals[0];
        row.e_exact_gap = sol.eigvals[0] - e_exact;
        row.cond_s = sol.cond_s;
        row.kept_dim = sol.kept_dim;
        res.record.rows.push_back(row);
        if (n == config.max_iter)
            break;
        if (n >= 1) {
            const auto& rows = res.record.rows;
            if (std::abs(rows[rows.size() - 1].e_min - rows[rows.size() - 2].e_min) <
                config.stop_delta) {
                res.record.status = StopReason::ConvergedByDelta;
                break;
            }
            stagnant = rows[rows.size() - 1].kept_dim <= rows[rows.size() - 2].kept_dim
                           ? stagnant + 1
                           : 0;
            if (stagnant >= 3) {
                res.record.status = StopReason::SubspaceExhausted;
                break;
            }
        }
    }
    return res;
}

} // namespace qkud
