#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "fermion_oracle.hpp"
#include "qkud/models.hpp"
#include "qkud/pauli.hpp"
#include "qkud/spectral.hpp"
#include "test_util.hpp"

using namespace qkud;
using namespace qkud::testutil;

namespace {
double ground_energy(const PauliSum& h) {
    return hermitian_eigendecompose(h.to_dense()).eigvals[0];
}
} // namespace

TEST_CASE("parse: single term") {
    const PauliSum h = parse_pauli_string("1.0 0.0 Z");
    CHECK(h.n_qubits() == 1);
    REQUIRE(h.terms().size() == 1);
    CHECK(h.terms()[0].word == "Z");
    CHECK(h.terms()[0].coeff == Complex{1.0, 0.0});
}

TEST_CASE("parse: duplicates merge") {
    const PauliSum h = parse_pauli_string("0.5 0.0 ZZ\n0.5 0.0 ZZ");
    REQUIRE(h.terms().size() == 1);
    CHECK(h.terms()[0].coeff.real() == doctest::Approx(1.0));
}

TEST_CASE("parse: error paths") {
    CHECK_THROWS_AS(parse_pauli_string("1.0 0.0 XY\n2.0 0.0 X"), InconsistentWordLength);
    CHECK_THROWS_AS(parse_pauli_string("# only comments\n\n"), EmptyHamiltonian);
    CHECK_THROWS_AS(parse_pauli_string("1.0 Z"), MalformedLine);
    CHECK_THROWS_AS(parse_pauli_string("abc 0.0 Z"), MalformedLine);
    CHECK_THROWS_AS(parse_pauli_string("1.0 0.0 Q"), MalformedLine);
}

TEST_CASE("parse: comments, blanks, cancellation to zero term dropped") {
    const PauliSum h = parse_pauli_string("# header\n1.0 0.0 ZI # inline\n\n-1.0 0.0 ZI\n0.25 0.0 XX");
    REQUIRE(h.terms().size() == 1);
    CHECK(h.terms()[0].word == "XX");
}

TEST_CASE("serialize round-trips canonical form") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const PauliSum h = random_pauli_sum(4, 12, 1.0, rng);
        const PauliSum back = parse_pauli_string(h.serialize());
        REQUIRE(back.terms().size() == h.terms().size());
        for (std::size_t i = 0; i < h.terms().size(); ++i) {
            CHECK(back.terms()[i].word == h.terms()[i].word);
            CHECK(std::abs(back.terms()[i].coeff - h.terms()[i].coeff) < 1e-16);
        }
    }
}

TEST_CASE("is_hermitian flags imaginary coefficients") {
    CHECK(parse_pauli_string("1.0 0.0 Z").is_hermitian());
    CHECK_FALSE(parse_pauli_string("1.0 0.5 Z").is_hermitian());
}

TEST_CASE("apply on basis states") {
    const PauliSum z = parse_pauli_string("1.0 0.0 Z");
    const PauliSum x = parse_pauli_string("1.0 0.0 X");
    const Statevector zero = basis_state(1, 0);
    CHECK((z.apply(zero) - zero).norm() < 1e-15);
    CHECK((x.apply(zero) - basis_state(1, 1)).norm() < 1e-15);
    // Y|0> = i|1>
    const PauliSum y = parse_pauli_string("1.0 0.0 Y");
    CHECK(std::abs(y.apply(zero)[1] - Complex{0.0, 1.0}) < 1e-15);
}

TEST_CASE("apply leaves the input unmodified") {
    std::mt19937_64 rng(11);
    const PauliSum h = build_tfim(3, 1.0, 1.0);
    const Statevector v = random_state(3, rng);
    const Statevector copy = v;
    (void)h.apply(v);
    CHECK((v - copy).norm() == 0.0);
}

TEST_CASE("apply agrees with dense matvec (property)") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 8; ++n) {
        const PauliSum h = random_pauli_sum(n, 3 * n, 1.0, rng);
        const Matrix dense = h.to_dense();
        const Statevector v = random_state(n, rng);
        const Statevector lhs = h.apply(v);
        const Statevector rhs = dense * v;
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("apply is linear") {
    std::mt19937_64 rng(5);
    const PauliSum h = random_pauli_sum(4, 10, 1.0, rng);
    const Statevector u = random_state(4, rng), v = random_state(4, rng);
    const Complex a{0.3, -0.7}, b{-1.2, 0.4};
    const Statevector lhs = h.apply(a * u + b * v);
    const Statevector rhs = a * h.apply(u) + b * h.apply(v);
    CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("Hermitian expectation values are real") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        const PauliSum h = random_pauli_sum(5, 12, 1.0, rng);
        REQUIRE(h.is_hermitian());
        const Statevector v = random_state(5, rng, false);
        const Complex e = inner(v, h.apply(v));
        CHECK(std::abs(e.imag()) <= 1e-12 * v.squaredNorm());
    }
}

TEST_CASE("to_dense small cases") {
    const Matrix z = parse_pauli_string("1.0 0.0 Z").to_dense();
    CHECK(std::abs(z(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(z(1, 1) + 1.0) < 1e-15);
    CHECK(std::abs(z(0, 1)) < 1e-15);

    const Matrix xx = parse_pauli_string("0.5 0.0 XX").to_dense();
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(xx(3 - i, i) - 0.5) < 1e-15);
    CHECK(std::abs(xx(0, 0)) < 1e-15);
}

TEST_CASE("to_dense rejects oversized systems") {
    CHECK_THROWS_AS(build_tfim(13, 1.0, 1.0).to_dense(), DimensionTooLarge);
    CHECK_NOTHROW(build_tfim(13, 1.0, 1.0).to_dense(13));
}

TEST_CASE("tfim examples") {
    CHECK(ground_energy(build_tfim(2, 0.0, 1.0)) == doctest::Approx(-2.0).epsilon(1e-12));
    // classical Ising pair: ground energy -1, two-fold degenerate
    const auto cache = hermitian_eigendecompose(build_tfim(2, 1.0, 0.0).to_dense());
    CHECK(cache.eigvals[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cache.eigvals[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(build_tfim(1, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("tfim(4,1,1) matches brute-force dense diagonalization") {
    // independent oracle: dense matrix assembled by explicit Kronecker products
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd sx, sz;
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    auto kron4 = [&](int a, const Eigen::Matrix2cd& pa, int b, const Eigen::Matrix2cd& pb) {
        Matrix out = Matrix::Identity(1, 1);
        for (int q = 0; q < 4; ++q) {
            const Eigen::Matrix2cd& f = q == a ? pa : (q == b ? pb : id);
            Matrix next(out.rows() * 2, out.cols() * 2);
            for (Eigen::Index i = 0; i < out.rows(); ++i)
                for (Eigen::Index j = 0; j < out.cols(); ++j)
                    next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
            out = next;
        }
        return out;
    };
    Matrix href = Matrix::Zero(16, 16);
    for (int i = 0; i < 3; ++i)
        href -= kron4(i, sz, i + 1, sz);
    for (int i = 0; i < 4; ++i)
        href -= kron4(i, sx, -1, id);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(href);
    CHECK(ground_energy(build_tfim(4, 1.0, 1.0)) ==
          doctest::Approx(ref.eigenvalues()[0]).epsilon(1e-12));
}

TEST_CASE("hubbard examples") {
    CHECK(ground_energy(build_hubbard_chain(2, 1.0, 0.0)) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(ground_energy(build_hubbard_chain(2, 0.0, 8.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(build_hubbard_chain(1, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("hubbard(3,1,4) spectrum matches fermionic Fock-space oracle, sector by sector") {
    const PauliSum h = build_hubbard_chain(3, 1.0, 4.0);
    const Eigen::MatrixXd fock = hubbard_fock_matrix(3, 1.0, 4.0);

    // full-spectrum comparison
    Eigen::SelfAdjointEigenSolver<Matrix> jw(h.to_dense());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(fock);
    for (Eigen::Index k = 0; k < jw.eigenvalues().size(); ++k)
        CHECK(jw.eigenvalues()[k] == doctest::Approx(ref.eigenvalues()[k]).epsilon(1e-10));

    // sector-resolved comparison on the oracle side vs JW-side sector blocks.
    // JW qubit q maps to orbital q with qubit 0 the most significant index bit,
    // so Fock state f corresponds to qubit index bit-reversed over 6 bits.
    std::map<std::pair<int, int>, std::vector<Eigen::Index>> sectors;
    for (std::uint64_t f = 0; f < 64; ++f)
        sectors[sector_of(f, 3)].push_back(static_cast<Eigen::Index>(f));
    const Matrix jw_dense = h.to_dense();
    auto bitrev6 = [](std::uint64_t f) {
        std::uint64_t r = 0;
        for (int b = 0; b < 6; ++b)
            if (f & (std::uint64_t{1} << b))
                r |= std::uint64_t{1} << (5 - b);
        return r;
    };
    for (const auto& [label, members] : sectors) {
        const auto d = static_cast<Eigen::Index>(members.size());
        Eigen::MatrixXd block_ref(d, d);
        Matrix block_jw(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                block_ref(i, j) = fock(members[static_cast<std::size_t>(i)],
                                       members[static_cast<std::size_t>(j)]);
                block_jw(i, j) = jw_dense(
                    static_cast<Eigen::Index>(bitrev6(
                        static_cast<std::uint64_t>(members[static_cast<std::size_t>(i)]))),
                    static_cast<Eigen::Index>(bitrev6(
                        static_cast<std::uint64_t>(members[static_cast<std::size_t>(j)]))));
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sr(block_ref);
        Eigen::SelfAdjointEigenSolver<Matrix> sj(block_jw);
        for (Eigen::Index k = 0; k < d; ++k)
            CHECK(sj.eigenvalues()[k] == doctest::Approx(sr.eigenvalues()[k]).epsilon(1e-10));
    }
}

TEST_CASE("hubbard(2,1,4) dense image matches oracle spectrum") {
    Eigen::SelfAdjointEigenSolver<Matrix> jw(build_hubbard_chain(2, 1.0, 4.0).to_dense());
    const Eigen::VectorXd ref = hubbard_fock_spectrum(2, 1.0, 4.0);
    for (Eigen::Index k = 0; k < ref.size(); ++k)
        CHECK(jw.eigenvalues()[k] == doctest::Approx(ref[k]).epsilon(1e-10));
}

TEST_CASE("parse_model descriptors") {
    CHECK(parse_model("tfim(2, 0, 1)").n_qubits() == 2);
    CHECK(parse_model("hubbard(2,1,0)").n_qubits() == 4);
    CHECK_THROWS_AS(parse_model("tfim(2,0)"), InvalidArgument);
    CHECK_THROWS_AS(parse_model("nosuch(1,2,3)"), InvalidArgument);
    CHECK_THROWS_AS(parse_model("file(/nonexistent/x.pauli)"), InvalidArgument);
}
