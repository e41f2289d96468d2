#include "qkud/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

namespace qkud {

namespace {

Complex i_power(int p) {
    switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

struct TermMasks {
    std::uint64_t flip = 0; // X and Y positions
    std::uint64_t phase = 0; // Z and Y positions
    int y_count = 0;
};

TermMasks make_masks(const std::string& word, int n_qubits) {
    TermMasks m;
    for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
        switch (word[static_cast<std::size_t>(q)]) {
        case 'I': break;
        case 'X': m.flip |= bit; break;
        case 'Y': m.flip |= bit; m.phase |= bit; ++m.y_count; break;
        case 'Z': m.phase |= bit; break;
        default:
            throw MalformedLine("invalid Pauli letter '" +
                                std::string(1, word[static_cast<std::size_t>(q)]) + "'");
        }
    }
    return m;
}

} // namespace

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits) {
    if (n_qubits_ < 1)
        throw InvalidArgument("PauliSum requires at least one qubit");
    std::map<std::string, Complex> merged;
    for (auto& t : terms) {
        if (static_cast<int>(t.word.size()) != n_qubits_)
            throw InconsistentWordLength("word '" + t.word + "' does not have length " +
                                         std::to_string(n_qubits_));
        make_masks(t.word, n_qubits_); // validates the alphabet
        merged[t.word] += t.coeff;
    }
    for (auto& [word, coeff] : merged) {
        if (std::abs(coeff) < 1e-15)
            continue;
        terms_.push_back({coeff, word});
    }
    // merged is an ordered map, so terms_ is already sorted by word
}

bool PauliSum::is_hermitian(double tol) const {
    for (const auto& t : terms_)
        if (std::abs(t.coeff.imag()) > tol)
            return false;
    return true;
}

Statevector PauliSum::apply(const Statevector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim())
        throw DimensionMismatch("statevector dimension " + std::to_string(v.size()) +
                                " != 2^" + std::to_string(n_qubits_));
    Statevector out = Statevector::Zero(v.size());
    for (const auto& t : terms_) {
        const TermMasks m = make_masks(t.word, n_qubits_);
        const Complex base = t.coeff * i_power(m.y_count);
        for (std::uint64_t i = 0; i < dim(); ++i) {
            const int parity = std::popcount(i & m.phase) & 1;
            const Complex amp = parity ? -base : base;
            out[static_cast<Eigen::Index>(i ^ m.flip)] +=
                amp * v[static_cast<Eigen::Index>(i)];
        }
    }
    return out;
}

Matrix PauliSum::to_dense(int dense_limit) const {
    if (n_qubits_ > dense_limit)
        throw DimensionTooLarge("n_qubits " + std::to_string(n_qubits_) +
                                " exceeds dense limit " + std::to_string(dense_limit));
    const auto d = static_cast<Eigen::Index>(dim());
    Matrix h = Matrix::Zero(d, d);
    for (const auto& t : terms_) {
        const TermMasks m = make_masks(t.word, n_qubits_);
        const Complex base = t.coeff * i_power(m.y_count);
        for (std::uint64_t i = 0; i < dim(); ++i) {
            const int parity = std::popcount(i & m.phase) & 1;
            h(static_cast<Eigen::Index>(i ^ m.flip), static_cast<Eigen::Index>(i)) +=
                parity ? -base : base;
        }
    }
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw NotHermitian("dense image asymmetry " + std::to_string(asym));
    return ((h + h.adjoint()) / 2.0).eval();
}

std::string PauliSum::serialize() const {
    std::string out;
    char buf[128];
    for (const auto& t : terms_) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g ", t.coeff.real(), t.coeff.imag());
        out += buf;
        out += t.word;
        out += '\n';
    }
    return out;
}

PauliSum parse_pauli_file(std::istream& in) {
    std::vector<PauliTerm> terms;
    int word_len = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        std::istringstream ls(line);
        std::string a, b, word, extra;
        if (!(ls >> a))
            continue; // blank
        if (!(ls >> b >> word) || (ls >> extra))
            throw MalformedLine("line " + std::to_string(lineno) +
                                ": expected `<real> <imag> <word>`");
        double re, im;
        try {
            std::size_t pa = 0, pb = 0;
            re = std::stod(a, &pa);
            im = std::stod(b, &pb);
            if (pa != a.size() || pb != b.size())
                throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw MalformedLine("line " + std::to_string(lineno) +
                                ": non-numeric coefficient");
        }
        if (word_len < 0)
            word_len = static_cast<int>(word.size());
        else if (static_cast<int>(word.size()) != word_len)
            throw InconsistentWordLength("line " + std::to_string(lineno) +
                                         ": word length differs from previous lines");
        terms.push_back({{re, im}, word});
    }
    if (terms.empty())
        throw EmptyHamiltonian("no terms found");
    return PauliSum(word_len, std::move(terms));
}

PauliSum parse_pauli_string(const std::string& text) {
    std::istringstream in(text);
    return parse_pauli_file(in);
}

} // namespace qkud
