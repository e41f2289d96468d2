#include "qkud/models.hpp"

#include <fstream>
#include <sstream>

namespace qkud {

namespace {

std::string identity_word(int n) { return std::string(static_cast<std::size_t>(n), 'I'); }

PauliTerm single(int n, int q, char p, double c) {
    std::string w = identity_word(n);
    w[static_cast<std::size_t>(q)] = p;
    return {Complex{c, 0.0}, w};
}

} // namespace

PauliSum build_tfim(int n, double coupling, double field) {
    if (n < 2)
        throw InvalidArgument("tfim requires n >= 2");
    std::vector<PauliTerm> terms;
    for (int i = 0; i + 1 < n; ++i) {
        std::string w = identity_word(n);
        w[static_cast<std::size_t>(i)] = 'Z';
        w[static_cast<std::size_t>(i + 1)] = 'Z';
        terms.push_back({Complex{-coupling, 0.0}, w});
    }
    for (int i = 0; i < n; ++i)
        terms.push_back(single(n, i, 'X', -field));
    return PauliSum(n, std::move(terms));
}

PauliSum build_hubbard_chain(int n_sites, double hopping, double repulsion) {
    if (n_sites < 2)
        throw InvalidArgument("hubbard requires n_sites >= 2");
    const int n = 2 * n_sites; // spin-orbitals: up0, down0, up1, down1, ...
    std::vector<PauliTerm> terms;
    // -t (c+_p c_q + h.c.) -> -t/2 (X_p Z...Z X_q + Y_p Z...Z Y_q), p < q
    auto hop = [&](int p, int q) {
        for (char xy : {'X', 'Y'}) {
            std::string w = identity_word(n);
            w[static_cast<std::size_t>(p)] = xy;
            w[static_cast<std::size_t>(q)] = xy;
            for (int r = p + 1; r < q; ++r)
                w[static_cast<std::size_t>(r)] = 'Z';
            terms.push_back({Complex{-hopping / 2.0, 0.0}, w});
        }
    };
    for (int i = 0; i + 1 < n_sites; ++i)
        for (int s = 0; s < 2; ++s)
            hop(2 * i + s, 2 * (i + 1) + s);
    // U n_up n_down = U/4 (I - Z_up - Z_down + Z_up Z_down)
    for (int i = 0; i < n_sites; ++i) {
        const int up = 2 * i, dn = 2 * i + 1;
        terms.push_back({Complex{repulsion / 4.0, 0.0}, identity_word(n)});
        terms.push_back(single(n, up, 'Z', -repulsion / 4.0));
        terms.push_back(single(n, dn, 'Z', -repulsion / 4.0));
        std::string w = identity_word(n);
        w[static_cast<std::size_t>(up)] = 'Z';
        w[static_cast<std::size_t>(dn)] = 'Z';
        terms.push_back({Complex{repulsion / 4.0, 0.0}, w});
    }
    return PauliSum(n, std::move(terms));
}

PauliSum parse_model(const std::string& descriptor) {
    const auto open = descriptor.find('(');
    const auto close = descriptor.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw InvalidArgument("bad model descriptor '" + descriptor +
                              "' (expected name(args))");
    std::string name = descriptor.substr(0, open);
    std::string args = descriptor.substr(open + 1, close - open - 1);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    name = trim(name);
    if (name == "file") {
        std::ifstream in(trim(args));
        if (!in)
            throw InvalidArgument("cannot open Pauli file '" + trim(args) + "'");
        return parse_pauli_file(in);
    }
    std::vector<double> vals;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(trim(tok)));
        } catch (const std::exception&) {
            throw InvalidArgument("bad model argument '" + tok + "'");
        }
    }
    if (vals.size() != 3)
        throw InvalidArgument("model '" + name + "' expects 3 arguments");
    if (name == "tfim")
        return build_tfim(static_cast<int>(vals[0]), vals[1], vals[2]);
    if (name == "hubbard")
        return build_hubbard_chain(static_cast<int>(vals[0]), vals[1], vals[2]);
    throw InvalidArgument("unknown model '" + name + "'");
}

} // namespace qkud
