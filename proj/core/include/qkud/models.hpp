#pragma once

#include <string>

#include "qkud/pauli.hpp"

namespace qkud {

/// Open-chain transverse-field Ising model,
/// H = -J sum_i Z_i Z_{i+1} - h sum_i X_i.
PauliSum build_tfim(int n, double coupling, double field);

/// Jordan-Wigner image of the 1D Fermi-Hubbard chain,
/// H = -t sum_{<i,j>,sigma} (c+_{i sigma} c_{j sigma} + h.c.)
///     + U sum_i n_{i up} n_{i down},
/// on 2*n_sites qubits with site-major spin-orbital ordering
/// (up0, down0, up1, down1, ...).
PauliSum build_hubbard_chain(int n_sites, double hopping, double repulsion);

/// Parses a model descriptor: `tfim(n,J,h)`, `hubbard(n_sites,t,U)` or
/// `file(path)`. Whitespace around arguments is ignored.
PauliSum parse_model(const std::string& descriptor);

} // namespace qkud
