#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "qkud/krylov.hpp"

namespace qkud {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kChemicalAccuracy = 1.6e-3;

/// Fully resolved description of one solver run; serialized verbatim into
/// the CSV preamble so output files are self-describing.
struct RunSpec {
    std::string model;       // tfim(n,J,h) | hubbard(n,t,U) | file(path)
    std::string method = "qkud"; // qkud | qrte
    std::string path = "direct"; // direct | lcu
    double parameter = 0.1;  // epsilon or delta_t, per method
    int max_iter = 50;
    double stop_delta = 1e-9;
    double gevp_threshold = 1e-12;
    std::string psi0 = "0";  // basis-state index or "plus"
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string output_path;

    void validate() const; // throws InvalidArgument
    KrylovConfig to_config() const;
    nlohmann::json to_json() const;
    static RunSpec from_json(const nlohmann::json& j);
};

/// Resolves the psi0 field against a model size.
Statevector resolve_psi0(const std::string& psi0, int n_qubits);

/// One output file: a single-line JSON preamble (resolved spec plus
/// schema_version) followed by a CSV header and one row per iteration.
/// Formatting is deterministic (%.17g).
void write_convergence_csv(std::ostream& out, const RunSpec& spec,
                           const ConvergenceRecord& record);

/// Reads back the rows of a file produced by write_convergence_csv.
struct ParsedOutput {
    nlohmann::json preamble;
    std::vector<IterationRow> rows;
};
ParsedOutput read_convergence_csv(std::istream& in);

std::string format_double(double x); // shared %.17g formatting

const char* stop_reason_name(StopReason reason);

} // namespace qkud
