#include "qkud/run_io.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qkud {

void RunSpec::validate() const {
    if (model.empty())
        throw InvalidArgument("no model given");
    if (method != "qkud" && method != "qrte")
        throw InvalidArgument("method must be qkud or qrte");
    if (path != "direct" && path != "lcu")
        throw InvalidArgument("path must be direct or lcu");
    if (parameter <= 0.0)
        throw InvalidArgument("parameter must be positive");
    if (max_iter < 1)
        throw InvalidArgument("max_iter must be >= 1");
    if (stop_delta < 0.0)
        throw InvalidArgument("stop_delta must be >= 0");
    if (gevp_threshold <= 0.0)
        throw InvalidArgument("gevp_threshold must be positive");
    if (noise_sigma < 0.0)
        throw InvalidArgument("noise_sigma must be >= 0");
    if (path == "lcu" && method != "qkud")
        throw InvalidArgument("lcu path applies to qkud only");
}

KrylovConfig RunSpec::to_config() const {
    KrylovConfig cfg;
    cfg.method = method == "qkud" ? Method::Qkud : Method::Qrte;
    if (cfg.method == Method::Qkud)
        cfg.epsilon = parameter;
    else
        cfg.delta_t = parameter;
    cfg.max_iter = max_iter;
    cfg.stop_delta = stop_delta;
    cfg.gevp_threshold = gevp_threshold;
    return cfg;
}

nlohmann::json RunSpec::to_json() const {
    return {{"schema_version", kSchemaVersion},
            {"model", model},
            {"method", method},
            {"path", path},
            {"parameter", parameter},
            {"max_iter", max_iter},
            {"stop_delta", stop_delta},
            {"gevp_threshold", gevp_threshold},
            {"psi0", psi0},
            {"noise_sigma", noise_sigma},
            {"seed", seed}};
    // output_path is deliberately omitted: the preamble describes the run,
    // and identical specs must yield byte-identical files regardless of
    // where they are written
}

RunSpec RunSpec::from_json(const nlohmann::json& j) {
    RunSpec s;
    s.model = j.value("model", s.model);
    s.method = j.value("method", s.method);
    s.path = j.value("path", s.path);
    s.parameter = j.value("parameter", s.parameter);
    s.max_iter = j.value("max_iter", s.max_iter);
    s.stop_delta = j.value("stop_delta", s.stop_delta);
    s.gevp_threshold = j.value("gevp_threshold", s.gevp_threshold);
    s.psi0 = j.value("psi0", s.psi0);
    s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
    s.seed = j.value("seed", s.seed);
    s.output_path = j.value("out", s.output_path);
    return s;
}

Statevector resolve_psi0(const std::string& psi0, int n_qubits) {
    if (psi0 == "plus")
        return plus_state(n_qubits);
    std::uint64_t index = 0;
    try {
        std::size_t pos = 0;
        index = std::stoull(psi0, &pos);
        if (pos != psi0.size())
            throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
        throw InvalidArgument("psi0 must be a basis-state index or 'plus'");
    }
    return basis_state(n_qubits, index);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* stop_reason_name(StopReason reason) {
    switch (reason) {
    case StopReason::ConvergedByDelta: return "ConvergedByDelta";
    case StopReason::MaxIterReached: return "MaxIterReached";
    default: return "SubspaceExhausted";
    }
}

void write_convergence_csv(std::ostream& out, const RunSpec& spec,
                           const ConvergenceRecord& record) {
    nlohmann::json preamble = spec.to_json();
    preamble["status"] = stop_reason_name(record.status);
    out << "# " << preamble.dump() << "\n";
    out << "iter,e_min,e_exact_gap,cond_s,kept_dim\n";
    for (const auto& row : record.rows)
        out << row.iter << ',' << format_double(row.e_min) << ','
            << format_double(row.e_exact_gap) << ',' << format_double(row.cond_s) << ','
            << row.kept_dim << "\n";
}

ParsedOutput read_convergence_csv(std::istream& in) {
    ParsedOutput parsed;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw InvalidArgument("missing JSON preamble line");
    parsed.preamble = nlohmann::json::parse(line.substr(2));
    if (!std::getline(in, line) || line != "iter,e_min,e_exact_gap,cond_s,kept_dim")
        throw InvalidArgument("bad CSV header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        IterationRow row;
        std::istringstream ls(line);
        char comma;
        if (!(ls >> row.iter >> comma >> row.e_min >> comma >> row.e_exact_gap >> comma >>
              row.cond_s >> comma >> row.kept_dim))
            throw InvalidArgument("unparseable CSV row: " + line);
        parsed.rows.push_back(row);
    }
    return parsed;
}

} // namespace qkud
