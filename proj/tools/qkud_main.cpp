// Experiment driver for the QKUD/QRTE solvers.
//
//   qkud exact --model "tfim(6,1,1)" [--spectrum]
//   qkud run   --model "hubbard(3,1,4)" --method qkud --param 0.1 --out run.csv
//   qkud sweep --model "hubbard(3,1,4)" --method qkud --param 0.01 --param 0.1 \
//              --out sweep_dir
//
// Exit codes for `run`: 0 ConvergedByDelta, 2 MaxIterReached,
// 3 SubspaceExhausted, 1 error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qkud/lcu.hpp"
#include "qkud/models.hpp"
#include "qkud/run_io.hpp"

namespace fs = std::filesystem;
using namespace qkud;

namespace {

struct ChildResult {
    double parameter = 0.0;
    bool failed = false;
    std::string error;
    double final_e_min = 0.0;
    double final_cond_s = 0.0;
    int iters_to_chem = -1; // -1 = never reached
    StopReason status = StopReason::MaxIterReached;
};

RunResult execute(const RunSpec& spec, const PauliSum& h) {
    const Statevector psi0 = resolve_psi0(spec.psi0, h.n_qubits());
    const KrylovConfig cfg = spec.to_config();
    if (spec.path == "lcu")
        return run_lcu(cfg, h, psi0, spec.noise_sigma, spec.seed);
    return run(cfg, h, psi0);
}

ChildResult run_child(RunSpec spec, const PauliSum& h, double exact_energy) {
    ChildResult res;
    res.parameter = spec.parameter;
    try {
        spec.validate();
        const RunResult rr = execute(spec, h);
        if (!spec.output_path.empty()) {
            std::ofstream out(spec.output_path, std::ios::binary);
            if (!out)
                throw InvalidArgument("cannot open output file '" + spec.output_path + "'");
            write_convergence_csv(out, spec, rr.record);
        }
        res.status = rr.record.status;
        res.final_e_min = rr.record.rows.back().e_min;
        res.final_cond_s = rr.record.rows.back().cond_s;
        for (const auto& row : rr.record.rows)
            if (std::abs(row.e_min - exact_energy) <= kChemicalAccuracy) {
                res.iters_to_chem = row.iter;
                break;
            }
    } catch (const std::exception& e) {
        res.failed = true;
        res.error = e.what();
    }
    return res;
}

double exact_ground(const PauliSum& h) {
    return hermitian_eigendecompose(h.to_dense()).eigvals[0];
}

void add_spec_options(CLI::App* cmd, RunSpec& spec, std::vector<double>& params,
                      std::string& config_path) {
    cmd->add_option("--model", spec.model, "tfim(n,J,h) | hubbard(n,t,U) | file(path)");
    cmd->add_option("--method", spec.method, "qkud | qrte");
    cmd->add_option("--param", params, "epsilon (qkud) or delta_t (qrte); repeatable for sweep");
    cmd->add_option("--path", spec.path, "direct | lcu");
    cmd->add_option("--max-iter", spec.max_iter, "iteration cap");
    cmd->add_option("--delta", spec.stop_delta, "energy-change stopping threshold");
    cmd->add_option("--gevp-threshold", spec.gevp_threshold, "overlap regularization threshold");
    cmd->add_option("--psi0", spec.psi0, "basis-state index or 'plus'");
    cmd->add_option("--noise-sigma", spec.noise_sigma, "Gaussian noise on lcu primitives");
    cmd->add_option("--seed", spec.seed, "noise RNG seed");
    cmd->add_option("--out", spec.output_path, "output CSV file (run) or directory (sweep)");
    cmd->add_option("--config", config_path, "JSON config file; flags override");
}

// config file supplies defaults, explicitly passed flags win
void merge_config(const CLI::App* cmd, RunSpec& spec, std::vector<double>& params,
                  const std::string& config_path) {
    if (config_path.empty())
        return;
    std::ifstream in(config_path);
    if (!in)
        throw InvalidArgument("cannot open config file '" + config_path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    RunSpec base = RunSpec::from_json(j);
    RunSpec flags = spec;
    spec = base;
    auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (given("--model")) spec.model = flags.model;
    if (given("--method")) spec.method = flags.method;
    if (given("--path")) spec.path = flags.path;
    if (given("--max-iter")) spec.max_iter = flags.max_iter;
    if (given("--delta")) spec.stop_delta = flags.stop_delta;
    if (given("--gevp-threshold")) spec.gevp_threshold = flags.gevp_threshold;
    if (given("--psi0")) spec.psi0 = flags.psi0;
    if (given("--noise-sigma")) spec.noise_sigma = flags.noise_sigma;
    if (given("--seed")) spec.seed = flags.seed;
    if (given("--out")) spec.output_path = flags.output_path;
    if (!given("--param") && j.contains("parameter"))
        params = {j["parameter"].get<double>()};
}

int cmd_exact(const std::string& model, bool spectrum) {
    const PauliSum h = parse_model(model);
    const SpectralCache cache = hermitian_eigendecompose(h.to_dense());
    std::cout << format_double(cache.eigvals[0]) << "\n";
    if (spectrum)
        for (Eigen::Index k = 1; k < cache.eigvals.size(); ++k)
            std::cout << format_double(cache.eigvals[k]) << "\n";
    return 0;
}

int cmd_run(RunSpec spec) {
    spec.validate();
    const PauliSum h = parse_model(spec.model);
    const RunResult rr = execute(spec, h);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!spec.output_path.empty()) {
        file.open(spec.output_path, std::ios::binary);
        if (!file)
            throw InvalidArgument("cannot open output file '" + spec.output_path + "'");
        out = &file;
    }
    write_convergence_csv(*out, spec, rr.record);
    const auto& last = rr.record.rows.back();
    std::cerr << "status=" << stop_reason_name(rr.record.status)
              << " e_min=" << format_double(last.e_min)
              << " e_exact_gap=" << format_double(last.e_exact_gap) << "\n";
    if (std::abs(last.e_exact_gap) > kChemicalAccuracy)
        std::cerr << "warning: final energy misses the exact ground energy by "
                  << format_double(last.e_exact_gap)
                  << "; psi0 may have (near-)zero ground-state overlap\n";
    switch (rr.record.status) {
    case StopReason::ConvergedByDelta: return 0;
    case StopReason::MaxIterReached: return 2;
    default: return 3;
    }
}

int cmd_sweep(RunSpec spec, const std::vector<double>& params, int jobs) {
    if (params.empty()) {
        std::cerr << "error: sweep requires at least one --param value\n";
        return 1;
    }
    for (double p : params)
        if (p <= 0.0) {
            std::cerr << "error: sweep parameters must be positive\n";
            return 1;
        }
    if (spec.output_path.empty())
        spec.output_path = "sweep_out";
    fs::create_directories(spec.output_path);
    const PauliSum h = parse_model(spec.model);
    const double exact = exact_ground(h);

    std::vector<ChildResult> results(params.size());
    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= params.size())
                    return;
                idx = next++;
            }
            RunSpec child = spec;
            child.parameter = params[idx];
            char name[64];
            std::snprintf(name, sizeof(name), "run_%g.csv", params[idx]);
            child.output_path = (fs::path(spec.output_path) / name).string();
            results[idx] = run_child(child, h, exact);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(params.size())));
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    std::ofstream summary(fs::path(spec.output_path) / "summary.csv", std::ios::binary);
    summary << "parameter,final_e_min,iters_to_chemical_accuracy,final_cond_s,status\n";
    for (const auto& r : results) {
        summary << format_double(r.parameter) << ',';
        if (r.failed) {
            summary << ",,,error: " << r.error << "\n";
            continue;
        }
        summary << format_double(r.final_e_min) << ',';
        if (r.iters_to_chem >= 0)
            summary << r.iters_to_chem;
        summary << ',' << format_double(r.final_cond_s) << ',' << stop_reason_name(r.status)
                << "\n";
    }
    for (const auto& r : results)
        if (r.failed)
            std::cerr << "child param=" << r.parameter << " failed: " << r.error << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QKUD / QRTE quantum-Krylov experiment driver"};
    app.require_subcommand(1);

    std::string exact_model;
    bool spectrum = false;
    auto* exact_cmd = app.add_subcommand("exact", "full diagonalization reference");
    exact_cmd->add_option("--model", exact_model, "model descriptor")->required();
    exact_cmd->add_flag("--spectrum", spectrum, "print the full spectrum");

    RunSpec run_spec;
    std::vector<double> run_params;
    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "single solver run, CSV output");
    add_spec_options(run_cmd, run_spec, run_params, run_config);

    RunSpec sweep_spec;
    std::vector<double> sweep_params;
    std::string sweep_config;
    int jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep with summary CSV");
    add_spec_options(sweep_cmd, sweep_spec, sweep_params, sweep_config);
    sweep_cmd->add_option("--jobs", jobs, "concurrent child runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exact_cmd->parsed())
            return cmd_exact(exact_model, spectrum);
        if (run_cmd->parsed()) {
            merge_config(run_cmd, run_spec, run_params, run_config);
            if (run_params.size() > 1)
                throw InvalidArgument("run takes a single --param; use sweep for lists");
            if (!run_params.empty())
                run_spec.parameter = run_params[0];
            return cmd_run(run_spec);
        }
        merge_config(sweep_cmd, sweep_spec, sweep_params, sweep_config);
        return cmd_sweep(sweep_spec, sweep_params, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
