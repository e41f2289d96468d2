#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qkud/run_io.hpp"

namespace fs = std::filesystem;
using namespace qkud;

namespace {

const std::string kBin = QKUD_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qkud_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cmd(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = kBin + " " + args + " 2>/dev/null";
    if (!stdout_file.empty())
        cmd += " >" + stdout_file.string();
    else
        cmd += " >/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("exact: tfim(2,0,1) prints -2") {
    TempDir tmp;
    const fs::path out = tmp.path / "exact.txt";
    REQUIRE(run_cmd("exact --model 'tfim(2,0,1)'", out) == 0);
    CHECK(std::stod(slurp(out)) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("exact: hubbard(2,1,0) prints -2") {
    TempDir tmp;
    const fs::path out = tmp.path / "exact.txt";
    REQUIRE(run_cmd("exact --model 'hubbard(2,1,0)'", out) == 0);
    CHECK(std::stod(slurp(out)) == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("exact: single-Z pauli file prints -1, --spectrum prints both values") {
    TempDir tmp;
    const fs::path pauli = tmp.path / "z.pauli";
    std::ofstream(pauli) << "1.0 0.0 Z\n";
    const fs::path out = tmp.path / "exact.txt";
    REQUIRE(run_cmd("exact --model 'file(" + pauli.string() + ")' --spectrum", out) == 0);
    std::istringstream lines(slurp(out));
    double lo = 0, hi = 0;
    lines >> lo >> hi;
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("run: 1-qubit Z from |+> converges to -1 at iteration 1") {
    TempDir tmp;
    const fs::path pauli = tmp.path / "z.pauli";
    std::ofstream(pauli) << "1.0 0.0 Z\n";
    const fs::path csv = tmp.path / "run.csv";
    const int rc = run_cmd("run --model 'file(" + pauli.string() +
                           ")' --method qkud --param 0.5 --psi0 plus --out " + csv.string());
    CHECK(rc == 0); // ConvergedByDelta
    std::ifstream in(csv);
    const auto parsed = read_convergence_csv(in);
    CHECK(parsed.preamble["schema_version"] == kSchemaVersion);
    REQUIRE(parsed.rows.size() >= 2);
    CHECK(parsed.rows[1].iter == 1);
    CHECK(parsed.rows[1].e_min == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("run: tfim(4,1,1) at eps 1e-6 reaches the exact ground energy") {
    TempDir tmp;
    const fs::path csv = tmp.path / "run.csv";
    const fs::path exact_out = tmp.path / "exact.txt";
    REQUIRE(run_cmd("exact --model 'tfim(4,1,1)'", exact_out) == 0);
    const double exact = std::stod(slurp(exact_out));
    const int rc =
        run_cmd("run --model 'tfim(4,1,1)' --method qkud --param 1e-6 --delta 1e-9 "
                "--psi0 plus --out " +
                csv.string());
    CHECK((rc == 0 || rc == 3));
    std::ifstream in(csv);
    const auto parsed = read_convergence_csv(in);
    CHECK(parsed.rows.back().e_min == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("run: validation failures exit 1") {
    CHECK(run_cmd("run --model 'tfim(2,1,1)' --method qrte --param 0") == 1);
    CHECK(run_cmd("run --model 'tfim(2,1,1)' --method nosuch --param 0.1") == 1);
    CHECK(run_cmd("run --model 'bogus(1)' --method qkud --param 0.1") == 1);
}

TEST_CASE("run: config file supplies defaults, flags override") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    std::ofstream(cfg) << R"x({"model":"tfim(2,0,1)","method":"qkud","parameter":0.5,)x"
                       << R"x("psi0":"plus","stop_delta":1e-9})x";
    const fs::path csv = tmp.path / "run.csv";
    REQUIRE(run_cmd("run --config " + cfg.string() + " --out " + csv.string()) == 0);
    std::ifstream in(csv);
    auto parsed = read_convergence_csv(in);
    CHECK(parsed.preamble["model"] == "tfim(2,0,1)");
    CHECK(parsed.preamble["parameter"] == 0.5);

    // flag overrides the file's parameter
    const fs::path csv2 = tmp.path / "run2.csv";
    REQUIRE(run_cmd("run --config " + cfg.string() + " --param 0.25 --out " +
                    csv2.string()) == 0);
    std::ifstream in2(csv2);
    parsed = read_convergence_csv(in2);
    CHECK(parsed.preamble["parameter"] == 0.25);
}

TEST_CASE("run: identical spec and seed gives byte-identical output") {
    TempDir tmp;
    const fs::path a = tmp.path / "a.csv", b = tmp.path / "b.csv";
    const std::string base = "run --model 'tfim(3,1,1)' --method qkud --param 0.1 "
                             "--path lcu --max-iter 4 --noise-sigma 1e-4 --seed 42 "
                             "--psi0 plus --out ";
    REQUIRE(run_cmd(base + a.string()) >= 0);
    REQUIRE(run_cmd(base + b.string()) >= 0);
    const std::string ca = slurp(a), cb = slurp(b);
    REQUIRE(!ca.empty());
    CHECK(ca == cb);
}

TEST_CASE("sweep: per-run CSVs plus summary, empty list exits 1") {
    TempDir tmp;
    const fs::path dir = tmp.path / "sweep";
    const int rc = run_cmd("sweep --model 'tfim(3,1,1)' --method qkud --param 0.05 "
                           "--param 0.2 --psi0 plus --jobs 2 --out " +
                           dir.string());
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "run_0.05.csv"));
    CHECK(fs::exists(dir / "run_0.2.csv"));
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.rfind("parameter,final_e_min,iters_to_chemical_accuracy,final_cond_s,status",
                        0) == 0);
    // summary rows parse back and agree with the per-run files
    std::istringstream lines(summary);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 2);

    CHECK(run_cmd("sweep --model 'tfim(3,1,1)' --method qkud --out " +
                  (tmp.path / "empty").string()) == 1);
}

TEST_CASE("sweep: child errors are recorded without aborting siblings") {
    TempDir tmp;
    const fs::path dir = tmp.path / "sweep";
    // lcu path rejects max_iter > 30, so the second child fails validation
    const int rc = run_cmd("sweep --model 'tfim(2,1,1)' --method qkud --path lcu "
                           "--max-iter 40 --param 0.1 --psi0 plus --out " +
                           dir.string());
    CHECK(rc == 0);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("error") != std::string::npos);
}
