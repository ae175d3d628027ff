// Acceptance criteria runner: one PASS/FAIL line per criterion.

#include "suites.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using bhankel::app::Check;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> suites;
};

/// Worst check by measured / tolerance (measured alone when tolerance is 0).
const Check* worst_of(const std::vector<Check>& checks) {
    const Check* worst = nullptr;
    double score = -1.0;
    for (const auto& c : checks) {
        const double s = !c.pass ? 1e300 : (c.tolerance > 0.0 ? c.measured / c.tolerance : c.measured);
        if (!worst || s > score) {
            worst = &c;
            score = s;
        }
    }
    return worst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Repeated CLI runs with 1 and 2 worker threads must write identical bytes.
bool determinism(std::string& detail) {
    const fs::path root = fs::temp_directory_path() / "bhankel_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cli = BHANKEL_CLI;
    const fs::path cfg = root / "evolve.json";
    std::ofstream(cfg) << R"({"model": {"n": 3, "beta": 1, "k": 0},
 "nonlinearity": {"b": 1, "sign": "focusing"},
 "grid": {"age_min": 1, "age_max": 3},
 "data": {"amplitude": 0.8, "age": 1},
 "evolution": {"t_end": 1, "steps": 8, "q": 3, "triplet": {"m": 3, "p": 3, "q": 2}}}
)";
    const std::vector<std::pair<std::string, std::vector<std::string>>> jobs{
        {"verify --suite watson,heat,young,mass --young-pairs 10", {"verify.json"}},
        {"evolve --config " + cfg.string(), {"trajectory.csv", "final_state.csv", "evolve.json"}},
    };
    int job = 0;
    for (const auto& [args, files] : jobs) {
        std::vector<fs::path> dirs;
        for (const char* threads : {"1", "2", "1"}) {
            const fs::path dir = root / ("job" + std::to_string(job) + "_run" + std::to_string(dirs.size()));
            if (run(cli + " " + args + " --threads " + threads + " --out " + dir.string()) != 0) {
                detail = "command failed: " + args;
                return false;
            }
            dirs.push_back(dir);
        }
        for (const auto& f : files) {
            const auto ref = slurp(dirs[0] / f);
            if (ref.empty()) {
                detail = f + " is empty";
                return false;
            }
            for (std::size_t i = 1; i < dirs.size(); ++i) {
                if (slurp(dirs[i] / f) != ref) {
                    detail = f + " differs between runs";
                    return false;
                }
            }
        }
        ++job;
    }
    fs::remove_all(root);
    detail = "verify and evolve outputs byte-identical over 3 runs (threads 1, 2, 1)";
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Watson identity gate", {"watson"}},
        {2, "transform round trip and isometry", {"transform"}},
        {3, "diagonalization", {"diagonalization"}},
        {4, "kernel closed form", {"kernel"}},
        {5, "beta = 0 heat reduction and composition", {"heat"}},
        {6, "kernel norm power law", {"power-law"}},
        {7, "Young inequality", {"young"}},
        {8, "Delsarte identities and sharp convolution oracle", {"delsarte"}},
        {9, "smoothing bound", {"smoothing"}},
        {10, "mass conservation and positivity", {"mass"}},
        {11, "contraction", {"contraction"}},
        {12, "blow-up exponent", {"blowup"}},
    };
    bhankel::app::SuiteOptions options;
    int failures = 0;
    for (const auto& c : criteria) {
        std::vector<Check> checks;
        std::string error;
        try {
            for (const auto& s : c.suites) {
                auto rows = bhankel::app::run_suite(s, options);
                checks.insert(checks.end(), rows.begin(), rows.end());
            }
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool pass = error.empty() && !checks.empty() && bhankel::app::all_pass(checks);
        failures += pass ? 0 : 1;
        std::printf("AC%-2d %s  %s", c.id, pass ? "PASS" : "FAIL", c.title.c_str());
        if (!error.empty()) {
            std::printf(": error: %s\n", error.c_str());
            continue;
        }
        const Check* w = worst_of(checks);
        std::printf(": %zu checks, worst '%s' measured %.3g (tolerance %.3g)\n", checks.size(), w->name.c_str(), w->measured,
                    w->tolerance);
        for (const auto& k : checks) {
            if (!k.pass) std::printf("      failed: %s measured %.6g tolerance %.6g\n", k.name.c_str(), k.measured, k.tolerance);
        }
    }
    std::string detail;
    bool det = false;
    try {
        det = determinism(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    failures += det ? 0 : 1;
    std::printf("AC13 %s  determinism: %s\n", det ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
