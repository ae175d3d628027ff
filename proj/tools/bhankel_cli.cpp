#include "scenarios.hpp"
#include "suites.hpp"

#include "bhankel/errors.hpp"
#include "bhankel/estimates.hpp"
#include "bhankel/evolution.hpp"
#include "bhankel/kernels.hpp"
#include "bhankel/parallel.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace bhankel;

namespace {

enum Exit { ok = 0, config_error = 1, numerical_error = 2, blowup_exit = 3 };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
};

/// Model flags; unset values fall back to the config, then to defaults.
struct ModelFlags {
    std::optional<int> n;
    std::optional<double> beta;
    std::optional<int> k;
};

ordered_json load_config(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        auto j = ordered_json::parse(in);
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        return j;
    } catch (const ordered_json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

ordered_json section(const ordered_json& cfg, const char* key) {
    if (!cfg.contains(key)) return ordered_json::object();
    if (!cfg.at(key).is_object()) throw ConfigError(std::string("config key '") + key + "' must be an object");
    return cfg.at(key);
}

template <class T>
T get_or(const ordered_json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const ordered_json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

ModelParams resolve_model(const ModelFlags& f, const ordered_json& cfg) {
    const auto m = section(cfg, "model");
    const int n = f.n.value_or(get_or(m, "n", 3));
    const double beta = f.beta.value_or(get_or(m, "beta", 0.0));
    const int k = f.k.value_or(get_or(m, "k", 0));
    return derive_params(n, beta, k);
}

void add_model_flags(CLI::App* app, ModelFlags& f) {
    app->add_option("--n", f.n, "spatial dimension (>= 2)");
    app->add_option("--beta", f.beta, "weight exponent in [0, 2 - 1e-3]");
    app->add_option("--k", f.k, "spherical harmonic degree");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes through a temporary file and renames, so readers never see a partial file.
void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

fs::path out_path(const Common& c, const std::string& name) { return fs::path(c.out_dir.empty() ? "." : c.out_dir) / name; }

// ---- params ----

struct ParamsOpts {
    ModelFlags model;
    std::string triplets;
};

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            out.push_back(text == "inf" ? kInf : std::stod(text));
        } else {
            const double a = std::stod(text.substr(0, dots));
            const double b = std::stod(text.substr(dots + 2));
            if (b < a) throw ConfigError("empty range '" + text + "'");
            for (double x = a; x <= b + 1e-12; x += 1.0) out.push_back(x);
        }
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError("cannot parse exponent list '" + text + "'");
    }
    return out;
}

/// "q=2,p=2..6" -> the (p, q) lattice.
std::pair<std::vector<double>, std::vector<double>> parse_lattice(const std::string& text) {
    std::vector<double> ps, qs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("triplet lattice entries look like q=2 or p=2..6");
        const auto key = item.substr(0, eq);
        const auto vals = parse_values(item.substr(eq + 1));
        if (key == "p") ps.insert(ps.end(), vals.begin(), vals.end());
        else if (key == "q") qs.insert(qs.end(), vals.begin(), vals.end());
        else throw ConfigError("unknown lattice key '" + key + "'");
    }
    if (ps.empty() || qs.empty()) throw ConfigError("triplet lattice needs both p and q values");
    return {ps, qs};
}

int cmd_params(const Common& c, const ParamsOpts& o) {
    const auto cfg = load_config(c.config_path);
    const auto p = resolve_model(o.model, cfg);
    std::ostringstream os;
    os << "n," << p.n << "\nbeta," << num(p.beta) << "\nk," << p.k << "\nlambda," << num(p.lambda) << "\nmu_k,"
       << num(p.mu_k) << "\nmu," << num(p.mu) << "\ngamma," << num(p.gamma) << "\nalpha," << num(p.alpha) << "\n";
    std::cout << os.str();

    const std::string lattice = o.triplets.empty() ? get_or(cfg, "triplets", std::string()) : o.triplets;
    if (!lattice.empty()) {
        const auto [ps, qs] = parse_lattice(lattice);
        std::ostringstream t;
        t << "q,p,m,kind\n";
        for (double q : qs)
            for (double pp : ps) {
                if (!(pp >= q) || !(q > 1.0)) {
                    t << num(q) << "," << num(pp) << ",nan,neither\n";
                    continue;
                }
                const double m = admissible_m(pp, q, p);
                const auto kind = m > 1.0 ? to_string(classify_triplet(m, pp, q, p).kind) : std::string_view("neither");
                t << num(q) << "," << num(pp) << "," << num(m) << "," << kind << "\n";
            }
        std::cout << t.str();
        if (!c.out_dir.empty()) write_atomic(out_path(c, "triplets.csv"), t.str());
    }
    if (!c.out_dir.empty()) write_atomic(out_path(c, "params.csv"), os.str());
    return ok;
}

// ---- verify ----

struct VerifyOpts {
    ModelFlags model;
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::optional<int> young_pairs;
};

int cmd_verify(const Common& c, const VerifyOpts& o) {
    const auto cfg = load_config(c.config_path);
    std::vector<std::string> suites = o.suites;
    if (suites.empty()) suites = get_or(cfg, "suites", std::vector<std::string>{});
    if (suites.size() == 1 && suites[0] == "all") suites = app::suite_names();
    if (suites.empty()) throw ConfigError("no verification suite selected (use --suite NAME or --suite all)");
    for (const auto& s : suites) {
        const auto& names = app::suite_names();
        if (std::find(names.begin(), names.end(), s) == names.end()) throw ConfigError("unknown suite '" + s + "'");
    }

    app::SuiteOptions so;
    const auto m = section(cfg, "model");
    so.n = o.model.n ? o.model.n : (m.contains("n") ? std::optional<int>(get_or(m, "n", 0)) : std::nullopt);
    so.beta = o.model.beta ? o.model.beta : (m.contains("beta") ? std::optional<double>(get_or(m, "beta", 0.0)) : std::nullopt);
    so.k = o.model.k ? o.model.k : (m.contains("k") ? std::optional<int>(get_or(m, "k", 0)) : std::nullopt);
    so.seed = o.seed.value_or(get_or(cfg, "seed", so.seed));
    so.young_pairs = o.young_pairs.value_or(get_or(cfg, "young_pairs", so.young_pairs));
    if (so.young_pairs < 1) throw ConfigError("young_pairs must be >= 1");

    ordered_json checks = ordered_json::array();
    bool pass = true;
    for (const auto& s : suites) {
        const auto rows = app::run_suite(s, so);
        for (const auto& r : rows) {
            ordered_json j;
            j["suite"] = s;
            j["name"] = r.name;
            j["anchor"] = r.anchor;
            j["measured"] = r.measured;
            j["tolerance"] = r.tolerance;
            j["pass"] = r.pass;
            checks.push_back(std::move(j));
            std::cout << (r.pass ? "PASS " : "FAIL ") << s << ": " << r.name << "  measured=" << num(r.measured)
                      << " tolerance=" << num(r.tolerance) << "\n";
        }
        pass = pass && app::all_pass(rows);
    }
    ordered_json report;
    report["suites"] = suites;
    report["all_pass"] = pass;
    report["checks"] = std::move(checks);
    write_atomic(out_path(c, "verify.json"), report.dump(2) + "\n");
    return pass ? ok : numerical_error;
}

// ---- evolve ----

struct EvolveOpts {
    ModelFlags model;
    std::string scenario;
    std::optional<double> b, amplitude, age, t_end, q, threshold;
    std::optional<std::string> sign;
    std::optional<int> steps;
    std::vector<double> dump_times;
    bool fail_on_blowup = false;
};

Sign parse_sign(const std::string& s) {
    if (s == "focusing") return Sign::focusing;
    if (s == "defocusing") return Sign::defocusing;
    throw ConfigError("sign must be 'focusing' or 'defocusing'");
}

app::EvolveScenario resolve_scenario(const EvolveOpts& o, const ordered_json& cfg) {
    const std::string name = o.scenario.empty() ? get_or(cfg, "scenario", std::string()) : o.scenario;
    app::EvolveScenario s;
    if (name == "blowup") s = app::blowup_scenario();
    else if (!name.empty()) throw ConfigError("unknown scenario '" + name + "'");
    else s.params = resolve_model(o.model, cfg);
    if (!name.empty() && (o.model.n || o.model.beta || o.model.k || cfg.contains("model"))) {
        throw ConfigError("a named scenario fixes the model; drop the model flags");
    }

    const auto g = section(cfg, "grid");
    s.design.age_min = get_or(g, "age_min", s.design.age_min);
    s.design.age_max = get_or(g, "age_max", s.design.age_max);
    s.design.decay = get_or(g, "decay", s.design.decay);
    s.design.panels = get_or(g, "panels", s.design.panels);
    s.design.order = get_or(g, "order", s.design.order);
    s.design.log_share = get_or(g, "log_share", s.design.log_share);
    s.design.r_min = get_or(g, "r_min", s.design.r_min);

    const auto d = section(cfg, "data");
    s.amplitude = o.amplitude.value_or(get_or(d, "amplitude", s.amplitude));
    s.age = o.age.value_or(get_or(d, "age", s.age));
    if (!(s.age > 0.0)) throw ConfigError("data age must be > 0");

    const auto nl = section(cfg, "nonlinearity");
    const double b = o.b.value_or(get_or(nl, "b", s.config.nonlinearity.b));
    const Sign sign = o.sign ? parse_sign(*o.sign)
                             : (nl.contains("sign") ? parse_sign(get_or(nl, "sign", std::string())) : s.config.nonlinearity.sign);
    s.config.nonlinearity = make_nonlinearity(b, sign, s.params);

    const auto e = section(cfg, "evolution");
    auto& ec = s.config;
    ec.t_end = o.t_end.value_or(get_or(e, "t_end", ec.t_end));
    ec.steps = o.steps.value_or(get_or(e, "steps", ec.steps));
    ec.q = o.q.value_or(get_or(e, "q", ec.q));
    ec.blowup_threshold = o.threshold.value_or(get_or(e, "blowup_threshold", ec.blowup_threshold));
    ec.picard_tol = get_or(e, "picard_tol", ec.picard_tol);
    ec.picard_max_iter = get_or(e, "picard_max_iter", ec.picard_max_iter);
    ec.substeps = get_or(e, "substeps", ec.substeps);
    ec.max_halvings = get_or(e, "max_halvings", ec.max_halvings);
    ec.spectral_tail_tol = get_or(e, "spectral_tail_tol", ec.spectral_tail_tol);
    if (e.contains("triplet")) {
        const auto t = e.at("triplet");
        const auto trip = classify_triplet(get_or(t, "m", kInf), get_or(t, "p", 2.0), get_or(t, "q", 2.0), s.params);
        if (trip.kind == TripletKind::neither) throw ConfigError("evolution.triplet is neither admissible nor generalized");
        ec.triplet = trip;
    }
    if (!(ec.t_end > 0.0) || ec.steps < 1 || !(ec.q >= 1.0) || !(ec.blowup_threshold > 0.0) || ec.substeps < 1) {
        throw ConfigError("invalid evolution settings");
    }
    return s;
}

int cmd_evolve(const Common& c, const EvolveOpts& o) {
    const auto cfg = load_config(c.config_path);
    const auto s = resolve_scenario(o, cfg);
    const auto plan = plan_transform(s.params, s.design);
    const auto res = picard_solve(app::initial_data(s, *plan), s.config, *plan);
    const auto& tr = res.trajectory;

    std::string csv = tr.triplet ? "t,norm_q,norm_p_weighted\n" : "t,norm_q\n";
    for (std::size_t j = 0; j < tr.size(); ++j) {
        csv += num(tr.times[j]) + "," + num(tr.norms_q[j]);
        if (tr.triplet) csv += "," + num(tr.norms_p_weighted[j]);
        csv += "\n";
    }
    write_atomic(out_path(c, "trajectory.csv"), csv);
    write_atomic(out_path(c, "final_state.csv"), to_csv(tr.states.back()));

    std::vector<double> dumps = o.dump_times;
    if (dumps.empty()) {
        const auto e = section(cfg, "evolution");
        if (e.contains("dump_times")) dumps = e.at("dump_times").get<std::vector<double>>();
    }
    ordered_json dumped = ordered_json::array();
    for (std::size_t i = 0; i < dumps.size(); ++i) {
        const double t = dumps[i];
        if (!(t >= 0.0)) throw ConfigError("dump times must be >= 0");
        // times past the end of a stopped run are skipped
        if (t > tr.times.back()) continue;
        const std::string name = "state_" + std::to_string(i) + ".csv";
        write_atomic(out_path(c, name), to_csv(tr.state_at(t)));
        dumped.push_back({{"t", t}, {"file", name}});
    }

    ordered_json j;
    j["n"] = s.params.n;
    j["beta"] = s.params.beta;
    j["k"] = s.params.k;
    j["b"] = s.config.nonlinearity.b;
    j["sign"] = std::string(to_string(s.config.nonlinearity.sign));
    j["q"] = s.config.q;
    j["nodes"] = plan->physical_grid->size();
    j["stop_reason"] = std::string(to_string(res.stop));
    j["t_final"] = tr.times.back();
    j["norm_q_final"] = tr.norms_q.back();
    j["windows"] = res.windows;
    j["halvings"] = res.halvings;
    j["max_iterations"] = res.max_iterations;
    j["blowup_detected"] = res.blowup.detected;
    j["fitted"] = res.blowup.fitted;
    j["T_star_fit"] = res.blowup.T_star_fit;
    j["exponent_fit"] = res.blowup.exponent_fit;
    j["C_fit"] = res.blowup.C_fit;
    j["lower_bound_exponent"] = res.blowup.lower_bound_exponent;
    j["samples_used"] = res.blowup.samples_used;
    j["note"] = res.blowup.note;
    j["dumps"] = dumped;
    write_atomic(out_path(c, "evolve.json"), j.dump(2) + "\n");

    std::cout << "stop_reason " << to_string(res.stop) << "  t_final " << num(tr.times.back()) << "  norm_q "
              << num(tr.norms_q.back()) << "\n";
    if (res.blowup.fitted) {
        std::cout << "blow-up fit: T* " << num(res.blowup.T_star_fit) << "  exponent " << num(res.blowup.exponent_fit)
                  << "  lower bound " << num(res.blowup.lower_bound_exponent) << "\n";
    }
    if (res.blowup.detected && o.fail_on_blowup) return blowup_exit;
    if (res.stop == StopReason::unresolved) return numerical_error;
    return ok;
}

// ---- decay-fit ----

struct DecayOpts {
    ModelFlags model;
    std::string input;
    std::vector<double> m;
    std::optional<double> t_min, t_max;
    std::optional<int> samples;
};

int cmd_decay_fit(const Common& c, const DecayOpts& o) {
    const auto cfg = load_config(c.config_path);
    ordered_json report;
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw ConfigError("cannot open input '" + o.input + "'");
        std::vector<double> t, v;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw ConfigError("input rows look like t,value");
            try {
                t.push_back(std::stod(line.substr(0, comma)));
                v.push_back(std::stod(line.substr(comma + 1)));
            } catch (const std::logic_error&) {
                throw ConfigError("cannot parse input row '" + line + "'");
            }
        }
        report["source"] = o.input;
        report["samples"] = t.size();
        report["fitted_exponent"] = decay_exponent_fit(t, v);
    } else {
        const auto p = resolve_model(o.model, cfg);
        const auto d = section(cfg, "decay_fit");
        auto ms = o.m.empty() ? get_or(d, "m", std::vector<double>{1.0, 2.0, 4.0}) : o.m;
        const double t_min = o.t_min.value_or(get_or(d, "t_min", 0.1));
        const double t_max = o.t_max.value_or(get_or(d, "t_max", 10.0));
        const int samples = o.samples.value_or(get_or(d, "samples", 9));
        if (!(t_min > 0.0) || !(t_max > t_min) || samples < 5) throw ConfigError("need 0 < t_min < t_max and samples >= 5");
        report["n"] = p.n;
        report["beta"] = p.beta;
        report["k"] = p.k;
        ordered_json rows = ordered_json::array();
        for (double m : ms) {
            if (!(m >= 1.0)) throw ConfigError("kernel norm exponent m must be >= 1");
            GridDesign gd;
            gd.age_min = std::isinf(m) ? t_min : t_min / m;
            gd.age_max = t_max;
            const auto grids = design_grids(p, gd);
            std::vector<double> t, v;
            for (int i = 0; i < samples; ++i) {
                t.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (samples - 1)));
                v.push_back(kernel_norm(t.back(), m, p, *grids.physical));
            }
            const double fit = decay_exponent_fit(t, v);
            const double expected = p.gamma * (1.0 / m - 1.0);
            ordered_json r;
            r["m"] = m;
            r["fitted_exponent"] = fit;
            r["expected_exponent"] = expected;
            r["abs_error"] = std::abs(fit - expected);
            rows.push_back(r);
            std::cout << "m " << num(m) << "  fitted " << num(fit) << "  expected " << num(expected) << "\n";
        }
        report["kernel_norms"] = rows;
    }
    write_atomic(out_path(c, "decay_fit.json"), report.dump(2) + "\n");
    if (!o.input.empty()) std::cout << "fitted_exponent " << num(report["fitted_exponent"].get<double>()) << "\n";
    return ok;
}

// ---- young-audit ----

struct YoungOpts {
    ModelFlags model;
    std::optional<int> pairs;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> triples;
};

int cmd_young(const Common& c, const YoungOpts& o) {
    const auto cfg = load_config(c.config_path);
    const auto p = resolve_model(o.model, cfg);
    const auto y = section(cfg, "young");
    const int pairs = o.pairs.value_or(get_or(y, "pairs", 20));
    const std::uint64_t seed = o.seed.value_or(get_or(y, "seed", std::uint64_t{20240611}));
    if (pairs < 1) throw ConfigError("pairs must be >= 1");
    std::vector<std::array<double, 3>> triples;
    std::vector<std::string> specs = o.triples.empty() ? get_or(y, "triples", std::vector<std::string>{}) : o.triples;
    for (const auto& s : specs) {
        std::array<double, 3> t{};
        if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &t[0], &t[1], &t[2]) != 3) throw ConfigError("triples look like a,b,c");
        triples.push_back(t);
    }
    if (triples.empty()) triples = {{2.0, 4.0 / 3.0, 4.0 / 3.0}, {3.0, 1.5, 1.5}, {1.0, 1.0, 1.0}};

    GridDesign d;
    d.age_min = 0.5;
    d.age_max = 4.0;
    d.panels = 96;
    const auto plan = plan_transform(p, d);
    const double e = 2.0 - p.beta;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> age(0.5, 2.0), unit(0.0, 1.0);
    auto random_data = [&] {
        const double s1 = age(rng), s2 = age(rng), c1 = unit(rng), c2 = unit(rng), w = unit(rng);
        return sample(
            plan->physical_grid,
            [&](double r) {
                const double re = std::pow(r, e);
                return std::pow(r, p.k) * (std::exp(-re / (e * e * s1)) * (1.0 + c1 * re) +
                                           w * std::exp(-re / (e * e * s2)) * (1.0 + c2 * re));
            },
            Space::physical, p);
    };
    std::string csv = "trial,a,b,c,lhs,rhs,ratio,pass\n";
    bool pass = true;
    for (int trial = 0; trial < pairs; ++trial) {
        const auto f = random_data();
        const auto g = random_data();
        for (const auto& t : triples) {
            const auto r = young_audit(f, g, t[0], t[1], t[2], *plan);
            const bool ok_row = r.lhs <= r.rhs * (1.0 + 1e-8);
            pass = pass && ok_row;
            csv += std::to_string(trial) + "," + num(t[0]) + "," + num(t[1]) + "," + num(t[2]) + "," + num(r.lhs) + "," +
                   num(r.rhs) + "," + num(r.lhs / r.rhs) + "," + (ok_row ? "true" : "false") + "\n";
        }
    }
    write_atomic(out_path(c, "young_audit.csv"), csv);
    std::cout << (pass ? "all pairs satisfy the Young bound\n" : "Young bound violated\n");
    return pass ? ok : numerical_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Hankel transform calculus: verification suites and radial evolutions"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Common common;
    app.add_option("--config", common.config_path, "JSON config file");
    app.add_option("--out", common.out_dir, "output directory (default: current directory)");
    app.add_option("--threads", common.threads, "worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);

    ParamsOpts params_opts;
    auto* params = app.add_subcommand("params", "derived model parameters and a triplet classification table");
    add_model_flags(params, params_opts.model);
    params->add_option("--triplets", params_opts.triplets, "exponent lattice, e.g. q=2,p=2..6");

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand("verify", "run verification suites and write verify.json");
    add_model_flags(verify, verify_opts.model);
    verify->add_option("--suite", verify_opts.suites, "suite name (repeatable) or 'all'")->delimiter(',');
    verify->add_option("--seed", verify_opts.seed, "seed for randomized suites");
    verify->add_option("--young-pairs", verify_opts.young_pairs, "random pairs in the Young suite");

    EvolveOpts evolve_opts;
    auto* evolve = app.add_subcommand("evolve", "Picard evolution; writes trajectory.csv, final_state.csv, evolve.json");
    add_model_flags(evolve, evolve_opts.model);
    evolve->add_option("--scenario", evolve_opts.scenario, "built-in setup: blowup");
    evolve->add_option("--b", evolve_opts.b, "nonlinearity power");
    evolve->add_option("--sign", evolve_opts.sign, "focusing | defocusing");
    evolve->add_option("--amplitude", evolve_opts.amplitude, "data amplitude");
    evolve->add_option("--age", evolve_opts.age, "data Gaussian age");
    evolve->add_option("--t-end", evolve_opts.t_end, "final time");
    evolve->add_option("--steps", evolve_opts.steps, "window cap t_end / steps");
    evolve->add_option("--q", evolve_opts.q, "exponent of the monitored norm");
    evolve->add_option("--threshold", evolve_opts.threshold, "L^q norm treated as blow-up");
    evolve->add_option("--dump-times", evolve_opts.dump_times, "times of per-state CSV dumps")->delimiter(',');
    evolve->add_flag("--fail-on-blowup", evolve_opts.fail_on_blowup, "exit 3 when blow-up is detected");

    DecayOpts decay_opts;
    auto* decay = app.add_subcommand("decay-fit", "power-law fit of kernel norms or of a t,value CSV");
    add_model_flags(decay, decay_opts.model);
    decay->add_option("--input", decay_opts.input, "CSV with header and t,value rows");
    decay->add_option("--m", decay_opts.m, "kernel norm exponents")->delimiter(',');
    decay->add_option("--t-min", decay_opts.t_min, "first time");
    decay->add_option("--t-max", decay_opts.t_max, "last time");
    decay->add_option("--samples", decay_opts.samples, "number of times (>= 5)");

    YoungOpts young_opts;
    auto* young = app.add_subcommand("young-audit", "randomized Young inequality audit; writes young_audit.csv");
    add_model_flags(young, young_opts.model);
    young->add_option("--pairs", young_opts.pairs, "random (f, g) pairs");
    young->add_option("--seed", young_opts.seed, "random seed");
    young->add_option("--triple", young_opts.triples, "exponents a,b,c (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (common.threads > 0) set_thread_count(common.threads);
        if (*params) return cmd_params(common, params_opts);
        if (*verify) return cmd_verify(common, verify_opts);
        if (*evolve) return cmd_evolve(common, evolve_opts);
        if (*decay) return cmd_decay_fit(common, decay_opts);
        if (*young) return cmd_young(common, young_opts);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return config_error;
    } catch (const ordered_json::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical_error;
    }
    return config_error;
}
