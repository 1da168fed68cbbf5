#include "corrbc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "corrbc/capacity_bounds.hpp"
#include "corrbc/covariance.hpp"
#include "corrbc/errors.hpp"
#include "corrbc/grouping.hpp"
#include "corrbc/montecarlo.hpp"
#include "corrbc/pilot_systems.hpp"
#include "corrbc/serialization.hpp"
#include "corrbc/table.hpp"
#include "corrbc/validation.hpp"

namespace corrbc {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"figure1", "figure3", "figure4", "figure5", "figure6",
                                      "figure7", "bounds",  "covariance", "validate"};

// Reads parameters with defaults and remembers which keys were consumed.
class Params {
public:
    explicit Params(const json& doc) : doc_(doc) {}

    template <class T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!doc_.contains(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        try {
            if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) {
                    throw ConfigError("");
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) {
                    throw ConfigError("");
                }
            }
            return v.get<T>();
        } catch (const std::exception&) {
            throw ConfigError("field '" + key + "': unexpected type or value " + v.dump());
        }
    }

    int positive(const std::string& key, int fallback) {
        const int v = get<int>(key, fallback);
        if (v < 1) {
            throw ConfigError("field '" + key + "': must be a positive integer");
        }
        return v;
    }

    double positive_real(const std::string& key, double fallback) {
        const double v = get<double>(key, fallback);
        if (!(v > 0.0)) {
            throw ConfigError("field '" + key + "': must be positive");
        }
        return v;
    }

    void reject_unknown() const {
        for (const auto& item : doc_.items()) {
            if (!used_.count(item.key())) {
                throw ConfigError("unknown field '" + item.key() + "'");
            }
        }
    }

private:
    const json& doc_;
    std::set<std::string> used_;
};

std::vector<int> range(int lo, int hi, int step = 1) {
    std::vector<int> v;
    for (int x = lo; x <= hi; x += step) {
        v.push_back(x);
    }
    return v;
}

std::string render(const Table& t, const std::string& format) { return format == "json" ? t.to_json() : t.to_csv(); }

MonteCarloConfig mc_config(Params& p, const ExperimentConfig& c, std::size_t trials, std::vector<double> snr) {
    MonteCarloConfig cfg;
    cfg.trials = static_cast<std::size_t>(p.positive("trials", static_cast<int>(trials)));
    cfg.snr_grid_db = p.get("snr_grid_db", snr);
    cfg.convergence_tol = p.positive_real("convergence_tol", 1e-6);
    cfg.max_iterations = p.positive("max_iterations", 500);
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    return cfg;
}

RunOutcome from_table(const Table& t, const std::string& format, std::size_t nonconverged = 0) {
    RunOutcome out;
    out.artifact = render(t, format);
    out.rows = t.rows.size();
    out.nonconverged = nonconverged;
    return out;
}

RunOutcome run_figure1(Params& p, const ExperimentConfig& c) {
    const auto tc = p.get<std::vector<int>>("tc_list", {32, 100});
    const auto g = p.get<std::vector<int>>("g_list", {1, 4, 8});
    const int max = p.positive("min_mk_max", 400);
    const auto grid = p.get<std::vector<int>>("min_mk_grid", range(1, max));
    p.reject_unknown();
    return from_table(figure1_dataset(tc, g, grid), c.format);
}

RunOutcome run_figure3(Params& p, const ExperimentConfig& c) {
    const int m = p.positive("m", 200);
    const int k = p.positive("k", 40);
    const int tc = p.positive("tc", 64);
    const int g = p.positive("g", 10);
    const double snr = p.positive_real("p", 30.0);
    p.reject_unknown();
    return from_table(figure3_dataset(m, k, tc, g, snr), c.format);
}

RunOutcome run_figure4(Params& p, const ExperimentConfig& c) {
    MonteCarloConfig cfg = mc_config(p, c, 1000, {-20.0, -10.0, 0.0, 10.0, 15.0, 20.0, 30.0});
    Figure4Setup s;
    s.antennas = p.positive("antennas", s.antennas);
    s.users = p.get("users", s.users);
    s.theta_min_deg = p.get("theta_min_deg", s.theta_min_deg);
    s.theta_max_deg = p.get("theta_max_deg", s.theta_max_deg);
    s.delta_min_deg = p.get("delta_min_deg", s.delta_min_deg);
    s.delta_max_deg = p.get("delta_max_deg", s.delta_max_deg);
    s.spacing = p.positive_real("spacing", s.spacing);
    p.reject_unknown();
    const DatasetResult r = figure4_dataset(cfg, s);
    return from_table(r.table, c.format, r.nonconverged);
}

RunOutcome run_figure5(Params& p, const ExperimentConfig& c) {
    const double mu = p.positive_real("mu", 2.0);
    const int g = p.positive("g", 10);
    const double snr = p.positive_real("p", 30.0);
    const auto tc = p.get<std::vector<int>>("tc_list", {32, 128});
    const auto grid = p.get<std::vector<int>>("min_mk_grid", range(10, 160, 10));
    p.reject_unknown();
    return from_table(figure5_dataset(mu, g, snr, tc, grid), c.format);
}

RunOutcome run_figure6(Params& p, const ExperimentConfig& c) {
    TddConfig cfg;
    cfg.alpha = p.get("alpha", cfg.alpha);
    cfg.tc = p.get("tc", cfg.tc);
    cfg.n1 = p.get("n1", cfg.n1);
    cfg.n2 = p.get("n2", cfg.n2);
    cfg.n_lln = p.get("n_lln", cfg.n_lln);
    const int k_max = p.positive("k_max", 300);
    std::vector<std::int64_t> def(static_cast<std::size_t>(k_max));
    std::iota(def.begin(), def.end(), std::int64_t{1});
    const auto grid = p.get("k_grid", def);
    p.reject_unknown();
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const TddLimits lim = tdd_limits(grid, cfg);
    RunOutcome out = from_table(lim.table, c.format);
    if (!lim.ordering_ok) {
        out.report = "breakpoints not strictly increasing: " + format_number(lim.saturation_start) + ", " +
                     format_number(lim.lln_entry) + ", " + format_number(lim.post_lln_ceiling) + "\n";
    }
    return out;
}

RunOutcome run_figure7(Params& p, const ExperimentConfig& c) {
    MonteCarloConfig cfg = mc_config(p, c, 200, {});
    Figure7Setup s;
    s.antennas = p.get("antennas", s.antennas);
    s.users = p.get("users", s.users);
    s.delta_ranges_deg = p.get("delta_ranges_deg", s.delta_ranges_deg);
    s.snr_db = p.get("snr_db", s.snr_db);
    s.theta_min_deg = p.get("theta_min_deg", s.theta_min_deg);
    s.theta_max_deg = p.get("theta_max_deg", s.theta_max_deg);
    s.spacing = p.positive_real("spacing", s.spacing);
    s.selection_factor = p.get("selection_factor", s.selection_factor);
    p.reject_unknown();
    if (!cfg.snr_grid_db.empty()) {
        throw ConfigError("field 'snr_grid_db': figure7 uses 'snr_db'");
    }
    const DatasetResult r = figure7_dataset(cfg, s);
    return from_table(r.table, c.format, r.nonconverged);
}

void add_result(Table& t, const std::string& name, const CapacityResult& r) {
    t.add_row({name, std::string(to_string(r.regime)), r.value_bits, r.bracket.lo, r.bracket.hi});
}

RunOutcome run_bounds(Params& p, const ExperimentConfig& c) {
    const int m = p.positive("m", 8);
    const int k = p.positive("k", 8);
    const int g = p.positive("g", 2);
    const double snr = p.positive_real("p", 1e4);
    if (m % g != 0 || k % g != 0) {
        throw ConfigError("fields 'm', 'k', 'g': G must divide M and K");
    }
    Spectra flat(static_cast<std::size_t>(g), std::vector<double>(static_cast<std::size_t>(m / g), static_cast<double>(g)));
    const Spectra spectra = p.get("spectra", flat);
    p.reject_unknown();
    if (static_cast<int>(spectra.size()) != g) {
        throw ConfigError("field 'spectra': expected one spectrum per group");
    }
    const int r = static_cast<int>(spectra.front().size());
    SystemParams params{m, k, g, r, k / g, 1, snr};
    Table t;
    t.columns = {"quantity", "regime", "value_bits", "bracket_lo_bits", "bracket_hi_bits"};
    add_result(t, "highsnr_sum_capacity", highsnr_sum_capacity(params, spectra, snr));
    add_result(t, "iid_baseline", iid_baseline(m, k, snr));
    if (k > 1) {
        add_result(t, "large_K_no_coop", large_K_scaling(m, k, snr, spectra, CoopMode::no_coop));
        add_result(t, "large_K_partial_coop", large_K_scaling(m, k, snr, spectra, CoopMode::partial_coop));
    }
    const auto distinct = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (params.kp <= r && r <= 12 && std::all_of(spectra.begin(), spectra.end(), distinct)) {
        t.add_row({std::string("vandermonde_highsnr"), std::string("r_ge_Kp"), vandermonde_highsnr(snr, spectra, params.kp),
                   0.0, 0.0});
    }
    if (spectra == flat && m == k) {
        t.add_row({std::string("rate_gap_equal_eigen"), std::string("r_ge_Kp"), rate_gap_equal_eigen(m, g), 0.0, 0.0});
    }
    return from_table(t, c.format);
}

RunOutcome run_covariance(Params& p, const ExperimentConfig& c) {
    OneRingGeometry geom;
    geom.theta = deg_to_rad(p.get("theta_deg", 0.0));
    geom.delta = deg_to_rad(p.get("delta_deg", 10.0));
    geom.spacing = p.get("spacing", 0.5);
    geom.antennas = p.positive("antennas", 8);
    p.reject_unknown();
    try {
        geom.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const CorrelationMatrix r = one_ring_correlation(geom);
    RunOutcome out;
    out.rows = static_cast<std::size_t>(r.m());
    if (c.format == "json") {
        out.artifact = correlation_to_json(r).dump() + "\n";
    } else {
        Table t;
        t.columns = {"lag", "re", "im"};
        const auto lags = r.lags();
        for (std::size_t n = 0; n < lags.size(); ++n) {
            t.add_row({static_cast<std::int64_t>(n), lags[n].real(), lags[n].imag()});
        }
        out.artifact = t.to_csv();
    }
    return out;
}

RunOutcome run_validate(Params& p, const ExperimentConfig& c) {
    ValidationOptions opt;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.trials = static_cast<std::size_t>(p.positive("trials", static_cast<int>(opt.trials)));
    p.reject_unknown();
    const auto results = run_invariant_suite(opt);
    Table t;
    t.columns = {"property", "passed", "detail"};
    RunOutcome out;
    for (const auto& r : results) {
        t.add_row({r.name, std::int64_t{r.passed ? 1 : 0}, r.detail});
        out.report += std::string(r.passed ? "[PASS] " : "[FAIL] ") + r.name + ": " + r.detail + "\n";
        out.failed_checks = out.failed_checks || !r.passed;
    }
    out.artifact = render(t, c.format);
    out.rows = t.rows.size();
    return out;
}

bool non_negative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

}  // namespace

unsigned default_threads() {
    if (const char* env = std::getenv("CORRBC_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig c;
    c.threads = default_threads();
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        const json& v = item.value();
        if (key == "command") {
            if (!v.is_string()) {
                throw ConfigError("field 'command': must be a string");
            }
            c.command = v.get<std::string>();
        } else if (key == "seed") {
            if (!non_negative_integer(v)) {
                throw ConfigError("field 'seed': must be a non-negative integer");
            }
            c.seed = v.get<std::uint64_t>();
        } else if (key == "output_path") {
            if (!v.is_string()) {
                throw ConfigError("field 'output_path': must be a string");
            }
            c.output_path = v.get<std::string>();
        } else if (key == "format") {
            if (!v.is_string()) {
                throw ConfigError("field 'format': must be a string");
            }
            c.format = v.get<std::string>();
        } else if (key == "threads") {
            if (!non_negative_integer(v) || v.get<std::uint64_t>() == 0) {
                throw ConfigError("field 'threads': must be a positive integer");
            }
            c.threads = v.get<unsigned>();
        } else {
            c.parameters[key] = v;
        }
    }
    if (!c.command.empty() && !kCommands.count(c.command)) {
        throw ConfigError("field 'command': unknown command '" + c.command + "'");
    }
    if (c.format != "csv" && c.format != "json") {
        throw ConfigError("field 'format': must be csv or json");
    }
    return c;
}

RunOutcome execute(const ExperimentConfig& config) {
    if (!kCommands.count(config.command)) {
        throw ConfigError("field 'command': missing or unknown '" + config.command + "'");
    }
    Params p(config.parameters);
    const std::string& cmd = config.command;
    if (cmd == "figure1") return run_figure1(p, config);
    if (cmd == "figure3") return run_figure3(p, config);
    if (cmd == "figure4") return run_figure4(p, config);
    if (cmd == "figure5") return run_figure5(p, config);
    if (cmd == "figure6") return run_figure6(p, config);
    if (cmd == "figure7") return run_figure7(p, config);
    if (cmd == "bounds") return run_bounds(p, config);
    if (cmd == "covariance") return run_covariance(p, config);
    return run_validate(p, config);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlated-fading broadcast channel capacity bounds and figure datasets"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string format;
    app.add_option("command", command, "figure1|figure3|figure4|figure5|figure6|figure7|bounds|covariance|validate");
    app.add_option("--config", config_path, "Flat JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--threads", threads, "Worker cap")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig config;
    try {
        json doc = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            try {
                doc = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
        }
        config = parse_config(doc);
        if (!command.empty()) {
            if (!config.command.empty() && config.command != command) {
                throw ConfigError("field 'command': config says '" + config.command + "' but '" + command +
                                  "' was requested");
            }
            config.command = command;
        }
        if (seed) config.seed = *seed;
        if (threads) config.threads = *threads;
        if (!format.empty()) config.format = format;
        if (!out_path.empty()) config.output_path = out_path;
        // Validates the command name before any work starts.
        if (!kCommands.count(config.command)) {
            throw ConfigError("field 'command': missing or unknown '" + config.command + "'");
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    RunOutcome result;
    try {
        result = execute(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostream* summary = &out;
    if (config.output_path.empty()) {
        out << result.artifact;
        summary = &err;
    } else {
        std::ofstream file(config.output_path, std::ios::binary);
        file << result.artifact;
        if (!file) {
            err << "cannot write " << config.output_path << "\n";
            return 3;
        }
    }
    *summary << result.report;
    std::ostringstream line;
    line.precision(3);
    line << std::fixed << config.command << ": rows=" << result.rows << " wall_s=" << wall
         << " nonconverged=" << result.nonconverged;
    if (config.command == "validate") {
        line << (result.failed_checks ? " status=FAIL" : " status=PASS");
    }
    *summary << line.str() << "\n";
    return result.failed_checks ? 1 : 0;
}

}  // namespace corrbc
