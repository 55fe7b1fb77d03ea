#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wgqed/analytics.hpp"
#include "wgqed/basis.hpp"
#include "wgqed/config.hpp"
#include "wgqed/effective.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/meanfield.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/polariton.hpp"
#include "wgqed/sweep.hpp"

using namespace wgqed;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;

// Keys beyond the sweep schema that individual subcommands read.
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k = sweep_config_keys();
        for (const char* extra : {"spectrum.k", "threshold.n", "threshold.delta_over_u", "effective.n",
                                  "effective.u_over_g", "polariton.k", "meanfield.d", "meanfield.g", "meanfield.u",
                                  "meanfield.delta", "meanfield.mu", "meanfield.target_n", "meanfield.summary"})
            k.insert(extra);
        return k;
    }();
    return keys;
}

// One subcommand: flag values land in config keys, overriding --config.
struct Command {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> flag_values;  // key -> raw flag text
    std::vector<std::pair<CLI::Option*, std::string>> bindings;
    std::string config_path;
    std::function<void(const Config&)> run;

    void bind(const std::string& flag, const std::string& key, const std::string& help) {
        auto* opt = app->add_option(flag, flag_values[key], help)->allow_extra_args(false);
        bindings.emplace_back(opt, key);
    }

    Config resolve() const {
        Config c = config_path.empty() ? Config{} : Config::load(config_path);
        for (const auto& [opt, key] : bindings)
            if (opt->count() > 0) c.set(key, flag_values.at(key));
        c.require_known(known_keys());
        return c;
    }
};

void add_common(Command& cmd) {
    cmd.app->add_option("--config", cmd.config_path, "key = value or JSON config file");
    cmd.bind("--format", "output.format", "csv or json");
    cmd.bind("--out", "output.path", "output file (default: stdout)");
    cmd.bind("--threads", "run.threads", "worker threads (default: WGQED_THREADS or 1)");
    cmd.bind("--seed", "solver.seed", "solver start-vector seed");
}

void add_model(Command& cmd) {
    cmd.bind("--L", "lattice.L", "number of cavities");
    cmd.bind("--d", "lattice.d", "atom spacing");
    cmd.bind("--cells", "lattice.cells", "unit cells (L = cells * d)");
    cmd.bind("--atoms", "lattice.atoms", "atom sites, e.g. 0,3 or none");
    cmd.bind("--boundary", "lattice.boundary", "periodic or open");
    cmd.bind("--j", "model.j", "hopping J");
    cmd.bind("--g", "model.g_over_j", "coupling g/J");
    cmd.bind("--u", "model.u_over_j", "Kerr U/J");
    cmd.bind("--delta", "model.delta", "detuning");
    cmd.bind("--n-ex", "sector.n_ex", "excitation number");
    cmd.bind("--n-trunc", "sector.n_trunc", "photon cap per cavity");
    cmd.bind("--tol", "solver.tol", "eigensolver tolerance");
}

void add_grid(Command& cmd) {
    cmd.bind("--g-values", "sweep.g_values", "g/J grid");
    cmd.bind("--u-values", "sweep.u_values", "U/J grid");
    cmd.bind("--n-ex-values", "sweep.n_ex_values", "excitation numbers");
    cmd.bind("--max-points", "sweep.max_points", "stop after this many new points");
    cmd.bind("--x-ref", "sweep.x_ref", "two-point reference site");
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::string> rows;
    nlohmann::ordered_json extra;  // merged into JSON output
};

std::string row_of(std::initializer_list<std::string> cells) {
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string num(double v) { return format_number(v); }

void emit(const Config& c, const SweepConfig& s, const Table& t) {
    std::ostringstream body;
    write_table(body, s.format, s.config_hash, s.solver.seed, t.columns, t.rows);
    std::string text = body.str();
    if (s.format == "json" && !t.extra.empty()) {
        auto j = nlohmann::ordered_json::parse(text);
        for (auto it = t.extra.begin(); it != t.extra.end(); ++it) j[it.key()] = it.value();
        text = j.dump(2) + "\n";
    }
    const std::string path = c.get_string("output.path", "");
    if (path.empty()) {
        std::cout << text;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << text;
        if (!out) throw Error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

// The single grid point of a non-sweep command.
ModelSpec single_point(const SweepConfig& s) {
    if (s.size() != 1) throw ConfigError("this command takes one (g, U, n_ex) point", {"sweep.g_values", "sweep.u_values"});
    return point_spec(s, grid_point(s, 0));
}

// Sampled ranges ("lo..hi" without a count) for continuous axes.
std::vector<double> continuous(const Config& c, const std::string& key, const std::string& fallback) {
    std::string text = c.get_string(key, fallback);
    std::string out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.find("..") != std::string::npos && item.find(':') == std::string::npos) item += ":51";
        out += (out.empty() ? "" : ",") + item;
    }
    try {
        return parse_values(out);
    } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what(), {key});
    }
}

void run_spectrum(const Config& c) {
    const auto s = sweep_config_from(c);
    const ModelSpec m = single_point(s);
    const int k = c.get_int("spectrum.k", 1);
    if (k < 1) throw ConfigError("spectrum.k must be >= 1", {"spectrum.k"});
    const auto basis = enumerate_sector(m);
    const auto r = low_spectrum(build_hamiltonian(m, basis), static_cast<std::size_t>(k), s.solver);
    Table t{{"index", "energy", "dim", "residual"}, {}, {}};
    for (std::size_t i = 0; i < r.energies.size(); ++i)
        t.rows.push_back(row_of({std::to_string(i), num(r.energies[i]), std::to_string(basis.dim()), num(r.residual)}));
    emit(c, s, t);
}

void run_threshold(const Config& c) {
    const auto s = sweep_config_from(c);
    std::vector<int> ns;
    try {
        ns = parse_int_values(c.get_string("threshold.n", "2..5"));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("key 'threshold.n': ") + e.what(), {"threshold.n"});
    }
    const auto deltas = continuous(c, "threshold.delta_over_u", "0");
    Table t{{"n", "delta_over_U", "g_b_over_U"}, {}, {}};
    for (int n : ns) {
        if (n < 2) throw ConfigError("threshold.n values must be >= 2", {"threshold.n"});
        for (double d : deltas) t.rows.push_back(row_of({std::to_string(n), num(d), num(strong_binding_threshold(n, d, 1.0))}));
    }
    emit(c, s, t);
}

void run_grid(const Config& c, SweepMode mode) {
    Config cc = c;
    cc.set("sweep.mode", mode == SweepMode::binding ? "binding" : "ground");
    if (mode == SweepMode::binding && !cc.has("sweep.n_ex_values")) cc.set("sweep.n_ex_values", "2");
    auto s = sweep_config_from(cc);
    const auto sum = run_sweep(s);
    if (s.out_path.empty()) {
        write_table(std::cout, s.format, s.config_hash, s.solver.seed, sweep_columns(s.mode), sum.rows);
        return;
    }
    std::cerr << "computed " << sum.computed << ", resumed " << sum.resumed << " of " << sum.total
              << (sum.complete ? "" : " (incomplete)") << '\n';
}

void run_correlations(const Config& c) {
    const auto s = sweep_config_from(c);
    const ModelSpec m = single_point(s);
    const auto basis = enumerate_sector(m);
    const auto r = ground_state(build_hamiltonian(m, basis), s.solver);
    const int ref = s.x_ref >= 0 ? s.x_ref : (m.atom_sites.empty() ? 0 : m.atom_sites.front());
    const auto rep = observe(r.ground_vector(), basis, ref, false);
    const auto row = two_point_row(r.ground_vector(), basis, ref);
    Table t{{"x", "C_x", "density_x", "two_point_x_ref", "impurity"}, {}, {}};
    const double nan = std::nan("");
    for (int x = 0; x < m.L; ++x) {
        const auto sx = static_cast<std::size_t>(x);
        t.rows.push_back(row_of({std::to_string(x), num(rep.c_x.defined ? rep.c_x.values[sx] : nan), num(rep.densities[sx]),
                                 num(row[sx]), m.atom_at(x) >= 0 ? "1" : "0"}));
    }
    emit(c, s, t);
}

void run_effective(const Config& c) {
    Config cc = c;
    if (!cc.has("lattice.L")) cc.set("lattice.L", "100");
    const auto s = sweep_config_from(cc);
    ModelSpec m = single_point(s);
    if (m.num_atoms() != 1) throw ConfigError("effective needs exactly one atom", {"lattice.atoms"});
    const int N = c.get_int("effective.n", 2);
    if (N < 1) throw ConfigError("effective.n must be >= 1", {"effective.n"});
    const auto ratios = continuous(c, "effective.u_over_g", "0..2");
    Table t{{"U_over_g", "occupation", "delta_x_ph", "energy"}, {}, {}};
    for (double r : ratios) {
        m.nonlinearity = NonlinearitySpec::kerr(r * m.g);
        const auto obs = effective_ground_observables(build_effective_chain(N, m));
        t.rows.push_back(row_of({num(r), num(obs.impurity_occupation), num(obs.delta_x_ph), num(obs.energy)}));
    }
    emit(c, s, t);
}

void run_polariton(const Config& c) {
    const auto s = sweep_config_from(c);
    const ModelSpec m = single_point(s);
    const int k = c.get_int("polariton.k", 10);
    if (k < 1) throw ConfigError("polariton.k must be >= 1", {"polariton.k"});
    const auto cmp = compare_spectra(m, static_cast<std::size_t>(k), s.solver);
    Table t{{"index", "E_full", "E_pol", "deviation"}, {}, {}};
    for (std::size_t i = 0; i < cmp.full.size(); ++i)
        t.rows.push_back(row_of({std::to_string(i), num(cmp.full[i]), num(cmp.polariton[i]), num(cmp.deviation[i])}));
    t.extra["width"] = cmp.width;
    t.extra["max_deviation"] = cmp.max_deviation;
    emit(c, s, t);
}

void run_meanfield(const Config& c) {
    const auto s = sweep_config_from(c);
    MeanFieldCell cell;
    cell.d = c.get_int("meanfield.d", 1);
    cell.g = c.get_double("meanfield.g", 1.0);
    cell.delta = c.get_double("meanfield.delta", 0.0);
    cell.nonlinearity = NonlinearitySpec::kerr(c.get_double("meanfield.u", 0.0));
    try {
        cell.validate();
    } catch (const SpecError& e) {
        throw ConfigError(e.what(), {"meanfield.d", "meanfield.g"});
    }
    const auto mus = continuous(c, "meanfield.mu", "-1.5..-0.2:81");
    const int target = c.get_int("meanfield.target_n", 0);
    const auto res = lobe_scan(cell, mus, target, resolve_threads(s.threads));

    Table t{{"mu", "j_c", "mean_n", "lobe_id"}, {}, {}};
    for (const auto& p : res.points) {
        const int lobe = p.degenerate ? -1 : p.mean_n;
        t.rows.push_back(row_of({num(p.mu), num(p.j_c.value_or(std::nan(""))), std::to_string(p.mean_n), std::to_string(lobe)}));
    }
    nlohmann::ordered_json tips = nlohmann::ordered_json::array();
    for (const auto& [n, tip] : res.tips) tips.push_back({{"lobe_id", n}, {"mu", tip.mu}, {"j_c", tip.j_c}});
    t.extra["tips"] = tips;
    emit(c, s, t);

    std::string summary = c.get_string("meanfield.summary", "");
    if (summary.empty() && s.format == "csv" && !s.out_path.empty()) summary = s.out_path + ".tips.json";
    if (!summary.empty()) {
        nlohmann::ordered_json j;
        j["meta"] = {{"version", kVersion}, {"config_hash", s.config_hash}, {"seed", s.solver.seed}};
        j["tips"] = tips;
        std::ofstream out(summary);
        if (!out) throw Error("cannot write " + summary);
        out << j.dump(2) << '\n';
    }
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
    if (dynamic_cast<const ResourceError*>(&e)) return "resource";
    if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
    if (dynamic_cast<const SpecError*>(&e)) return "spec";
    if (dynamic_cast<const DegenerateGroundStateError*>(&e)) return "degenerate";
    if (dynamic_cast<const TruncationError*>(&e)) return "truncation";
    if (dynamic_cast<const EmptyLobeError*>(&e)) return "empty_lobe";
    return "error";
}

void report(const std::string& kind, const std::string& message, const std::vector<std::string>& keys = {}) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    if (!keys.empty()) j["keys"] = keys;
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state laboratory for waveguide QED lattices", "wgqed"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    auto make = [&](const std::string& name, const std::string& help, std::function<void(const Config&)> run) -> Command& {
        auto cmd = std::make_unique<Command>();
        cmd->app = app.add_subcommand(name, help);
        cmd->run = std::move(run);
        add_common(*cmd);
        commands.push_back(std::move(cmd));
        return *commands.back();
    };

    auto& spectrum = make("spectrum", "lowest eigenvalues of one sector", run_spectrum);
    add_model(spectrum);
    spectrum.bind("--k", "spectrum.k", "number of levels");

    auto& threshold = make("threshold", "strong-coupling binding thresholds g_b/U", run_threshold);
    threshold.bind("--n", "threshold.n", "photon numbers, e.g. 2..5");
    threshold.bind("--delta-over-u", "threshold.delta_over_u", "detunings in units of U, e.g. -2..3");

    auto& binding = make("binding", "two-photon binding energy over a (g, U) grid",
                         [](const Config& c) { run_grid(c, SweepMode::binding); });
    add_model(binding);
    add_grid(binding);

    auto& correlations = make("correlations", "density and two-point correlations of the ground state", run_correlations);
    add_model(correlations);
    correlations.bind("--x-ref", "sweep.x_ref", "reference site");

    auto& effective = make("effective", "impurity-chain occupation and spread versus U/g", run_effective);
    add_model(effective);
    effective.bind("--n", "effective.n", "excitation number N");
    effective.bind("--u-over-g", "effective.u_over_g", "U/g values, e.g. 0..2");

    auto& polariton = make("polariton-compare", "full versus lower-polariton spectrum", run_polariton);
    add_model(polariton);
    polariton.bind("--k", "polariton.k", "number of levels");

    auto& meanfield = make("meanfield", "unit-cell mean-field lobes", run_meanfield);
    meanfield.bind("--cell-d", "meanfield.d", "cavities per cell");
    meanfield.bind("--g", "meanfield.g", "coupling g");
    meanfield.bind("--u", "meanfield.u", "Kerr U");
    meanfield.bind("--delta", "meanfield.delta", "detuning");
    meanfield.bind("--mu", "meanfield.mu", "chemical potentials, e.g. -1.5..-0.2:81");
    meanfield.bind("--target-n", "meanfield.target_n", "lobe that must appear");
    meanfield.bind("--summary", "meanfield.summary", "lobe-tip JSON path");

    auto& phase = make("phase-diagram", "ground-state observables over a (g, U, n_ex) grid",
                       [](const Config& c) { run_grid(c, SweepMode::ground); });
    add_model(phase);
    add_grid(phase);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        report("usage", e.what());
        return kExitUsage;
    }

    for (const auto& cmd : commands) {
        if (!cmd->app->parsed()) continue;
        try {
            cmd->run(cmd->resolve());
            return 0;
        } catch (const ConfigError& e) {
            report("config", e.what(), e.keys);
            return kExitConfig;
        } catch (const std::exception& e) {
            report(error_kind(e), e.what());
            return kExitFailure;
        }
    }
    return kExitUsage;
}
