#include "wgqed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "wgqed/basis.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/observables.hpp"

namespace wgqed {

namespace {

std::vector<int> parse_atoms(const std::string& s) {
    if (s.empty() || s == "none") return {};
    return parse_int_values(s);
}

std::string error_code(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
    if (dynamic_cast<const ResourceError*>(&e)) return "resource";
    if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
    if (dynamic_cast<const SpecError*>(&e)) return "spec";
    return "error";
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

std::size_t count_fields(const std::string& row) { return static_cast<std::size_t>(std::count(row.begin(), row.end(), ',')) + 1; }

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header_comment(const std::string& config_hash, std::uint64_t seed) {
    return std::string("# wgqed ") + kVersion + " config_hash=" + config_hash + " seed=" + std::to_string(seed);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WGQED_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 4096) return static_cast<int>(v);
    }
    return 1;
}

const std::set<std::string>& sweep_config_keys() {
    static const std::set<std::string> keys = {
        "lattice.L",         "lattice.d",         "lattice.cells",     "lattice.atoms",
        "lattice.boundary",  "model.j",           "model.g_over_j",    "model.u_over_j",
        "model.delta",       "sector.n_ex",       "sector.n_trunc",    "solver.tol",
        "solver.seed",       "solver.dense_limit", "solver.max_krylov", "sweep.g_values",
        "sweep.u_values",    "sweep.n_ex_values", "sweep.mode",        "sweep.x_ref",
        "sweep.max_points",  "sweep.binding_correction", "output.path", "output.format",
        "run.threads",
    };
    return keys;
}

void SweepConfig::validate() const {
    if (g_values.empty() || u_values.empty() || n_ex_values.empty()) throw ConfigError("sweep grid is empty");
    if (format != "csv" && format != "json") throw ConfigError("output.format must be csv or json", {"output.format"});
    for (int n : n_ex_values)
        if (n < 0) throw ConfigError("sector.n_ex values must be >= 0", {"sweep.n_ex_values"});
    if (mode == SweepMode::binding && base.num_atoms() != 1)
        throw ConfigError("binding sweeps need exactly one atom", {"lattice.atoms"});
    // Every grid point must yield a valid model.
    for (std::size_t i = 0; i < size(); ++i) {
        try {
            point_spec(*this, grid_point(*this, i)).validate();
        } catch (const SpecError& e) {
            throw ConfigError(std::string("invalid grid point: ") + e.what());
        }
    }
}

SweepConfig sweep_config_from(const Config& c) {
    SweepConfig s;
    ModelSpec& m = s.base;
    try {
        m.boundary = boundary_from_string(c.get_string("lattice.boundary", "periodic"));
    } catch (const SpecError& e) {
        throw ConfigError(e.what(), {"lattice.boundary"});
    }
    const int d = c.get_int("lattice.d", 0);
    const int cells = c.get_int("lattice.cells", 0);
    if (cells > 0) {
        if (d < 1) throw ConfigError("lattice.cells needs lattice.d >= 1", {"lattice.d"});
        m.L = cells * d;
        for (int k = 0; k < cells; ++k) m.atom_sites.push_back(k * d);
    } else {
        m.L = c.get_int("lattice.L", 1);
        if (d > 0) {
            for (int x = 0; x < m.L; x += d) m.atom_sites.push_back(x);
        } else {
            try {
                m.atom_sites = parse_atoms(c.get_string("lattice.atoms", "0"));
            } catch (const ConfigError& e) {
                throw ConfigError(e.what(), {"lattice.atoms"});
            }
        }
    }
    m.J = c.get_double("model.j", 1.0);
    m.delta = c.get_double("model.delta", 0.0);
    s.n_trunc = c.get_int("sector.n_trunc", 0);
    s.g_values = c.get_doubles("sweep.g_values", {c.get_double("model.g_over_j", 0.0)});
    s.u_values = c.get_doubles("sweep.u_values", {c.get_double("model.u_over_j", 0.0)});
    s.n_ex_values = c.get_ints("sweep.n_ex_values", {c.get_int("sector.n_ex", 1)});
    const std::string mode = c.get_string("sweep.mode", "ground");
    if (mode == "ground") s.mode = SweepMode::ground;
    else if (mode == "binding") s.mode = SweepMode::binding;
    else throw ConfigError("sweep.mode must be ground or binding", {"sweep.mode"});
    s.x_ref = c.get_int("sweep.x_ref", -1);
    s.binding_correction = c.get_int("sweep.binding_correction", 1) != 0;
    s.solver.tol = c.get_double("solver.tol", s.solver.tol);
    if (!(s.solver.tol > 0.0)) throw ConfigError("solver.tol must be > 0", {"solver.tol"});
    const int seed = c.get_int("solver.seed", 1);
    if (seed < 0) throw ConfigError("solver.seed must be >= 0", {"solver.seed"});
    s.solver.seed = static_cast<std::uint64_t>(seed);
    s.solver.dense_limit = static_cast<std::size_t>(std::max(1, c.get_int("solver.dense_limit", 4000)));
    s.solver.max_krylov = static_cast<std::size_t>(std::max(0, c.get_int("solver.max_krylov", 0)));
    s.out_path = c.get_string("output.path", "");
    s.format = c.get_string("output.format", "csv");
    s.threads = c.get_int("run.threads", 0);
    s.max_points = static_cast<std::size_t>(std::max(0, c.get_int("sweep.max_points", 0)));
    // Keys that only steer execution stay out of the hash so resumes and
    // worker counts do not change the output.
    Config hashed;
    for (const auto& [k, v] : c.values())
        if (k != "run.threads" && k != "sweep.max_points" && k != "output.path") hashed.set(k, v);
    s.config_hash = hex64(fnv1a(hashed.canonical()));
    if (s.x_ref >= m.L) throw ConfigError("sweep.x_ref out of range", {"sweep.x_ref"});
    s.validate();
    return s;
}

GridPoint grid_point(const SweepConfig& cfg, std::size_t index) {
    const std::size_t ng = cfg.g_values.size();
    const std::size_t nu = cfg.u_values.size();
    GridPoint p;
    p.index = index;
    p.g_over_j = cfg.g_values[index % ng];
    p.u_over_j = cfg.u_values[(index / ng) % nu];
    p.n_ex = cfg.n_ex_values[index / (ng * nu)];
    return p;
}

ModelSpec point_spec(const SweepConfig& cfg, const GridPoint& p) {
    ModelSpec m = cfg.base;
    const double J = std::abs(m.J) > 0.0 ? std::abs(m.J) : 1.0;
    m.g = p.g_over_j * J;
    m.nonlinearity = NonlinearitySpec::kerr(p.u_over_j * J);
    m.n_ex = p.n_ex;
    m.n_trunc = cfg.n_trunc > 0 ? cfg.n_trunc : default_truncation(p.n_ex);
    return m;
}

std::vector<std::string> sweep_columns(SweepMode mode) {
    if (mode == SweepMode::binding)
        return {"index", "U_over_J", "g_over_J", "E_b", "E_single", "E_pair", "cos_theta1", "status"};
    return {"index",     "n_ex",   "g_over_J",     "U_over_J",       "energy",     "density_impurity",
            "density_mean", "g2_avg", "v_pol",     "v_atom",         "e_b",        "two_point_ref",
            "excitation_error", "iterations", "residual", "seed",    "status"};
}

std::string compute_row(const SweepConfig& cfg, std::size_t index) {
    const GridPoint p = grid_point(cfg, index);
    const double nan = std::nan("");
    std::vector<std::string> f;
    f.push_back(std::to_string(index));

    if (cfg.mode == SweepMode::binding) {
        f.push_back(format_number(p.u_over_j));
        f.push_back(format_number(p.g_over_j));
        try {
            BindingOptions bo;
            bo.finite_size_correction = cfg.binding_correction;
            bo.solver = cfg.solver;
            const auto b = binding_energy_n2(point_spec(cfg, p), bo);
            for (double v : {b.e_b, b.e_single, b.e_pair, b.cos_theta1}) f.push_back(format_number(v));
            f.push_back("ok");
        } catch (const Error& e) {
            for (int k = 0; k < 4; ++k) f.push_back(format_number(nan));
            f.push_back(error_code(e));
        }
        return join(f);
    }

    f.push_back(std::to_string(p.n_ex));
    f.push_back(format_number(p.g_over_j));
    f.push_back(format_number(p.u_over_j));
    try {
        const ModelSpec spec = point_spec(cfg, p);
        const auto basis = enumerate_sector(spec);
        const auto r = ground_state(build_hamiltonian(spec, basis), cfg.solver);
        const auto& psi = r.ground_vector();
        const auto prof = apply_number_operators(basis, psi);
        const int imp = spec.atom_sites.empty() ? 0 : spec.atom_sites.front();
        const int ref = cfg.x_ref >= 0 ? cfg.x_ref : imp;
        double mean = 0.0;
        for (double v : prof.photon_density) mean += v;
        mean /= spec.L;
        const auto g2 = g2_impurity_average(psi, basis);
        const auto fl = fluctuations(psi, basis);
        double e_b = nan;
        if (p.n_ex == 2 && spec.num_atoms() == 1) {
            BindingOptions bo;
            bo.finite_size_correction = cfg.binding_correction;
            bo.solver = cfg.solver;
            e_b = binding_energy_n2(spec, bo).e_b;
        }
        const double tp = spec.L > 1 ? two_point(psi, basis, (ref + 1) % spec.L, ref) : prof.photon_density[0];
        for (double v : {r.ground_energy(), prof.photon_density[static_cast<std::size_t>(imp)], mean, g2.value_or(nan),
                         fl.v_pol, fl.v_atom, e_b, tp, std::abs(prof.total() - p.n_ex)})
            f.push_back(format_number(v));
        f.push_back(std::to_string(r.iterations));
        f.push_back(format_number(r.residual));
        f.push_back(std::to_string(r.seed));
        f.push_back("ok");
    } catch (const Error& e) {
        for (int k = 0; k < 9; ++k) f.push_back(format_number(nan));
        f.push_back("0");
        f.push_back(format_number(nan));
        f.push_back(std::to_string(cfg.solver.seed));
        f.push_back(error_code(e));
    }
    return join(f);
}

void write_table(std::ostream& os, const std::string& format, const std::string& config_hash, std::uint64_t seed,
                 const std::vector<std::string>& columns, const std::vector<std::string>& rows) {
    if (format == "json") {
        nlohmann::ordered_json j;
        j["meta"] = {{"version", kVersion}, {"config_hash", config_hash}, {"seed", seed}};
        j["columns"] = columns;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj;
            std::istringstream is(row);
            std::string cell;
            for (std::size_t k = 0; k < columns.size() && std::getline(is, cell, ','); ++k) {
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (cell == "nan") obj[columns[k]] = nullptr;
                else if (!cell.empty() && end == cell.c_str() + cell.size()) obj[columns[k]] = v;
                else obj[columns[k]] = cell;
            }
            arr.push_back(std::move(obj));
        }
        j["rows"] = std::move(arr);
        os << j.dump(2) << '\n';
        return;
    }
    os << header_comment(config_hash, seed) << '\n';
    os << join(columns) << '\n';
    for (const auto& r : rows) os << r << '\n';
}

SweepSummary run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepSummary sum;
    sum.total = cfg.size();
    const auto columns = sweep_columns(cfg.mode);
    std::vector<std::string> rows(sum.total);
    std::vector<bool> done(sum.total, false);

    const bool persist = !cfg.out_path.empty();
    const std::string journal_path = cfg.out_path + ".journal";
    const std::string journal_head = "# journal config_hash=" + cfg.config_hash;
    if (persist) {
        std::ifstream in(journal_path);
        std::string line;
        if (in && std::getline(in, line) && line == journal_head) {
            while (std::getline(in, line)) {
                const auto tab = line.find('\t');
                if (tab == std::string::npos) continue;
                char* end = nullptr;
                const unsigned long long idx = std::strtoull(line.c_str(), &end, 10);
                if (end != line.c_str() + tab || idx >= sum.total) continue;
                std::string row = line.substr(tab + 1);
                if (count_fields(row) != columns.size()) continue;  // torn write
                if (row.rfind(std::to_string(idx) + ",", 0) != 0) continue;
                rows[idx] = std::move(row);
                if (!done[idx]) ++sum.resumed;
                done[idx] = true;
            }
        }
        // Rewrite the journal with only intact records so appends start on a clean line.
        std::ofstream out(journal_path, std::ios::trunc);
        if (!out) throw Error("cannot write journal: " + journal_path);
        out << journal_head << '\n';
        for (std::size_t i = 0; i < sum.total; ++i)
            if (done[i]) out << i << '\t' << rows[i] << '\n';
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < sum.total; ++i)
        if (!done[i]) pending.push_back(i);
    if (cfg.max_points > 0 && pending.size() > cfg.max_points) pending.resize(cfg.max_points);

    std::mutex journal_mutex;
    std::ofstream journal;
    if (persist) journal.open(journal_path, std::ios::app);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < pending.size(); k = next++) {
            const std::size_t idx = pending[k];
            std::string row = compute_row(cfg, idx);
            std::lock_guard<std::mutex> lock(journal_mutex);
            if (persist) {
                journal << idx << '\t' << row << '\n';
                journal.flush();
            }
            rows[idx] = std::move(row);
            done[idx] = true;
        }
    };
    const int nt = std::min<int>(resolve_threads(cfg.threads), static_cast<int>(std::max<std::size_t>(pending.size(), 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (persist) journal.close();
    sum.computed = pending.size();

    sum.complete = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
    if (!sum.complete) return sum;
    sum.rows = std::move(rows);
    if (persist) {
        const std::string tmp = cfg.out_path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write " + tmp);
            write_table(out, cfg.format, cfg.config_hash, cfg.solver.seed, columns, sum.rows);
            if (!out) throw Error("write failed: " + tmp);
        }
        std::filesystem::rename(tmp, cfg.out_path);
    }
    return sum;
}

}  // namespace wgqed
