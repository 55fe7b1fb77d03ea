#include "wgqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace wgqed {

std::string to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw SpecError("unknown boundary '" + s + "' (expected periodic|open)");
}

NonlinearitySpec NonlinearitySpec::kerr(double u) {
    NonlinearitySpec s;
    s.kind_ = Kind::kerr;
    s.u_ = u;
    return s;
}

NonlinearitySpec NonlinearitySpec::table(std::vector<double> offsets) {
    if (offsets.size() < 2) throw SpecError("nonlinearity table needs at least U_0 and U_1");
    if (offsets[0] != 0.0 || offsets[1] != 0.0)
        throw SpecError("nonlinearity table must have U_0 = U_1 = 0");
    for (double v : offsets)
        if (!std::isfinite(v)) throw SpecError("nonlinearity table entries must be finite");
    NonlinearitySpec s;
    s.kind_ = Kind::table;
    s.table_ = std::move(offsets);
    return s;
}

double NonlinearitySpec::energy(int n) const {
    if (n < 0) throw SpecError("negative occupation");
    if (kind_ == Kind::kerr) return 0.5 * u_ * n * (n - 1);
    if (n >= static_cast<int>(table_.size()))
        throw SpecError("occupation " + std::to_string(n) + " exceeds nonlinearity table");
    return table_[static_cast<std::size_t>(n)];
}

int NonlinearitySpec::max_occupation() const {
    if (kind_ == Kind::kerr) return std::numeric_limits<int>::max();
    return static_cast<int>(table_.size()) - 1;
}

NonlinearitySpec NonlinearitySpec::as_table(int n_max) const {
    std::vector<double> t(static_cast<std::size_t>(std::max(n_max, 1)) + 1);
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = energy(static_cast<int>(n));
    return table(std::move(t));
}

int ModelSpec::atom_at(int site) const {
    for (std::size_t j = 0; j < atom_sites.size(); ++j)
        if (atom_sites[j] == site) return static_cast<int>(j);
    return -1;
}

void ModelSpec::validate() const {
    if (L < 1) throw SpecError("L must be >= 1");
    if (n_trunc < 1) throw SpecError("n_trunc must be >= 1");
    if (n_ex < 0) throw SpecError("n_ex must be >= 0");
    std::set<int> seen;
    for (int s : atom_sites) {
        if (s < 0 || s >= L) throw SpecError("atom site " + std::to_string(s) + " out of range");
        if (!seen.insert(s).second) throw SpecError("duplicate atom site " + std::to_string(s));
    }
    if (static_cast<long long>(n_ex) >
        static_cast<long long>(n_trunc) * L + static_cast<long long>(atom_sites.size()))
        throw SpecError("n_ex exceeds n_trunc*L + |A|");
    if (!std::isfinite(J) || !std::isfinite(g) || !std::isfinite(delta))
        throw SpecError("couplings must be finite");
    if (nonlinearity.kind() == NonlinearitySpec::Kind::table &&
        nonlinearity.max_occupation() < n_trunc)
        throw SpecError("nonlinearity table shorter than n_trunc + 1");
}

int default_truncation(int n_ex) { return std::max(1, std::min(n_ex, 20)); }

ModelSpec periodic_array(int cells, int d, double J, double g, double u, int n_ex,
                         double delta) {
    ModelSpec s;
    s.L = cells * d;
    for (int c = 0; c < cells; ++c) s.atom_sites.push_back(c * d);
    s.boundary = Boundary::periodic;
    s.J = J;
    s.g = g;
    s.delta = delta;
    s.nonlinearity = NonlinearitySpec::kerr(u);
    s.n_ex = n_ex;
    s.n_trunc = default_truncation(n_ex);
    return s;
}

std::vector<std::pair<int, int>> lattice_bonds(int L, Boundary b) {
    std::set<std::pair<int, int>> bonds;
    for (int x = 0; x + 1 < L; ++x) bonds.emplace(x, x + 1);
    if (b == Boundary::periodic && L > 2) bonds.emplace(0, L - 1);
    return {bonds.begin(), bonds.end()};
}

}  // namespace wgqed
