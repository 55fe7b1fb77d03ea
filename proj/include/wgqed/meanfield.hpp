#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wgqed/model.hpp"

namespace wgqed {

struct DegenerateGroundStateError : Error {
    DegenerateGroundStateError(const std::string& what, int n_a, int n_b) : Error(what), n_a(n_a), n_b(n_b) {}
    int n_a;
    int n_b;
};

struct TruncationError : Error {
    using Error::Error;
};

struct EmptyLobeError : Error {
    using Error::Error;
};

// d cavities in an open chain, one atom on cavity 1 (index 0). Inter-cell
// hopping couples cavity d of one cell to cavity 1 of the next.
struct MeanFieldCell {
    int d = 1;
    double g = 0.0;
    double delta = 0.0;
    NonlinearitySpec nonlinearity = NonlinearitySpec::kerr(0.0);
    double J = 0.0;
    double mu = 0.0;
    int n_trunc = 0;  // per cavity; 0 picks occupancy + 3 and escalates

    void validate() const;
};

// Dense cell Hamiltonian with real order parameters. Basis index
// atom + 2 * (n_1 + (T+1) * (n_2 + ...)), T = n_trunc (which must be >= 1 here).
Eigen::MatrixXd build_hmf(const MeanFieldCell& cell, double phi1, double phi2);

// Lowest eigenvalue of build_hmf. Raises the truncation until the ground
// state weight on occupation T stays below 1e-8 (TruncationError otherwise).
double cell_ground_energy(const MeanFieldCell& cell, double phi1, double phi2);

// E_g = E0 + u1 phi1^2 + u2 phi2^2 + 2 v phi1 phi2 + O(phi^4)
struct LandauCoefficients {
    double u1 = 0.0;
    double u2 = 0.0;
    double v = 0.0;
    double E0 = 0.0;
    int n_ground = 0;  // excitations in the phi = 0 cell ground state
};

LandauCoefficients landau_coefficients(const MeanFieldCell& cell);

// Same sums with the phi = 0 ground state pinned to `sector`.
LandauCoefficients landau_coefficients_in_sector(const MeanFieldCell& cell, int sector);

struct CriticalHopping {
    std::optional<double> j_c;
    double lo = 0.0;  // determinant < 0
    double hi = 0.0;  // determinant >= 0
    int n_mott = -1;
};

// Smallest J solving u1 u2 - v^2 = 0 at fixed mu; cell.J is ignored.
CriticalHopping critical_hopping_mf(const MeanFieldCell& cell, double mu);

// u1 u2 - v^2 divided by J^2, for the lobe pinned to `sector`.
double hessian_determinant(const MeanFieldCell& cell, int sector, double J);

struct LobePoint {
    double mu = 0.0;
    int mean_n = -1;  // -1 at a level crossing
    bool degenerate = false;
    std::optional<double> j_c;
};

struct LobeTip {
    double mu = 0.0;
    double j_c = 0.0;
};

struct MeanFieldResult {
    std::vector<LobePoint> points;
    std::map<int, LobeTip> tips;
};

// target_n > 0 requires that lobe to appear on the grid.
MeanFieldResult lobe_scan(const MeanFieldCell& cell, const std::vector<double>& mu_grid, int target_n = 0,
                          int threads = 1);

// Golden-section maximum of J_c(mu) over [mu_lo, mu_hi] inside lobe n.
LobeTip refine_lobe_tip(const MeanFieldCell& cell, int n, double mu_lo, double mu_hi);

}  // namespace wgqed
