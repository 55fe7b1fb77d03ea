#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "wgqed/hamiltonian.hpp"

namespace wgqed {

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual(best_residual) {}
    double best_residual;
};

struct DimensionError : Error {
    using Error::Error;
};

struct SolverOptions {
    double tol = 1e-10;                // residual tolerance, relative to max(1, |E|)
    std::uint64_t seed = 1;
    std::size_t dense_limit = 4000;    // dense_spectrum refuses larger matrices
    std::size_t dense_fallback = 64;   // ground_state/low_spectrum go dense at or below this
    std::size_t max_krylov = 0;        // 0: chosen from the dimension
    std::size_t max_matvec = 200000;
    std::size_t check_every = 4;       // Ritz convergence test interval
};

struct EigenResult {
    std::vector<double> energies;          // ascending
    std::vector<Eigen::VectorXd> vectors;  // vectors[i] pairs with energies[i]
    std::size_t iterations = 0;            // matrix-vector products
    double residual = 0.0;                 // max ||H v - E v|| over returned pairs
    std::uint64_t seed = 0;
    bool dense = false;
    // Lowest Ritz value at each convergence check of the first (ground) run.
    std::vector<double> ritz_history;

    double ground_energy() const { return energies.at(0); }
    const Eigen::VectorXd& ground_vector() const { return vectors.at(0); }
};

EigenResult ground_state(const SparseOperator& op, const SolverOptions& opts = {});
EigenResult ground_state(const SparseOperator& op, double tol, std::uint64_t seed);

// k lowest eigenpairs. Converged pairs are locked and deflated from each
// subsequent run, so degenerate levels are resolved.
EigenResult low_spectrum(const SparseOperator& op, std::size_t k, const SolverOptions& opts = {});

// Full ascending spectrum by dense diagonalization (test oracle).
std::vector<double> dense_spectrum(const SparseOperator& op, std::size_t dense_limit = 4000);

// Largest-magnitude component made positive.
void fix_sign(Eigen::VectorXd& v);

}  // namespace wgqed
