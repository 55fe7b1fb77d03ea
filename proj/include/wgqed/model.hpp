#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wgqed {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid model or argument values.
struct SpecError : Error {
    using Error::Error;
};

// Excitation number or atom count beyond what the indexing scheme can store.
struct CapacityError : Error {
    using Error::Error;
};

// Dimension beyond a configured limit.
struct ResourceError : Error {
    using Error::Error;
};

struct NotInSectorError : Error {
    using Error::Error;
};

struct NonBipartiteError : Error {
    using Error::Error;
};

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// On-site photon energy offsets. Kerr(U) is shorthand for the table
// U_n = U n (n-1) / 2.
class NonlinearitySpec {
public:
    enum class Kind { kerr, table };

    static NonlinearitySpec kerr(double u);
    // Table entries U_0..U_nmax; U_0 and U_1 must vanish.
    static NonlinearitySpec table(std::vector<double> offsets);

    Kind kind() const { return kind_; }
    double kerr_u() const { return u_; }
    const std::vector<double>& offsets() const { return table_; }

    // Energy of n photons on one cavity.
    double energy(int n) const;
    // Largest occupation for which energy() is defined.
    int max_occupation() const;
    // Same nonlinearity expressed as an explicit table up to n_max.
    NonlinearitySpec as_table(int n_max) const;

private:
    Kind kind_ = Kind::kerr;
    double u_ = 0.0;
    std::vector<double> table_;
};

// Full lattice problem in the rotating frame (cavity frequency set to zero).
struct ModelSpec {
    int L = 1;
    std::vector<int> atom_sites;
    Boundary boundary = Boundary::periodic;
    double J = 1.0;
    double g = 0.0;
    double delta = 0.0;  // omega_c - omega_a
    NonlinearitySpec nonlinearity = NonlinearitySpec::kerr(0.0);
    int n_trunc = 1;
    int n_ex = 0;

    int num_atoms() const { return static_cast<int>(atom_sites.size()); }
    // Index j of the atom on `site`, or -1.
    int atom_at(int site) const;
    // Throws SpecError when an invariant is violated.
    void validate() const;
};

// n_trunc defaults to min(n_ex, 20) (and at least 1).
int default_truncation(int n_ex);

// Equally spaced atoms at sites 0, d, 2d, ... on a periodic ring of cells*d sites.
ModelSpec periodic_array(int cells, int d, double J, double g, double u, int n_ex,
                         double delta = 0.0);

// Nearest-neighbour bonds (i, j) with i < j, each listed once.
std::vector<std::pair<int, int>> lattice_bonds(int L, Boundary b);

}  // namespace wgqed
