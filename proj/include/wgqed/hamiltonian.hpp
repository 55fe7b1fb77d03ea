#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "wgqed/basis.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

struct MatrixEntry {
    std::size_t row;
    std::size_t col;
    double value;
};

// Real symmetric sparse matrix. Canonical storage is the upper triangle
// (col >= row), sorted by (row, col); a full compressed-row copy backs apply().
class SparseOperator {
public:
    SparseOperator() = default;

    // Entries with col < row are mirrored into the upper triangle; duplicates
    // are summed and magnitudes below drop_tol removed.
    static SparseOperator from_entries(std::size_t dim, std::vector<MatrixEntry> entries,
                                       double drop_tol = 1e-15);

    std::size_t dim() const { return dim_; }
    const std::vector<MatrixEntry>& entries() const { return upper_; }
    std::size_t nnz_upper() const { return upper_.size(); }
    std::size_t nnz_full() const { return values_.size(); }

    // y = H x.
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    Eigen::VectorXd diagonal() const;
    double trace() const;
    Eigen::MatrixXd to_dense() const;
    // max |H_ij - H_ji| over the compressed-row view.
    double max_asymmetry() const;

    // "row col value" per upper-triangle entry, 17 significant digits.
    void write_coordinate(std::ostream& os) const;

private:
    std::size_t dim_ = 0;
    std::vector<MatrixEntry> upper_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis);

// J -> -J; a gauge on bipartite lattices. Throws NonBipartiteError for odd rings.
ModelSpec stagger_transform(const ModelSpec& spec);

struct NumberProfile {
    std::vector<double> photon_density;     // <a_x^+ a_x>
    std::vector<double> atom_excitation;    // <sigma_j^+ sigma_j^->
    double total() const;
};

NumberProfile apply_number_operators(const SectorBasis& basis, const Eigen::VectorXd& state);

}  // namespace wgqed
