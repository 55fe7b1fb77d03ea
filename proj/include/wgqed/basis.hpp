#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

// One occupation-number state: photons per cavity plus a bitmask of excited
// atoms (bit j set <=> atom j in |e>).
struct Configuration {
    std::vector<int> photons;
    std::uint64_t atoms = 0;
    int num_atoms = 0;

    bool operator==(const Configuration&) const = default;
};

int occupation(const Configuration& c, int site);
bool atom_excited(const Configuration& c, int j);
int total_excitations(const Configuration& c);

struct BasisOptions {
    std::size_t max_dim = 50'000'000;
};

// All configurations of a fixed excitation-number sector.
//
// Canonical order: atom bitmask ascending, then photon occupations in
// descending lexicographic order (site 0 most significant). For L=2, n_ex=2
// this gives (2,0), (1,1), (0,2). Indices are computed by a ranking function
// over bounded compositions, so lookup needs no hash table.
class SectorBasis {
public:
    SectorBasis() = default;

    const ModelSpec& spec() const { return spec_; }
    std::size_t dim() const { return masks_.size(); }
    int sites() const { return spec_.L; }
    int num_atoms() const { return spec_.num_atoms(); }
    int n_ex() const { return spec_.n_ex; }
    int n_trunc() const { return spec_.n_trunc; }

    int occupation(std::size_t i, int site) const {
        return occ_[i * static_cast<std::size_t>(spec_.L) + static_cast<std::size_t>(site)];
    }
    bool atom_excited(std::size_t i, int j) const { return (masks_[i] >> j) & 1u; }
    std::uint64_t atom_mask(std::size_t i) const { return masks_[i]; }
    std::span<const std::uint8_t> photons(std::size_t i) const {
        return {occ_.data() + i * static_cast<std::size_t>(spec_.L),
                static_cast<std::size_t>(spec_.L)};
    }

    Configuration config(std::size_t i) const;

    // Throws NotInSectorError when c violates the sector constraints.
    std::size_t index_of(const Configuration& c) const;
    // Rank of a raw occupation pattern; nullopt if outside the sector.
    std::optional<std::size_t> find(std::span<const std::uint8_t> photons,
                                    std::uint64_t mask) const;

private:
    friend SectorBasis enumerate_sector(const ModelSpec&, const BasisOptions&);

    std::size_t rank_photons(std::span<const std::uint8_t> photons, int total) const;
    std::size_t mask_offset(std::uint64_t mask) const;
    std::uint64_t count(int parts, int sum) const;

    ModelSpec spec_;
    std::vector<std::uint8_t> occ_;
    std::vector<std::uint64_t> masks_;
    // count_[k*(n_ex+1)+m]: compositions of m into k parts, each <= n_trunc.
    std::vector<std::uint64_t> count_;
    // mask_weight_[b*(A+1)+o]: configurations preceding the masks that agree
    // above bit b, carry o set bits there, and have bit b cleared.
    std::vector<std::uint64_t> mask_weight_;
};

SectorBasis enumerate_sector(const ModelSpec& spec, const BasisOptions& opts = {});

// Sector dimension from the stars-and-bars style count, without enumeration.
std::uint64_t sector_dimension(const ModelSpec& spec);

}  // namespace wgqed
