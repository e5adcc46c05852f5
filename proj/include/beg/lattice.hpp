#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace beg {

using SiteIndex = std::uint32_t;

// Axis-aligned cube of side L in Z^d with a fixed +1 exterior layer.
// Sites are numbered row-major (first coordinate most significant). The
// exterior layer is never stored: each site only records how many of its 2d
// neighbors lie outside the box.
class BoxLattice {
 public:
  BoxLattice(int dimension, int side);

  int dimension() const { return dimension_; }
  int side() const { return side_; }
  int degree() const { return 2 * dimension_; }
  std::size_t site_count() const { return site_count_; }
  SiteIndex origin() const { return origin_; }

  std::span<const SiteIndex> interior_neighbors(SiteIndex site) const {
    return {neighbors_.data() + offsets_[site], neighbors_.data() + offsets_[site + 1]};
  }
  int boundary_contacts(SiteIndex site) const { return boundary_contacts_[site]; }
  bool on_internal_boundary(SiteIndex site) const { return boundary_contacts_[site] > 0; }
  // Sorted ascending.
  std::span<const SiteIndex> internal_boundary() const { return internal_boundary_; }

  std::vector<int> coordinates(SiteIndex site) const;
  SiteIndex index_of(std::span<const int> coords) const;

 private:
  int dimension_;
  int side_;
  std::size_t site_count_;
  SiteIndex origin_;
  std::vector<std::uint32_t> offsets_;
  std::vector<SiteIndex> neighbors_;
  std::vector<std::uint8_t> boundary_contacts_;
  std::vector<SiteIndex> internal_boundary_;
};

using LatticePtr = std::shared_ptr<const BoxLattice>;

// Throws std::invalid_argument for dimension < 1, side < 1 or even side.
LatticePtr build_box(int dimension, int side);

}  // namespace beg
