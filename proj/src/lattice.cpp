#include "beg/lattice.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace beg {

BoxLattice::BoxLattice(int dimension, int side) : dimension_(dimension), side_(side) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (side < 1) throw std::invalid_argument("side must be >= 1");
  if (side % 2 == 0) throw std::invalid_argument("side must be odd");

  std::size_t count = 1;
  for (int k = 0; k < dimension; ++k) {
    if (count > std::numeric_limits<SiteIndex>::max() / static_cast<std::size_t>(side))
      throw std::invalid_argument("box too large: " + std::to_string(side) + "^" +
                                  std::to_string(dimension) + " sites");
    count *= static_cast<std::size_t>(side);
  }
  site_count_ = count;

  // stride[k] = L^(d-1-k)
  std::vector<std::size_t> stride(dimension);
  std::size_t s = 1;
  for (int k = dimension - 1; k >= 0; --k) {
    stride[k] = s;
    s *= static_cast<std::size_t>(side);
  }

  offsets_.reserve(count + 1);
  neighbors_.reserve(count * 2 * dimension);
  boundary_contacts_.resize(count);
  offsets_.push_back(0);

  std::vector<int> c(dimension, 0);
  for (std::size_t site = 0; site < count; ++site) {
    int outside = 0;
    for (int k = 0; k < dimension; ++k) {
      if (c[k] > 0)
        neighbors_.push_back(static_cast<SiteIndex>(site - stride[k]));
      else
        ++outside;
      if (c[k] + 1 < side)
        neighbors_.push_back(static_cast<SiteIndex>(site + stride[k]));
      else
        ++outside;
    }
    boundary_contacts_[site] = static_cast<std::uint8_t>(outside);
    if (outside > 0) internal_boundary_.push_back(static_cast<SiteIndex>(site));
    offsets_.push_back(static_cast<std::uint32_t>(neighbors_.size()));

    for (int k = dimension - 1; k >= 0; --k) {
      if (++c[k] < side) break;
      c[k] = 0;
    }
  }

  std::size_t center = 0;
  for (int k = 0; k < dimension; ++k) center += stride[k] * static_cast<std::size_t>((side - 1) / 2);
  origin_ = static_cast<SiteIndex>(center);
}

std::vector<int> BoxLattice::coordinates(SiteIndex site) const {
  if (site >= site_count_)
    throw std::out_of_range("site index " + std::to_string(site) + " out of range [0, " +
                            std::to_string(site_count_) + ")");
  std::vector<int> c(dimension_);
  std::size_t rest = site;
  for (int k = dimension_ - 1; k >= 0; --k) {
    c[k] = static_cast<int>(rest % static_cast<std::size_t>(side_));
    rest /= static_cast<std::size_t>(side_);
  }
  return c;
}

SiteIndex BoxLattice::index_of(std::span<const int> coords) const {
  if (coords.size() != static_cast<std::size_t>(dimension_))
    throw std::invalid_argument("coordinate vector has wrong dimension");
  std::size_t idx = 0;
  for (int v : coords) {
    if (v < 0 || v >= side_) throw std::out_of_range("coordinate outside box");
    idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(v);
  }
  return static_cast<SiteIndex>(idx);
}

LatticePtr build_box(int dimension, int side) {
  return std::make_shared<const BoxLattice>(dimension, side);
}

}  // namespace beg
