#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beg/lattice.hpp"

namespace beg {

using Spin = std::int8_t;
inline constexpr Spin kMinus = -1;
inline constexpr Spin kZero = 0;
inline constexpr Spin kPlus = 1;

// Spin assignment on the interior of a box; the exterior is implicitly +1.
// May be infeasible: feasibility is a query, not a construction constraint.
class SpinConfig {
 public:
  // All zeros.
  explicit SpinConfig(LatticePtr lattice);
  // Throws std::invalid_argument on size mismatch or values outside {-1,0,+1}.
  SpinConfig(LatticePtr lattice, std::vector<Spin> spins);

  const BoxLattice& lattice() const { return *lattice_; }
  const LatticePtr& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return spins_.size(); }

  Spin operator[](SiteIndex site) const { return spins_[site]; }
  Spin at(SiteIndex site) const;
  void set(SiteIndex site, Spin value);

  std::span<const Spin> spins() const { return spins_; }
  std::span<Spin> mutable_spins() { return spins_; }

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.lattice_->dimension() == b.lattice_->dimension() &&
           a.lattice_->side() == b.lattice_->side() && a.spins_ == b.spins_;
  }

 private:
  LatticePtr lattice_;
  std::vector<Spin> spins_;
};

struct CouplingParams {
  double x = 0.0;
  double y = 0.0;
};

enum class Region { F, D, A, DF, AF, AD, FAD, Unclassified };

std::string_view region_name(Region r);

// Hamiltonian with general (x, y), including the edges to the +1 exterior.
double energy_general(const SpinConfig& config, const CouplingParams& params);

// Number of edges (exterior edges included) whose endpoint product is -1.
std::uint64_t energy_fad(const SpinConfig& config);
std::uint64_t energy_fad(const BoxLattice& lattice, std::span<const Spin> spins);

bool is_feasible(const SpinConfig& config);
bool is_feasible(const BoxLattice& lattice, std::span<const Spin> spins);

inline constexpr double kRegionTolerance = 1e-12;

Region classify_region(const CouplingParams& params, double tolerance = kRegionTolerance);

// Coordinatewise order. Throws std::invalid_argument when lattices differ.
bool partial_order_leq(const SpinConfig& a, const SpinConfig& b);

// All +1.
SpinConfig extremal_top(const LatticePtr& lattice);
// 0 on the internal boundary, -1 elsewhere: the minimum feasible configuration.
SpinConfig extremal_bottom(const LatticePtr& lattice);

struct PlusCluster {
  std::vector<SiteIndex> sites;  // BFS order, origin first
  bool touches_internal_boundary = false;

  bool empty() const { return sites.empty(); }
  std::size_t size() const { return sites.size(); }
};

// Reusable traversal buffers sized to one lattice. Epoch-stamped so a reset
// is O(1) between calls.
class ClusterScratch {
 public:
  explicit ClusterScratch(std::size_t site_count = 0) : stamp_(site_count, 0) {}

  template <class IsMember>
  PlusCluster origin_cluster(const BoxLattice& lattice, IsMember&& is_member);

  // Size only, no member list.
  template <class IsMember>
  std::size_t origin_cluster_size(const BoxLattice& lattice, IsMember&& is_member,
                                  bool* touches_boundary = nullptr);

 private:
  void begin(std::size_t site_count);
  bool mark(SiteIndex s) {
    if (stamp_[s] == epoch_) return false;
    stamp_[s] = epoch_;
    return true;
  }

  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<SiteIndex> queue_;
};

PlusCluster plus_cluster_at_origin(const SpinConfig& config);
PlusCluster plus_cluster_at_origin(const SpinConfig& config, ClusterScratch& scratch);

// Sets every cluster site to -1. Throws std::invalid_argument when the cluster
// touches the internal boundary or a member is not +1 in `config`.
SpinConfig flip_cluster(const SpinConfig& config, const PlusCluster& cluster);

// One character per site in row-major order: '-', '0', '+'.
std::string serialize(const SpinConfig& config);
SpinConfig parse_config(const LatticePtr& lattice, std::string_view text);

// ---------------------------------------------------------------------------

inline void ClusterScratch::begin(std::size_t site_count) {
  if (stamp_.size() != site_count) {
    stamp_.assign(site_count, 0);
    epoch_ = 0;
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  queue_.clear();
}

template <class IsMember>
PlusCluster ClusterScratch::origin_cluster(const BoxLattice& lattice, IsMember&& is_member) {
  PlusCluster out;
  begin(lattice.site_count());
  const SiteIndex origin = lattice.origin();
  if (!is_member(origin)) return out;
  mark(origin);
  out.sites.push_back(origin);
  for (std::size_t head = 0; head < out.sites.size(); ++head) {
    const SiteIndex s = out.sites[head];
    if (lattice.on_internal_boundary(s)) out.touches_internal_boundary = true;
    for (SiteIndex n : lattice.interior_neighbors(s))
      if (is_member(n) && mark(n)) out.sites.push_back(n);
  }
  return out;
}

template <class IsMember>
std::size_t ClusterScratch::origin_cluster_size(const BoxLattice& lattice, IsMember&& is_member,
                                                bool* touches_boundary) {
  begin(lattice.site_count());
  bool touches = false;
  const SiteIndex origin = lattice.origin();
  if (is_member(origin)) {
    mark(origin);
    queue_.push_back(origin);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const SiteIndex s = queue_[head];
      if (lattice.on_internal_boundary(s)) touches = true;
      for (SiteIndex n : lattice.interior_neighbors(s))
        if (is_member(n) && mark(n)) queue_.push_back(n);
    }
  }
  if (touches_boundary) *touches_boundary = touches;
  return queue_.size();
}

}  // namespace beg
