#include "beg/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace beg {

SpinConfig::SpinConfig(LatticePtr lattice)
    : lattice_(std::move(lattice)), spins_(lattice_->site_count(), kZero) {}

SpinConfig::SpinConfig(LatticePtr lattice, std::vector<Spin> spins)
    : lattice_(std::move(lattice)), spins_(std::move(spins)) {
  if (spins_.size() != lattice_->site_count())
    throw std::invalid_argument("spin vector length does not match lattice site count");
  for (Spin s : spins_)
    if (s < kMinus || s > kPlus) throw std::invalid_argument("spin value outside {-1,0,+1}");
}

Spin SpinConfig::at(SiteIndex site) const {
  if (site >= spins_.size()) throw std::out_of_range("site index out of range");
  return spins_[site];
}

void SpinConfig::set(SiteIndex site, Spin value) {
  if (site >= spins_.size()) throw std::out_of_range("site index out of range");
  if (value < kMinus || value > kPlus) throw std::invalid_argument("spin value outside {-1,0,+1}");
  spins_[site] = value;
}

std::string_view region_name(Region r) {
  switch (r) {
    case Region::F: return "F";
    case Region::D: return "D";
    case Region::A: return "A";
    case Region::DF: return "DF";
    case Region::AF: return "AF";
    case Region::AD: return "AD";
    case Region::FAD: return "FAD";
    case Region::Unclassified: break;
  }
  return "unclassified";
}

namespace {

double pair_term(int a, int b, const CouplingParams& p) {
  const int a2 = a * a, b2 = b * b;
  return -(static_cast<double>(a * b) + p.y * a2 * b2 + p.x * (a2 + b2));
}

}  // namespace

double energy_general(const SpinConfig& config, const CouplingParams& params) {
  const BoxLattice& lat = config.lattice();
  double h = 0.0;
  for (SiteIndex i = 0; i < lat.site_count(); ++i) {
    const int si = config[i];
    for (SiteIndex j : lat.interior_neighbors(i))
      if (j > i) h += pair_term(si, config[j], params);
    h += lat.boundary_contacts(i) * pair_term(si, kPlus, params);
  }
  return h;
}

std::uint64_t energy_fad(const BoxLattice& lat, std::span<const Spin> spins) {
  std::uint64_t bad = 0;
  for (SiteIndex i = 0; i < lat.site_count(); ++i) {
    const Spin si = spins[i];
    if (si == kZero) continue;
    for (SiteIndex j : lat.interior_neighbors(i))
      if (j > i && si * spins[j] == -1) ++bad;
    if (si == kMinus) bad += static_cast<std::uint64_t>(lat.boundary_contacts(i));
  }
  return bad;
}

std::uint64_t energy_fad(const SpinConfig& config) {
  return energy_fad(config.lattice(), config.spins());
}

bool is_feasible(const BoxLattice& lat, std::span<const Spin> spins) {
  for (SiteIndex i = 0; i < lat.site_count(); ++i) {
    const Spin si = spins[i];
    if (si == kZero) continue;
    if (si == kMinus && lat.on_internal_boundary(i)) return false;
    for (SiteIndex j : lat.interior_neighbors(i))
      if (si * spins[j] == -1) return false;
  }
  return true;
}

bool is_feasible(const SpinConfig& config) { return is_feasible(config.lattice(), config.spins()); }

Region classify_region(const CouplingParams& p, double eps) {
  const double x = p.x, y = p.y;
  if (!std::isfinite(x) || !std::isfinite(y)) return Region::Unclassified;
  const double df = 1.0 + 2.0 * x + y;
  const double af = 1.0 + x + y;
  const bool x_zero = std::abs(x) <= eps;

  if (x_zero && std::abs(y + 1.0) <= eps) return Region::FAD;
  if (std::abs(df) <= eps && x < -eps) return Region::DF;
  if (std::abs(af) <= eps && x > eps) return Region::AF;
  if (x_zero && y < -1.0 - eps) return Region::AD;
  if (df > eps && af > eps) return Region::F;
  if (df < -eps && x < -eps) return Region::D;
  if (af < -eps && x > eps) return Region::A;
  return Region::Unclassified;
}

bool partial_order_leq(const SpinConfig& a, const SpinConfig& b) {
  if (a.lattice().dimension() != b.lattice().dimension() ||
      a.lattice().side() != b.lattice().side())
    throw std::invalid_argument("partial order requires configurations on the same lattice");
  for (SiteIndex i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

SpinConfig extremal_top(const LatticePtr& lattice) {
  return SpinConfig(lattice, std::vector<Spin>(lattice->site_count(), kPlus));
}

SpinConfig extremal_bottom(const LatticePtr& lattice) {
  std::vector<Spin> s(lattice->site_count(), kMinus);
  for (SiteIndex i : lattice->internal_boundary()) s[i] = kZero;
  return SpinConfig(lattice, std::move(s));
}

PlusCluster plus_cluster_at_origin(const SpinConfig& config, ClusterScratch& scratch) {
  const auto spins = config.spins();
  return scratch.origin_cluster(config.lattice(),
                                [spins](SiteIndex s) { return spins[s] == kPlus; });
}

PlusCluster plus_cluster_at_origin(const SpinConfig& config) {
  ClusterScratch scratch(config.size());
  return plus_cluster_at_origin(config, scratch);
}

SpinConfig flip_cluster(const SpinConfig& config, const PlusCluster& cluster) {
  if (cluster.touches_internal_boundary)
    throw std::invalid_argument("cannot flip a cluster touching the internal boundary");
  SpinConfig out = config;
  for (SiteIndex s : cluster.sites) {
    if (s >= config.size() || config[s] != kPlus)
      throw std::invalid_argument("cluster member is not a +1 site of the configuration");
    if (config.lattice().on_internal_boundary(s))
      throw std::invalid_argument("cannot flip a cluster touching the internal boundary");
    out.mutable_spins()[s] = kMinus;
  }
  return out;
}

std::string serialize(const SpinConfig& config) {
  std::string out(config.size(), '0');
  for (SiteIndex i = 0; i < config.size(); ++i)
    out[i] = config[i] == kPlus ? '+' : (config[i] == kMinus ? '-' : '0');
  return out;
}

SpinConfig parse_config(const LatticePtr& lattice, std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
    text.remove_suffix(1);
  if (text.size() != lattice->site_count())
    throw std::invalid_argument("configuration has " + std::to_string(text.size()) +
                                " characters, expected " +
                                std::to_string(lattice->site_count()));
  std::vector<Spin> spins(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '+': spins[i] = kPlus; break;
      case '0': spins[i] = kZero; break;
      case '-': spins[i] = kMinus; break;
      default:
        throw std::invalid_argument(std::string("invalid spin character '") + text[i] + "'");
    }
  }
  return SpinConfig(lattice, std::move(spins));
}

}  // namespace beg
