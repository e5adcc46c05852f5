#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beg/rng.hpp"
#include "beg/spin.hpp"

namespace beg {

// Values present among the 2d neighbors of a site. Exterior neighbors count
// as +1.
struct NeighborValueSet {
  bool has_minus = false;
  bool has_zero = false;
  bool has_plus = false;

  friend bool operator==(const NeighborValueSet&, const NeighborValueSet&) = default;
};

NeighborValueSet neighbor_values(const BoxLattice& lattice, std::span<const Spin> spins,
                                 SiteIndex site);
NeighborValueSet neighbor_values(const SpinConfig& config, SiteIndex site);

// The four heat-bath cases. Only the presence of each sign matters.
enum class LawKind : std::uint8_t {
  Free,         // {0}: +1, 0, -1 each 1/3
  PlusOrZero,   // {+1} or {0,+1}: +1, 0 each 1/2
  ZeroOrMinus,  // {-1} or {0,-1}: 0, -1 each 1/2
  ZeroOnly,     // both signs present: 0
};

constexpr LawKind law_kind(bool has_minus, bool has_plus) {
  if (has_minus) return has_plus ? LawKind::ZeroOnly : LawKind::ZeroOrMinus;
  return has_plus ? LawKind::PlusOrZero : LawKind::Free;
}
constexpr LawKind law_kind(const NeighborValueSet& nv) { return law_kind(nv.has_minus, nv.has_plus); }

using Probability = boost::rational<int>;

struct UpdateLaw {
  LawKind kind;
  std::vector<Spin> values;                // strictly descending
  std::vector<Probability> probabilities;  // sums to 1
};

UpdateLaw update_law(const NeighborValueSet& nv);

// Inverse-quantile selection in descending value order: the first interval of
// [0,1) maps to the highest allowed value.
Spin apply_update(const UpdateLaw& law, double u);

// Same selection as apply_update, specialised for the inner loop.
constexpr Spin draw_spin(LawKind kind, double u) {
  switch (kind) {
    case LawKind::Free: return 3.0 * u < 1.0 ? kPlus : (3.0 * u < 2.0 ? kZero : kMinus);
    case LawKind::PlusOrZero: return u < 0.5 ? kPlus : kZero;
    case LawKind::ZeroOrMinus: return u < 0.5 ? kZero : kMinus;
    case LawKind::ZeroOnly: break;
  }
  return kZero;
}

// One unit of shared randomness: which site, and the uniform variate.
struct Move {
  SiteIndex site;
  double u;
};

inline Move draw_move(Stream& rng, std::size_t site_count) {
  const auto site = static_cast<SiteIndex>(rng.below(site_count));
  return {site, rng.uniform()};
}

inline LawKind site_law(const BoxLattice& lattice, std::span<const Spin> spins, SiteIndex site) {
  bool minus = false;
  bool plus = lattice.boundary_contacts(site) > 0;
  for (SiteIndex n : lattice.interior_neighbors(site)) {
    minus |= spins[n] == kMinus;
    plus |= spins[n] == kPlus;
  }
  return law_kind(minus, plus);
}

// Heat-bath update of one site in place; returns the new value.
inline Spin update_site(const BoxLattice& lattice, std::span<Spin> spins, const Move& m) {
  const Spin v = draw_spin(site_law(lattice, spins, m.site), m.u);
  spins[m.site] = v;
  return v;
}

struct ChainState {
  SpinConfig config;
  std::uint64_t step_count = 0;
  Stream rng;

  ChainState(SpinConfig start, std::uint64_t seed) : config(std::move(start)), rng(seed) {}
};

// Draws a site and u from the state's stream and applies the heat-bath update.
Move chain_step(ChainState& state);

// Two chains driven by the same (site, u) sequence. The number of sites where
// they differ is maintained incrementally.
class CoupledPair {
 public:
  // Throws std::invalid_argument unless low <= high coordinatewise.
  CoupledPair(SpinConfig low, SpinConfig high, std::uint64_t seed);

  Move step();
  void apply(const Move& m);

  bool coalesced() const { return mismatches_ == 0; }
  std::size_t mismatches() const { return mismatches_; }
  std::uint64_t step_count() const { return steps_; }
  const SpinConfig& low() const { return low_; }
  const SpinConfig& high() const { return high_; }
  Stream& rng() { return rng_; }

 private:
  SpinConfig low_;
  SpinConfig high_;
  Stream rng_;
  std::uint64_t steps_ = 0;
  std::size_t mismatches_ = 0;
};

inline Move coupled_step(CoupledPair& pair) { return pair.step(); }

inline std::uint64_t default_horizon(const BoxLattice& lattice) {
  const auto n = static_cast<std::uint64_t>(lattice.site_count());
  return n * n;
}

// Runs the extremal pair for `horizon` steps (0 selects |sites|^2). Returns
// the common configuration if the pair coalesced, std::nullopt otherwise.
std::optional<SpinConfig> perfect_sample_forward(const LatticePtr& lattice,
                                                 std::uint64_t horizon, std::uint64_t seed);

class SamplingAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CftpOptions {
  std::uint64_t initial_horizon = 1;
  int max_epochs = 28;
};

struct CftpStats {
  std::uint64_t horizon = 0;  // look-back that coalesced
  int epochs = 0;
  std::uint64_t updates = 0;  // single-site updates summed over both chains
};

// Monotone coupling from the past with doubling look-back. The move used at
// time -t is fixed once drawn and reused by every later epoch. Throws
// SamplingAborted after max_epochs without coalescence.
SpinConfig perfect_sample_cftp(const LatticePtr& lattice, std::uint64_t seed,
                               const CftpOptions& options = {}, CftpStats* stats = nullptr);

}  // namespace beg
