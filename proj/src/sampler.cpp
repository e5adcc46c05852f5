#include "beg/sampler.hpp"

#include <string>

namespace beg {

NeighborValueSet neighbor_values(const BoxLattice& lattice, std::span<const Spin> spins,
                                 SiteIndex site) {
  NeighborValueSet nv;
  nv.has_plus = lattice.boundary_contacts(site) > 0;
  for (SiteIndex n : lattice.interior_neighbors(site)) {
    switch (spins[n]) {
      case kMinus: nv.has_minus = true; break;
      case kZero: nv.has_zero = true; break;
      default: nv.has_plus = true; break;
    }
  }
  return nv;
}

NeighborValueSet neighbor_values(const SpinConfig& config, SiteIndex site) {
  if (site >= config.size()) throw std::out_of_range("site index out of range");
  return neighbor_values(config.lattice(), config.spins(), site);
}

UpdateLaw update_law(const NeighborValueSet& nv) {
  const LawKind kind = law_kind(nv);
  switch (kind) {
    case LawKind::Free:
      return {kind, {kPlus, kZero, kMinus}, {Probability(1, 3), Probability(1, 3), Probability(1, 3)}};
    case LawKind::PlusOrZero:
      return {kind, {kPlus, kZero}, {Probability(1, 2), Probability(1, 2)}};
    case LawKind::ZeroOrMinus:
      return {kind, {kZero, kMinus}, {Probability(1, 2), Probability(1, 2)}};
    case LawKind::ZeroOnly:
      break;
  }
  return {LawKind::ZeroOnly, {kZero}, {Probability(1)}};
}

Spin apply_update(const UpdateLaw& law, double u) {
  // u < num/den compared as u*den < num so that cell edges land exactly on
  // the same side as in draw_spin.
  Probability cumulative = 0;
  for (std::size_t k = 0; k + 1 < law.values.size(); ++k) {
    cumulative += law.probabilities[k];
    if (u * cumulative.denominator() < cumulative.numerator()) return law.values[k];
  }
  return law.values.back();
}

Move chain_step(ChainState& state) {
  const Move m = draw_move(state.rng, state.config.size());
  update_site(state.config.lattice(), state.config.mutable_spins(), m);
  ++state.step_count;
  return m;
}

CoupledPair::CoupledPair(SpinConfig low, SpinConfig high, std::uint64_t seed)
    : low_(std::move(low)), high_(std::move(high)), rng_(seed) {
  if (!partial_order_leq(low_, high_))
    throw std::invalid_argument("coupled pair requires low <= high");
  for (SiteIndex i = 0; i < low_.size(); ++i) mismatches_ += low_[i] != high_[i];
}

void CoupledPair::apply(const Move& m) {
  const BoxLattice& lat = low_.lattice();
  const bool was_diff = low_[m.site] != high_[m.site];
  const Spin a = update_site(lat, low_.mutable_spins(), m);
  const Spin b = update_site(lat, high_.mutable_spins(), m);
  mismatches_ = mismatches_ - was_diff + (a != b);
  ++steps_;
}

Move CoupledPair::step() {
  const Move m = draw_move(rng_, low_.size());
  apply(m);
  return m;
}

std::optional<SpinConfig> perfect_sample_forward(const LatticePtr& lattice,
                                                 std::uint64_t horizon, std::uint64_t seed) {
  if (horizon == 0) horizon = default_horizon(*lattice);
  CoupledPair pair(extremal_bottom(lattice), extremal_top(lattice), seed);
  std::uint64_t t = 0;
  for (; t < horizon && !pair.coalesced(); ++t) pair.step();
  if (!pair.coalesced()) return std::nullopt;

  // Once merged the chains stay merged; finish the horizon on one copy.
  SpinConfig out = pair.high();
  auto spins = out.mutable_spins();
  Stream& rng = pair.rng();
  for (; t < horizon; ++t) update_site(*lattice, spins, draw_move(rng, spins.size()));
  return out;
}

SpinConfig perfect_sample_cftp(const LatticePtr& lattice, std::uint64_t seed,
                               const CftpOptions& options, CftpStats* stats) {
  const BoxLattice& lat = *lattice;
  const std::size_t n = lat.site_count();
  Stream rng(seed);
  // moves[j] drives the transition from time -(j+1) to -j.
  std::vector<Move> moves;
  const SpinConfig bottom = extremal_bottom(lattice);
  std::vector<Spin> low, high;
  std::uint64_t horizon = options.initial_horizon == 0 ? 1 : options.initial_horizon;
  std::uint64_t updates = 0;

  for (int epoch = 1; epoch <= options.max_epochs; ++epoch, horizon *= 2) {
    while (moves.size() < horizon) moves.push_back(draw_move(rng, n));

    low.assign(bottom.spins().begin(), bottom.spins().end());
    high.assign(n, kPlus);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) mismatches += low[i] != high[i];

    std::uint64_t j = horizon;
    while (j > 0 && mismatches > 0) {
      const Move& m = moves[--j];
      const bool was_diff = low[m.site] != high[m.site];
      const Spin a = update_site(lat, low, m);
      const Spin b = update_site(lat, high, m);
      mismatches = mismatches - was_diff + (a != b);
      updates += 2;
    }
    if (mismatches > 0) continue;
    while (j > 0) {
      update_site(lat, high, moves[--j]);
      ++updates;
    }
    if (stats) *stats = {horizon, epoch, updates};
    return SpinConfig(lattice, std::move(high));
  }
  throw SamplingAborted("coupling from the past did not coalesce within " +
                        std::to_string(options.max_epochs) + " epochs (look-back " +
                        std::to_string(horizon / 2) + " steps)");
}

}  // namespace beg
