#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beg/sampler.hpp"
#include "beg/stats.hpp"

namespace beg {

// Site percolation state at p = 1/2. Tracks which sites have been resampled at
// least once; the state is exactly Bernoulli(1/2) only on visited sites.
class PercConfig {
 public:
  explicit PercConfig(LatticePtr lattice, bool all_open = true);

  const BoxLattice& lattice() const { return *lattice_; }
  std::size_t size() const { return open_.size(); }
  bool open(SiteIndex site) const { return open_[site] != 0; }
  bool visited(SiteIndex site) const { return visited_[site] != 0; }
  std::size_t visited_count() const { return visited_count_; }
  double coverage() const {
    return static_cast<double>(visited_count_) / static_cast<double>(open_.size());
  }

  // Site becomes open iff u < 1/2.
  void step(SiteIndex site, double u) {
    open_[site] = u < 0.5;
    if (!visited_[site]) {
      visited_[site] = 1;
      ++visited_count_;
    }
  }

 private:
  LatticePtr lattice_;
  std::vector<std::uint8_t> open_;
  std::vector<std::uint8_t> visited_;
  std::size_t visited_count_ = 0;
};

inline void perc_step(PercConfig& config, SiteIndex site, double u) { config.step(site, u); }

PlusCluster open_cluster_at_origin(const PercConfig& config, ClusterScratch& scratch);

// The zero-temperature chain and the percolation chain driven by one shared
// (site, u) stream, both started from all +1 / all open.
class PercCoupledPair {
 public:
  PercCoupledPair(const LatticePtr& lattice, std::uint64_t seed);

  Move step();
  void apply(const Move& m);

  const ChainState& beg() const { return beg_; }
  const PercConfig& perc() const { return perc_; }

 private:
  ChainState beg_;
  PercConfig perc_;
};

inline Move coupled_beg_perc_step(PercCoupledPair& pair) { return pair.step(); }

// Every site of the origin's +1 cluster in `beg` is open in `perc`.
bool cluster_contained(const SpinConfig& beg, const PercConfig& perc, ClusterScratch& scratch);

bool check_containment(const PercCoupledPair& pair, ClusterScratch& scratch);
bool check_containment(const PercCoupledPair& pair);

// counts[n] = number of samples whose origin open cluster has exactly n sites.
struct TailHistogram {
  int dimension = 0;
  int side = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t tail_count(std::size_t n) const;  // samples with size >= n
  double tail(std::size_t n) const;               // P(size >= n)
};

// Independent Bernoulli(1/2) fields; sample k uses its own derived stream, so
// the result does not depend on `workers`.
TailHistogram perc_cluster_tail(const LatticePtr& lattice, std::uint64_t samples,
                                std::uint64_t seed, unsigned workers = 1);

// Least squares of log P(size >= n) against n over n_min..n_max, skipping
// n with zero tail count. std::nullopt when fewer than two points remain.
std::optional<LinearFit> fit_log_tail(const TailHistogram& h, std::size_t n_min = 1,
                                      std::size_t n_max = 40);

// Columns n,count,empirical_tail; one row per observed size.
void write_tail_csv(std::ostream& out, const TailHistogram& h);

struct CouplingViolation {
  std::string invariant;
  std::uint64_t step = 0;
  SiteIndex site = 0;
  std::string detail;
};

struct CouplingCheckReport {
  std::uint64_t steps = 0;
  std::uint64_t checkpoints = 0;
  double coverage = 0.0;
  std::size_t final_beg_cluster = 0;
  std::size_t final_perc_cluster = 0;
  std::optional<CouplingViolation> violation;
};

struct CouplingCheckOptions {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  // Full cluster containment and order check every this many steps; 0 means
  // |sites|, 1 gives the strict every-step mode.
  std::uint64_t checkpoint_every = 0;
  std::function<void(const std::string&)> log;
};

// Runs, on one shared stream: the zero-temperature/percolation pair from
// all +1, and the monotone triple bottom <= zero-start <= top. Local
// invariants are checked after every step, global ones at checkpoints. Stops
// at the first violation.
CouplingCheckReport run_coupling_check(const LatticePtr& lattice,
                                       const CouplingCheckOptions& options);

}  // namespace beg
