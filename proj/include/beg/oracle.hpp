#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beg/spin.hpp"

namespace beg {

using Rational = boost::rational<std::int64_t>;

class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(const std::string& what, double log10_candidates)
      : std::runtime_error(what), log10_candidates_(log10_candidates) {}
  double log10_candidates() const { return log10_candidates_; }

 private:
  double log10_candidates_;
};

struct EnumerationOptions {
  bool store_configs = false;
  std::size_t site_cap = 25;
  // Branches on the first site's value run concurrently when > 1.
  unsigned workers = 1;
};

// Exact census of the zero-energy configurations of a box with + exterior.
struct GroundStateCensus {
  LatticePtr lattice;
  std::uint64_t count = 0;
  std::int64_t sum_origin_spin = 0;
  std::uint64_t count_origin_plus = 0;
  std::uint64_t count_origin_minus = 0;
  // Origin's +1 cluster reaches the internal boundary.
  std::uint64_t count_origin_connected = 0;
  bool configs_stored = false;
  std::vector<SpinConfig> configs;  // row-major DFS order when stored
};

// Depth-first assignment in row-major order, pruning a value as soon as it
// would sit next to an opposite sign or put -1 against the exterior. Throws
// EnumerationCapExceeded above options.site_cap sites.
GroundStateCensus enumerate_ground_states(const LatticePtr& lattice,
                                          const EnumerationOptions& options = {});

Rational exact_magnetization(const GroundStateCensus& census);

// Both sides of the connectivity identity, recomputed from the stored
// configurations: the summed origin spin and the number of configurations
// whose origin +1 cluster reaches the internal boundary.
struct Lemma1Check {
  std::int64_t spin_sum = 0;
  std::uint64_t connected_count = 0;
  bool holds() const { return spin_sum >= 0 && static_cast<std::uint64_t>(spin_sum) == connected_count; }
};

// Throws std::invalid_argument when the census holds no configurations.
Lemma1Check verify_lemma1(const GroundStateCensus& census);

// Key-value report: dimension, side, count, sum_origin_spin,
// count_origin_connected, magnetization (fraction and decimal), and the
// identity check when given.
void write_census_report(std::ostream& out, const GroundStateCensus& census,
                         const std::optional<Lemma1Check>& lemma1 = std::nullopt);

// Single-step transition kernel over the feasible states, with every entry
// an integer multiple of 1/denominator (denominator = 6 |sites|).
struct TransitionMatrix {
  std::vector<SpinConfig> states;
  std::int64_t denominator = 1;
  std::vector<std::int64_t> numerators;  // row-major states x states

  std::size_t size() const { return states.size(); }
  std::int64_t numerator(std::size_t i, std::size_t j) const { return numerators[i * size() + j]; }
  Rational at(std::size_t i, std::size_t j) const { return Rational(numerator(i, j), denominator); }
};

// Throws EnumerationCapExceeded when the box has more than state_cap feasible
// states; throws std::logic_error if a row does not sum to one.
TransitionMatrix exact_transition_matrix(const LatticePtr& lattice, std::size_t state_cap = 200);

bool is_symmetric(const TransitionMatrix& p);
bool is_row_stochastic(const TransitionMatrix& p);
bool is_column_stochastic(const TransitionMatrix& p);
bool has_positive_diagonal(const TransitionMatrix& p);
bool is_irreducible(const TransitionMatrix& p);
// pi P == pi, exactly.
bool is_stationary(const TransitionMatrix& p, const std::vector<Rational>& pi);

}  // namespace beg
