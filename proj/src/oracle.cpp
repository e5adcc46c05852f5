#include "beg/oracle.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "beg/sampler.hpp"

namespace beg {

namespace {

struct Tally {
  std::uint64_t count = 0;
  std::int64_t sum = 0;
  std::uint64_t plus = 0;
  std::uint64_t minus = 0;
  std::uint64_t connected = 0;
  std::vector<SpinConfig> configs;
};

class Enumerator {
 public:
  Enumerator(const LatticePtr& lattice, bool store)
      : lattice_(lattice), lat_(*lattice), store_(store), spins_(lat_.site_count(), kZero),
        scratch_(lat_.site_count()) {
    earlier_.resize(lat_.site_count());
    for (SiteIndex i = 0; i < lat_.site_count(); ++i)
      for (SiteIndex j : lat_.interior_neighbors(i))
        if (j < i) earlier_[i].push_back(j);
  }

  // Enumerates every completion with site 0 fixed to `first`.
  Tally run_branch(Spin first) {
    Tally t;
    if (!allowed(0, first)) return t;
    spins_[0] = first;
    descend(1, t);
    return t;
  }

 private:
  bool allowed(SiteIndex i, Spin v) const {
    if (v == kZero) return true;
    if (v == kMinus && lat_.on_internal_boundary(i)) return false;
    for (SiteIndex j : earlier_[i])
      if (spins_[j] * v == -1) return false;
    return true;
  }

  void descend(SiteIndex i, Tally& t) {
    if (i == lat_.site_count()) {
      leaf(t);
      return;
    }
    for (Spin v : {kPlus, kZero, kMinus}) {
      if (!allowed(i, v)) continue;
      spins_[i] = v;
      descend(i + 1, t);
    }
    spins_[i] = kZero;
  }

  void leaf(Tally& t) {
    ++t.count;
    const Spin s0 = spins_[lat_.origin()];
    t.sum += s0;
    if (s0 == kPlus) {
      ++t.plus;
      bool touches = false;
      scratch_.origin_cluster_size(
          lat_, [this](SiteIndex s) { return spins_[s] == kPlus; }, &touches);
      if (touches) ++t.connected;
    } else if (s0 == kMinus) {
      ++t.minus;
    }
    if (store_) t.configs.emplace_back(lattice_, spins_);
  }

  LatticePtr lattice_;
  const BoxLattice& lat_;
  bool store_;
  std::vector<Spin> spins_;
  std::vector<std::vector<SiteIndex>> earlier_;
  ClusterScratch scratch_;
};

std::string decimal(const Rational& r) {
  char buf[64];
  const double v = static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

GroundStateCensus enumerate_ground_states(const LatticePtr& lattice,
                                          const EnumerationOptions& options) {
  const std::size_t n = lattice->site_count();
  if (n > options.site_cap) {
    const double log10_candidates = static_cast<double>(n) * std::log10(3.0);
    std::ostringstream os;
    os << "box " << lattice->side() << "^" << lattice->dimension() << " has " << n
       << " sites, above the enumeration cap of " << options.site_cap
       << "; exhaustive search would visit up to 3^" << n << " ~ 1e"
       << static_cast<int>(std::floor(log10_candidates)) << " candidates";
    throw EnumerationCapExceeded(os.str(), log10_candidates);
  }

  std::vector<Tally> parts;
  const Spin firsts[] = {kPlus, kZero, kMinus};
  if (options.workers > 1) {
    std::vector<std::future<Tally>> futures;
    for (Spin v : firsts)
      futures.push_back(std::async(std::launch::async, [&lattice, &options, v] {
        return Enumerator(lattice, options.store_configs).run_branch(v);
      }));
    for (auto& f : futures) parts.push_back(f.get());
  } else {
    Enumerator e(lattice, options.store_configs);
    for (Spin v : firsts) parts.push_back(e.run_branch(v));
  }

  GroundStateCensus c;
  c.lattice = lattice;
  c.configs_stored = options.store_configs;
  for (auto& p : parts) {
    c.count += p.count;
    c.sum_origin_spin += p.sum;
    c.count_origin_plus += p.plus;
    c.count_origin_minus += p.minus;
    c.count_origin_connected += p.connected;
    for (auto& cfg : p.configs) c.configs.push_back(std::move(cfg));
  }
  return c;
}

Rational exact_magnetization(const GroundStateCensus& census) {
  if (census.count == 0) throw std::invalid_argument("empty census");
  return Rational(census.sum_origin_spin, static_cast<std::int64_t>(census.count));
}

Lemma1Check verify_lemma1(const GroundStateCensus& census) {
  if (!census.configs_stored)
    throw std::invalid_argument("verify_lemma1 needs a census with stored configurations");
  Lemma1Check check;
  for (const SpinConfig& c : census.configs) check.spin_sum += c[c.lattice().origin()];
  ClusterScratch scratch(census.lattice->site_count());
  for (const SpinConfig& c : census.configs)
    if (plus_cluster_at_origin(c, scratch).touches_internal_boundary) ++check.connected_count;
  return check;
}

void write_census_report(std::ostream& out, const GroundStateCensus& census,
                         const std::optional<Lemma1Check>& lemma1) {
  const Rational m = exact_magnetization(census);
  out << "dimension=" << census.lattice->dimension() << '\n'
      << "side=" << census.lattice->side() << '\n'
      << "sites=" << census.lattice->site_count() << '\n'
      << "count=" << census.count << '\n'
      << "sum_origin_spin=" << census.sum_origin_spin << '\n'
      << "count_origin_plus=" << census.count_origin_plus << '\n'
      << "count_origin_minus=" << census.count_origin_minus << '\n'
      << "count_origin_connected=" << census.count_origin_connected << '\n'
      << "magnetization=" << m.numerator() << '/' << m.denominator() << '\n'
      << "magnetization_decimal=" << decimal(m) << '\n';
  if (lemma1) {
    out << "lemma1_spin_sum=" << lemma1->spin_sum << '\n'
        << "lemma1_connected_count=" << lemma1->connected_count << '\n'
        << "lemma1=" << (lemma1->holds() ? "PASS" : "FAIL") << '\n';
  }
}

TransitionMatrix exact_transition_matrix(const LatticePtr& lattice, std::size_t state_cap) {
  EnumerationOptions opts;
  opts.store_configs = true;
  GroundStateCensus census = enumerate_ground_states(lattice, opts);
  if (census.count > state_cap)
    throw EnumerationCapExceeded("box has " + std::to_string(census.count) +
                                     " feasible states, above the transition-matrix cap of " +
                                     std::to_string(state_cap),
                                 std::log10(static_cast<double>(census.count)));

  const BoxLattice& lat = *lattice;
  TransitionMatrix p;
  p.states = std::move(census.configs);
  const std::size_t m = p.states.size();
  const auto sites = static_cast<std::int64_t>(lat.site_count());
  // Cell masses 1/3, 1/2, 1 become 2, 3, 6 sixths; site choice adds 1/|sites|.
  p.denominator = 6 * sites;
  p.numerators.assign(m * m, 0);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < m; ++k) index.emplace(serialize(p.states[k]), k);

  for (std::size_t k = 0; k < m; ++k) {
    const SpinConfig& from = p.states[k];
    for (SiteIndex s = 0; s < lat.site_count(); ++s) {
      const UpdateLaw law = update_law(neighbor_values(from, s));
      for (std::size_t c = 0; c < law.values.size(); ++c) {
        const Probability mass = law.probabilities[c];
        SpinConfig to = from;
        to.mutable_spins()[s] = law.values[c];
        const auto it = index.find(serialize(to));
        if (it == index.end())
          throw std::logic_error("update produced an infeasible state: " + serialize(to));
        p.numerators[k * m + it->second] += 6 * mass.numerator() / mass.denominator();
      }
    }
  }
  if (!is_row_stochastic(p)) throw std::logic_error("transition matrix rows do not sum to one");
  return p;
}

bool is_symmetric(const TransitionMatrix& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p.numerator(i, j) != p.numerator(j, i)) return false;
  return true;
}

bool is_row_stochastic(const TransitionMatrix& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p.numerator(i, j) < 0) return false;
      row += p.numerator(i, j);
    }
    if (row != p.denominator) return false;
  }
  return true;
}

bool is_column_stochastic(const TransitionMatrix& p) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    std::int64_t col = 0;
    for (std::size_t i = 0; i < p.size(); ++i) col += p.numerator(i, j);
    if (col != p.denominator) return false;
  }
  return true;
}

bool has_positive_diagonal(const TransitionMatrix& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.numerator(i, i) <= 0) return false;
  return true;
}

bool is_irreducible(const TransitionMatrix& p) {
  const std::size_t m = p.size();
  if (m == 0) return false;
  // Strongly connected iff every state is reachable from state 0 in both the
  // graph and its transpose.
  for (bool transpose : {false, true}) {
    std::vector<char> seen(m, 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
      const std::size_t i = q.front();
      q.pop();
      for (std::size_t j = 0; j < m; ++j) {
        const std::int64_t w = transpose ? p.numerator(j, i) : p.numerator(i, j);
        if (w > 0 && !seen[j]) {
          seen[j] = 1;
          ++reached;
          q.push(j);
        }
      }
    }
    if (reached != m) return false;
  }
  return true;
}

bool is_stationary(const TransitionMatrix& p, const std::vector<Rational>& pi) {
  if (pi.size() != p.size()) return false;
  for (std::size_t j = 0; j < p.size(); ++j) {
    Rational acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += pi[i] * p.at(i, j);
    if (acc != pi[j]) return false;
  }
  return true;
}

}  // namespace beg
