#include "beg/percolation.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "parallel.hpp"

namespace beg {

PercConfig::PercConfig(LatticePtr lattice, bool all_open)
    : lattice_(std::move(lattice)),
      open_(lattice_->site_count(), all_open ? 1 : 0),
      visited_(lattice_->site_count(), 0) {}

PlusCluster open_cluster_at_origin(const PercConfig& config, ClusterScratch& scratch) {
  return scratch.origin_cluster(config.lattice(), [&config](SiteIndex s) { return config.open(s); });
}

PercCoupledPair::PercCoupledPair(const LatticePtr& lattice, std::uint64_t seed)
    : beg_(extremal_top(lattice), seed), perc_(lattice, true) {}

void PercCoupledPair::apply(const Move& m) {
  update_site(beg_.config.lattice(), beg_.config.mutable_spins(), m);
  ++beg_.step_count;
  perc_.step(m.site, m.u);
}

Move PercCoupledPair::step() {
  const Move m = draw_move(beg_.rng, perc_.size());
  apply(m);
  return m;
}

bool cluster_contained(const SpinConfig& beg, const PercConfig& perc, ClusterScratch& scratch) {
  const PlusCluster cluster = plus_cluster_at_origin(beg, scratch);
  for (SiteIndex s : cluster.sites)
    if (!perc.open(s)) return false;
  return true;
}

bool check_containment(const PercCoupledPair& pair, ClusterScratch& scratch) {
  return cluster_contained(pair.beg().config, pair.perc(), scratch);
}

bool check_containment(const PercCoupledPair& pair) {
  ClusterScratch scratch(pair.perc().size());
  return check_containment(pair, scratch);
}

std::uint64_t TailHistogram::tail_count(std::size_t n) const {
  std::uint64_t c = 0;
  for (std::size_t k = n; k < counts.size(); ++k) c += counts[k];
  return c;
}

double TailHistogram::tail(std::size_t n) const {
  if (samples == 0) return 0.0;
  return static_cast<double>(tail_count(n)) / static_cast<double>(samples);
}

TailHistogram perc_cluster_tail(const LatticePtr& lattice, std::uint64_t samples,
                                std::uint64_t seed, unsigned workers) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  const BoxLattice& lat = *lattice;
  const std::size_t n = lat.site_count();
  workers = detail::resolve_workers(workers);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n + 1, 0));

  detail::parallel_blocks(samples, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint8_t> open(n);
    ClusterScratch scratch(n);
    auto& counts = partial[w];
    for (std::uint64_t k = begin; k < end; ++k) {
      Stream rng(derive_seed(seed, k));
      for (std::size_t i = 0; i < n; ++i) open[i] = rng.uniform() < 0.5;
      ++counts[scratch.origin_cluster_size(lat, [&open](SiteIndex s) { return open[s] != 0; })];
    }
  });

  TailHistogram h;
  h.dimension = lat.dimension();
  h.side = lat.side();
  h.samples = samples;
  h.seed = seed;
  h.counts.assign(n + 1, 0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k <= n; ++k) h.counts[k] += p[k];
  while (h.counts.size() > 1 && h.counts.back() == 0) h.counts.pop_back();
  return h;
}

std::optional<LinearFit> fit_log_tail(const TailHistogram& h, std::size_t n_min, std::size_t n_max) {
  std::vector<double> xs, ys;
  for (std::size_t k = n_min; k <= n_max; ++k) {
    const std::uint64_t c = h.tail_count(k);
    if (c == 0) break;
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log(static_cast<double>(c) / static_cast<double>(h.samples)));
  }
  if (xs.size() < 2) return std::nullopt;
  return fit_line(xs, ys);
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_tail_csv(std::ostream& out, const TailHistogram& h) {
  out << "n,count,empirical_tail\n";
  std::uint64_t remaining = h.samples;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] != 0)
      out << k << ',' << h.counts[k] << ','
          << shortest(static_cast<double>(remaining) / static_cast<double>(h.samples)) << '\n';
    remaining -= h.counts[k];
  }
}

namespace {

std::string describe_site(const BoxLattice& lat, std::span<const Spin> spins, SiteIndex s) {
  std::ostringstream os;
  os << "site " << s << " (";
  const auto c = lat.coordinates(s);
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << ") spin " << int(spins[s]) << " neighbors [";
  bool first = true;
  for (SiteIndex n : lat.interior_neighbors(s)) {
    os << (first ? "" : " ") << int(spins[n]);
    first = false;
  }
  for (int b = 0; b < lat.boundary_contacts(s); ++b) {
    os << (first ? "" : " ") << "B+";
    first = false;
  }
  os << ']';
  return os.str();
}

}  // namespace

CouplingCheckReport run_coupling_check(const LatticePtr& lattice,
                                       const CouplingCheckOptions& options) {
  const BoxLattice& lat = *lattice;
  const std::size_t n = lat.site_count();
  const std::uint64_t every = options.checkpoint_every == 0 ? n : options.checkpoint_every;

  Stream rng(options.seed);
  PercCoupledPair pair(lattice, options.seed);
  SpinConfig low = extremal_bottom(lattice);
  SpinConfig mid(lattice);
  SpinConfig high = extremal_top(lattice);
  ClusterScratch scratch(n);
  CouplingCheckReport report;

  const std::uint64_t total_checkpoints = options.steps / every + 1;
  const std::uint64_t log_stride = std::max<std::uint64_t>(1, total_checkpoints / 20);

  auto fail = [&](std::string what, std::uint64_t step, SiteIndex site, std::string detail) {
    report.violation = CouplingViolation{std::move(what), step, site, std::move(detail)};
    report.steps = step;
    report.coverage = pair.perc().coverage();
    if (options.log)
      options.log("violation at step " + std::to_string(step) + ": " + report.violation->invariant +
                  "; " + report.violation->detail);
    return report;
  };

  auto checkpoint = [&](std::uint64_t step) -> bool {
    ++report.checkpoints;
    const PlusCluster beg_cluster = plus_cluster_at_origin(pair.beg().config, scratch);
    for (SiteIndex s : beg_cluster.sites)
      if (!pair.perc().open(s)) {
        fail("cluster containment", step, s,
             "+1 cluster site closed in percolation; " +
                 describe_site(lat, pair.beg().config.spins(), s));
        return false;
      }
    if (!partial_order_leq(low, mid) || !partial_order_leq(mid, high)) {
      fail("monotone order", step, 0, "global order bottom <= zero-start <= top broken");
      return false;
    }
    report.final_beg_cluster = beg_cluster.size();
    report.final_perc_cluster = open_cluster_at_origin(pair.perc(), scratch).size();
    if (options.log && (report.checkpoints - 1) % log_stride == 0)
      options.log("checkpoint step=" + std::to_string(step) +
                  " beg_cluster=" + std::to_string(report.final_beg_cluster) +
                  " perc_cluster=" + std::to_string(report.final_perc_cluster) +
                  " coverage=" + shortest(pair.perc().coverage()) + " ok");
    return true;
  };

  if (!checkpoint(0)) return report;
  for (std::uint64_t t = 1; t <= options.steps; ++t) {
    const Move m = draw_move(rng, n);
    pair.apply(m);
    const Spin b = pair.beg().config[m.site];
    if (b == kPlus && !pair.perc().open(m.site))
      return fail("site containment", t, m.site,
                  "u=" + shortest(m.u) + " set +1 over closed site; " +
                      describe_site(lat, pair.beg().config.spins(), m.site));
    const Spin lo = update_site(lat, low.mutable_spins(), m);
    const Spin mi = update_site(lat, mid.mutable_spins(), m);
    const Spin hi = update_site(lat, high.mutable_spins(), m);
    if (lo > mi || mi > hi)
      return fail("monotone order", t, m.site,
                  "u=" + shortest(m.u) + " values " + std::to_string(lo) + "," +
                      std::to_string(mi) + "," + std::to_string(hi) + "; low " +
                      describe_site(lat, low.spins(), m.site) + "; high " +
                      describe_site(lat, high.spins(), m.site));
    if (t % every == 0 || t == options.steps)
      if (!checkpoint(t)) return report;
  }
  report.steps = options.steps;
  report.coverage = pair.perc().coverage();
  return report;
}

}  // namespace beg
