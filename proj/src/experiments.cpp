#include "beg/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "parallel.hpp"

namespace beg {

std::string_view to_string(SamplerKind k) { return k == SamplerKind::Cftp ? "cftp" : "forward"; }

std::string_view to_string(EstimatorKind k) {
  return k == EstimatorKind::SpinAverage ? "spin-average" : "connectivity-indicator";
}

std::optional<SamplerKind> parse_sampler_kind(std::string_view s) {
  if (s == "cftp") return SamplerKind::Cftp;
  if (s == "forward") return SamplerKind::Forward;
  return std::nullopt;
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view s) {
  if (s == "spin-average" || s == "spin") return EstimatorKind::SpinAverage;
  if (s == "connectivity-indicator" || s == "connectivity") return EstimatorKind::Connectivity;
  return std::nullopt;
}

DrawResult draw_perfect_sample(const LatticePtr& lattice, const RunOptions& options,
                               std::uint64_t index) {
  if (options.sampler == SamplerKind::Cftp)
    return {perfect_sample_cftp(lattice, cftp_sample_seed(options.seed, index), options.cftp), 0};
  for (std::uint64_t a = 0; a < options.max_attempts; ++a) {
    auto s = perfect_sample_forward(lattice, options.horizon,
                                    forward_attempt_seed(options.seed, index, a));
    if (s) return {std::move(*s), a};
  }
  throw SamplingAborted("forward sampler failed to coalesce in " +
                        std::to_string(options.max_attempts) + " attempts");
}

SampleBatch draw_origin_samples(const LatticePtr& lattice, const RunOptions& options) {
  if (options.samples == 0) throw std::invalid_argument("n_samples must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  SampleBatch batch;
  batch.samples.resize(options.samples);
  std::vector<std::uint64_t> wasted(options.samples, 0);

  detail::parallel_blocks(options.samples, options.workers,
                          [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                            ClusterScratch scratch(lattice->site_count());
                            for (std::uint64_t k = begin; k < end; ++k) {
                              DrawResult d = draw_perfect_sample(lattice, options, k);
                              OriginSample& out = batch.samples[k];
                              out.origin = d.config[lattice->origin()];
                              if (out.origin == kPlus)
                                out.connected =
                                    plus_cluster_at_origin(d.config, scratch).touches_internal_boundary;
                              wasted[k] = d.wasted;
                            }
                          });
  for (std::uint64_t w : wasted) batch.wasted += w;
  batch.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

std::optional<double> MagnetizationEstimate::waste_rate() const {
  if (sampler != SamplerKind::Forward) return std::nullopt;
  const std::uint64_t total = samples_accepted + samples_wasted;
  if (total == 0) return 0.0;
  return static_cast<double>(samples_wasted) / static_cast<double>(total);
}

MagnetizationEstimate summarize(const BoxLattice& lattice, const SampleBatch& batch,
                                const RunOptions& options, EstimatorKind estimator) {
  std::int64_t sum = 0, sum_sq = 0;
  for (const OriginSample& s : batch.samples) {
    const int v = estimator == EstimatorKind::SpinAverage ? s.origin : (s.connected ? 1 : 0);
    sum += v;
    sum_sq += v * v;
  }
  const MomentSummary m = summarize_moments(sum, sum_sq, batch.samples.size());
  MagnetizationEstimate e;
  e.dimension = lattice.dimension();
  e.side = lattice.side();
  e.sampler = options.sampler;
  e.estimator = estimator;
  e.samples_accepted = batch.samples.size();
  e.samples_wasted = batch.wasted;
  e.mean = m.mean;
  e.std_error = m.std_error;
  e.variance = m.variance;
  e.seed = options.seed;
  e.wall_time_ms = batch.wall_time_ms;
  return e;
}

MagnetizationEstimate estimate_magnetization(const LatticePtr& lattice, const RunOptions& options) {
  return summarize(*lattice, draw_origin_samples(lattice, options), options, options.estimator);
}

SweepResult sweep(int dimension, std::span<const int> sides, const RunOptions& options) {
  if (sides.empty()) throw std::invalid_argument("side list is empty");
  for (std::size_t k = 0; k < sides.size(); ++k) {
    if (sides[k] < 1 || sides[k] % 2 == 0)
      throw std::invalid_argument("side must be odd: " + std::to_string(sides[k]));
    if (k > 0 && sides[k] <= sides[k - 1])
      throw std::invalid_argument("sides must be strictly increasing");
  }
  SweepResult r;
  r.dimension = dimension;
  std::vector<double> xs, ys;
  for (int side : sides) {
    RunOptions o = options;
    o.seed = sweep_side_seed(options.seed, side);
    const auto lattice = build_box(dimension, side);
    r.estimates.push_back(estimate_magnetization(lattice, o));
    if (r.estimates.back().mean > 0) {
      xs.push_back(side);
      ys.push_back(std::log(r.estimates.back().mean));
    }
  }
  if (xs.size() >= 2) r.fit = fit_line(xs, ys);
  return r;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_estimates_csv(std::ostream& out, std::span<const MagnetizationEstimate> estimates,
                         bool include_timing) {
  out << kEstimateCsvHeader << '\n';
  for (const auto& e : estimates) {
    const auto waste = e.waste_rate();
    out << e.dimension << ',' << e.side << ',' << to_string(e.estimator) << ','
        << to_string(e.sampler) << ',' << e.samples_accepted << ',' << shortest(e.mean) << ','
        << shortest(e.std_error) << ',' << (waste ? shortest(*waste) : std::string()) << ','
        << e.seed << ',' << (include_timing ? shortest(std::round(e.wall_time_ms * 1000) / 1000) : "0")
        << '\n';
  }
}

}  // namespace beg
