#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "beg/sampler.hpp"
#include "beg/stats.hpp"

namespace beg {

enum class SamplerKind { Cftp, Forward };
enum class EstimatorKind { SpinAverage, Connectivity };

std::string_view to_string(SamplerKind k);
std::string_view to_string(EstimatorKind k);
std::optional<SamplerKind> parse_sampler_kind(std::string_view s);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view s);

struct RunOptions {
  SamplerKind sampler = SamplerKind::Cftp;
  EstimatorKind estimator = EstimatorKind::SpinAverage;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
  std::uint64_t horizon = 0;  // forward sampler; 0 selects |sites|^2
  std::uint64_t max_attempts = 100000;  // forward retries per sample
  CftpOptions cftp;
};

// Seed of sample `index` for the CFTP sampler, and of attempt `attempt` of
// sample `index` for the forward sampler.
inline std::uint64_t cftp_sample_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed, index);
}
inline std::uint64_t forward_attempt_seed(std::uint64_t seed, std::uint64_t index,
                                          std::uint64_t attempt) {
  return derive_seed(seed, index, attempt + 1);
}

struct DrawResult {
  SpinConfig config;
  std::uint64_t wasted = 0;
};

// Sample `index` of a run. Throws SamplingAborted if the forward sampler
// exhausts max_attempts or CFTP exceeds its epoch cap.
DrawResult draw_perfect_sample(const LatticePtr& lattice, const RunOptions& options,
                               std::uint64_t index);

struct OriginSample {
  Spin origin = kZero;
  bool connected = false;  // origin +1 cluster reaches the internal boundary
};

struct SampleBatch {
  std::vector<OriginSample> samples;
  std::uint64_t wasted = 0;
  double wall_time_ms = 0.0;
};

SampleBatch draw_origin_samples(const LatticePtr& lattice, const RunOptions& options);

struct MagnetizationEstimate {
  int dimension = 0;
  int side = 0;
  SamplerKind sampler = SamplerKind::Cftp;
  EstimatorKind estimator = EstimatorKind::SpinAverage;
  std::uint64_t samples_accepted = 0;
  std::uint64_t samples_wasted = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;

  // Forward sampler only.
  std::optional<double> waste_rate() const;
};

MagnetizationEstimate summarize(const BoxLattice& lattice, const SampleBatch& batch,
                                const RunOptions& options, EstimatorKind estimator);

MagnetizationEstimate estimate_magnetization(const LatticePtr& lattice, const RunOptions& options);

struct SweepResult {
  int dimension = 0;
  std::vector<MagnetizationEstimate> estimates;
  // log(mean) against side over the estimates with positive mean.
  std::optional<LinearFit> fit;
};

// Seed used for one side of a sweep.
inline std::uint64_t sweep_side_seed(std::uint64_t seed, int side) {
  return derive_seed(seed, 0x53574545ULL, static_cast<std::uint64_t>(side));
}

// Throws std::invalid_argument for an empty side list or sides that are not
// odd and strictly increasing.
SweepResult sweep(int dimension, std::span<const int> sides, const RunOptions& options);

inline constexpr std::string_view kEstimateCsvHeader =
    "dimension,side,estimator,sampler,n,mean,std_error,waste_rate,seed,wall_time_ms";

// Header plus one row per estimate. With include_timing false the
// wall_time_ms column is written as 0.
void write_estimates_csv(std::ostream& out, std::span<const MagnetizationEstimate> estimates,
                         bool include_timing = true);

}  // namespace beg
