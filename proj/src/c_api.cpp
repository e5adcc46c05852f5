#include "beg/beg.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "beg/experiments.hpp"
#include "beg/oracle.hpp"
#include "beg/percolation.hpp"

struct beg_lattice {
  beg::LatticePtr ptr;
};
struct beg_config {
  beg::SpinConfig value;
};
struct beg_census {
  beg::GroundStateCensus value;
};
struct beg_sweep {
  beg::SweepResult value;
};
struct beg_tail {
  beg::TailHistogram value;
};

namespace {

thread_local std::string g_last_error;

beg_status fail(beg_status code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

// Maps exceptions escaping the core onto status codes.
template <class Fn>
beg_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const beg::EnumerationCapExceeded& e) {
    return fail(BEG_ERR_CAP_EXCEEDED, e.what());
  } catch (const beg::SamplingAborted& e) {
    return fail(BEG_ERR_SAMPLING_ABORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BEG_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(BEG_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BEG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BEG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BEG_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

beg::RunOptions to_run_options(const beg_run_options* o) {
  beg::RunOptions r;
  if (!o) return r;
  if (o->sampler != BEG_SAMPLER_CFTP && o->sampler != BEG_SAMPLER_FORWARD)
    throw std::invalid_argument("unknown sampler kind");
  if (o->estimator != BEG_ESTIMATOR_SPIN_AVERAGE && o->estimator != BEG_ESTIMATOR_CONNECTIVITY)
    throw std::invalid_argument("unknown estimator kind");
  r.sampler = o->sampler == BEG_SAMPLER_CFTP ? beg::SamplerKind::Cftp : beg::SamplerKind::Forward;
  r.estimator = o->estimator == BEG_ESTIMATOR_SPIN_AVERAGE ? beg::EstimatorKind::SpinAverage
                                                           : beg::EstimatorKind::Connectivity;
  r.samples = o->samples;
  r.seed = o->seed;
  r.workers = o->workers;
  r.horizon = o->horizon;
  if (o->max_attempts) r.max_attempts = o->max_attempts;
  if (o->max_epochs < 0) throw std::invalid_argument("max_epochs must be >= 0");
  if (o->max_epochs) r.cftp.max_epochs = o->max_epochs;
  return r;
}

void to_c(const beg::MagnetizationEstimate& e, beg_estimate* out) {
  out->dimension = e.dimension;
  out->side = e.side;
  out->sampler = e.sampler == beg::SamplerKind::Cftp ? BEG_SAMPLER_CFTP : BEG_SAMPLER_FORWARD;
  out->estimator = e.estimator == beg::EstimatorKind::SpinAverage ? BEG_ESTIMATOR_SPIN_AVERAGE
                                                                  : BEG_ESTIMATOR_CONNECTIVITY;
  out->samples_accepted = e.samples_accepted;
  out->samples_wasted = e.samples_wasted;
  out->mean = e.mean;
  out->std_error = e.std_error;
  out->waste_rate = e.waste_rate().value_or(-1.0);
  out->seed = e.seed;
  out->wall_time_ms = e.wall_time_ms;
}

template <std::size_t N>
void copy_truncated(char (&dst)[N], const std::string& src) {
  const std::size_t n = std::min(src.size(), N - 1);
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

#define BEG_REQUIRE(cond, msg) \
  if (!(cond)) return fail(BEG_ERR_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* beg_version(void) { return BEG_VERSION_STRING; }

const char* beg_stream_algorithm(void) { return beg::Stream::kAlgorithm.data(); }

const char* beg_last_error(void) { return g_last_error.c_str(); }

const char* beg_status_name(beg_status status) {
  switch (status) {
    case BEG_OK: return "ok";
    case BEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BEG_ERR_CAP_EXCEEDED: return "cap exceeded";
    case BEG_ERR_INVARIANT_VIOLATION: return "invariant violation";
    case BEG_ERR_IO: return "i/o error";
    case BEG_ERR_SAMPLING_ABORTED: return "sampling aborted";
    case BEG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void beg_string_free(char* s) { std::free(s); }

beg_status beg_lattice_create(int dimension, int side, beg_lattice** out) {
  BEG_REQUIRE(out, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new beg_lattice{beg::build_box(dimension, side)};
    return BEG_OK;
  });
}

void beg_lattice_destroy(beg_lattice* lattice) { delete lattice; }
int beg_lattice_dimension(const beg_lattice* l) { return l ? l->ptr->dimension() : 0; }
int beg_lattice_side(const beg_lattice* l) { return l ? l->ptr->side() : 0; }
size_t beg_lattice_site_count(const beg_lattice* l) { return l ? l->ptr->site_count() : 0; }
size_t beg_lattice_origin(const beg_lattice* l) { return l ? l->ptr->origin() : 0; }

beg_status beg_config_parse(const beg_lattice* lattice, const char* text, beg_config** out) {
  BEG_REQUIRE(lattice && text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new beg_config{beg::parse_config(lattice->ptr, text)};
    return BEG_OK;
  });
}

beg_status beg_config_serialize(const beg_config* config, char** out) {
  BEG_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(beg::serialize(config->value));
    return BEG_OK;
  });
}

void beg_config_destroy(beg_config* config) { delete config; }

int beg_config_spin(const beg_config* config, size_t site) {
  if (!config || site >= config->value.size()) return 0;
  return config->value[static_cast<beg::SiteIndex>(site)];
}

int beg_config_is_feasible(const beg_config* config) {
  return config && beg::is_feasible(config->value) ? 1 : 0;
}

uint64_t beg_config_energy(const beg_config* config) {
  return config ? beg::energy_fad(config->value) : 0;
}

void beg_run_options_init(beg_run_options* o) {
  if (!o) return;
  const beg::RunOptions d;
  o->sampler = BEG_SAMPLER_CFTP;
  o->estimator = BEG_ESTIMATOR_SPIN_AVERAGE;
  o->samples = d.samples;
  o->seed = d.seed;
  o->workers = d.workers;
  o->horizon = d.horizon;
  o->max_attempts = d.max_attempts;
  o->max_epochs = d.cftp.max_epochs;
}

beg_status beg_sample(const beg_lattice* lattice, const beg_run_options* options, uint64_t index,
                      beg_config** out, uint64_t* wasted) {
  BEG_REQUIRE(lattice && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    beg::DrawResult d = beg::draw_perfect_sample(lattice->ptr, to_run_options(options), index);
    if (wasted) *wasted = d.wasted;
    *out = new beg_config{std::move(d.config)};
    return BEG_OK;
  });
}

beg_status beg_estimate_magnetization(const beg_lattice* lattice, const beg_run_options* options,
                                      beg_estimate* out) {
  BEG_REQUIRE(lattice && out, "null argument");
  return guarded([&] {
    to_c(beg::estimate_magnetization(lattice->ptr, to_run_options(options)), out);
    return BEG_OK;
  });
}

beg_status beg_sweep_run(int dimension, const int* sides, size_t side_count,
                         const beg_run_options* options, beg_sweep** out) {
  BEG_REQUIRE(out, "null output pointer");
  BEG_REQUIRE(sides || side_count == 0, "null side list");
  *out = nullptr;
  return guarded([&] {
    *out = new beg_sweep{
        beg::sweep(dimension, std::span<const int>(sides, side_count), to_run_options(options))};
    return BEG_OK;
  });
}

void beg_sweep_destroy(beg_sweep* sweep) { delete sweep; }

size_t beg_sweep_size(const beg_sweep* sweep) { return sweep ? sweep->value.estimates.size() : 0; }

beg_status beg_sweep_get(const beg_sweep* sweep, size_t index, beg_estimate* out) {
  BEG_REQUIRE(sweep && out, "null argument");
  BEG_REQUIRE(index < sweep->value.estimates.size(), "sweep index out of range");
  to_c(sweep->value.estimates[index], out);
  return BEG_OK;
}

int beg_sweep_fit(const beg_sweep* sweep, double* slope, double* intercept, double* r_squared) {
  if (!sweep || !sweep->value.fit) return 0;
  if (slope) *slope = sweep->value.fit->slope;
  if (intercept) *intercept = sweep->value.fit->intercept;
  if (r_squared) *r_squared = sweep->value.fit->r_squared;
  return 1;
}

beg_status beg_sweep_csv(const beg_sweep* sweep, int include_timing, char** out) {
  BEG_REQUIRE(sweep && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::ostringstream os;
    beg::write_estimates_csv(os, sweep->value.estimates, include_timing != 0);
    *out = dup_string(os.str());
    return BEG_OK;
  });
}

beg_status beg_census_create(const beg_lattice* lattice, int store_configs, size_t site_cap,
                             beg_census** out) {
  BEG_REQUIRE(lattice && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    beg::EnumerationOptions o;
    o.store_configs = store_configs != 0;
    if (site_cap) o.site_cap = site_cap;
    *out = new beg_census{beg::enumerate_ground_states(lattice->ptr, o)};
    return BEG_OK;
  });
}

void beg_census_destroy(beg_census* census) { delete census; }

beg_status beg_census_summary_get(const beg_census* census, beg_census_summary* out) {
  BEG_REQUIRE(census && out, "null argument");
  return guarded([&] {
    const auto& c = census->value;
    const beg::Rational m = beg::exact_magnetization(c);
    out->count = c.count;
    out->sum_origin_spin = c.sum_origin_spin;
    out->count_origin_connected = c.count_origin_connected;
    out->magnetization_numerator = m.numerator();
    out->magnetization_denominator = m.denominator();
    out->magnetization = static_cast<double>(m.numerator()) / static_cast<double>(m.denominator());
    return BEG_OK;
  });
}

namespace {

beg::Lemma1Check lemma1_of(const beg::GroundStateCensus& c) {
  if (c.configs_stored) return beg::verify_lemma1(c);
  return {c.sum_origin_spin, c.count_origin_connected};
}

}  // namespace

beg_status beg_census_check_lemma1(const beg_census* census, int64_t* spin_sum,
                                   uint64_t* connected_count, int* holds) {
  BEG_REQUIRE(census, "null census");
  return guarded([&] {
    const beg::Lemma1Check check = lemma1_of(census->value);
    if (spin_sum) *spin_sum = check.spin_sum;
    if (connected_count) *connected_count = check.connected_count;
    if (holds) *holds = check.holds() ? 1 : 0;
    return BEG_OK;
  });
}

beg_status beg_census_report(const beg_census* census, int include_lemma1, char** out) {
  BEG_REQUIRE(census && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::ostringstream os;
    std::optional<beg::Lemma1Check> check;
    if (include_lemma1) check = lemma1_of(census->value);
    beg::write_census_report(os, census->value, check);
    *out = dup_string(os.str());
    return BEG_OK;
  });
}

beg_status beg_couple_check(const beg_lattice* lattice, uint64_t steps, uint64_t seed,
                            uint64_t checkpoint_every, beg_log_fn log, void* user,
                            beg_couple_report* out) {
  BEG_REQUIRE(lattice && out, "null argument");
  return guarded([&] {
    beg::CouplingCheckOptions o;
    o.steps = steps;
    o.seed = seed;
    o.checkpoint_every = checkpoint_every;
    if (log) o.log = [log, user](const std::string& line) { log(user, line.c_str()); };
    const beg::CouplingCheckReport r = beg::run_coupling_check(lattice->ptr, o);
    *out = beg_couple_report{};
    out->steps = r.steps;
    out->checkpoints = r.checkpoints;
    out->coverage = r.coverage;
    if (!r.violation) return BEG_OK;
    out->violated = 1;
    out->violation_step = r.violation->step;
    out->violation_site = r.violation->site;
    copy_truncated(out->invariant, r.violation->invariant);
    copy_truncated(out->detail, r.violation->detail);
    return fail(BEG_ERR_INVARIANT_VIOLATION,
                r.violation->invariant + " violated at step " + std::to_string(r.violation->step));
  });
}

beg_status beg_perc_tail_run(const beg_lattice* lattice, uint64_t samples, uint64_t seed,
                             unsigned workers, beg_tail** out) {
  BEG_REQUIRE(lattice && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new beg_tail{beg::perc_cluster_tail(lattice->ptr, samples, seed, workers)};
    return BEG_OK;
  });
}

void beg_tail_destroy(beg_tail* tail) { delete tail; }

double beg_tail_probability(const beg_tail* tail, size_t n) { return tail ? tail->value.tail(n) : 0.0; }

int beg_tail_fit(const beg_tail* tail, size_t n_min, size_t n_max, double* slope, double* intercept,
                 double* r_squared) {
  if (!tail) return 0;
  const auto fit = beg::fit_log_tail(tail->value, n_min, n_max);
  if (!fit) return 0;
  if (slope) *slope = fit->slope;
  if (intercept) *intercept = fit->intercept;
  if (r_squared) *r_squared = fit->r_squared;
  return 1;
}

beg_status beg_tail_csv(const beg_tail* tail, char** out) {
  BEG_REQUIRE(tail && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::ostringstream os;
    beg::write_tail_csv(os, tail->value);
    *out = dup_string(os.str());
    return BEG_OK;
  });
}

}  // extern "C"
