// Command-line driver. Talks to the library only through beg/beg.h.

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beg/beg.h"

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kCap = 3, kViolation = 4 };

int exit_code(beg_status s) {
  switch (s) {
    case BEG_OK: return kOk;
    case BEG_ERR_INVALID_ARGUMENT: return kUsage;
    case BEG_ERR_CAP_EXCEEDED: return kCap;
    case BEG_ERR_INVARIANT_VIOLATION: return kViolation;
    default: return kFailure;
  }
}

struct CStr {
  char* p = nullptr;
  ~CStr() { beg_string_free(p); }
};

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Destroy(p); }
};
using Lattice = Handle<beg_lattice, beg_lattice_destroy>;
using Config = Handle<beg_config, beg_config_destroy>;
using Census = Handle<beg_census, beg_census_destroy>;
using Sweep = Handle<beg_sweep, beg_sweep_destroy>;
using Tail = Handle<beg_tail, beg_tail_destroy>;

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BEG_SEED")) {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc() && ptr == end) return v;
    std::cerr << "warning: ignoring malformed BEG_SEED='" << env << "'\n";
  }
  return 1;
}

std::string utc_timestamp(bool reproducible) {
  std::time_t t = 0;
  if (reproducible) {
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) t = std::strtoll(sde, nullptr, 10);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags shared by every subcommand.
struct Common {
  std::uint64_t seed = default_seed();
  std::string output;
  bool quiet = false;
  bool reproducible = false;
  unsigned workers = 0;

  void attach(CLI::App* app, bool with_workers) {
    app->add_option("--seed", seed, "base seed (default: $BEG_SEED or 1)");
    app->add_option("-o,--output", output, "output file (default: stdout)");
    app->add_flag("--quiet", quiet, "suppress progress on stderr");
    app->add_flag("--reproducible", reproducible,
                  "pin the manifest timestamp ($SOURCE_DATE_EPOCH or epoch 0) and zero timings");
    if (with_workers) app->add_option("--workers", workers, "parallel replicas (0: all cores)");
  }
};

class Manifest {
 public:
  Manifest(std::string subcommand, const Common& c) : subcommand_(std::move(subcommand)) {
    add("version", beg_version());
    add("stream", beg_stream_algorithm());
    add("timestamp", utc_timestamp(c.reproducible));
    add("seed", std::to_string(c.seed));
    add("reproducible", c.reproducible ? "true" : "false");
  }
  void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void write(std::ostream& out) const {
    out << "# begfad " << subcommand_ << '\n';
    for (const auto& [k, v] : entries_) out << "# " << k << '=' << v << '\n';
  }

 private:
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Opens --output or falls back to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      ok_ = static_cast<bool>(file_);
    }
  }
  bool ok() const { return ok_; }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool flush() {
    stream().flush();
    return static_cast<bool>(stream());
  }

 private:
  std::ofstream file_;
  bool ok_ = true;
};

int report(beg_status s) {
  std::cerr << "error: " << beg_last_error() << '\n';
  return exit_code(s);
}

int io_error(const std::string& path) {
  std::cerr << "error: cannot write " << (path.empty() ? "<stdout>" : path) << '\n';
  return kFailure;
}

std::optional<beg_sampler_kind> sampler_of(const std::string& s) {
  if (s == "cftp") return BEG_SAMPLER_CFTP;
  if (s == "forward") return BEG_SAMPLER_FORWARD;
  return std::nullopt;
}

std::optional<beg_estimator_kind> estimator_of(const std::string& s) {
  if (s == "spin-average") return BEG_ESTIMATOR_SPIN_AVERAGE;
  if (s == "connectivity-indicator") return BEG_ESTIMATOR_CONNECTIVITY;
  return std::nullopt;
}

int make_lattice(int dim, int side, Lattice& out) {
  const beg_status s = beg_lattice_create(dim, side, &out.p);
  return s == BEG_OK ? kOk : report(s);
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  Common common;
  int dim = 2;
  int side = 0;
  std::string sampler = "cftp";
  std::uint64_t count = 1;
  std::uint64_t horizon = 0;
  int max_epochs = 0;
};

int run_sample(const SampleArgs& a) {
  Lattice lat;
  if (int rc = make_lattice(a.dim, a.side, lat)) return rc;
  beg_run_options o;
  beg_run_options_init(&o);
  o.sampler = *sampler_of(a.sampler);
  o.seed = a.common.seed;
  o.horizon = a.horizon;
  if (a.max_epochs) o.max_epochs = a.max_epochs;

  Manifest m("sample", a.common);
  m.add("dim", std::to_string(a.dim));
  m.add("side", std::to_string(a.side));
  m.add("sampler", a.sampler);
  m.add("count", std::to_string(a.count));
  if (o.sampler == BEG_SAMPLER_FORWARD) {
    const std::uint64_t n = beg_lattice_site_count(lat.p);
    m.add("horizon", std::to_string(a.horizon ? a.horizon : n * n));
  } else {
    m.add("max_epochs", std::to_string(o.max_epochs));
  }

  Output out(a.common.output);
  if (!out.ok()) return io_error(a.common.output);
  m.write(out.stream());
  std::uint64_t wasted_total = 0;
  for (std::uint64_t k = 0; k < a.count; ++k) {
    Config cfg;
    std::uint64_t wasted = 0;
    if (beg_status s = beg_sample(lat.p, &o, k, &cfg.p, &wasted); s != BEG_OK) return report(s);
    wasted_total += wasted;
    CStr text;
    if (beg_status s = beg_config_serialize(cfg.p, &text.p); s != BEG_OK) return report(s);
    out.stream() << text.p << '\n';
  }
  if (o.sampler == BEG_SAMPLER_FORWARD) out.stream() << "# wasted=" << wasted_total << '\n';
  if (!out.flush()) return io_error(a.common.output);
  if (!a.common.quiet) std::cerr << "sampled " << a.count << " configurations\n";
  return kOk;
}

struct SweepArgs {
  Common common;
  int dim = 2;
  std::vector<int> sides;
  std::uint64_t samples = 10000;
  std::string sampler = "cftp";
  std::string estimator = "spin-average";
  std::uint64_t horizon = 0;
};

int run_sweep(const SweepArgs& a) {
  if (a.sides.empty()) {
    std::cerr << "error: --sides must list at least one side\n";
    return kUsage;
  }
  beg_run_options o;
  beg_run_options_init(&o);
  o.sampler = *sampler_of(a.sampler);
  o.estimator = *estimator_of(a.estimator);
  o.samples = a.samples;
  o.seed = a.common.seed;
  o.workers = a.common.workers;
  o.horizon = a.horizon;

  Manifest m("sweep", a.common);
  m.add("dim", std::to_string(a.dim));
  std::string sides;
  for (int s : a.sides) sides += (sides.empty() ? "" : ",") + std::to_string(s);
  m.add("sides", sides);
  m.add("samples", std::to_string(a.samples));
  m.add("sampler", a.sampler);
  m.add("estimator", a.estimator);
  m.add("horizon", a.horizon ? std::to_string(a.horizon) : "auto");
  m.add("workers", std::to_string(a.common.workers));

  Sweep sw;
  if (beg_status s = beg_sweep_run(a.dim, a.sides.data(), a.sides.size(), &o, &sw.p); s != BEG_OK)
    return report(s);
  CStr csv;
  if (beg_status s = beg_sweep_csv(sw.p, a.common.reproducible ? 0 : 1, &csv.p); s != BEG_OK)
    return report(s);

  Output out(a.common.output);
  if (!out.ok()) return io_error(a.common.output);
  m.write(out.stream());
  out.stream() << csv.p;
  double slope = 0, intercept = 0, r2 = 0;
  if (beg_sweep_fit(sw.p, &slope, &intercept, &r2))
    out.stream() << "# fit log(mean) ~ side: slope=" << fmt_double(slope)
                 << " intercept=" << fmt_double(intercept) << " r_squared=" << fmt_double(r2) << '\n';
  if (!out.flush()) return io_error(a.common.output);
  if (!a.common.quiet) std::cerr << "swept " << beg_sweep_size(sw.p) << " sides\n";
  return kOk;
}

struct OracleArgs {
  Common common;
  int dim = 2;
  int side = 0;
  bool check_lemma1 = false;
  std::size_t cap = 25;
};

int run_oracle(const OracleArgs& a) {
  Lattice lat;
  if (int rc = make_lattice(a.dim, a.side, lat)) return rc;
  // Small boxes keep every configuration so the identity is recomputed from
  // scratch rather than from the enumeration's running totals.
  const bool store = a.check_lemma1 && beg_lattice_site_count(lat.p) <= 16;

  Manifest m("oracle", a.common);
  m.add("dim", std::to_string(a.dim));
  m.add("side", std::to_string(a.side));
  m.add("check_lemma1", a.check_lemma1 ? "true" : "false");
  m.add("cap", std::to_string(a.cap));

  Census census;
  if (beg_status s = beg_census_create(lat.p, store ? 1 : 0, a.cap, &census.p); s != BEG_OK)
    return report(s);
  CStr text;
  if (beg_status s = beg_census_report(census.p, a.check_lemma1 ? 1 : 0, &text.p); s != BEG_OK)
    return report(s);

  Output out(a.common.output);
  if (!out.ok()) return io_error(a.common.output);
  m.write(out.stream());
  out.stream() << text.p;
  if (!out.flush()) return io_error(a.common.output);

  if (a.check_lemma1) {
    int holds = 0;
    if (beg_status s = beg_census_check_lemma1(census.p, nullptr, nullptr, &holds); s != BEG_OK)
      return report(s);
    if (!holds) return kViolation;
  }
  return kOk;
}

struct CoupleArgs {
  Common common;
  int dim = 2;
  int side = 0;
  std::uint64_t steps = 1000000;
  std::uint64_t checkpoint_every = 0;
};

int run_couple_check(const CoupleArgs& a) {
  Lattice lat;
  if (int rc = make_lattice(a.dim, a.side, lat)) return rc;
  Manifest m("couple-check", a.common);
  m.add("dim", std::to_string(a.dim));
  m.add("side", std::to_string(a.side));
  m.add("steps", std::to_string(a.steps));
  m.add("checkpoint_every",
        std::to_string(a.checkpoint_every ? a.checkpoint_every : beg_lattice_site_count(lat.p)));

  Output out(a.common.output);
  if (!out.ok()) return io_error(a.common.output);
  m.write(out.stream());
  auto log = [](void* user, const char* line) { *static_cast<std::ostream*>(user) << line << '\n'; };
  beg_couple_report r{};
  const beg_status s =
      beg_couple_check(lat.p, a.steps, a.common.seed, a.checkpoint_every, log, &out.stream(), &r);
  if (s != BEG_OK && s != BEG_ERR_INVARIANT_VIOLATION) return report(s);
  out.stream() << "steps=" << r.steps << '\n'
               << "checkpoints=" << r.checkpoints << '\n'
               << "coverage=" << fmt_double(r.coverage) << '\n';
  if (r.violated) {
    out.stream() << "result=VIOLATION\n"
                 << "invariant=" << r.invariant << '\n'
                 << "step=" << r.violation_step << '\n'
                 << "site=" << r.violation_site << '\n'
                 << "detail=" << r.detail << '\n';
  } else {
    out.stream() << "result=OK\n";
  }
  if (!out.flush()) return io_error(a.common.output);
  if (r.violated) {
    std::cerr << "invariant violation: " << r.invariant << " at step " << r.violation_step
              << ", site " << r.violation_site << ": " << r.detail << '\n';
    return kViolation;
  }
  return kOk;
}

struct TailArgs {
  Common common;
  int dim = 2;
  int side = 0;
  std::uint64_t samples = 100000;
  std::size_t fit_min = 1;
  std::size_t fit_max = 40;
};

int run_perc_tail(const TailArgs& a) {
  Lattice lat;
  if (int rc = make_lattice(a.dim, a.side, lat)) return rc;
  if (a.samples == 0) {
    std::cerr << "error: --samples must be >= 1\n";
    return kUsage;
  }
  Manifest m("perc-tail", a.common);
  m.add("dim", std::to_string(a.dim));
  m.add("side", std::to_string(a.side));
  m.add("samples", std::to_string(a.samples));
  m.add("fit_range", std::to_string(a.fit_min) + ".." + std::to_string(a.fit_max));
  m.add("workers", std::to_string(a.common.workers));

  Tail tail;
  if (beg_status s = beg_perc_tail_run(lat.p, a.samples, a.common.seed, a.common.workers, &tail.p);
      s != BEG_OK)
    return report(s);
  CStr csv;
  if (beg_status s = beg_tail_csv(tail.p, &csv.p); s != BEG_OK) return report(s);

  Output out(a.common.output);
  if (!out.ok()) return io_error(a.common.output);
  m.write(out.stream());
  out.stream() << csv.p;
  double slope = 0, intercept = 0, r2 = 0;
  if (beg_tail_fit(tail.p, a.fit_min, a.fit_max, &slope, &intercept, &r2))
    out.stream() << "# fit log P(size>=n) ~ n: slope=" << fmt_double(slope)
                 << " intercept=" << fmt_double(intercept) << " r_squared=" << fmt_double(r2) << '\n';
  else
    out.stream() << "# fit undefined (fewer than two sizes with positive tail)\n";
  if (!out.flush()) return io_error(a.common.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-temperature BEG sampler at the FAD point"};
  app.require_subcommand(1);
  app.set_version_flag("--version", beg_version());

  const auto odd_side = CLI::Validator(
      [](std::string& v) -> std::string {
        const int n = std::atoi(v.c_str());
        if (n < 1) return "side must be >= 1";
        if (n % 2 == 0) return "side must be odd";
        return {};
      },
      "ODD", "odd side");
  const auto sampler_names = CLI::IsMember({"cftp", "forward"});

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "draw perfect samples and print them one per line");
  sample.common.attach(c_sample, false);
  c_sample->add_option("--dim", sample.dim, "dimension")->check(CLI::PositiveNumber);
  c_sample->add_option("--side", sample.side, "box side (odd)")->required()->check(odd_side);
  c_sample->add_option("--sampler", sample.sampler, "cftp or forward")->check(sampler_names);
  c_sample->add_option("--count", sample.count, "number of configurations");
  c_sample->add_option("--horizon", sample.horizon, "forward horizon (0: sites^2)");
  c_sample->add_option("--max-epochs", sample.max_epochs, "CFTP doubling cap")->check(CLI::NonNegativeNumber);

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "magnetization at the origin across box sides (CSV)");
  sweep.common.attach(c_sweep, true);
  c_sweep->add_option("--dim", sweep.dim, "dimension")->check(CLI::PositiveNumber);
  c_sweep->add_option("--sides", sweep.sides, "comma-separated odd sides")
      ->required()
      ->delimiter(',')
      ->expected(0, -1);
  c_sweep->add_option("--samples", sweep.samples, "samples per side")->check(CLI::PositiveNumber);
  c_sweep->add_option("--sampler", sweep.sampler, "cftp or forward")->check(sampler_names);
  c_sweep->add_option("--estimator", sweep.estimator, "spin-average or connectivity-indicator")
      ->check(CLI::IsMember({"spin-average", "connectivity-indicator"}));
  c_sweep->add_option("--horizon", sweep.horizon, "forward horizon (0: sites^2)");

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "exact enumeration of ground states");
  oracle.common.attach(c_oracle, false);
  c_oracle->add_option("--dim", oracle.dim, "dimension")->check(CLI::PositiveNumber);
  c_oracle->add_option("--side", oracle.side, "box side (odd)")->required()->check(odd_side);
  c_oracle->add_flag("--check-lemma1", oracle.check_lemma1,
                     "compare the summed origin spin with the connected-origin count");
  c_oracle->add_option("--cap", oracle.cap, "maximum number of sites")->check(CLI::PositiveNumber);

  CoupleArgs couple;
  auto* c_couple = app.add_subcommand("couple-check", "run the coupled chains and check their invariants");
  couple.common.attach(c_couple, false);
  c_couple->add_option("--dim", couple.dim, "dimension")->check(CLI::PositiveNumber);
  c_couple->add_option("--side", couple.side, "box side (odd)")->required()->check(odd_side);
  c_couple->add_option("--steps", couple.steps, "single-site updates");
  c_couple->add_option("--checkpoint-every", couple.checkpoint_every,
                       "steps between full cluster checks (0: sites, 1: every step)");

  TailArgs tail;
  auto* c_tail = app.add_subcommand("perc-tail", "origin cluster sizes of independent p=1/2 fields (CSV)");
  tail.common.attach(c_tail, true);
  c_tail->add_option("--dim", tail.dim, "dimension")->check(CLI::PositiveNumber);
  c_tail->add_option("--side", tail.side, "box side (odd)")->required()->check(odd_side);
  c_tail->add_option("--samples", tail.samples, "independent fields");
  c_tail->add_option("--fit-min", tail.fit_min, "smallest n in the log-tail fit");
  c_tail->add_option("--fit-max", tail.fit_max, "largest n in the log-tail fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (c_sample->parsed()) return run_sample(sample);
  if (c_sweep->parsed()) return run_sweep(sweep);
  if (c_oracle->parsed()) return run_oracle(oracle);
  if (c_couple->parsed()) return run_couple_check(couple);
  if (c_tail->parsed()) return run_perc_tail(tail);
  return kUsage;
}
