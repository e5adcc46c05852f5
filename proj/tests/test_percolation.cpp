#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beg/percolation.hpp"

using namespace beg;

namespace {

std::vector<SiteIndex> origin_neighbors(const BoxLattice& lat) {
  const auto nb = lat.interior_neighbors(lat.origin());
  return {nb.begin(), nb.end()};
}

}  // namespace

TEST(PercStep, Examples) {
  auto lat = build_box(2, 3);
  PercConfig p(lat, false);
  EXPECT_EQ(p.visited_count(), 0u);
  perc_step(p, 4, 0.3);
  EXPECT_TRUE(p.open(4));
  EXPECT_TRUE(p.visited(4));
  perc_step(p, 4, 0.5);
  EXPECT_FALSE(p.open(4));
  EXPECT_EQ(p.visited_count(), 1u);
  EXPECT_DOUBLE_EQ(p.coverage(), 1.0 / 9);
}

TEST(PercStep, OpenFrequencyIsOneHalf) {
  auto lat = build_box(2, 1);
  PercConfig p(lat);
  Stream rng(8);
  const int visits = 100'000;
  int open = 0;
  for (int k = 0; k < visits; ++k) {
    perc_step(p, 0, rng.uniform());
    open += p.open(0);
  }
  EXPECT_NEAR(static_cast<double>(open) / visits, 0.5, 3 * std::sqrt(0.25 / visits));
}

TEST(CoupledBegPerc, Examples) {
  auto lat = build_box(2, 5);
  const SiteIndex o = lat->origin();
  {
    PercCoupledPair pair(lat, 0);
    pair.apply({o, 0.4});  // all +1 around: law {+1}
    EXPECT_EQ(pair.beg().config[o], kPlus);
    EXPECT_TRUE(pair.perc().open(o));
    pair.apply({o, 0.7});
    EXPECT_EQ(pair.beg().config[o], kZero);
    EXPECT_FALSE(pair.perc().open(o));
  }
  {
    PercCoupledPair pair(lat, 0);
    for (SiteIndex s : origin_neighbors(*lat)) pair.apply({s, 0.9});
    pair.apply({o, 0.6});
    for (SiteIndex s : origin_neighbors(*lat)) ASSERT_EQ(pair.beg().config[s], kZero);
    pair.apply({o, 0.4});  // law {0}: +1 needs u < 1/3
    EXPECT_EQ(pair.beg().config[o], kZero);
    EXPECT_TRUE(pair.perc().open(o));
    EXPECT_TRUE(check_containment(pair));
  }
}

TEST(CoupledBegPerc, PlusImpliesOpenForEveryLawAndCell) {
  for (LawKind k : {LawKind::Free, LawKind::PlusOrZero, LawKind::ZeroOrMinus, LawKind::ZeroOnly})
    for (int i = 0; i < 2400; ++i) {
      const double u = i / 2400.0;
      PercConfig p(build_box(2, 1));
      p.step(0, u);
      if (draw_spin(k, u) == kPlus) EXPECT_TRUE(p.open(0)) << u;
      if (u >= 0.5) EXPECT_NE(draw_spin(k, u), kPlus);
    }
}

TEST(Containment, InitialAndVacuous) {
  auto lat = build_box(2, 7);
  PercCoupledPair pair(lat, 1);
  EXPECT_TRUE(check_containment(pair));
  ClusterScratch scratch(lat->site_count());
  PercConfig closed(lat, false);
  EXPECT_TRUE(cluster_contained(SpinConfig(lat), closed, scratch));
  EXPECT_FALSE(cluster_contained(extremal_top(lat), closed, scratch));
}

TEST(Containment, HoldsAtEveryCheckpointOverAMillionSteps) {
  auto lat = build_box(2, 21);
  PercCoupledPair pair(lat, 2718);
  ClusterScratch scratch(lat->site_count());
  const std::size_t n = lat->site_count();
  for (std::uint64_t t = 1; t <= 1'000'000; ++t) {
    const Move m = pair.step();
    if (pair.beg().config[m.site] == kPlus) ASSERT_TRUE(pair.perc().open(m.site)) << t;
    if (t % n == 0) ASSERT_TRUE(check_containment(pair, scratch)) << t;
  }
  EXPECT_DOUBLE_EQ(pair.perc().coverage(), 1.0);
}

TEST(Containment, StrictModeOnSmallBox) {
  auto lat = build_box(2, 5);
  PercCoupledPair pair(lat, 5);
  ClusterScratch scratch(lat->site_count());
  for (int t = 0; t < 100'000; ++t) {
    pair.step();
    ASSERT_TRUE(check_containment(pair, scratch)) << t;
  }
}

TEST(PercTail, OriginOpenProbability) {
  auto lat = build_box(2, 41);
  const auto h = perc_cluster_tail(lat, 40'000, 11);
  const double se = std::sqrt(0.25 / h.samples);
  EXPECT_EQ(h.tail_count(0), h.samples);
  EXPECT_NEAR(h.tail(1), 0.5, 3 * se);
  // Given the origin is open, some neighbor is open with probability 15/16.
  const double cond = static_cast<double>(h.tail_count(2)) / h.tail_count(1);
  const double cond_se = std::sqrt(15.0 / 256 / h.tail_count(1));
  EXPECT_NEAR(cond, 15.0 / 16, 3 * cond_se);
}

TEST(PercTail, MonotoneAndExponential) {
  auto lat = build_box(2, 41);
  const auto h = perc_cluster_tail(lat, 100'000, 12);
  for (std::size_t k = 1; k <= h.counts.size(); ++k) EXPECT_LE(h.tail(k), h.tail(k - 1));
  const auto fit = fit_log_tail(h, 1, 40);
  ASSERT_TRUE(fit.has_value());
  EXPECT_LT(fit->slope, 0.0);
  EXPECT_GT(fit->r_squared, 0.95);
}

TEST(PercTail, IndependentOfWorkers) {
  auto lat = build_box(2, 15);
  const auto a = perc_cluster_tail(lat, 5000, 3, 1);
  const auto b = perc_cluster_tail(lat, 5000, 3, 3);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(PercTail, EdgeCases) {
  auto lat = build_box(2, 9);
  EXPECT_THROW(perc_cluster_tail(lat, 0, 1), std::invalid_argument);
  const auto one = perc_cluster_tail(lat, 1, 1);
  std::ostringstream os;
  write_tail_csv(os, one);
  const std::string csv = os.str();
  EXPECT_EQ(csv.rfind("n,count,empirical_tail\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(PercTail, CsvRows) {
  TailHistogram h;
  h.samples = 4;
  h.counts = {2, 1, 0, 1};
  std::ostringstream os;
  write_tail_csv(os, h);
  EXPECT_EQ(os.str(), "n,count,empirical_tail\n0,2,1\n1,1,0.5\n3,1,0.25\n");
  EXPECT_EQ(h.tail_count(2), 1u);
  EXPECT_DOUBLE_EQ(h.tail(1), 0.5);
}

TEST(CouplingCheck, ZeroStepsRunsInitialCheckpoint) {
  CouplingCheckOptions o;
  o.steps = 0;
  o.seed = 1;
  const auto r = run_coupling_check(build_box(2, 5), o);
  EXPECT_FALSE(r.violation.has_value());
  EXPECT_EQ(r.checkpoints, 1u);
  EXPECT_EQ(r.final_beg_cluster, 25u);
  EXPECT_EQ(r.final_perc_cluster, 25u);
  EXPECT_DOUBLE_EQ(r.coverage, 0.0);
}

TEST(CouplingCheck, StrictModeAndThreeDimensions) {
  CouplingCheckOptions strict;
  strict.steps = 20'000;
  strict.seed = 4;
  strict.checkpoint_every = 1;
  std::vector<std::string> lines;
  strict.log = [&](const std::string& s) { lines.push_back(s); };
  const auto r = run_coupling_check(build_box(2, 7), strict);
  EXPECT_FALSE(r.violation.has_value());
  EXPECT_EQ(r.checkpoints, 20'001u);
  EXPECT_LE(lines.size(), 22u);

  CouplingCheckOptions d3;
  d3.steps = 200'000;
  d3.seed = 5;
  const auto r3 = run_coupling_check(build_box(3, 5), d3);
  EXPECT_FALSE(r3.violation.has_value());
  EXPECT_EQ(r3.steps, 200'000u);
  EXPECT_EQ(r3.checkpoints, 200'000u / 125 + 1);
  EXPECT_DOUBLE_EQ(r3.coverage, 1.0);
}
