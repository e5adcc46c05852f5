#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "beg/lattice.hpp"
#include "support/reference.hpp"

using beg::build_box;
using beg::SiteIndex;

TEST(BuildBox, SingleSiteSquare) {
  auto lat = build_box(2, 1);
  EXPECT_EQ(lat->site_count(), 1u);
  EXPECT_EQ(lat->origin(), 0u);
  EXPECT_TRUE(lat->interior_neighbors(0).empty());
  EXPECT_EQ(lat->boundary_contacts(0), 4);
  ASSERT_EQ(lat->internal_boundary().size(), 1u);
  EXPECT_EQ(lat->internal_boundary()[0], lat->origin());
}

TEST(BuildBox, ThreeByThree) {
  auto lat = build_box(2, 3);
  EXPECT_EQ(lat->site_count(), 9u);
  for (SiteIndex corner : {0u, 2u, 6u, 8u}) {
    EXPECT_EQ(lat->interior_neighbors(corner).size(), 2u);
    EXPECT_EQ(lat->boundary_contacts(corner), 2);
  }
  EXPECT_EQ(lat->origin(), 4u);
  EXPECT_EQ(lat->interior_neighbors(4).size(), 4u);
  EXPECT_EQ(lat->boundary_contacts(4), 0);
}

TEST(BuildBox, CubeOfSideThree) {
  auto lat = build_box(3, 3);
  EXPECT_EQ(lat->site_count(), 27u);
  EXPECT_EQ(lat->origin(), 13u);
  EXPECT_EQ(lat->interior_neighbors(13).size(), 6u);
  // Face centers: one coordinate at 0 or 2, the others at 1.
  for (SiteIndex f : {4u, 10u, 12u, 14u, 16u, 22u}) EXPECT_EQ(lat->boundary_contacts(f), 1) << f;
}

TEST(BuildBox, RejectsBadArguments) {
  EXPECT_THROW(build_box(2, 4), std::invalid_argument);
  EXPECT_THROW(build_box(2, 0), std::invalid_argument);
  EXPECT_THROW(build_box(2, -3), std::invalid_argument);
  EXPECT_THROW(build_box(0, 3), std::invalid_argument);
}

TEST(SiteCoordinates, Examples) {
  EXPECT_EQ(build_box(2, 3)->coordinates(4), (std::vector<int>{1, 1}));
  EXPECT_EQ(build_box(2, 3)->coordinates(0), (std::vector<int>{0, 0}));
  EXPECT_EQ(build_box(3, 3)->coordinates(13), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(build_box(2, 3)->coordinates(1), (std::vector<int>{0, 1}));  // row-major
  EXPECT_THROW(build_box(2, 3)->coordinates(9), std::out_of_range);
}

class LatticeInvariants : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(LatticeInvariants, Hold) {
  const auto [d, L] = GetParam();
  auto lat = build_box(d, L);
  const ref::Box rb(d, L);
  ASSERT_EQ(lat->site_count(), static_cast<std::size_t>(rb.n));
  EXPECT_EQ(lat->coordinates(lat->origin()), std::vector<int>(d, (L - 1) / 2));

  std::size_t contact_sum = 0;
  for (SiteIndex i = 0; i < lat->site_count(); ++i) {
    const auto nb = lat->interior_neighbors(i);
    EXPECT_EQ(static_cast<int>(nb.size()) + lat->boundary_contacts(i), 2 * d);
    EXPECT_EQ(lat->on_internal_boundary(i), lat->boundary_contacts(i) > 0);
    // Symmetry.
    for (SiteIndex j : nb) {
      const auto back = lat->interior_neighbors(j);
      EXPECT_NE(std::find(back.begin(), back.end(), i), back.end());
    }
    // Agreement with the coordinate-based reference.
    std::set<SiteIndex> mine(nb.begin(), nb.end());
    std::set<SiteIndex> theirs(rb.nbrs[i].begin(), rb.nbrs[i].end());
    EXPECT_EQ(mine, theirs);
    // Round trip.
    const auto c = lat->coordinates(i);
    EXPECT_EQ(lat->index_of(c), i);
    contact_sum += lat->boundary_contacts(i);
  }
  // Each of the 2d faces carries L^(d-1) edges to the exterior.
  EXPECT_EQ(contact_sum, static_cast<std::size_t>(2 * d * std::pow(L, d - 1)));
  if (L >= 3)
    EXPECT_EQ(lat->internal_boundary().size(),
              static_cast<std::size_t>(std::pow(L, d) - std::pow(L - 2, d)));
  EXPECT_TRUE(std::is_sorted(lat->internal_boundary().begin(), lat->internal_boundary().end()));
}

INSTANTIATE_TEST_SUITE_P(Boxes, LatticeInvariants,
                         ::testing::Values(std::pair{1, 1}, std::pair{1, 3}, std::pair{1, 7},
                                           std::pair{2, 1}, std::pair{2, 3}, std::pair{2, 5},
                                           std::pair{2, 7}, std::pair{3, 1}, std::pair{3, 3},
                                           std::pair{3, 5}, std::pair{4, 3}));
