#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gapgauge/gaps.hpp"

namespace gg = gapgauge;
using gg::ErrorCode;

namespace {

gg::TimeSeries one_to_ten() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i);
  return gg::TimeSeries::fully_observed(0, 3600, v);
}

// Sort extended intervals and check each begins at or after the previous end.
bool extended_intervals_disjoint(const gg::GapSet& set) {
  std::vector<std::pair<std::int64_t, std::int64_t>> iv;
  for (const auto& g : set.gaps) iv.emplace_back(g.start_index - g.length, g.start_index + g.length);
  std::sort(iv.begin(), iv.end());
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first < iv[i - 1].second) return false;
  }
  return true;
}

}  // namespace

TEST(GenerateGaps, HundredGapsReproducible) {
  const auto a = gg::generate_gaps(100'000, 100, 2, 48, 7);
  const auto b = gg::generate_gaps(100'000, 100, 2, 48, 7);
  ASSERT_EQ(a.gaps.size(), 100u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(gg::to_json(a).dump(), gg::to_json(b).dump());
  EXPECT_TRUE(extended_intervals_disjoint(a));
  for (const auto& g : a.gaps) {
    EXPECT_GE(g.length, 2);
    EXPECT_LE(g.length, 48);
    EXPECT_GE(g.start_index, g.length);
    EXPECT_LE(g.end_index(), 100'000);
  }
  EXPECT_EQ(a.seed, 7u);
  EXPECT_EQ(a.source_length, 100'000);
}

TEST(GenerateGaps, DifferentSeedsDiffer) {
  EXPECT_NE(gg::generate_gaps(100'000, 100, 2, 48, 7), gg::generate_gaps(100'000, 100, 2, 48, 8));
}

TEST(GenerateGaps, SingleGapBounds) {
  std::set<std::int64_t> starts;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto set = gg::generate_gaps(10, 1, 2, 2, seed);
    ASSERT_EQ(set.gaps.size(), 1u);
    EXPECT_EQ(set.gaps[0].length, 2);
    EXPECT_GE(set.gaps[0].start_index, 2);
    EXPECT_LE(set.gaps[0].start_index, 8);
    starts.insert(set.gaps[0].start_index);
  }
  // every feasible start is reachable
  EXPECT_EQ(starts.size(), 7u);
}

TEST(GenerateGaps, CapacityError) {
  for (std::uint64_t seed : {0u, 1u, 42u}) {
    const auto msg = GG_EXPECT_ERROR(gg::generate_gaps(8, 3, 4, 4, seed), ErrorCode::capacity);
    EXPECT_NE(msg.find("placed 1 of 3"), std::string::npos) << msg;
  }
}

TEST(GenerateGaps, RejectsBadBounds) {
  GG_EXPECT_ERROR(gg::generate_gaps(100, 1, 5, 4, 1), ErrorCode::invalid_argument);
  GG_EXPECT_ERROR(gg::generate_gaps(100, 1, 0, 4, 1), ErrorCode::invalid_argument);
  GG_EXPECT_ERROR(gg::generate_gaps(100, 0, 1, 4, 1), ErrorCode::invalid_argument);
}

TEST(ApplyGaps, MasksAndHoldsOut) {
  const gg::GapSet set{{{4, 2}}, 0, 10};
  const auto out = gg::apply_gaps(one_to_ten(), set);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(out.masked.observed[i], i != 4 && i != 5) << i;
  ASSERT_EQ(out.truth.size(), 1u);
  EXPECT_EQ(out.truth[0], (std::vector<double>{5, 6}));
  EXPECT_EQ(out.masked.values, one_to_ten().values);
}

TEST(ApplyGaps, EmptySetIsIdentity) {
  const auto out = gg::apply_gaps(one_to_ten(), gg::GapSet{{}, 0, 10});
  EXPECT_EQ(out.masked, one_to_ten());
  EXPECT_TRUE(out.truth.empty());
}

TEST(ApplyGaps, ConflictNamesGap) {
  auto s = one_to_ten();
  s.observed[6] = false;
  const auto msg = GG_EXPECT_ERROR(gg::apply_gaps(s, gg::GapSet{{{2, 1}, {6, 2}}, 0, 10}), ErrorCode::conflict);
  EXPECT_NE(msg.find("gap 1"), std::string::npos) << msg;
}

TEST(ApplyGaps, RestoringTruthRecoversSeries) {
  std::vector<double> v(2000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.1 * static_cast<double>(i)) * 50.0;
  const auto series = gg::TimeSeries::fully_observed(0, 3600, v);
  const auto set = gg::generate_gaps(2000, 20, 2, 48, 3);
  auto out = gg::apply_gaps(series, set);
  for (std::size_t g = 0; g < set.gaps.size(); ++g) {
    for (std::int64_t k = 0; k < set.gaps[g].length; ++k) {
      const auto idx = static_cast<std::size_t>(set.gaps[g].start_index + k);
      out.masked.values[idx] = out.truth[g][static_cast<std::size_t>(k)];
      out.masked.observed[idx] = true;
    }
  }
  EXPECT_EQ(out.masked, series);
}

TEST(PreGapWindow, PrecedingValues) {
  const auto w = gg::pre_gap_window(one_to_ten(), {4, 2});
  EXPECT_EQ(std::vector<double>(w.values().begin(), w.values().end()), (std::vector<double>{3, 4}));
}

TEST(PreGapWindow, Boundary) {
  const auto w = gg::pre_gap_window(one_to_ten(), {2, 2});
  EXPECT_EQ(std::vector<double>(w.values().begin(), w.values().end()), (std::vector<double>{1, 2}));
}

TEST(PreGapWindow, Underflow) { GG_EXPECT_ERROR(gg::pre_gap_window(one_to_ten(), {1, 2}), ErrorCode::reference_window); }

TEST(PreGapWindow, UnobservedReference) {
  auto s = one_to_ten();
  s.observed[3] = false;
  GG_EXPECT_ERROR(gg::pre_gap_window(s, {4, 2}), ErrorCode::reference_window);
}

TEST(PreGapWindow, SizeMatchesGapForGeneratedSets) {
  std::vector<double> v(5000, 1.0);
  const auto series = gg::TimeSeries::fully_observed(0, 3600, v);
  const auto set = gg::generate_gaps(5000, 50, 1, 48, 11);
  const auto masked = gg::apply_gaps(series, set).masked;
  for (const auto& g : set.gaps) EXPECT_EQ(gg::pre_gap_window(masked, g).size(), static_cast<std::size_t>(g.length));
}

TEST(GapSetJson, FieldOrderAndRoundTrip) {
  const gg::GapSet set{{{10, 3}, {40, 5}}, 99, 100};
  EXPECT_EQ(gg::to_json(set).dump(),
            R"({"seed":99,"source_length":100,"gaps":[{"start":10,"len":3},{"start":40,"len":5}]})");
  EXPECT_EQ(gg::gapset_from_json(gg::to_json(set)), set);
}

TEST(GapSetJson, MalformedIsSchemaError) {
  GG_EXPECT_ERROR(gg::gapset_from_json(nlohmann::ordered_json::parse(R"({"seed":1})")), ErrorCode::schema);
}
