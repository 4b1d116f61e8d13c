#include <doctest.h>

#include <random>

#include "citemerge/gold.hpp"

using namespace citemerge;

TEST_SUITE_BEGIN("gold");

namespace {

// The four published condition sets, written out literally.
bool cond_g(const GoldInput& in) {
  const long long d = gold_delta(in);
  return (in.n_ds < in.k_ds && d >= 0) || in.n_m <= in.n_ds;
}
bool cond_o(const GoldInput& in) {
  return in.n_ds < in.k_ds && gold_delta(in) < 0 && in.n_m > in.n_ds;
}
bool cond_l(const GoldInput& in) {
  return in.n_ds >= in.k_ds && gold_delta(in) < 0 && in.n_m > in.n_ds;
}
bool cond_d(const GoldInput& in) {
  return in.n_ds >= in.k_ds && gold_delta(in) >= 0 && in.n_m > in.n_ds;
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(classify({10, 20, 8, 25}) == GoldCase::GloriousUpgrade);  // n_m <= n_ds
  CHECK(classify({10, 20, 15, 20}) == GoldCase::OrdinaryGain);    // delta = -5
  CHECK(classify({20, 10, 25, 12}) == GoldCase::LowImpact);       // delta = -3
  CHECK(classify({20, 10, 25, 40}) == GoldCase::DiverseBoost);    // delta = 25
  CHECK(classify({5, 5, 5, 5}) == GoldCase::GloriousUpgrade);     // no change
}

TEST_CASE("delta arithmetic") {
  CHECK(gold_delta({10, 20, 15, 20}) == -5);
  CHECK(gold_delta({20, 10, 25, 40}) == 25);
  CHECK(gold_delta({1, 1, 1, 1}) == 0);
}

TEST_CASE("boundary: equal ranks in the original dataset sit on the L/D side") {
  // n_ds == k_ds fails the strict n_ds < k_ds, so with a worsened prestige
  // rank the input lands in L or D, never O.
  CHECK(classify({7, 7, 9, 5}) == GoldCase::LowImpact);     // delta = -4+2 = ... < 0
  CHECK(classify({7, 7, 9, 11}) == GoldCase::DiverseBoost); // delta = 2 >= 0
}

TEST_CASE("every tuple lands in exactly one case under the precedence") {
  // Exhaustive over a reduced cube here; the acceptance suite runs [1..30]^4.
  for (std::uint32_t n_ds = 1; n_ds <= 12; ++n_ds)
    for (std::uint32_t k_ds = 1; k_ds <= 12; ++k_ds)
      for (std::uint32_t n_m = 1; n_m <= 12; ++n_m)
        for (std::uint32_t k_m = 1; k_m <= 12; ++k_m) {
          const GoldInput in{n_ds, k_ds, n_m, k_m};
          const GoldCase got = classify(in);
          if (cond_g(in)) {
            REQUIRE(got == GoldCase::GloriousUpgrade);
          } else {
            // Exactly one of the remaining conditions fires.
            const int fired = int(cond_o(in)) + int(cond_l(in)) + int(cond_d(in));
            REQUIRE(fired == 1);
            if (cond_o(in)) REQUIRE(got == GoldCase::OrdinaryGain);
            if (cond_l(in)) REQUIRE(got == GoldCase::LowImpact);
            if (cond_d(in)) REQUIRE(got == GoldCase::DiverseBoost);
          }
        }
}

TEST_CASE("rank shifts preserve the case exactly when the three signs survive") {
  // The class is a function of sign(n_ds - k_ds), sign(delta), and
  // sign(n_m - n_ds); a common constant keeps all three differences, while
  // independent perturbations may flip them.
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::uint32_t> rank(1, 40);
  std::uniform_int_distribution<int> jitter(-3, 3);
  auto sign = [](long long v) { return v > 0 ? 1 : v < 0 ? -1 : 0; };
  auto bump = [](std::uint32_t r, int by) {
    const long long moved = static_cast<long long>(r) + by;
    return static_cast<std::uint32_t>(std::max(1LL, moved));
  };
  std::size_t preserved_trials = 0;
  for (int trial = 0; trial < 8000; ++trial) {
    const GoldInput in{rank(rng), rank(rng), rank(rng), rank(rng)};

    const int c = jitter(rng) + 10;
    const GoldInput shifted{in.n_ds + c, in.k_ds + c, in.n_m + c, in.k_m + c};
    CHECK(classify(in) == classify(shifted));  // common constant: always safe

    const GoldInput moved{bump(in.n_ds, jitter(rng)), bump(in.k_ds, jitter(rng)),
                          bump(in.n_m, jitter(rng)), bump(in.k_m, jitter(rng))};
    const bool signs_survive =
        sign(long(in.n_ds) - long(in.k_ds)) == sign(long(moved.n_ds) - long(moved.k_ds)) &&
        sign(gold_delta(in)) == sign(gold_delta(moved)) &&
        sign(long(in.n_m) - long(in.n_ds)) == sign(long(moved.n_m) - long(moved.n_ds));
    if (signs_survive) {
      ++preserved_trials;
      CHECK(classify(in) == classify(moved));
    }
  }
  CHECK(preserved_trials > 1000);  // the conditional branch is actually exercised
}

TEST_CASE("dataset classification tallies") {
  SUBCASE("one article per case") {
    std::unordered_map<Uid, RankPair> ds{
        {0, {10, 20}},  // G: n_m <= n_ds
        {1, {10, 20}},  // O
        {2, {20, 10}},  // L
        {3, {20, 10}},  // D
    };
    std::unordered_map<Uid, RankPair> m{
        {0, {8, 25}},
        {1, {15, 20}},
        {2, {25, 12}},
        {3, {25, 40}},
    };
    const GoldClassification c = classify_dataset(ds, m, 8);
    CHECK(c.classified == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(c.counts[i] == 1);
      CHECK(c.proportion_of_dataset(static_cast<GoldCase>(i)) == 0.25);
      CHECK(c.proportion_of_merged(static_cast<GoldCase>(i)) == 0.125);
    }
    CHECK(c.rows.front().uid == 0);  // rows come back sorted by uid
    CHECK(c.rows.back().uid == 3);
  }
  SUBCASE("improved prestige ranks everywhere give all G") {
    std::unordered_map<Uid, RankPair> ds, m;
    for (Uid u = 0; u < 50; ++u) {
      ds[u] = {u + 10, u + 3};
      m[u] = {u + 2, u + 30};
    }
    const GoldClassification c = classify_dataset(ds, m, 50);
    CHECK(c.counts[static_cast<std::size_t>(GoldCase::GloriousUpgrade)] == 50);
  }
  SUBCASE("articles missing from one map are excluded and counted") {
    std::unordered_map<Uid, RankPair> ds{{0, {1, 1}}, {1, {2, 2}}};
    std::unordered_map<Uid, RankPair> m{{0, {1, 1}}};
    const GoldClassification c = classify_dataset(ds, m, 10);
    CHECK(c.classified == 1);
    CHECK(c.excluded == 1);
  }
  SUBCASE("tallies equal an independent reclassification") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<std::uint32_t> rank(1, 200);
    std::unordered_map<Uid, RankPair> ds, m;
    for (Uid u = 0; u < 500; ++u) {
      ds[u] = {rank(rng), rank(rng)};
      m[u] = {rank(rng), rank(rng)};
    }
    const GoldClassification c = classify_dataset(ds, m, 500);
    std::array<std::size_t, 4> expected{};
    for (const auto& [uid, r] : ds) {
      const GoldInput in{r.asp_rank, r.cite_rank, m[uid].asp_rank, m[uid].cite_rank};
      if (cond_g(in))
        ++expected[0];
      else if (cond_o(in))
        ++expected[1];
      else if (cond_l(in))
        ++expected[2];
      else
        ++expected[3];
    }
    CHECK(c.counts == expected);
  }
}

TEST_SUITE_END();
