#include <doctest.h>

#include <random>

#include "adbound/error.hpp"
#include "adbound/minibuckets.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adbound;

TEST_CASE("first-fit partition") {
  // Bucket of B holding tables over {A,B}, {B,C}, {B,D}.
  Factor ab = Factor::filled({0, 1}, {2, 2}, 0.5), bc = Factor::filled({1, 2}, {2, 2}, 0.5),
         bd = Factor::filled({1, 3}, {2, 2}, 0.5);
  std::vector<Factor> bucket{ab, bc, bd};
  CHECK(mb_partition(bucket, 2).size() == 3);
  auto three = mb_partition(bucket, 3);
  REQUIRE(three.size() == 2);
  CHECK(three[0].size() == 2);
  CHECK(three[1][0] == bd);
  CHECK(mb_partition(bucket, 4).size() == 1);
  CHECK_THROWS_AS(mb_partition(bucket, 1), ConfigError);
}

TEST_CASE("mini-bucket bounds bracket the exact answer") {
  std::mt19937_64 rng(73);
  int split = 0;
  for (int t = 0; t < 60; ++t) {
    auto kind = static_cast<TaskKind>(t % 3);
    std::vector<Factor> fs;
    Domains dom;
    if (kind == TaskKind::MaxCsp) {
      auto csp = oracle::random_csp(rng, 8, 16, 3);
      fs = csp.constraints();
      dom = csp.domains();
    } else {
      auto net = oracle::random_network(rng, 8, 2, 2);
      fs = net.cpts();
      dom = net.domains();
    }
    VariableId q = static_cast<VariableId>(rng() % 8);
    Evidence ev;
    VariableId e = (q + 1) % 8;
    ev[e] = 0;
    Task task = kind == TaskKind::Belief ? Task::belief(q, ev) : kind == TaskKind::Mpe ? Task::mpe(q, ev) : Task::max_csp(q, ev);
    auto exact = oracle::enumerate_query(fs, dom, task);
    auto sliced = restrict_all(fs, ev);
    int i = 3;
    auto up = mb_run(sliced, dom, task, {i, MbMode::Upper});
    auto lo = mb_run(sliced, dom, task, {i, MbMode::Lower});
    auto est = mb_run(sliced, dom, task, {i, MbMode::Estimate});
    CHECK(up.order == lo.order);
    CHECK(up.order == est.order);
    if (up.split_buckets > 0) ++split;
    for (std::size_t x = 0; x < exact.size(); ++x) {
      double slack = 1e-9 * std::max(1.0, exact[x]);
      CHECK(up.values[x] >= exact[x] - slack);
      CHECK(lo.values[x] <= exact[x] + slack);
      CHECK(est.values[x] >= lo.values[x] - slack);
      CHECK(est.values[x] <= up.values[x] + slack);
      if (up.split_buckets == 0) {
        CHECK(oracle::rel_close(up.values[x], exact[x], 1e-9));
        CHECK(oracle::rel_close(lo.values[x], exact[x], 1e-9));
      }
    }
  }
  CHECK(split > 0);
}

TEST_CASE("a large i-bound gives exact answers") {
  auto net = fixtures::six_node_network();
  Task task = Task::belief(fixtures::D);
  auto exact = oracle::enumerate_query(net.cpts(), net.domains(), task);
  auto r = mb_run(net.cpts(), net.domains(), task, {6, MbMode::Upper});
  CHECK(r.split_buckets == 0);
  for (std::size_t x = 0; x < 2; ++x) CHECK(oracle::rel_close(r.values[x], exact[x], 1e-12));
}

TEST_CASE("mini-bucket validation") {
  auto net = fixtures::six_node_network();
  CHECK_THROWS_AS(mb_run(net.cpts(), net.domains(), Task::belief(0), {2, MbMode::Upper}), ConfigError);
  CHECK_THROWS_AS(mb_run(net.cpts(), net.domains(), Task::belief(0), {0, MbMode::Upper}), ConfigError);
  CHECK_THROWS_AS(mb_run(net.cpts(), net.domains(), Task::belief(0, {{1, 0}}), {3, MbMode::Upper}), InputError);
  CHECK(to_string(MbMode::Estimate) == "estimate");
}
