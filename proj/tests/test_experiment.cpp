#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "adbound/error.hpp"
#include "adbound/experiment.hpp"

using namespace adbound;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in);
}

const char* kSmallNet =
    "task = pr\n"
    "source = net\n"
    "roots = 3\nchildren = 7\nparents = 2\ncardinality = 2\n"
    "ad_ibound = 2\nmb_ibound = 3\n"
    "evidence = 1\ntrials = 4\nseed = 5\nresample_wide = true\n";

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse("# comment\n task = maxcsp  \nsource=maxcsp\nvars=12\nconstraints = 30 # trailing\nmethods = ad\n"
                   "resample_wide = yes\nz = -30\ncoeff_floor = 1e-6\n");
  CHECK(cfg.task == TaskKind::MaxCsp);
  CHECK(cfg.source == SourceKind::RandomMaxCsp);
  CHECK(cfg.vars == 12);
  CHECK(cfg.constraints == 30);
  CHECK(cfg.run_ad);
  CHECK_FALSE(cfg.run_mb);
  CHECK(cfg.resample_wide);
  CHECK(cfg.constants.z == -30.0);
  CHECK(cfg.constants.coeff_floor == 1e-6);

  auto model_cfg = parse("model = some.uai\n");
  CHECK(model_cfg.source == SourceKind::File);

  try {
    parse("task = pr\n\nbogus = 1\n");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("trials = many\n"), InputError);
  CHECK_THROWS_AS(parse("exact = maybe\n"), InputError);
  CHECK_THROWS_AS(parse("no equals sign\n"), InputError);
  CHECK_THROWS_AS(parse("trials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("task = pr\nsource = maxcsp\n"), ConfigError);
  CHECK_THROWS_AS(parse("coeff_floor = 0\n"), ConfigError);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/bench.cfg"), InputError);
}

TEST_CASE("belief experiment reports and aggregates") {
  auto cfg = parse(kSmallNet);
  auto res = run_experiment(cfg);
  REQUIRE(res.trials.size() == 16);
  REQUIRE(res.aggregate.size() == 4);
  for (const auto& r : res.trials) {
    REQUIRE(r.exact);
    if (r.quantity == "query") {
      REQUIRE(r.low.size() == 2);
      for (std::size_t v = 0; v < 2; ++v) {
        CHECK(r.low[v] <= (*r.exact)[v] + 1e-9);
        CHECK(r.high[v] >= (*r.exact)[v] - 1e-9);
      }
    } else {
      CHECK(r.quantity == "evidence");
      CHECK(r.low[0] <= (*r.exact)[0] * (1 + 1e-9));
      CHECK(r.high[0] >= (*r.exact)[0] * (1 - 1e-9));
    }
    CHECK(r.evidence.size() == 1);
    CHECK_FALSE(r.evidence.count(r.query));
    CHECK(r.hi_lo >= -1e-12);
  }
  CHECK(res.aggregate[0].method == "AD");
  CHECK(res.aggregate[0].quantity == "query");
  CHECK(res.aggregate[2].method == "MB");

  auto again = run_experiment(cfg);
  REQUIRE(again.trials.size() == res.trials.size());
  for (std::size_t k = 0; k < res.trials.size(); ++k) {
    CHECK(again.trials[k].low == res.trials[k].low);
    CHECK(again.trials[k].high == res.trials[k].high);
    CHECK(again.trials[k].query == res.trials[k].query);
  }

  std::string table = format_table(res.aggregate);
  for (const char* row : {"Low", "Est.", "High", "Exact", "Est. eps", "Hi-Lo", "Time"})
    CHECK(table.find(row) != std::string::npos);

  std::ostringstream os;
  write_records(os, res);
  std::istringstream lines(os.str());
  std::string line;
  int n = 0, agg = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    ++n;
    if (j["aggregate"].get<bool>()) ++agg;
    else CHECK(j.contains("query"));
  }
  CHECK(n == 20);
  CHECK(agg == 4);
}

TEST_CASE("a wide i-bound makes AD exact") {
  auto cfg = parse(std::string(kSmallNet) + "ad_ibound = 9\nmethods = ad\n");
  auto res = run_experiment(cfg);
  for (const auto& r : res.trials) {
    CHECK(std::abs(r.hi_lo) <= 1e-9);
    CHECK(r.est_eps <= 1e-9);
  }
}

TEST_CASE("max-csp experiment") {
  auto cfg = parse("task = maxcsp\nsource = maxcsp\nvars = 8\nconstraints = 14\ncardinality = 3\n"
                   "ad_ibound = 3\nmb_ibound = 4\ntrials = 3\nresample_wide = true\n");
  auto res = run_experiment(cfg);
  REQUIRE(res.trials.size() == 6);
  for (const auto& r : res.trials) {
    CHECK(r.quantity == "maxcsp");
    for (std::size_t v = 0; v < r.low.size(); ++v) {
      CHECK(r.low[v] <= (*r.exact)[v] + 1e-6);
      CHECK(r.high[v] >= (*r.exact)[v] - 1e-6);
      CHECK(r.est[v] >= r.low[v] - 1e-9);
      CHECK(r.est[v] <= r.high[v] + 1e-9);
    }
  }
}

TEST_CASE("metrics and aggregation") {
  BoundReport r;
  r.low = {0.01, 0.1};
  r.high = {0.1, 10.0};
  r.est = {0.1, 1.0};
  r.exact = std::vector<double>{0.01, 1.0};
  fill_metrics(r, true);
  CHECK(r.hi_lo == doctest::Approx(1.5));
  CHECK(r.est_eps == doctest::Approx(0.5));
  fill_metrics(r, false);
  CHECK(r.hi_lo == doctest::Approx((0.09 + 9.9) / 2));
  r.exact.reset();
  fill_metrics(r, true);
  CHECK(std::isnan(r.est_eps));
  CHECK(safe_log10(0.0) == doctest::Approx(-300.0));

  // Aggregates do not depend on trial order.
  auto cfg = parse(kSmallNet);
  auto res = run_experiment(cfg);
  auto a = aggregate_reports(res.trials, true);
  auto reversed = res.trials;
  std::reverse(reversed.begin(), reversed.end());
  auto b = aggregate_reports(reversed, true);
  REQUIRE(a.size() == b.size());
  for (const auto& x : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const BoundReport& y) {
      return y.method == x.method && y.ibound == x.ibound && y.quantity == x.quantity;
    });
    REQUIRE(it != b.end());
    CHECK(it->low == x.low);
    CHECK(it->high == x.high);
    CHECK(it->est == x.est);
    CHECK(it->hi_lo == x.hi_lo);
  }
}

TEST_CASE("trial failures keep their kind and gain context") {
  auto cfg = parse("model = /nonexistent/net.uai\ntrials = 2\n");
  try {
    run_experiment(cfg);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}
