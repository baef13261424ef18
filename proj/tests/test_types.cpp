#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "roam/types.hpp"

using namespace roam;

namespace {

VisitEvent make_event(const char* network, std::int64_t start, double duration,
                      VisitKind kind = VisitKind::completed) {
  VisitEvent e;
  e.node = NodeId("mn1");
  e.network = NetworkId(network);
  e.start_s = start;
  e.duration_s = duration;
  e.kind = kind;
  return e;
}

}  // namespace

TEST_CASE("validate_event accepts a well-formed visit") {
  CHECK_FALSE(validate_event(make_event("AP1", 100, 60)).has_value());
}

TEST_CASE("validate_event names the offending field") {
  auto empty_id = validate_event(make_event("", 100, 60));
  REQUIRE(empty_id.has_value());
  CHECK(empty_id->field == "network");

  auto negative = validate_event(make_event("AP1", 100, -5));
  REQUIRE(negative.has_value());
  CHECK(negative->field == "duration");

  auto bad_start = validate_event(make_event("AP1", -1, 60));
  REQUIRE(bad_start.has_value());
  CHECK(bad_start->field == "start");

  VisitEvent no_node = make_event("AP1", 100, 60);
  no_node.node = NodeId("");
  CHECK(validate_event(no_node)->field == "node");
}

TEST_CASE("validate_event rejects non-finite numerics") {
  CHECK(validate_event(make_event("AP1", 0, std::numeric_limits<double>::quiet_NaN()))->field ==
        "duration");
  CHECK(validate_event(make_event("AP1", 0, std::numeric_limits<double>::infinity()))->field ==
        "duration");
  VisitEvent e = make_event("AP1", 0, 60);
  e.attractiveness = std::numeric_limits<double>::quiet_NaN();
  CHECK(validate_event(e)->field == "attractiveness");
  e.attractiveness = 1.5;
  CHECK(validate_event(e)->field == "attractiveness");
}

TEST_CASE("zero-length visits are allowed, for rejections and degenerates") {
  CHECK_FALSE(validate_event(make_event("AP1", 10, 0, VisitKind::rejection)).has_value());
  CHECK_FALSE(validate_event(make_event("AP1", 10, 0)).has_value());
}

TEST_CASE("network id ordering is a deterministic total order") {
  std::mt19937_64 rng(2024);
  std::vector<NetworkId> ids;
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int j = 0; j < len; ++j) s.push_back(static_cast<char>('A' + rng() % 26));
    ids.emplace_back(s);
  }
  std::sort(ids.begin(), ids.end());
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    const auto& a = ids[i];
    const auto& b = ids[i + 1];
    CHECK_FALSE(b < a);                       // antisymmetry with the sort order
    CHECK(((a < b) || (b < a) || (a == b)));  // totality
    CHECK((a == b) == (a.str() == b.str()));  // byte equality
  }
  for (int i = 0; i < 50; ++i) {
    const auto& a = ids[rng() % ids.size()];
    const auto& b = ids[rng() % ids.size()];
    const auto& c = ids[rng() % ids.size()];
    if (a < b && b < c) CHECK(a < c);  // transitivity
  }
}

TEST_CASE("ema_step hits fixed points and the endpoint weights exactly") {
  for (double w : {0.0, 0.25, 0.3, 0.5, 0.7, 0.99, 1.0}) {
    CHECK(ema_step(2793.7, 2793.7, w) == 2793.7);
  }
  CHECK(ema_step(0.4, 0.8, 1.0) == 0.4);
  CHECK(ema_step(0.4, 0.8, 0.0) == 0.8);
  CHECK(ema_step(600.0, 1200.0, 0.5) == doctest::Approx(900.0).epsilon(1e-12));
}

TEST_CASE("params validation") {
  Params p;
  CHECK_FALSE(p.validate().has_value());
  p.alpha = 1.2;
  CHECK(p.validate()->field == "alpha");
  p = Params{};
  p.gamma = -0.1;
  CHECK(p.validate()->field == "gamma");
  p = Params{};
  p.notify_window_s = 0;
  CHECK(p.validate()->field == "notify_window");
  p = Params{};
  p.warmup = -1;
  CHECK(p.validate()->field == "warmup");
}
