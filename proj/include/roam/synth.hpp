#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "roam/types.hpp"

namespace roam {

// Trajectory archetypes reflected in the visit order:
//  - mixed: most-visits-first interleave, no immediate revisits where avoidable
//  - alternating: strict round-robin over the networks
//  - bookend_dominants: dominants alternate at both ends, the rest in between
//  - timeslot_blocks: each network visited in one consecutive block, never again
enum class SynthStructure { mixed, alternating, bookend_dominants, timeslot_blocks };

struct SynthProfile {
  NodeId node{"mn-synth"};
  int networks = 4;
  int waypoints = 20;
  double total_duration_s = 200000.0;  // trajectory span, first start to last end
  SynthStructure structure = SynthStructure::mixed;
  int dominant_count = 0;         // networks with a boosted visit share and ~3x dwell
  double dominant_share = 0.0;    // fraction of all waypoints granted to dominants
  std::vector<std::string> dominant_ids;  // optional labels for the dominants
  int single_visit_networks = 0;  // networks forced to exactly one visit
  double gap_fraction = 0.6;      // share of the span spent detached
  double gap_spread = 0.5;        // gaps drawn uniform in [1-s, 1+s] x mean
  double duration_sigma = 0.5;    // log-normal shape of the dwell times
  std::uint64_t seed = 1;
};

namespace detail {

// Self-contained draws on top of the (standardized) mt19937_64 stream, so a
// seed produces the same trace on every platform and standard library.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

 private:
  std::mt19937_64 engine_;
};

// Most-remaining-first with immediate repeats avoided where an alternative
// exists; ties go to the lower index. Deterministic.
inline std::vector<int> schedule_mixed(std::vector<int> remaining, int prev = -1) {
  std::vector<int> seq;
  const int total = std::accumulate(remaining.begin(), remaining.end(), 0);
  seq.reserve(static_cast<std::size_t>(total));
  for (int step = 0; step < total; ++step) {
    int pick = -1;
    for (int i = 0; i < static_cast<int>(remaining.size()); ++i) {
      if (remaining[static_cast<std::size_t>(i)] <= 0 || i == prev) continue;
      if (pick < 0 || remaining[static_cast<std::size_t>(i)] >
                          remaining[static_cast<std::size_t>(pick)])
        pick = i;
    }
    if (pick < 0) pick = prev;  // only the previous network has visits left
    seq.push_back(pick);
    remaining[static_cast<std::size_t>(pick)] -= 1;
    prev = pick;
  }
  return seq;
}

inline std::string default_network_name(int index, int total) {
  const int width = total >= 100 ? 3 : 2;
  std::string digits = std::to_string(index + 1);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return "AP" + digits;
}

}  // namespace detail

// Deterministic function of (profile, seed). The emitted trace is valid,
// sorted, hits the requested network and waypoint counts exactly and lands
// the span within 1% of the target (normally exactly).
inline std::vector<VisitEvent> generate(const SynthProfile& prof) {
  const int n = prof.networks;
  const int w = prof.waypoints;
  if (n < 1) throw std::invalid_argument("synth: networks must be >= 1");
  if (w < n) throw std::invalid_argument("synth: more networks than waypoints");
  if (!(prof.total_duration_s >= 100.0 * w))
    throw std::invalid_argument("synth: total duration must be at least 100 s per waypoint");
  if (prof.gap_fraction < 0.0 || prof.gap_fraction > 0.95)
    throw std::invalid_argument("synth: gap fraction must be in [0, 0.95]");
  if (prof.gap_spread < 0.0 || prof.gap_spread >= 1.0)
    throw std::invalid_argument("synth: gap spread must be in [0, 1)");
  if (prof.duration_sigma < 0.0 || prof.duration_sigma > 2.0)
    throw std::invalid_argument("synth: duration sigma must be in [0, 2]");
  if (prof.dominant_count < 0 || prof.dominant_count > n)
    throw std::invalid_argument("synth: dominant count out of range");
  if (prof.dominant_share < 0.0 || prof.dominant_share >= 1.0)
    throw std::invalid_argument("synth: dominant share must be in [0, 1)");
  if ((prof.dominant_count > 0) != (prof.dominant_share > 0.0))
    throw std::invalid_argument("synth: dominant count and share must be set together");
  if (prof.single_visit_networks < 0 || prof.single_visit_networks + prof.dominant_count > n)
    throw std::invalid_argument("synth: single-visit networks out of range");
  if (prof.structure == SynthStructure::alternating &&
      (prof.dominant_count > 0 || prof.single_visit_networks > 0))
    throw std::invalid_argument("synth: alternating structure takes no dominants or singles");
  if (prof.structure == SynthStructure::bookend_dominants && prof.dominant_count < 1)
    throw std::invalid_argument("synth: bookend structure needs a dominant network");

  const int dominants = prof.dominant_count;
  const int singles = prof.single_visit_networks;
  const int others = n - dominants - singles;

  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i < dominants && i < static_cast<int>(prof.dominant_ids.size()))
      ids.push_back(prof.dominant_ids[static_cast<std::size_t>(i)]);
    else
      ids.push_back(detail::default_network_name(i, n));
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size())
    throw std::invalid_argument("synth: network names collide");

  // per-network visit counts; aggregate counts must work out exactly
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  if (prof.structure == SynthStructure::alternating) {
    for (int i = 0; i < w; ++i) counts[static_cast<std::size_t>(i % n)] += 1;
  } else {
    const int dominant_visits =
        dominants > 0 ? static_cast<int>(std::llround(prof.dominant_share * w)) : 0;
    if (dominants > 0 && dominant_visits < 2 * dominants)
      throw std::invalid_argument("synth: dominant share leaves dominants under-visited");
    const int rest = w - dominant_visits - singles;
    if (rest < others)
      throw std::invalid_argument("synth: waypoints cannot cover every network");
    if (others == 0 && rest != 0)
      throw std::invalid_argument(
          "synth: dominant share and singles must cover the waypoints exactly");
    for (int i = 0; i < dominants; ++i)
      counts[static_cast<std::size_t>(i)] =
          dominant_visits / dominants + (i < dominant_visits % dominants ? 1 : 0);
    for (int i = dominants; i < dominants + singles; ++i) counts[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < others; ++i)
      counts[static_cast<std::size_t>(dominants + singles + i)] =
          rest / others + (i < rest % others ? 1 : 0);
  }

  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(w));
  switch (prof.structure) {
    case SynthStructure::alternating:
      for (int i = 0; i < w; ++i) seq.push_back(i % n);
      break;
    case SynthStructure::timeslot_blocks:
      for (int i = 0; i < n; ++i)
        seq.insert(seq.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]), i);
      break;
    case SynthStructure::bookend_dominants: {
      std::vector<int> rem(counts.begin(), counts.begin() + dominants);
      std::vector<int> dv;
      while (static_cast<int>(dv.size()) <
             std::accumulate(counts.begin(), counts.begin() + dominants, 0)) {
        for (int d = 0; d < dominants; ++d) {
          if (rem[static_cast<std::size_t>(d)] > 0) {
            dv.push_back(d);
            rem[static_cast<std::size_t>(d)] -= 1;
          }
        }
      }
      const int tail_len = std::max(1, static_cast<int>(dv.size()) / 3);
      const int head_len = static_cast<int>(dv.size()) - tail_len;
      seq.insert(seq.end(), dv.begin(), dv.begin() + head_len);
      std::vector<int> middle_counts(counts.begin() + dominants, counts.end());
      for (int idx : detail::schedule_mixed(middle_counts)) seq.push_back(dominants + idx);
      seq.insert(seq.end(), dv.begin() + head_len, dv.end());
      break;
    }
    case SynthStructure::mixed:
      seq = detail::schedule_mixed(counts);
      break;
  }

  detail::SynthRng rng(prof.seed);
  std::vector<double> dur_raw(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i)
    dur_raw[static_cast<std::size_t>(i)] =
        rng.lognormal(0.0, prof.duration_sigma) *
        (seq[static_cast<std::size_t>(i)] < dominants ? 3.0 : 1.0);
  std::vector<double> gap_raw(w > 1 ? static_cast<std::size_t>(w - 1) : 0);
  for (auto& g : gap_raw) g = rng.uniform(1.0 - prof.gap_spread, 1.0 + prof.gap_spread);

  const auto span = static_cast<std::int64_t>(std::llround(prof.total_duration_s));
  const double dur_budget = (1.0 - prof.gap_fraction) * prof.total_duration_s;
  const double gap_budget = prof.total_duration_s - dur_budget;
  const double dur_scale =
      dur_budget / std::accumulate(dur_raw.begin(), dur_raw.end(), 0.0);
  const double gap_scale =
      gap_raw.empty() ? 0.0
                      : gap_budget / std::accumulate(gap_raw.begin(), gap_raw.end(), 0.0);

  std::vector<VisitEvent> events;
  events.reserve(static_cast<std::size_t>(w));
  std::int64_t t = 0;
  for (int i = 0; i < w; ++i) {
    std::int64_t dur = std::max<std::int64_t>(
        1, std::llround(dur_raw[static_cast<std::size_t>(i)] * dur_scale));
    if (i == w - 1) dur = std::max<std::int64_t>(1, span - t);  // land the span exactly
    VisitEvent e;
    e.node = prof.node;
    e.network = NetworkId(ids[static_cast<std::size_t>(seq[static_cast<std::size_t>(i)])]);
    e.start_s = t;
    e.duration_s = static_cast<double>(dur);
    events.push_back(std::move(e));
    t += dur;
    if (i + 1 < w)
      t += std::max<std::int64_t>(
          0, std::llround(gap_raw[static_cast<std::size_t>(i)] * gap_scale));
  }
  return events;
}

}  // namespace roam
