#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roam/ledger.hpp"
#include "roam/ranking.hpp"
#include "roam/tth.hpp"

namespace roam {

// One scored handover: the target chosen at the end of a visit versus the
// network the node actually moved to.
struct PredictionRecord {
  std::int64_t at_s = 0;  // prediction instant: end of the current visit
  NetworkId current;
  std::optional<NetworkId> predicted;
  NetworkId actual_next;
  bool correct = false;
  double tth_predicted_s = 0.0;  // estimate in force for the current visit
  double tth_actual_s = 0.0;     // realized duration of the current visit
  bool tth_had_estimate = false; // false on a first-ever visit to the network
};

struct EvaluationReport {
  NodeId node;
  std::size_t networks_visited = 0;
  std::size_t waypoints = 0;  // completed visits in the trajectory
  std::string path_features;
  double avg_visit_s = 0.0;
  double total_duration_s = 0.0;  // span from first visit start to last visit end
  double error_margin_pct = 0.0;  // 100 * mispredictions / predictions
  std::size_t predictions = 0;
  std::size_t mispredictions = 0;
  double tth_mae_s = 0.0;  // supplementary: mean |tth_predicted - duration|
  std::size_t tth_samples = 0;
  Params params;
  std::vector<PredictionRecord> records;
};

struct InsufficientTraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stable one-line rendering of a record; used by the prediction log and by
// the prefix-consistency checks, so it must stay byte-deterministic.
inline std::string format_record(const NodeId& node, const PredictionRecord& r) {
  std::string line = "predict node=" + node.str();
  line += " at=" + std::to_string(r.at_s);
  line += " current=" + r.current.str();
  line += " predicted=" + (r.predicted ? r.predicted->str() : std::string("-"));
  line += " actual=" + r.actual_next.str();
  line += " correct=";
  line += r.correct ? '1' : '0';
  line += " tth_pred_s=" + format_double(r.tth_predicted_s);
  line += " tth_actual_s=" + format_double(r.tth_actual_s);
  return line;
}

inline std::map<NodeId, std::vector<VisitEvent>> split_by_node(
    const std::vector<VisitEvent>& events) {
  std::map<NodeId, std::vector<VisitEvent>> by_node;
  for (const auto& e : events) by_node[e.node].push_back(e);
  return by_node;
}

namespace detail {

inline std::string describe_path(const std::map<NetworkId, NetworkStats>& rows,
                                 std::size_t waypoints) {
  std::size_t singles = 0;
  const NetworkId* top = nullptr;
  std::uint64_t top_visits = 0;
  std::size_t visited = 0;
  for (const auto& [id, row] : rows) {
    if (row.visits == 0) continue;
    ++visited;
    if (row.visits == 1) ++singles;
    if (row.visits > top_visits) {
      top_visits = row.visits;
      top = &id;
    }
  }
  if (!top || waypoints == 0) return "no completed visits";
  const long pct = std::lround(100.0 * static_cast<double>(top_visits) /
                               static_cast<double>(waypoints));
  return std::to_string(singles) + " of " + std::to_string(visited) +
         " networks visited once; top network " + top->str() + " holds " +
         std::to_string(pct) + "% of visits";
}

}  // namespace detail

// Replays one node's trace in order. At the end of each visit k (0-based,
// k >= warmup) and before revealing visit k+1, the ledger built from visits
// 0..k is ranked and a target is selected excluding the current network; the
// guess is scored against visit k+1. That yields n-1-warmup predictions for n
// visits, so a trace needs at least warmup+2 visits to be scorable. Rejection
// events feed the ledger but are not waypoints and are never scored.
inline EvaluationReport replay(const std::vector<VisitEvent>& events, const Params& p) {
  if (auto err = p.validate())
    throw std::invalid_argument("replay: invalid params: " + err->field + ": " + err->message);
  if (events.empty()) throw InsufficientTraceError("replay: empty trace");
  const NodeId node = events.front().node;
  for (const auto& e : events)
    if (e.node != node)
      throw std::invalid_argument("replay: events span more than one node");

  std::vector<const VisitEvent*> visits;
  visits.reserve(events.size());
  for (const auto& e : events)
    if (e.kind == VisitKind::completed) visits.push_back(&e);
  const std::size_t n = visits.size();
  const std::size_t warmup = static_cast<std::size_t>(p.warmup);
  if (n < warmup + 2)
    throw InsufficientTraceError("replay: trace has " + std::to_string(n) +
                                 " visits, needs at least " + std::to_string(warmup + 2));

  EvaluationReport report;
  report.node = node;
  report.params = p;
  report.waypoints = n;

  NodeLedger ledger(node);
  RankTable ranks;
  std::map<NetworkId, TthState> tth;

  std::size_t k = 0;  // index of the next completed visit
  double duration_sum = 0.0;
  double tth_abs_err_sum = 0.0;

  for (const auto& e : events) {
    if (e.kind == VisitKind::rejection) {
      ledger.apply_rejection(e);
      continue;
    }
    std::optional<TthState> in_force;
    if (auto it = tth.find(e.network); it != tth.end()) in_force = it->second;

    ledger.apply_visit(e, p);
    duration_sum += e.duration_s;
    tth[e.network] = update_tth(in_force, ledger.stats().at(e.network).d_avg_s, e.duration_s);

    if (k >= warmup && k + 1 < n) {
      const double now = e.end_s();
      ranks = rank_all(ledger, now, p, ranks);
      PredictionRecord rec;
      rec.at_s = std::llround(now);
      rec.current = e.network;
      rec.predicted = select_target(ranks, e.network);
      rec.actual_next = visits[k + 1]->network;
      rec.correct = rec.predicted && *rec.predicted == rec.actual_next;
      rec.tth_predicted_s = in_force ? in_force->tth_s : 0.0;
      rec.tth_actual_s = e.duration_s;
      rec.tth_had_estimate = in_force.has_value();
      if (rec.tth_had_estimate) {
        tth_abs_err_sum += std::abs(rec.tth_predicted_s - rec.tth_actual_s);
        report.tth_samples += 1;
      }
      report.records.push_back(std::move(rec));
    }
    ++k;
  }

  report.predictions = report.records.size();
  for (const auto& r : report.records)
    if (!r.correct) report.mispredictions += 1;
  report.error_margin_pct =
      100.0 * static_cast<double>(report.mispredictions) / static_cast<double>(report.predictions);
  report.avg_visit_s = duration_sum / static_cast<double>(n);
  report.total_duration_s = visits.back()->end_s() - static_cast<double>(visits.front()->start_s);
  for (const auto& [id, row] : ledger.stats())
    if (row.visits > 0) report.networks_visited += 1;
  report.path_features = detail::describe_path(ledger.stats(), n);
  report.tth_mae_s =
      report.tth_samples > 0 ? tth_abs_err_sum / static_cast<double>(report.tth_samples) : 0.0;
  return report;
}

// Error-margin histogram over [0,100]: per-bin probability mass plus the
// running cumulative series, which ends at exactly 1.
struct Distribution {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<double> mass;
  std::vector<double> cumulative;

  std::size_t bins() const { return mass.size(); }
};

inline Distribution error_distribution(const std::vector<EvaluationReport>& reports, int bins) {
  if (reports.empty()) throw std::invalid_argument("error_distribution: no reports");
  if (bins < 1) throw std::invalid_argument("error_distribution: bins must be >= 1");

  Distribution d;
  const double width = 100.0 / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& r : reports) {
    auto idx = static_cast<std::size_t>(r.error_margin_pct / width);
    idx = std::min(idx, counts.size() - 1);  // margin of 100 lands in the last bin
    counts[idx] += 1;
  }
  const auto total = static_cast<double>(reports.size());
  std::size_t running = 0;
  for (int i = 0; i < bins; ++i) {
    d.bin_lo.push_back(width * i);
    d.bin_hi.push_back(i + 1 == bins ? 100.0 : width * (i + 1));
    d.mass.push_back(static_cast<double>(counts[static_cast<std::size_t>(i)]) / total);
    running += counts[static_cast<std::size_t>(i)];
    d.cumulative.push_back(static_cast<double>(running) / total);
  }
  return d;
}

// First bin whose cumulative mass reaches one half.
inline std::size_t median_bin(const Distribution& d) {
  for (std::size_t i = 0; i < d.cumulative.size(); ++i)
    if (d.cumulative[i] >= 0.5) return i;
  return d.cumulative.size() - 1;
}

enum class DurationClass { short_duration, long_duration };
enum class NetworkCountClass { small, large };
enum class WaypointClass { low, high };

struct CategoryThresholds {
  double long_duration_s = 10.0 * 86400.0;
  std::size_t large_networks = 6;
  std::size_t high_waypoints = 20;
};

struct Categories {
  DurationClass duration;
  NetworkCountClass networks;
  WaypointClass waypoints;
};

// Values exactly at a threshold fall into the lower class.
inline Categories categorize(const EvaluationReport& r, const CategoryThresholds& t = {}) {
  Categories c{};
  c.duration = r.total_duration_s > t.long_duration_s ? DurationClass::long_duration
                                                      : DurationClass::short_duration;
  c.networks = r.networks_visited > t.large_networks ? NetworkCountClass::large
                                                     : NetworkCountClass::small;
  c.waypoints = r.waypoints > t.high_waypoints ? WaypointClass::high : WaypointClass::low;
  return c;
}

inline std::string to_string(const Categories& c) {
  std::string s;
  s += c.duration == DurationClass::long_duration ? "long-duration" : "short-duration";
  s += c.networks == NetworkCountClass::large ? "; large-network-set" : "; small-network-set";
  s += c.waypoints == WaypointClass::high ? "; high-waypoints" : "; low-waypoints";
  return s;
}

}  // namespace roam
