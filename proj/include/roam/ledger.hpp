#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

#include "roam/types.hpp"

namespace roam {

// Accumulated statistics for one (node, network) pair.
//
// `te_s` (gap since the last visit end) and `total_visits` (node-wide count)
// depend on the query instant and on the whole ledger, so they are filled in
// by NodeLedger::snapshot and stay zero in stored rows.
struct NetworkStats {
  std::uint64_t visits = 0;        // completed visits to this network
  std::uint64_t total_visits = 0;  // node-wide completed visits (snapshot only)
  std::uint64_t rejections = 0;    // denied association attempts
  double d_last_s = 0.0;           // duration of the most recent visit
  double d_avg_s = 0.0;            // smoothed dwell time, seeded by the first visit
  double te_s = 0.0;               // gap since the last visit end (snapshot only)
  double attractiveness = 1.0;     // preference weight in [0,1]
  std::optional<double> last_end_s;  // end of the most recent completed visit
};

// Ordered visit history of a single node across all networks it touched.
// Events must be applied in non-decreasing start order; overlapping visits
// are accepted (dirty traces) and gaps clamp to zero where they would go
// negative. Plain value type: copies are independent.
class NodeLedger {
 public:
  NodeLedger() = default;
  explicit NodeLedger(NodeId node) : node_(std::move(node)) {}

  const NodeId& node() const { return node_; }
  const std::map<NetworkId, NetworkStats>& stats() const { return per_network_; }
  std::uint64_t total_visits() const { return total_visits_; }
  std::uint64_t events_applied() const { return events_applied_; }
  double last_event_end_s() const { return last_event_end_s_; }
  bool empty() const { return per_network_.empty(); }

  void apply(const VisitEvent& e, const Params& p) {
    if (e.kind == VisitKind::completed)
      apply_visit(e, p);
    else
      apply_rejection(e);
  }

  // Folds one completed visit: bumps the counters, records the duration and
  // advances the dwell-time EMA (the first visit seeds it directly).
  void apply_visit(const VisitEvent& e, const Params& p) {
    if (e.kind != VisitKind::completed)
      throw std::invalid_argument("apply_visit: event is not a completed visit");
    check_event(e);
    NetworkStats& row = per_network_[e.network];
    row.d_avg_s = row.visits == 0 ? e.duration_s : ema_step(row.d_avg_s, e.duration_s, p.gamma);
    row.visits += 1;
    row.d_last_s = e.duration_s;
    row.last_end_s = e.end_s();
    if (e.attractiveness) row.attractiveness = *e.attractiveness;
    total_visits_ += 1;
    note_applied(e);
  }

  // Rejections only bump their counter; visit statistics stay untouched. A
  // never-visited network still gets a row (visits = 0).
  void apply_rejection(const VisitEvent& e) {
    if (e.kind != VisitKind::rejection)
      throw std::invalid_argument("apply_rejection: event is not a rejection");
    check_event(e);
    NetworkStats& row = per_network_[e.network];
    row.rejections += 1;
    if (e.attractiveness) row.attractiveness = *e.attractiveness;
    note_applied(e);
  }

  // Seconds since the network's most recent visit concluded, clamped to >= 0.
  double compute_te(const NetworkId& network, double now_s) const {
    auto it = per_network_.find(network);
    if (it == per_network_.end())
      throw std::out_of_range("compute_te: unknown network '" + network.str() + "'");
    if (it->second.visits == 0 || !it->second.last_end_s)
      throw std::invalid_argument("compute_te: network '" + network.str() +
                                  "' has no completed visits");
    return std::max(0.0, now_s - *it->second.last_end_s);
  }

  // Row copy with the time- and ledger-dependent fields resolved.
  NetworkStats snapshot(const NetworkId& network, double now_s) const {
    auto it = per_network_.find(network);
    if (it == per_network_.end())
      throw std::out_of_range("snapshot: unknown network '" + network.str() + "'");
    NetworkStats s = it->second;
    s.total_visits = total_visits_;
    s.te_s = s.visits > 0 ? compute_te(network, now_s) : 0.0;
    return s;
  }

 private:
  void check_event(const VisitEvent& e) {
    if (auto err = validate_event(e))
      throw std::invalid_argument("invalid event: " + err->field + ": " + err->message);
    if (!node_.empty() && e.node != node_)
      throw std::invalid_argument("event for node '" + e.node.str() + "' applied to ledger of '" +
                                  node_.str() + "'");
    if (node_.empty()) node_ = e.node;
    if (e.start_s < last_start_s_)
      throw std::invalid_argument("events must be applied in non-decreasing start order");
  }

  void note_applied(const VisitEvent& e) {
    events_applied_ += 1;
    last_start_s_ = e.start_s;
    last_event_end_s_ = std::max(last_event_end_s_, e.end_s());
  }

  NodeId node_;
  std::map<NetworkId, NetworkStats> per_network_;
  std::uint64_t total_visits_ = 0;
  std::uint64_t events_applied_ = 0;
  std::int64_t last_start_s_ = std::numeric_limits<std::int64_t>::min();
  double last_event_end_s_ = 0.0;
};

}  // namespace roam
