#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "roam/replay.hpp"

namespace roam {

struct NotifyEvent {
  std::int64_t at_s = 0;  // absolute instant the periodic check fired
  Notification note;
};

struct PredictorResult {
  std::vector<PredictionRecord> records;      // one per handover in the trace
  std::vector<NotifyEvent> notifications;     // at most one per visit
};

inline std::string format_notification(const Notification& n) {
  return "notify node=" + n.node.str() + " target=" + n.target.str() +
         " remaining_s=" + std::to_string(std::llround(n.remaining_s));
}

// Walks one node's trace the way the on-device predictor would live it:
// during each visit a periodic check (every notify_window_s) fires a single
// notification once the in-force handover estimate comes within one window of
// the elapsed time, naming the best alternative network at that instant. At
// each visit end the next target is logged. First-ever visits to a network
// have no estimate yet and stay silent.
inline PredictorResult run_predictor(const std::vector<VisitEvent>& events, const Params& p) {
  if (auto err = p.validate())
    throw std::invalid_argument("run_predictor: invalid params: " + err->field + ": " +
                                err->message);
  PredictorResult result;
  if (events.empty()) return result;
  const NodeId node = events.front().node;

  std::vector<const VisitEvent*> visits;
  for (const auto& e : events)
    if (e.kind == VisitKind::completed) visits.push_back(&e);

  NodeLedger ledger(node);
  RankTable ranks;
  std::map<NetworkId, TthState> tth;

  std::size_t k = 0;
  for (const auto& e : events) {
    if (e.kind == VisitKind::rejection) {
      ledger.apply_rejection(e);
      continue;
    }

    std::optional<TthState> in_force;
    if (auto it = tth.find(e.network); it != tth.end()) in_force = it->second;

    if (in_force && !ledger.empty()) {
      const double window = p.notify_window_s;
      for (double elapsed = window; elapsed <= e.duration_s; elapsed += window) {
        if (!should_notify(elapsed, in_force->tth_s, window)) continue;
        const double now = static_cast<double>(e.start_s) + elapsed;
        ranks = rank_all(ledger, now, p, ranks);
        if (auto target = select_target(ranks, e.network)) {
          NotifyEvent ev;
          ev.at_s = std::llround(now);
          ev.note = build_notification(node, *target, in_force->tth_s - elapsed);
          result.notifications.push_back(std::move(ev));
        }
        break;  // latched: one notification per visit
      }
    }

    ledger.apply_visit(e, p);
    tth[e.network] = update_tth(in_force, ledger.stats().at(e.network).d_avg_s, e.duration_s);

    if (k + 1 < visits.size()) {
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
      result.records.push_back(std::move(rec));
    }
    ++k;
  }
  return result;
}

}  // namespace roam
