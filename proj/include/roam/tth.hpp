#pragma once

#include <algorithm>
#include <optional>

#include "roam/types.hpp"

namespace roam {

// One step of the time-to-handover recursion:
//
//     tth = max(0, d_avg + delta),   delta = d_prev - tth_prev
//
// i.e. the smoothed dwell time corrected by the signed error the previous
// estimate made on the visit that just ended.
struct TthState {
  double tth_prev_s = 0.0;  // estimate that was in force for the ended visit
  double d_prev_s = 0.0;    // realized duration of that visit
  double delta_s = 0.0;     // d_prev - tth_prev
  double tth_s = 0.0;       // current estimate, >= 0
};

// Advances the recursion after a visit of `d_completed_s` seconds concluded.
// Without history the estimate seeds at d_avg and the correction term is zero.
inline TthState update_tth(const std::optional<TthState>& state, double d_avg_s,
                           double d_completed_s) {
  TthState next;
  next.d_prev_s = d_completed_s;
  if (!state) {
    next.tth_prev_s = d_completed_s;
    next.delta_s = 0.0;
    next.tth_s = std::max(0.0, d_avg_s);
  } else {
    next.tth_prev_s = state->tth_s;
    next.delta_s = d_completed_s - state->tth_s;
    next.tth_s = std::max(0.0, d_avg_s + next.delta_s);
  }
  return next;
}

// Periodic check: true when the next check would already fall past the
// predicted handover instant. Monotone in visit_elapsed_s.
inline bool should_notify(double visit_elapsed_s, double tth_s, double window_s) {
  return tth_s - visit_elapsed_s <= window_s;
}

// Advisory record handed to whatever manages mobility; emitting one performs
// no handover.
struct Notification {
  NodeId node;
  NetworkId target;
  double remaining_s = 0.0;
};

inline Notification build_notification(const NodeId& node, const NetworkId& target,
                                       double tth_remaining_s) {
  return Notification{node, target, std::max(0.0, tth_remaining_s)};
}

}  // namespace roam
