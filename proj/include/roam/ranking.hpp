#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "roam/ledger.hpp"

namespace roam {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Exponent of the linear rank is clamped here before exp() so the value stays
// a finite double; exp(709) is just below the double maximum.
inline constexpr double kLogSaturation = 709.0;

// Smoothed rank of one network. `log_r_smoothed` is the natural log of
// `r_smoothed`, with -inf as the marker for a zero rank.
struct RankState {
  double r_prev = 0.0;      // previous smoothed rank
  double r_instant = 0.0;   // latest instantaneous utility
  double r_smoothed = 0.0;  // EMA of the instantaneous utility
  double log_r_smoothed = kNegInf;
};

struct RankTable {
  std::map<NetworkId, RankState> per_network;
  double computed_at_s = 0.0;

  bool empty() const { return per_network.empty(); }
};

// Log-domain utility of one network:
//
//     log r' = 2*ln(a) + E * (ln(d_avg)/2 - ln(te + 1)),   E = v / max(rej, 1)
//
// where v is the node-wide visit count carried by the snapshot. Returns -inf
// when a == 0 or d_avg == 0. Exponents routinely reach the hundreds for long
// histories, which is why the linear form is never computed directly.
inline double instant_rank_log(const NetworkStats& s) {
  if (s.attractiveness <= 0.0 || s.d_avg_s <= 0.0) return kNegInf;
  const double exponent =
      static_cast<double>(s.total_visits) /
      static_cast<double>(std::max<std::uint64_t>(s.rejections, 1));
  return 2.0 * std::log(s.attractiveness) +
         exponent * (0.5 * std::log(s.d_avg_s) - std::log1p(s.te_s));
}

// Linear utility: exp of the saturated log. Total on valid stats, never NaN.
inline double instant_rank(const NetworkStats& s) {
  const double lr = instant_rank_log(s);
  if (lr == kNegInf) return 0.0;
  return std::exp(std::clamp(lr, -kLogSaturation, kLogSaturation));
}

// Advances the rank EMA one step; without history the instantaneous value
// seeds the state.
inline RankState smooth_rank(const std::optional<RankState>& prev, double r_instant,
                             double alpha) {
  RankState st;
  st.r_instant = r_instant;
  st.r_prev = prev ? prev->r_smoothed : r_instant;
  st.r_smoothed = prev ? ema_step(prev->r_smoothed, r_instant, alpha) : r_instant;
  st.log_r_smoothed = st.r_smoothed > 0.0 ? std::log(st.r_smoothed) : kNegInf;
  return st;
}

// Preference weight entering the utility squared. In visit-derived mode the
// per-network visit count is normalized by the node's busiest network, which
// keeps the weight inside [0,1).
inline double resolved_attractiveness(const NodeLedger& ledger, const NetworkId& id,
                                      AttractivenessMode mode) {
  const NetworkStats& row = ledger.stats().at(id);
  if (mode == AttractivenessMode::explicit_value) return row.attractiveness;
  std::uint64_t max_visits = 0;
  for (const auto& [other, stats] : ledger.stats())
    max_visits = std::max(max_visits, stats.visits);
  return static_cast<double>(row.visits) / (1.0 + static_cast<double>(max_visits));
}

// Ranks every network in the ledger at instant `now_s`, advancing the EMA
// state carried in `prev` (one smoothing step per invocation). Networks that
// only ever rejected the node are pinned to rank zero. Pure function of its
// arguments; the returned table is immutable.
inline RankTable rank_all(const NodeLedger& ledger, double now_s, const Params& p,
                          const RankTable& prev = {}) {
  RankTable table;
  table.computed_at_s = now_s;
  if (ledger.empty()) return table;

  for (const auto& [id, row] : ledger.stats()) {
    if (row.visits == 0) {
      table.per_network.emplace(id, RankState{});
      continue;
    }
    NetworkStats s = ledger.snapshot(id, now_s);
    s.attractiveness = resolved_attractiveness(ledger, id, p.attractiveness_mode);
    std::optional<RankState> prev_state;
    if (auto it = prev.per_network.find(id); it != prev.per_network.end())
      prev_state = it->second;
    table.per_network.emplace(id, smooth_rank(prev_state, instant_rank(s), p.alpha));
  }
  return table;
}

// Highest-ranked network excluding the one currently visited; ties go to the
// lexicographically smaller id. nullopt when no alternative exists.
inline std::optional<NetworkId> select_target(const RankTable& table,
                                              const std::optional<NetworkId>& current) {
  const NetworkId* best_id = nullptr;
  double best_rank = 0.0;
  for (const auto& [id, st] : table.per_network) {
    if (current && id == *current) continue;
    // map iteration is id-ascending, so strict > keeps the smaller id on ties
    if (!best_id || st.r_smoothed > best_rank) {
      best_id = &id;
      best_rank = st.r_smoothed;
    }
  }
  if (!best_id) return std::nullopt;
  return *best_id;
}

}  // namespace roam
