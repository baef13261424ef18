// Minimal end-to-end walk: synthesize a short trajectory, rank the networks
// the node has seen, and print where it is expected to hand over next.
#include <iostream>

#include "roam/roam.hpp"

int main() {
  roam::SynthProfile profile;
  profile.node = roam::NodeId("demo-node");
  profile.networks = 2;
  profile.waypoints = 12;
  profile.total_duration_s = 36000;
  profile.structure = roam::SynthStructure::alternating;
  profile.seed = 42;

  const auto events = roam::generate(profile);
  const roam::Params params;

  roam::NodeLedger ledger(profile.node);
  for (const auto& e : events) ledger.apply(e, params);

  const auto table = roam::rank_all(ledger, ledger.last_event_end_s(), params);
  std::cout << "networks ranked at t=" << ledger.last_event_end_s() << ":\n";
  for (const auto& [id, st] : table.per_network)
    std::cout << "  " << id.str() << "  r=" << roam::format_double(st.r_smoothed, 6) << '\n';

  const auto current = events.back().network;
  if (auto target = roam::select_target(table, current))
    std::cout << "currently on " << current.str() << ", next target: " << target->str() << '\n';

  const auto report = roam::replay(events, params);
  std::cout << "replayed " << report.waypoints << " visits, error margin "
            << roam::format_double(report.error_margin_pct, 4) << "%\n";
  return 0;
}
