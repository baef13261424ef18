#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roam/roam.hpp"

namespace roam {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 1 input/parse error, 2 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitIo = 2;

namespace cli_detail {

struct TraceOptions {
  std::vector<std::string> paths;
  bool lenient = false;
};

inline void add_trace_options(CLI::App* cmd, TraceOptions& opts) {
  cmd->add_option("trace", opts.paths, "trace file(s) in canonical CSV form, '-' for stdin")
      ->required();
  cmd->add_flag("--lenient", opts.lenient, "skip malformed lines instead of aborting");
}

inline void add_param_options(CLI::App* cmd, Params& p, std::string& attractiveness) {
  cmd->add_option("--alpha", p.alpha, "rank EMA weight on the previous value, in [0,1]")
      ->capture_default_str();
  cmd->add_option("--gamma", p.gamma, "dwell-time EMA weight on the previous value, in [0,1]")
      ->capture_default_str();
  cmd->add_option("--window", p.notify_window_s, "periodic notification check interval, seconds")
      ->capture_default_str();
  cmd->add_option("--warmup", p.warmup, "leading transitions excluded from scoring")
      ->capture_default_str();
  cmd->add_option("--attractiveness-mode", attractiveness,
                  "attractiveness source: explicit or visit-derived")
      ->check(CLI::IsMember({"explicit", "visit-derived"}))
      ->capture_default_str();
}

inline int finish_params(Params& p, const std::string& attractiveness, std::ostream& err) {
  p.attractiveness_mode = attractiveness == "explicit" ? AttractivenessMode::explicit_value
                                                       : AttractivenessMode::visit_derived;
  if (auto bad = p.validate()) {
    err << "error: " << bad->field << ": " << bad->message << '\n';
    return kExitParse;
  }
  return kExitOk;
}

// Loads and merges every input, reporting malformed lines with their file and
// line number. Returns nullopt with its exit code already written to `code`.
inline std::optional<std::vector<VisitEvent>> load_events(const TraceOptions& opts,
                                                          std::istream& in, std::ostream& err,
                                                          int& code) {
  std::vector<VisitEvent> events;
  const ParseMode mode = opts.lenient ? ParseMode::lenient : ParseMode::strict;
  for (const auto& path : opts.paths) {
    ParseResult result;
    if (path == "-") {
      result = parse_trace(in, mode);
    } else {
      std::ifstream file(path);
      if (!file) {
        err << "error: cannot open '" << path << "'\n";
        code = kExitIo;
        return std::nullopt;
      }
      result = parse_trace(file, mode);
    }
    for (const auto& diag : result.errors)
      err << path << ":" << diag.line << ": " << diag.message << '\n';
    if (!result.ok() && mode == ParseMode::strict) {
      code = kExitParse;
      return std::nullopt;
    }
    if (result.lines_skipped > 0)
      err << path << ": skipped " << result.lines_skipped << " malformed line(s)\n";
    events.insert(events.end(), result.events.begin(), result.events.end());
  }
  std::stable_sort(events.begin(), events.end(), [](const VisitEvent& a, const VisitEvent& b) {
    if (a.start_s != b.start_s) return a.start_s < b.start_s;
    return a.network < b.network;
  });
  if (events.empty()) {
    err << "error: trace is empty\n";
    code = kExitParse;
    return std::nullopt;
  }
  code = kExitOk;
  return events;
}

inline int do_rank(const std::vector<VisitEvent>& events, const Params& p, std::ostream& out,
                   std::ostream& err) {
  for (const auto& [node, node_events] : split_by_node(events)) {
    NodeLedger ledger(node);
    try {
      for (const auto& e : node_events) ledger.apply(e, p);
    } catch (const std::invalid_argument& ex) {
      err << "error: " << ex.what() << '\n';
      return kExitParse;
    }
    const double now = ledger.last_event_end_s();
    const RankTable table = rank_all(ledger, now, p);
    std::vector<std::pair<NetworkId, RankState>> rows(table.per_network.begin(),
                                                      table.per_network.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.second.r_smoothed > b.second.r_smoothed;
    });
    for (const auto& [id, st] : rows) {
      const NetworkStats& row = ledger.stats().at(id);
      out << "rank node=" << node.str() << " network=" << id.str()
          << " r=" << format_double(st.r_smoothed) << " log_r=" << format_double(st.log_r_smoothed)
          << " visits=" << row.visits << " rejections=" << row.rejections
          << " d_avg_s=" << format_double(row.d_avg_s, 6) << " te_s="
          << format_double(row.visits > 0 ? ledger.compute_te(id, now) : 0.0, 6)
          << " a=" << format_double(resolved_attractiveness(ledger, id, p.attractiveness_mode), 6)
          << '\n';
    }
  }
  return kExitOk;
}

inline int do_predict(const std::vector<VisitEvent>& events, const Params& p, std::ostream& out,
                      std::ostream& err) {
  for (const auto& [node, node_events] : split_by_node(events)) {
    PredictorResult result;
    try {
      result = run_predictor(node_events, p);
    } catch (const std::invalid_argument& ex) {
      err << "error: " << ex.what() << '\n';
      return kExitParse;
    }
    // notifications fire during visits, records at their ends; merge by time
    std::size_t ni = 0;
    std::size_t ri = 0;
    while (ni < result.notifications.size() || ri < result.records.size()) {
      const bool take_notify =
          ni < result.notifications.size() &&
          (ri >= result.records.size() ||
           result.notifications[ni].at_s <= result.records[ri].at_s);
      if (take_notify) {
        out << format_notification(result.notifications[ni].note) << '\n';
        ++ni;
      } else {
        out << format_record(node, result.records[ri]) << '\n';
        ++ri;
      }
    }
  }
  return kExitOk;
}

struct EvaluateOptions {
  int bins = 10;
  std::string dist_prefix;
  std::string format = "table";
};

inline int do_evaluate(const std::vector<VisitEvent>& events, const Params& p,
                       const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<EvaluationReport> reports;
  for (const auto& [node, node_events] : split_by_node(events)) {
    try {
      reports.push_back(replay(node_events, p));
    } catch (const InsufficientTraceError& ex) {
      err << "error: node '" << node.str() << "': " << ex.what() << '\n';
      return kExitParse;
    }
  }
  write_report(reports, opts.format == "csv" ? ReportFormat::delimited : ReportFormat::table,
               out);
  if (!opts.dist_prefix.empty()) {
    const Distribution dist = error_distribution(reports, opts.bins);
    std::ofstream mass(opts.dist_prefix + "_density.csv");
    std::ofstream cdf(opts.dist_prefix + "_cdf.csv");
    if (!mass || !cdf) {
      err << "error: cannot write distribution files with prefix '" << opts.dist_prefix << "'\n";
      return kExitIo;
    }
    write_distribution_mass(dist, mass);
    write_distribution_cdf(dist, cdf);
  }
  return kExitOk;
}

struct SynthOptions {
  SynthProfile profile;
  std::string structure = "mixed";
  std::string node = "mn-synth";
  std::string out_path;
};

inline int do_synth(SynthOptions& opts, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, SynthStructure> structures = {
      {"mixed", SynthStructure::mixed},
      {"alternating", SynthStructure::alternating},
      {"bookends", SynthStructure::bookend_dominants},
      {"blocks", SynthStructure::timeslot_blocks}};
  opts.profile.structure = structures.at(opts.structure);
  opts.profile.node = NodeId(opts.node);
  std::vector<VisitEvent> events;
  try {
    events = generate(opts.profile);
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitParse;
  }
  std::ostringstream text;
  text << "# synthetic trace node=" << opts.node << " networks=" << opts.profile.networks
       << " waypoints=" << opts.profile.waypoints << " seed=" << opts.profile.seed << '\n';
  write_trace(events, text);
  if (opts.out_path.empty()) {
    out << text.str();
  } else {
    std::ofstream file(opts.out_path);
    if (!file) {
      err << "error: cannot write '" << opts.out_path << "'\n";
      return kExitIo;
    }
    file << text.str();
  }
  return kExitOk;
}

}  // namespace cli_detail

// Batch, non-interactive front end; identical invocations produce identical
// bytes on `out`.
inline int run_cli(int argc, const char* const* argv, std::istream& in = std::cin,
                   std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;

  CLI::App app{"learns roaming behavior from visit traces, ranks candidate networks and "
               "predicts handover targets"};
  app.set_version_flag("--version", std::string("roam ") + kVersion);
  app.require_subcommand(1);

  Params params;
  std::string attractiveness = "visit-derived";
  TraceOptions trace_opts;

  CLI::App* rank_cmd = app.add_subcommand("rank", "rank every visited network per node");
  add_trace_options(rank_cmd, trace_opts);
  add_param_options(rank_cmd, params, attractiveness);

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "replay a trace emitting handover predictions and notifications");
  add_trace_options(predict_cmd, trace_opts);
  add_param_options(predict_cmd, params, attractiveness);

  EvaluateOptions eval_opts;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "score target-selection accuracy per node");
  add_trace_options(evaluate_cmd, trace_opts);
  add_param_options(evaluate_cmd, params, attractiveness);
  evaluate_cmd->add_option("--bins", eval_opts.bins, "error-distribution bin count")
      ->capture_default_str();
  evaluate_cmd->add_option("--dist", eval_opts.dist_prefix,
                           "write <prefix>_density.csv and <prefix>_cdf.csv");
  evaluate_cmd->add_option("--format", eval_opts.format, "report format")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();

  SynthOptions synth_opts;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic trace");
  synth_cmd->add_option("--networks", synth_opts.profile.networks, "distinct networks")
      ->capture_default_str();
  synth_cmd->add_option("--waypoints", synth_opts.profile.waypoints, "total visits")
      ->capture_default_str();
  synth_cmd->add_option("--duration", synth_opts.profile.total_duration_s,
                        "trajectory span in seconds")
      ->capture_default_str();
  synth_cmd->add_option("--structure", synth_opts.structure,
                        "visit order: mixed, alternating, bookends or blocks")
      ->check(CLI::IsMember({"mixed", "alternating", "bookends", "blocks"}))
      ->capture_default_str();
  synth_cmd->add_option("--dominants", synth_opts.profile.dominant_count,
                        "networks given a boosted visit share");
  synth_cmd->add_option("--dominant-share", synth_opts.profile.dominant_share,
                        "fraction of waypoints granted to the dominants");
  synth_cmd->add_option("--dominant-ids", synth_opts.profile.dominant_ids,
                        "names for the dominant networks");
  synth_cmd->add_option("--singles", synth_opts.profile.single_visit_networks,
                        "networks forced to exactly one visit");
  synth_cmd->add_option("--gap-fraction", synth_opts.profile.gap_fraction,
                        "share of the span spent detached")
      ->capture_default_str();
  synth_cmd->add_option("--gap-spread", synth_opts.profile.gap_spread,
                        "gap jitter around the mean, in [0,1)")
      ->capture_default_str();
  synth_cmd->add_option("--duration-sigma", synth_opts.profile.duration_sigma,
                        "log-normal shape of the visit durations")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.profile.seed, "generator seed")
      ->capture_default_str();
  synth_cmd->add_option("--node", synth_opts.node, "node label")->capture_default_str();
  synth_cmd->add_option("--out", synth_opts.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*synth_cmd) return do_synth(synth_opts, out, err);

  if (int code = finish_params(params, attractiveness, err); code != kExitOk) return code;
  int code = kExitOk;
  const auto events = load_events(trace_opts, in, err, code);
  if (!events) return code;

  if (*rank_cmd) return do_rank(*events, params, out, err);
  if (*predict_cmd) return do_predict(*events, params, out, err);
  if (*evaluate_cmd) return do_evaluate(*events, params, eval_opts, out, err);
  return kExitOk;
}

}  // namespace roam
