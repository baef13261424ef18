#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roam/replay.hpp"

namespace roam {

// Canonical trace format, one event per UTF-8 line:
//
//     node,network,start_s,duration_s[,kind][,attractiveness]
//
// kind is `visit` (default) or `rej`; attractiveness is a float in [0,1].
// A lone fifth numeric field is read as attractiveness. `#` starts a comment
// and blank lines are skipped. Timestamps may be epoch or trace-relative.

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

enum class ParseMode { strict, lenient };

struct ParseResult {
  std::vector<VisitEvent> events;  // sorted by (start, network id), stable
  std::vector<ParseDiagnostic> errors;
  std::size_t lines_skipped = 0;  // lenient mode only

  bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(pos)));
      break;
    }
    out.push_back(trim(line.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

inline std::optional<std::string> parse_line(std::string_view line, VisitEvent& out) {
  const auto fields = split_fields(line);
  if (fields.size() < 4 || fields.size() > 6)
    return "expected 4 to 6 comma-separated fields, got " + std::to_string(fields.size());
  out = VisitEvent{};
  out.node = NodeId(std::string(fields[0]));
  out.network = NetworkId(std::string(fields[1]));
  const auto start = parse_int(fields[2]);
  if (!start) return "non-numeric timestamp '" + std::string(fields[2]) + "'";
  out.start_s = *start;
  const auto duration = parse_int(fields[3]);
  if (!duration) return "non-numeric duration '" + std::string(fields[3]) + "'";
  out.duration_s = static_cast<double>(*duration);

  std::size_t next = 4;
  if (fields.size() > next) {
    if (fields[next] == "visit" || fields[next] == "rej") {
      out.kind = fields[next] == "rej" ? VisitKind::rejection : VisitKind::completed;
      ++next;
    } else if (fields.size() == 5) {
      if (const auto a = parse_double(fields[next])) {
        out.attractiveness = *a;
        ++next;
      } else {
        return "unknown kind flag '" + std::string(fields[next]) + "'";
      }
    } else {
      return "unknown kind flag '" + std::string(fields[next]) + "'";
    }
  }
  if (fields.size() > next) {
    const auto a = parse_double(fields[next]);
    if (!a) return "non-numeric attractiveness '" + std::string(fields[next]) + "'";
    out.attractiveness = *a;
    ++next;
  }
  if (fields.size() > next) return "trailing fields after attractiveness";
  if (auto err = validate_event(out)) return err->field + ": " + err->message;
  return std::nullopt;
}

}  // namespace detail

// Strict mode stops at the first malformed line; lenient mode skips and
// counts. Events come out stably sorted by (start, network id).
inline ParseResult parse_trace(std::istream& in, ParseMode mode = ParseMode::strict) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view stripped = detail::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    VisitEvent event;
    if (auto err = detail::parse_line(stripped, event)) {
      result.errors.push_back({line_no, *err});
      if (mode == ParseMode::strict) return result;
      result.lines_skipped += 1;
      continue;
    }
    result.events.push_back(std::move(event));
  }
  std::stable_sort(result.events.begin(), result.events.end(),
                   [](const VisitEvent& a, const VisitEvent& b) {
                     if (a.start_s != b.start_s) return a.start_s < b.start_s;
                     return a.network < b.network;
                   });
  return result;
}

inline ParseResult parse_trace(std::string_view text, ParseMode mode = ParseMode::strict) {
  std::istringstream in{std::string(text)};
  return parse_trace(in, mode);
}

// Minimal canonical form; durations are carried as whole seconds on disk.
inline std::string to_trace_line(const VisitEvent& e) {
  std::string line = e.node.str() + "," + e.network.str() + "," + std::to_string(e.start_s) +
                     "," + std::to_string(std::llround(e.duration_s));
  if (e.kind == VisitKind::rejection)
    line += ",rej";
  else if (e.attractiveness)
    line += ",visit";
  if (e.attractiveness) line += "," + format_double(*e.attractiveness);
  return line;
}

inline void write_trace(const std::vector<VisitEvent>& events, std::ostream& out) {
  for (const auto& e : events) out << to_trace_line(e) << '\n';
}

enum class ReportFormat { table, delimited };

inline constexpr const char* kReportHeader =
    "node,networks_visited,waypoints,path_features,avg_visit_s,total_duration_s,"
    "error_margin_pct";

namespace detail {

inline std::vector<std::string> report_row(const EvaluationReport& r) {
  return {r.node.str(),
          std::to_string(r.networks_visited),
          std::to_string(r.waypoints),
          r.path_features,
          format_double(r.avg_visit_s, 6),
          std::to_string(std::llround(r.total_duration_s)),
          format_double(r.error_margin_pct, 6)};
}

}  // namespace detail

// One row per node with the same seven columns in both formats; rows are
// sorted by node id. The table format prepends the run configuration and the
// accuracy-metric definition, and appends supplementary per-node lines.
inline void write_report(std::vector<EvaluationReport> reports, ReportFormat format,
                         std::ostream& out) {
  std::sort(reports.begin(), reports.end(),
            [](const EvaluationReport& a, const EvaluationReport& b) { return a.node < b.node; });

  if (format == ReportFormat::delimited) {
    out << kReportHeader << '\n';
    for (const auto& r : reports) {
      const auto row = detail::report_row(r);
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }

  if (!reports.empty()) {
    const Params& p = reports.front().params;
    out << "# params: alpha=" << format_double(p.alpha) << " gamma=" << format_double(p.gamma)
        << " warmup=" << p.warmup << " attractiveness=" << to_string(p.attractiveness_mode)
        << '\n';
  }
  out << "# error_margin_pct = 100 * mispredictions / predictions; the first warmup "
         "transition(s) of each trajectory are not scored\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"node", "networks", "waypoints", "path_features", "avg_visit_s",
                  "total_duration_s", "error_margin_pct"});
  for (const auto& r : reports) rows.push_back(detail::report_row(r));
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(widths[i] - row[i].size() + 2, ' ');
    }
    out << '\n';
  }
  for (const auto& r : reports) {
    out << "# " << r.node.str() << ": category " << to_string(categorize(r))
        << "; supplementary tth_mae_s=" << format_double(r.tth_mae_s, 6) << " over "
        << r.tth_samples << " estimates\n";
  }
}

inline void write_distribution_mass(const Distribution& d, std::ostream& out) {
  out << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < d.bins(); ++i)
    out << format_double(d.bin_lo[i], 6) << ',' << format_double(d.bin_hi[i], 6) << ','
        << format_double(d.mass[i], 6) << '\n';
}

inline void write_distribution_cdf(const Distribution& d, std::ostream& out) {
  out << "bin_lo,bin_hi,cdf\n";
  for (std::size_t i = 0; i < d.bins(); ++i)
    out << format_double(d.bin_lo[i], 6) << ',' << format_double(d.bin_hi[i], 6) << ','
        << format_double(d.cumulative[i], 6) << '\n';
}

}  // namespace roam
