#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace roam {

// Opaque string label with a total lexicographic ordering. Comparison is exact
// byte equality; the ordering gives deterministic tie-breaks wherever a choice
// between labels has to be made.
template <class Tag>
struct Label {
  std::string value;

  Label() = default;
  explicit Label(std::string v) : value(std::move(v)) {}
  Label(const char* v) : value(v) {}

  bool empty() const { return value.empty(); }
  const std::string& str() const { return value; }

  auto operator<=>(const Label&) const = default;
};

using NetworkId = Label<struct NetworkIdTag>;
using NodeId = Label<struct NodeIdTag>;

enum class VisitKind { completed, rejection };

// One node-to-network visit, or a rejected association attempt. The unit of
// ingestion for everything downstream.
struct VisitEvent {
  NodeId node;
  NetworkId network;
  std::int64_t start_s = 0;  // epoch or trace-relative seconds
  double duration_s = 0.0;   // >= 0; only differences of timestamps are used
  VisitKind kind = VisitKind::completed;
  std::optional<double> attractiveness;  // optional per-event override in [0,1]

  double end_s() const { return static_cast<double>(start_s) + duration_s; }
};

struct ValidationError {
  std::string field;
  std::string message;
};

// ok (nullopt) iff all VisitEvent invariants hold; an error names the
// offending field. Zero-length completed visits are allowed as degenerate.
inline std::optional<ValidationError> validate_event(const VisitEvent& e) {
  if (e.node.empty()) return ValidationError{"node", "node label must be non-empty"};
  if (e.network.empty()) return ValidationError{"network", "network id must be non-empty"};
  if (e.start_s < 0) return ValidationError{"start", "start must be >= 0"};
  if (!std::isfinite(e.duration_s)) return ValidationError{"duration", "duration must be finite"};
  if (e.duration_s < 0.0) return ValidationError{"duration", "duration must be >= 0"};
  if (e.attractiveness) {
    const double a = *e.attractiveness;
    if (!std::isfinite(a) || a < 0.0 || a > 1.0)
      return ValidationError{"attractiveness", "attractiveness must be in [0,1]"};
  }
  return std::nullopt;
}

enum class AttractivenessMode { explicit_value, visit_derived };

inline const char* to_string(AttractivenessMode m) {
  return m == AttractivenessMode::explicit_value ? "explicit" : "visit-derived";
}

// Tunables for the smoothing recursions, the periodic notification check and
// the replay scoring.
struct Params {
  double alpha = 0.5;             // rank EMA weight on the previous smoothed value
  double gamma = 0.5;             // dwell-time EMA weight on the previous average
  double notify_window_s = 60.0;  // periodic check interval
  int warmup = 1;                 // leading transitions excluded from accuracy scoring
  AttractivenessMode attractiveness_mode = AttractivenessMode::visit_derived;

  std::optional<ValidationError> validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
      return ValidationError{"alpha", "alpha must be in [0,1]"};
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
      return ValidationError{"gamma", "gamma must be in [0,1]"};
    if (!std::isfinite(notify_window_s) || notify_window_s <= 0.0)
      return ValidationError{"notify_window", "notify window must be > 0"};
    if (warmup < 0) return ValidationError{"warmup", "warmup must be >= 0"};
    return std::nullopt;
  }
};

// One EMA step with weight `w` on the previous value. Written in shifted form
// so a constant input is an exact fixed point for every w; w=1 returns prev
// and w=0 returns the sample bit-exactly.
inline double ema_step(double prev, double sample, double w) {
  if (w == 1.0) return prev;
  if (w == 0.0) return sample;
  return sample + w * (prev - sample);
}

// Locale-independent shortest-roundtrip-ish formatting used for all text
// output, so identical runs produce identical bytes.
inline std::string format_double(double v, int precision = 9) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  return std::string(buf, r.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

}  // namespace roam
