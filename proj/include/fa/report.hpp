#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fa/io.hpp"
#include "fa/solvers.hpp"

namespace fa {

inline constexpr std::string_view kReportHeader = "solver,space,target,n,error,evaluated,wall_ms,best";

/// Parsed --solver argument.
struct SolverChoice {
  enum class Kind : std::uint8_t { ml, asp, a_asp, pac };
  Kind kind = Kind::asp;
  std::string skeleton;  // ml
  BuilderSpec builder;   // a_asp
  std::string label;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, const std::string& where) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(where, "cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// Accepts ml:SKELETON, asp, pac, a-asp:exhaustive, a-asp:greedy,
/// a-asp:beam:W, a-asp:random:BUDGET, a-asp:egreedy:EPS:BUDGET; any a-asp
/// form takes a trailing ":ha" for history-aware ranking.
inline SolverChoice parse_solver(std::string_view text, std::uint64_t seed) {
  SolverChoice c;
  c.label = std::string(text);
  if (text == "asp") return c;
  if (text == "pac") {
    c.kind = SolverChoice::Kind::pac;
    return c;
  }
  if (text.starts_with("ml:")) {
    c.kind = SolverChoice::Kind::ml;
    c.skeleton = std::string(text.substr(3));
    if (c.skeleton.empty()) throw ConfigError("solver", "ml needs a skeleton, e.g. ml:affine");
    return c;
  }
  if (!text.starts_with("a-asp:")) throw ConfigError("solver", "unknown solver '" + std::string(text) + "'");
  auto parts = detail::split(text.substr(6), ':');
  c.kind = SolverChoice::Kind::a_asp;
  if (!parts.empty() && parts.back() == "ha") {
    c.builder.history_aware = true;
    parts.pop_back();
  }
  const auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size()) throw ConfigError("solver", "missing argument in '" + std::string(text) + "'");
    return parts[i];
  };
  const std::string& strategy = arg(0);
  std::size_t expected = 1;
  if (strategy == "exhaustive") {
    c.builder.strategy = BuilderSpec::Strategy::exhaustive;
  } else if (strategy == "greedy") {
    c.builder.strategy = BuilderSpec::Strategy::greedy;
  } else if (strategy == "beam") {
    c.builder.strategy = BuilderSpec::Strategy::beam;
    c.builder.width = detail::parse_number<std::size_t>(arg(1), "solver");
    expected = 2;
  } else if (strategy == "random") {
    c.builder.strategy = BuilderSpec::Strategy::random;
    c.builder.budget = detail::parse_number<std::uint64_t>(arg(1), "solver");
    expected = 2;
  } else if (strategy == "egreedy" || strategy == "epsilon-greedy") {
    c.builder.strategy = BuilderSpec::Strategy::epsilon_greedy;
    c.builder.epsilon = detail::parse_number<double>(arg(1), "solver");
    c.builder.budget = detail::parse_number<std::uint64_t>(arg(2), "solver");
    expected = 3;
  } else {
    throw ConfigError("solver", "unknown a-asp strategy '" + strategy + "'");
  }
  if (parts.size() != expected) throw ConfigError("solver", "unexpected arguments in '" + std::string(text) + "'");
  c.builder.seed = seed;
  try {
    c.builder.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("solver", e.message());
  }
  return c;
}

inline SolveResult run_solver(const SolverChoice& choice, const SearchSpace& space, std::size_t n,
                              const SampleSet& samples, const Metric& metric, const SearchOptions& opts) {
  switch (choice.kind) {
    case SolverChoice::Kind::ml: return ml_solve(space, parse_skeleton(space, choice.skeleton), samples, metric, opts);
    case SolverChoice::Kind::asp: return asp_solve(space, n, samples, metric, opts);
    case SolverChoice::Kind::a_asp: return a_asp_solve(space, n, samples, metric, choice.builder, opts);
    case SolverChoice::Kind::pac: return pac_solve(space, samples);
  }
  throw ConfigError("solver", "unhandled solver kind");
}

struct ReportRow {
  std::string solver;
  std::string space;
  std::string target;
  std::size_t n = 0;
  double error = 0.0;
  std::uint64_t evaluated = 0;
  std::int64_t wall_ms = 0;
  std::string best;
  std::optional<double> regret;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline std::string to_csv(const ReportRow& r) {
  std::ostringstream os;
  os << csv_field(r.solver) << ',' << csv_field(r.space) << ',' << csv_field(r.target) << ',' << r.n << ','
     << format_double(r.error) << ',' << r.evaluated << ',' << r.wall_ms << ',' << csv_field(r.best);
  if (r.regret) os << ',' << format_double(*r.regret);
  return os.str();
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

inline ReportRow parse_report_row(std::string_view line) {
  const auto f = parse_csv_line(line);
  if (f.size() != 8 && f.size() != 9) throw ConfigError("csv", "expected 8 or 9 fields");
  ReportRow r;
  r.solver = f[0];
  r.space = f[1];
  r.target = f[2];
  r.n = detail::parse_number<std::size_t>(f[3], "csv.n");
  r.error = detail::parse_number<double>(f[4], "csv.error");
  r.evaluated = detail::parse_number<std::uint64_t>(f[5], "csv.evaluated");
  r.wall_ms = detail::parse_number<std::int64_t>(f[6], "csv.wall_ms");
  r.best = f[7];
  if (f.size() == 9) r.regret = detail::parse_number<double>(f[8], "csv.regret");
  return r;
}

}  // namespace fa
