#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "drivers.hpp"
#include "lop.hpp"
#include "maxcut.hpp"

namespace grasppr {

/// Malformed instance text. `line` and `column` are 1-based; column 0 means
/// the whole line (or the end of the input).
class parse_error : public std::runtime_error {
public:
  parse_error(int line, int column, const std::string& message)
      : std::runtime_error(locate(line, column) + message), line_(line), column_(column) {}

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

private:
  static std::string locate(int line, int column) {
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": ";
  }

  int line_;
  int column_;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct token {
  std::string_view text;
  int line;
  int column;
};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

/// Whitespace-separated tokens of one line.
inline std::vector<token> split_line(std::string_view line, int line_no) {
  std::vector<token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    out.push_back({line.substr(i, j - i), line_no, static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::optional<std::int64_t> to_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::int64_t integer_token(const token& t, const char* what, std::int64_t lo, std::int64_t hi) {
  auto v = to_integer(t.text);
  if (!v) {
    std::string shown(t.text.substr(0, 32));
    throw parse_error(t.line, t.column, std::string("expected integer ") + what + ", found '" + shown + "'");
  }
  if (*v < lo || *v > hi)
    throw parse_error(t.line, t.column,
                      std::string(what) + " " + std::to_string(*v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return *v;
}

inline bool all_integers(const std::vector<token>& tokens) {
  return std::all_of(tokens.begin(), tokens.end(), [](const token& t) { return to_integer(t.text).has_value(); });
}

inline constexpr std::int64_t max_lop_size = 46340;  // n*n entries still index with 32 bits
inline constexpr std::int64_t max_graph_size = 10'000'000;

}  // namespace detail

/// LOLIB matrix text: a name line (ignored), the size n, then n*n integers
/// in row-major order. Lines between the name and the size that are not
/// integer lines are skipped and reported through `warnings`.
inline lop_instance parse_lolib(std::string_view text, std::string name = {}, std::vector<std::string>* warnings = nullptr) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw parse_error(1, 0, "empty input, expected a name line");
  std::size_t li = 1;
  std::optional<detail::token> size_token;
  for (; li < lines.size(); ++li) {
    auto tokens = detail::split_line(lines[li], static_cast<int>(li) + 1);
    if (tokens.empty()) continue;
    if (!detail::all_integers(tokens)) {
      if (warnings) warnings->push_back("line " + std::to_string(li + 1) + ": skipped non-numeric header line");
      continue;
    }
    if (tokens.size() != 1) throw parse_error(tokens[1].line, tokens[1].column, "expected the matrix size alone on its line");
    size_token = tokens.front();
    ++li;
    break;
  }
  if (!size_token) throw parse_error(static_cast<int>(lines.size()), 0, "missing matrix size n");
  const auto n = detail::integer_token(*size_token, "matrix size", std::numeric_limits<std::int64_t>::min(), detail::max_lop_size);
  if (n <= 1) throw parse_error(size_token->line, size_token->column, "matrix size must be > 1, got " + std::to_string(n));

  const auto expected = static_cast<std::size_t>(n * n);
  std::vector<objective_t> cost;
  for (; li < lines.size(); ++li) {
    for (const auto& t : detail::split_line(lines[li], static_cast<int>(li) + 1)) {
      if (cost.size() == expected)
        throw parse_error(t.line, t.column, "too many entries, expected " + std::to_string(expected));
      cost.push_back(detail::integer_token(t, "matrix entry", std::numeric_limits<std::int32_t>::min(),
                                           std::numeric_limits<std::int32_t>::max()));
    }
  }
  if (cost.size() < expected)
    throw parse_error(static_cast<int>(lines.size()), 0,
                      "expected " + std::to_string(expected) + " matrix entries, found " + std::to_string(cost.size()) + " (" +
                          std::to_string(expected - cost.size()) + " missing)");
  return lop_instance(static_cast<int>(n), std::move(cost), std::move(name));
}

/// Edge-list text: "n m", then m lines "i j w" with 1-based vertex ids.
/// Blank lines are ignored; duplicate edges are merged by the instance.
inline maxcut_instance parse_edge_list(std::string_view text, std::string name = {}) {
  const auto lines = detail::split_lines(text);
  std::size_t li = 0;
  std::vector<detail::token> header;
  for (; li < lines.size(); ++li) {
    header = detail::split_line(lines[li], static_cast<int>(li) + 1);
    if (!header.empty()) break;
  }
  if (header.empty()) throw parse_error(1, 0, "empty input, expected \"n m\"");
  if (header.size() != 2) throw parse_error(header.front().line, 0, "expected \"n m\" header, found " + std::to_string(header.size()) + " fields");
  const auto n = detail::integer_token(header[0], "vertex count", 1, detail::max_graph_size);
  const auto m = detail::integer_token(header[1], "edge count", 0, std::numeric_limits<std::int32_t>::max());
  ++li;

  std::vector<weighted_edge> edges;
  for (; li < lines.size(); ++li) {
    auto tokens = detail::split_line(lines[li], static_cast<int>(li) + 1);
    if (tokens.empty()) continue;
    const int line_no = static_cast<int>(li) + 1;
    if (static_cast<std::int64_t>(edges.size()) == m)
      throw parse_error(line_no, 0, "more edge lines than the declared m = " + std::to_string(m));
    if (tokens.size() != 3) throw parse_error(line_no, 0, "expected \"i j w\", found " + std::to_string(tokens.size()) + " fields");
    const auto i = detail::integer_token(tokens[0], "vertex id", 1, n);
    const auto j = detail::integer_token(tokens[1], "vertex id", 1, n);
    const auto w = detail::integer_token(tokens[2], "edge weight", std::numeric_limits<std::int32_t>::min(),
                                         std::numeric_limits<std::int32_t>::max());
    if (i == j) throw parse_error(line_no, 0, "self-loop on vertex " + std::to_string(i));
    edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), w});
  }
  if (static_cast<std::int64_t>(edges.size()) != m)
    throw parse_error(static_cast<int>(lines.size()), 0,
                      "declared m = " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  return maxcut_instance(static_cast<int>(n), std::move(edges), std::move(name));
}

inline std::string serialize_lolib(const lop_instance& inst) {
  std::ostringstream os;
  os << (inst.name().empty() ? "instance" : inst.name()) << '\n' << inst.size() << '\n';
  for (int i = 0; i < inst.size(); ++i) {
    for (int j = 0; j < inst.size(); ++j) os << (j ? " " : "") << inst.cost(i, j);
    os << '\n';
  }
  return os.str();
}

inline std::string serialize_edge_list(const maxcut_instance& inst) {
  std::ostringstream os;
  os << inst.size() << ' ' << inst.edges().size() << '\n';
  for (const auto& e : inst.edges()) os << e.u + 1 << ' ' << e.v + 1 << ' ' << e.w << '\n';
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("cannot read '" + path + "'");
  return ss.str();
}

inline std::string stem_of(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

inline lop_instance load_lolib(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  return parse_lolib(read_file(path), stem_of(path), warnings);
}

inline maxcut_instance load_edge_list(const std::string& path) { return parse_edge_list(read_file(path), stem_of(path)); }

// ---------------------------------------------------------------- results

struct result_row {
  std::string method;
  std::string instance;
  std::uint64_t seed = 0;
  objective_t best_objective = 0;
  std::uint64_t iterations = 0;
  double elapsed_s = 0.0;
  std::uint64_t restarts = 0;
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_results_csv(std::ostream& os, const std::vector<result_row>& rows) {
  os << "method,instance,seed,best_objective,iterations,elapsed_s,restarts\n";
  for (const auto& r : rows) {
    os << csv_field(r.method) << ',' << csv_field(r.instance) << ',' << r.seed << ',' << r.best_objective << ','
       << r.iterations << ',' << std::fixed << std::setprecision(6) << r.elapsed_s << std::defaultfloat << ',' << r.restarts
       << '\n';
  }
}

// ------------------------------------------------------------------ stats

struct method_stats {
  std::string method;
  int best = 0;
  std::optional<double> dev;     // nullopt when no instance has a positive experiment best
  std::optional<int> best_k;     // nullopt without best-known values
  std::optional<double> dev_k;
};

/// Key: (method, instance) -> best objective of that cell.
using result_table = std::map<std::pair<std::string, std::string>, objective_t>;

/// Summary statistics per method, in the order of `methods`. #Best
/// compares exact integers and counts every tied method. %Dev averages
/// 100 * (B - v) / B over instances whose reference B is positive; an
/// instance with B <= 0 is left out of the average.
inline std::vector<method_stats> compute_stats(const std::vector<std::string>& methods,
                                               const std::vector<std::string>& instances, const result_table& results,
                                               const std::map<std::string, objective_t>& best_known = {}) {
  auto cell = [&](const std::string& m, const std::string& i) {
    auto it = results.find({m, i});
    if (it == results.end()) throw std::invalid_argument("compute_stats: missing result for " + m + " on " + i);
    return it->second;
  };
  std::map<std::string, objective_t> experiment_best;
  for (const auto& i : instances) {
    objective_t b = minus_infinity;
    for (const auto& m : methods) b = std::max(b, cell(m, i));
    experiment_best[i] = b;
  }
  std::vector<method_stats> out;
  for (const auto& m : methods) {
    method_stats s;
    s.method = m;
    double dev_sum = 0.0, dev_k_sum = 0.0;
    int dev_count = 0, dev_k_count = 0, best_k = 0, known = 0;
    for (const auto& i : instances) {
      const objective_t v = cell(m, i);
      const objective_t b = experiment_best[i];
      if (v == b) ++s.best;
      if (b > 0) {
        dev_sum += 100.0 * static_cast<double>(b - v) / static_cast<double>(b);
        ++dev_count;
      }
      if (auto k = best_known.find(i); k != best_known.end()) {
        ++known;
        if (v >= k->second) ++best_k;
        if (k->second > 0) {
          dev_k_sum += 100.0 * static_cast<double>(k->second - v) / static_cast<double>(k->second);
          ++dev_k_count;
        }
      }
    }
    if (dev_count > 0) s.dev = dev_sum / dev_count;
    if (known > 0) s.best_k = best_k;
    if (dev_k_count > 0) s.dev_k = dev_k_sum / dev_k_count;
    out.push_back(std::move(s));
  }
  return out;
}

/// Reduces per-seed rows to one value per (method, instance): the best over seeds.
inline result_table best_per_cell(const std::vector<result_row>& rows) {
  result_table t;
  for (const auto& r : rows) {
    auto [it, inserted] = t.try_emplace({r.method, r.instance}, r.best_objective);
    if (!inserted) it->second = std::max(it->second, r.best_objective);
  }
  return t;
}

inline std::string format_dev(const std::optional<double>& d) {
  if (!d) return "NA";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << (*d == 0.0 ? 0.0 : *d);
  return os.str();
}

inline void write_stats_csv(std::ostream& os, const std::vector<method_stats>& stats) {
  os << "method,#Best,%Dev,#Best_k,%Dev_k\n";
  for (const auto& s : stats)
    os << csv_field(s.method) << ',' << s.best << ',' << format_dev(s.dev) << ','
       << (s.best_k ? std::to_string(*s.best_k) : "NA") << ',' << format_dev(s.dev_k) << '\n';
}

/// Aligned text rendering of the same four columns.
inline void write_stats_table(std::ostream& os, const std::vector<method_stats>& stats) {
  std::size_t width = 6;
  for (const auto& s : stats) width = std::max(width, s.method.size());
  os << std::left << std::setw(static_cast<int>(width)) << "method" << std::right << std::setw(8) << "#Best" << std::setw(10)
     << "%Dev" << std::setw(10) << "#Best_k" << std::setw(10) << "%Dev_k" << '\n';
  for (const auto& s : stats)
    os << std::left << std::setw(static_cast<int>(width)) << s.method << std::right << std::setw(8) << s.best << std::setw(10)
       << format_dev(s.dev) << std::setw(10) << (s.best_k ? std::to_string(*s.best_k) : "NA") << std::setw(10)
       << format_dev(s.dev_k) << '\n';
  os << std::left;
}

/// "instance value" per line; '#' starts a comment.
inline std::map<std::string, objective_t> parse_best_known(std::string_view text) {
  std::map<std::string, objective_t> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto line = lines[li];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = detail::split_line(line, static_cast<int>(li) + 1);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw parse_error(static_cast<int>(li) + 1, 0, "expected \"instance value\"");
    out[std::string(tokens[0].text)] = detail::integer_token(tokens[1], "best-known value", minus_infinity + 1,
                                                             std::numeric_limits<objective_t>::max());
  }
  return out;
}

// ---------------------------------------------------------------- profile

/// Header "elapsed_s,objective", one row per incumbent improvement, then a
/// row at termination carrying the final incumbent.
inline void emit_profile(std::ostream& os, const std::vector<incumbent_point>& series, double final_elapsed) {
  os << "elapsed_s,objective\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& p : series) os << p.elapsed_s << ',' << p.objective << '\n';
  if (!series.empty()) os << std::max(final_elapsed, series.back().elapsed_s) << ',' << series.back().objective << '\n';
  os << std::defaultfloat;
  if (!os) throw io_error("profile: write failed");
}

template <class Solution>
void emit_profile(std::ostream& os, const run_report<Solution>& report) {
  emit_profile(os, report.incumbent_series, report.elapsed_s);
}

}  // namespace grasppr
