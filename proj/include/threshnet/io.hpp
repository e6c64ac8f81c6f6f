#pragma once

#include "threshnet/core.hpp"
#include "threshnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace threshnet {

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return f;
}

// Splits on commas, tabs and spaces; empty fields are dropped.
inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Edge list parse options. With `nodes` set, ids must be integers in
/// [0, nodes); otherwise ids are arbitrary tokens, indexed in numeric order
/// when every token is an integer and lexicographic order otherwise.
/// Comment directives `# nodes: N`, `# directed: 0|1` and `# unit: U` fill
/// in options left unset; the defaults are undirected and "units".
struct EdgeListOptions {
  std::optional<bool> directed;
  std::optional<std::string> unit;
  std::optional<int> nodes;
};

struct LabeledGraph {
  ValuedGraph graph;
  std::vector<std::string> labels;
};

/// Rows are `source target weight`, delimited by commas or whitespace;
/// `#` starts a comment. Unlisted pairs have weight 0. Malformed rows,
/// negative or non-finite weights, self loops and repeated pairs are
/// rejected with their line number.
inline LabeledGraph load_edgelist_labeled(const std::string& path, EdgeListOptions opt) {
  auto f = detail::open_input(path);
  struct Row {
    std::string s, t;
    double w;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::string line;
  for (std::size_t ln = 1; std::getline(f, line); ++ln) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      const std::string comment = detail::trim(std::string_view(line).substr(hash + 1));
      if (comment.rfind("nodes:", 0) == 0 && !opt.nodes) {
        const auto v = detail::parse_int(detail::trim(comment.substr(6)));
        if (!v || *v < 1) throw ParseError(path, ln, "bad nodes directive");
        opt.nodes = static_cast<int>(*v);
      } else if (comment.rfind("directed:", 0) == 0 && !opt.directed) {
        const auto v = detail::trim(comment.substr(9));
        if (v != "0" && v != "1") throw ParseError(path, ln, "bad directed directive");
        opt.directed = v == "1";
      } else if (comment.rfind("unit:", 0) == 0 && !opt.unit) {
        opt.unit = detail::trim(comment.substr(5));
      }
      line.erase(hash);
    }
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 3) throw ParseError(path, ln, "expected 3 fields, found " + std::to_string(fields.size()));
    const auto w = detail::parse_double(fields[2]);
    if (!w) throw ParseError(path, ln, "weight is not a number: " + fields[2]);
    if (!std::isfinite(*w) || *w < 0.0) throw ParseError(path, ln, "weight must be finite and nonnegative");
    if (fields[0] == fields[1]) throw ParseError(path, ln, "self loop");
    rows.push_back({fields[0], fields[1], *w, ln});
  }

  std::map<std::string, int> index;
  std::vector<std::string> labels;
  if (opt.nodes) {
    for (int i = 0; i < *opt.nodes; ++i) {
      labels.push_back(std::to_string(i));
      index[labels.back()] = i;
    }
    for (const auto& r : rows)
      for (const auto* id : {&r.s, &r.t}) {
        const auto v = detail::parse_int(*id);
        if (!v || *v < 0 || *v >= *opt.nodes)
          throw ParseError(path, r.line, "node id out of range [0, " + std::to_string(*opt.nodes) + "): " + *id);
        if (!index.count(*id)) throw ParseError(path, r.line, "non-canonical node id: " + *id);
      }
  } else {
    std::set<std::string> ids;
    for (const auto& r : rows) {
      ids.insert(r.s);
      ids.insert(r.t);
    }
    labels.assign(ids.begin(), ids.end());
    const bool numeric = std::all_of(labels.begin(), labels.end(), [](auto& s) { return detail::parse_int(s).has_value(); });
    if (numeric)
      std::sort(labels.begin(), labels.end(),
                [](auto& a, auto& b) { return *detail::parse_int(a) < *detail::parse_int(b); });
    for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = static_cast<int>(k);
  }
  const int n = static_cast<int>(labels.size());
  if (n < 1) throw Error(path + ": edge list has no nodes (declare them with '# nodes: N')");

  const bool directed = opt.directed.value_or(false);
  Matrix w = Matrix::Zero(n, n);
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  for (const auto& r : rows) {
    const int i = index.at(r.s), j = index.at(r.t);
    if (seen[i][j]) throw ParseError(path, r.line, "duplicate pair " + r.s + " " + r.t);
    seen[i][j] = 1;
    w(i, j) = r.w;
    if (!directed) {
      seen[j][i] = 1;
      w(j, i) = r.w;
    }
  }
  return {ValuedGraph(std::move(w), directed, opt.unit.value_or("units")), std::move(labels)};
}

inline ValuedGraph load_edgelist(const std::string& path, bool directed, const std::string& unit,
                                 std::optional<int> nodes = {}) {
  return load_edgelist_labeled(path, {directed, unit, nodes}).graph;
}

// Direction, unit and node count taken from the file's directives.
inline ValuedGraph load_edgelist(const std::string& path) { return load_edgelist_labeled(path, {}).graph; }

/// Writes positive-weight pairs with full precision and a nodes directive,
/// so that load_edgelist reproduces the graph exactly.
inline void write_edgelist(const ValuedGraph& g, std::ostream& os) {
  os << "# nodes: " << g.n() << "\n";
  os << "# directed: " << (g.directed() ? 1 : 0) << "\n";
  os << "# unit: " << g.unit_label() << "\n";
  for (int i = 0; i < g.n(); ++i)
    for (int j = g.directed() ? 0 : i + 1; j < g.n(); ++j)
      if (i != j && g.weight(i, j) > 0.0) os << i << ',' << j << ',' << format_exact(g.weight(i, j)) << '\n';
}

inline void save_edgelist(const ValuedGraph& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  write_edgelist(g, f);
}

namespace detail {

struct DenseRow {
  std::vector<std::string> fields;
  std::size_t line;
};

inline std::vector<DenseRow> read_dense_rows(const std::string& path) {
  auto f = open_input(path);
  std::vector<DenseRow> rows;
  std::string line;
  for (std::size_t ln = 1; std::getline(f, line); ++ln) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto fields = split_fields(line);
    if (!fields.empty()) rows.push_back({std::move(fields), ln});
  }
  return rows;
}

}  // namespace detail

/// Dense square correlation matrix (whitespace or comma delimited). Entries
/// must lie in [-1, 1] with a unit diagonal and symmetry to 1e-9. Weights
/// are the correlations, or their absolute values; negative correlations
/// become 0 (no tie) when absolute values are not taken.
inline ValuedGraph load_correlation_matrix(const std::string& path, bool take_absolute) {
  const auto rows = detail::read_dense_rows(path);
  const int n = static_cast<int>(rows.size());
  if (n < 1) throw Error(path + ": empty matrix");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i].fields;
    const std::size_t ln = rows[i].line;
    if (static_cast<int>(row.size()) != n)
      throw ParseError(path, ln, "matrix is not square: row has " + std::to_string(row.size()) +
                                     " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) {
      const auto v = detail::parse_double(row[j]);
      if (!v) throw ParseError(path, ln, "not a number: " + row[j]);
      if (!(*v >= -1.0 && *v <= 1.0)) throw ParseError(path, ln, "correlation outside [-1, 1]: " + row[j]);
      m(i, j) = *v;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(m(i, i) - 1.0) > 1e-9) throw ParseError(path, rows[i].line, "diagonal entry is not 1");
    for (int j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-9) throw ParseError(path, rows[i].line, "matrix is not symmetric");
  }
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = 0.5 * (m(i, j) + m(j, i));
      w(i, j) = w(j, i) = take_absolute ? std::abs(c) : std::max(c, 0.0);
    }
  return ValuedGraph(std::move(w), false, "correlation");
}

/// Rank-preference matrix: row i ranks every other member 1..n-1 without
/// ties; the diagonal holds 0 or "-". Preference p becomes the fraction
/// (n - p) / (n - 1), so the first choice maps to 1 and the last to 1/(n-1).
inline ValuedGraph load_rank_matrix(const std::string& path) {
  const auto rows = detail::read_dense_rows(path);
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw Error(path + ": rank matrix needs at least 2 rows");
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i].fields;
    const std::size_t ln = rows[i].line;
    if (static_cast<int>(row.size()) != n) throw ParseError(path, ln, "expected " + std::to_string(n) + " entries");
    std::vector<char> used(n, 0);
    for (int j = 0; j < n; ++j) {
      const auto& tok = row[j];
      if (i == j) {
        if (tok != "0" && tok != "-") throw ParseError(path, ln, "diagonal must be 0 or '-'");
        continue;
      }
      const auto p = detail::parse_int(tok);
      if (!p || *p < 1 || *p > n - 1) throw ParseError(path, ln, "preference out of range: " + tok);
      if (used[*p]) throw ParseError(path, ln, "row is not a permutation (repeated " + tok + ")");
      used[*p] = 1;
      w(i, j) = static_cast<double>(n - *p) / (n - 1);
    }
  }
  return ValuedGraph(std::move(w), true, "fraction");
}

/// min(w_ij, w_ji): a tie survives a cut only if both directions do.
inline ValuedGraph mutual_graph(const ValuedGraph& g) {
  Matrix m = g.weights().cwiseMin(g.weights().transpose());
  return ValuedGraph(std::move(m), false, g.unit_label());
}

/// Counts over ordered off-diagonal pairs.
struct WeightCensus {
  long pairs = 0;
  long zeros = 0;
  long above_10 = 0;   // strictly greater than 10
  long above_100 = 0;  // strictly greater than 100
};

inline WeightCensus weight_census(const ValuedGraph& g) {
  WeightCensus c;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      if (i == j) continue;
      const double w = g.weight(i, j);
      ++c.pairs;
      c.zeros += w == 0.0;
      c.above_10 += w > 10.0;
      c.above_100 += w > 100.0;
    }
  return c;
}

}  // namespace threshnet
