#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trust/matrix.hpp"
#include "trust/rng.hpp"
#include "trust/stats.hpp"

namespace trust {

enum class ColumnKind { kNumeric, kCategorical };

// One feature column. Numeric columns use `values`; categorical columns use
// `codes` indexing into `levels` (level order is first appearance in the
// source). `missing[i] == 1` marks a missing cell; the corresponding payload
// entry is unspecified.
struct Column {
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<double> values;
  std::vector<int> codes;
  std::vector<std::string> levels;
  std::vector<char> missing;

  std::size_t size() const {
    return kind == ColumnKind::kNumeric ? values.size() : codes.size();
  }
  bool is_missing(std::size_t row) const { return missing[row] != 0; }
};

// Column-typed table with an explicit missing mask; the single ingestion
// currency of the library. The target is always numeric and never missing.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Column> columns;
  std::vector<double> target;
  std::string target_name = "y";
  std::size_t n_rows = 0;

  std::size_t n_features() const { return columns.size(); }

  int feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
      if (feature_names[i] == name) return static_cast<int>(i);
    return -1;
  }
};

namespace detail {

// Missing tokens recognized in CSV cells: empty, NA, NaN, null (any case).
inline bool is_missing_token(const std::string& s) {
  if (s.empty()) return true;
  std::string low;
  low.reserve(s.size());
  for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "na" || low == "nan" || low == "null";
}

// Locale-independent full-string double parse. Accepts an optional leading
// '+' which std::from_chars does not.
inline bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

// RFC 4180 record reader: quoted fields, "" escapes, CRLF or LF endings.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
  if (!field.empty() || field_started || !record.empty()) end_record();
  return records;
}

inline std::string csv_quote(const std::string& s) {
  bool need = false;
  for (char c : s)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') need = true;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

// Shortest round-trip representation of a double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail

// Loads an RFC 4180 CSV with a header row. Columns whose non-missing cells
// all parse as numbers become numeric; everything else becomes categorical
// with levels in first-appearance order. Empty cells and NA/NaN/null tokens
// set the missing mask. The target column must be numeric with no missing
// entries.
inline Dataset load_csv(const std::string& path, const std::string& target_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto records = detail::parse_csv(buf.str());
  if (records.empty()) throw std::runtime_error("empty csv: " + path);

  const auto& header = records[0];
  int target_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == target_name) target_col = static_cast<int>(j);
  if (target_col < 0) throw std::runtime_error("target column not found: " + target_name);

  const std::size_t n_cols = header.size();
  const std::size_t n_rows = records.size() - 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != n_cols) {
      throw std::runtime_error("ragged csv row " + std::to_string(r) + " in " + path);
    }
  }

  Dataset d;
  d.n_rows = n_rows;
  d.target_name = target_name;
  d.target.resize(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::string& cell = records[r + 1][static_cast<std::size_t>(target_col)];
    if (detail::is_missing_token(cell)) {
      throw std::runtime_error("target has a missing value at row " + std::to_string(r));
    }
    double v = 0.0;
    if (!detail::parse_double(cell, v)) {
      throw std::runtime_error("target is not numeric at row " + std::to_string(r) + ": " + cell);
    }
    d.target[r] = v;
  }

  for (std::size_t j = 0; j < n_cols; ++j) {
    if (static_cast<int>(j) == target_col) continue;
    bool numeric = true;
    for (std::size_t r = 0; r < n_rows && numeric; ++r) {
      const std::string& cell = records[r + 1][j];
      if (detail::is_missing_token(cell)) continue;
      double v;
      numeric = detail::parse_double(cell, v);
    }
    Column col;
    col.missing.resize(n_rows, 0);
    if (numeric) {
      col.kind = ColumnKind::kNumeric;
      col.values.resize(n_rows, 0.0);
      for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& cell = records[r + 1][j];
        if (detail::is_missing_token(cell)) {
          col.missing[r] = 1;
        } else {
          detail::parse_double(cell, col.values[r]);
        }
      }
    } else {
      col.kind = ColumnKind::kCategorical;
      col.codes.resize(n_rows, 0);
      std::map<std::string, int> index;
      for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& cell = records[r + 1][j];
        if (detail::is_missing_token(cell)) {
          col.missing[r] = 1;
          continue;
        }
        auto it = index.find(cell);
        if (it == index.end()) {
          it = index.emplace(cell, static_cast<int>(col.levels.size())).first;
          col.levels.push_back(cell);
        }
        col.codes[r] = it->second;
      }
    }
    d.feature_names.push_back(header[j]);
    d.columns.push_back(std::move(col));
  }
  return d;
}

// Writes the same CSV dialect back. Numbers use shortest round-trip
// formatting so a save/load cycle reproduces every value exactly.
inline void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t j = 0; j < d.feature_names.size(); ++j) {
    out << detail::csv_quote(d.feature_names[j]) << ',';
  }
  out << detail::csv_quote(d.target_name) << '\n';
  for (std::size_t r = 0; r < d.n_rows; ++r) {
    for (std::size_t j = 0; j < d.columns.size(); ++j) {
      const Column& c = d.columns[j];
      if (!c.is_missing(r)) {
        if (c.kind == ColumnKind::kNumeric) {
          out << detail::format_double(c.values[r]);
        } else {
          out << detail::csv_quote(c.levels[static_cast<std::size_t>(c.codes[r])]);
        }
      }
      out << ',';
    }
    out << detail::format_double(d.target[r]) << '\n';
  }
}

// Replaces each categorical column with one numeric indicator column per
// level (named "feature=level"). A missing categorical cell marks all of its
// indicators missing. Numeric columns pass through.
inline Dataset one_hot_encode(const Dataset& d) {
  Dataset out;
  out.target = d.target;
  out.target_name = d.target_name;
  out.n_rows = d.n_rows;
  for (std::size_t j = 0; j < d.columns.size(); ++j) {
    const Column& c = d.columns[j];
    if (c.kind == ColumnKind::kNumeric) {
      out.feature_names.push_back(d.feature_names[j]);
      out.columns.push_back(c);
      continue;
    }
    for (std::size_t l = 0; l < c.levels.size(); ++l) {
      Column ind;
      ind.kind = ColumnKind::kNumeric;
      ind.values.resize(d.n_rows, 0.0);
      ind.missing = c.missing;
      for (std::size_t r = 0; r < d.n_rows; ++r) {
        if (!c.is_missing(r) && c.codes[r] == static_cast<int>(l)) ind.values[r] = 1.0;
      }
      out.feature_names.push_back(d.feature_names[j] + "=" + c.levels[l]);
      out.columns.push_back(std::move(ind));
    }
  }
  return out;
}

// Training-set imputation statistics: per-column median for numeric columns,
// modal level for categorical ones.
struct ImputeStats {
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> kinds;
  std::vector<double> medians;  // numeric columns; 0 elsewhere
  std::vector<int> modes;       // categorical columns; 0 elsewhere
};

inline ImputeStats compute_impute_stats(const Dataset& d) {
  ImputeStats s;
  s.feature_names = d.feature_names;
  for (const Column& c : d.columns) {
    s.kinds.push_back(c.kind);
    if (c.kind == ColumnKind::kNumeric) {
      std::vector<double> present;
      for (std::size_t r = 0; r < c.values.size(); ++r)
        if (!c.is_missing(r)) present.push_back(c.values[r]);
      std::sort(present.begin(), present.end());
      s.medians.push_back(median_sorted(present));
      s.modes.push_back(0);
    } else {
      std::vector<std::size_t> counts(c.levels.size(), 0);
      for (std::size_t r = 0; r < c.codes.size(); ++r)
        if (!c.is_missing(r)) counts[static_cast<std::size_t>(c.codes[r])]++;
      int best = 0;
      for (std::size_t l = 1; l < counts.size(); ++l)
        if (counts[l] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(l);
      s.modes.push_back(best);
      s.medians.push_back(0.0);
    }
  }
  return s;
}

// Fills every missing cell from training statistics and clears the mask.
inline Dataset median_impute(const Dataset& d, const ImputeStats& stats) {
  if (stats.feature_names != d.feature_names) {
    throw std::runtime_error("median_impute: schema mismatch");
  }
  Dataset out = d;
  for (std::size_t j = 0; j < out.columns.size(); ++j) {
    Column& c = out.columns[j];
    if (stats.kinds[j] != c.kind) throw std::runtime_error("median_impute: schema mismatch");
    for (std::size_t r = 0; r < d.n_rows; ++r) {
      if (!c.is_missing(r)) continue;
      if (c.kind == ColumnKind::kNumeric) {
        c.values[r] = stats.medians[j];
      } else {
        c.codes[r] = stats.modes[j];
      }
      c.missing[r] = 0;
    }
  }
  return out;
}

// Balanced k-fold assignment: deterministic shuffled round-robin, so fold
// sizes differ by at most one.
struct FoldPlan {
  int n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<int> assignment;
};

inline FoldPlan make_folds(std::size_t n_rows, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > n_rows) {
    throw std::invalid_argument("make_folds: k must satisfy 2 <= k <= n_rows");
  }
  std::vector<std::size_t> perm(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);
  FoldPlan plan;
  plan.n_folds = k;
  plan.seed = seed;
  plan.assignment.resize(n_rows);
  for (std::size_t pos = 0; pos < n_rows; ++pos) {
    plan.assignment[perm[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return plan;
}

inline Dataset select_rows(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.feature_names = d.feature_names;
  out.target_name = d.target_name;
  out.n_rows = rows.size();
  out.target.reserve(rows.size());
  for (std::size_t r : rows) out.target.push_back(d.target[r]);
  for (const Column& c : d.columns) {
    Column nc;
    nc.kind = c.kind;
    nc.levels = c.levels;
    nc.missing.reserve(rows.size());
    for (std::size_t r : rows) nc.missing.push_back(c.missing[r]);
    if (c.kind == ColumnKind::kNumeric) {
      nc.values.reserve(rows.size());
      for (std::size_t r : rows) nc.values.push_back(c.values[r]);
    } else {
      nc.codes.reserve(rows.size());
      for (std::size_t r : rows) nc.codes.push_back(c.codes[r]);
    }
    out.columns.push_back(std::move(nc));
  }
  return out;
}

// Rebuilds categorical level tables from the codes actually present, in
// first-appearance row order. Used when a row subset must not remember
// levels it never saw.
inline Dataset rebuild_levels(const Dataset& d) {
  Dataset out = d;
  for (Column& c : out.columns) {
    if (c.kind != ColumnKind::kCategorical) continue;
    std::vector<int> remap(c.levels.size(), -1);
    std::vector<std::string> levels;
    for (std::size_t r = 0; r < c.codes.size(); ++r) {
      if (c.is_missing(r)) continue;
      int& m = remap[static_cast<std::size_t>(c.codes[r])];
      if (m < 0) {
        m = static_cast<int>(levels.size());
        levels.push_back(c.levels[static_cast<std::size_t>(c.codes[r])]);
      }
      c.codes[r] = m;
    }
    c.levels = std::move(levels);
  }
  return out;
}

// Numeric matrix view of a dataset with no categorical columns and no
// missing cells (i.e. after impute + one-hot).
inline Matrix to_matrix(const Dataset& d) {
  Matrix x(d.n_rows, d.columns.size());
  for (std::size_t j = 0; j < d.columns.size(); ++j) {
    const Column& c = d.columns[j];
    if (c.kind != ColumnKind::kNumeric) throw std::runtime_error("to_matrix: categorical column");
    for (std::size_t r = 0; r < d.n_rows; ++r) {
      if (c.is_missing(r)) throw std::runtime_error("to_matrix: missing cell");
      x(r, j) = c.values[r];
    }
  }
  return x;
}

}  // namespace trust
