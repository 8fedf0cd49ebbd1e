#include "skewvar/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {
int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw DataError("unparseable date '" + std::string(whole) + "' (expected YYYY-MM)");
  }
  return value;
}
}  // namespace

YearMonth YearMonth::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw DataError("unparseable date '" + std::string(text) + "' (expected YYYY-MM)");
  }
  auto rest = text.substr(dash + 1);
  const auto dash2 = rest.find('-');
  if (dash2 != std::string_view::npos) {
    parse_int(rest.substr(dash2 + 1), text);
    rest = rest.substr(0, dash2);
  }
  YearMonth ym{parse_int(text.substr(0, dash), text), parse_int(rest, text)};
  if (ym.month < 1 || ym.month > 12) {
    throw DataError("month out of range in date '" + std::string(text) + "'");
  }
  return ym;
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::plus_months(int n) const {
  const int ord = ordinal() + n;
  const int y = ord >= 0 ? ord / 12 : -((-ord + 11) / 12);
  return {y, ord - 12 * y + 1};
}

std::string_view transform_name(Transform t) {
  switch (t) {
    case Transform::Level: return "level";
    case Transform::Log: return "log";
    case Transform::LogDiff: return "logdiff";
  }
  return "level";
}

Transform parse_transform(std::string_view name) {
  if (name == "level") return Transform::Level;
  if (name == "log") return Transform::Log;
  if (name == "logdiff" || name == "log-difference" || name == "dlog") return Transform::LogDiff;
  throw ConfigError("unknown transform '" + std::string(name) + "'");
}

void Dataset::validate() const {
  if (static_cast<int>(names.size()) != k()) throw DataError("dataset: names/columns mismatch");
  if (static_cast<int>(dates.size()) != T()) throw DataError("dataset: dates/rows mismatch");
  if (!transforms.empty() && static_cast<int>(transforms.size()) != k()) {
    throw DataError("dataset: transforms/columns mismatch");
  }
  for (int t = 0; t < T(); ++t) {
    for (int i = 0; i < k(); ++i) {
      if (!std::isfinite(values(t, i))) {
        throw DataError("dataset: missing or non-finite value for '" + names[i] + "' at " +
                        dates[t].str());
      }
    }
    if (t > 0 && !(dates[t - 1] < dates[t])) {
      throw DataError("dataset: dates not strictly increasing at " + dates[t].str());
    }
  }
}

void Dataset::require_sample_size(int p) const {
  if (T() - p <= k() * p + 1) {
    throw DataError("insufficient data: " + std::to_string(T() - p) +
                    " usable rows for k p + 1 = " + std::to_string(k() * p + 1) +
                    " coefficients per equation");
  }
}

Dataset Dataset::head(int n) const {
  if (n < 0 || n > T()) throw DataError("dataset: head beyond sample");
  Dataset out;
  out.names = names;
  out.transforms = transforms;
  out.dates.assign(dates.begin(), dates.begin() + n);
  out.values = values.topRows(n);
  return out;
}

int Dataset::index_of(const YearMonth& date) const {
  for (int t = 0; t < T(); ++t) {
    if (dates[t] == date) return t;
  }
  throw DataError("date " + date.str() + " not in dataset");
}

Eigen::VectorXd apply_transform(const Eigen::VectorXd& levels, Transform t) {
  const Eigen::Index n = levels.size();
  if (t == Transform::Level) return levels;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(levels(i) > 0.0)) {
      throw DataError("non-positive value " + std::to_string(levels(i)) + " at row " +
                      std::to_string(i + 1) + " under a log transform");
    }
  }
  Eigen::VectorXd logs = levels.array().log();
  if (t == Transform::Log) return logs;
  if (n < 2) throw DataError("log-difference needs at least two observations");
  return logs.tail(n - 1) - logs.head(n - 1);
}

Eigen::VectorXd invert_transform(const Eigen::VectorXd& transformed, Transform t,
                                 double anchor_level) {
  switch (t) {
    case Transform::Level: return transformed;
    case Transform::Log: return transformed.array().exp();
    case Transform::LogDiff: {
      if (!(anchor_level > 0.0)) throw DataError("log-difference anchor must be positive");
      Eigen::VectorXd out(transformed.size() + 1);
      double log_level = std::log(anchor_level);
      out(0) = anchor_level;
      for (Eigen::Index i = 0; i < transformed.size(); ++i) {
        log_level += transformed(i);
        out(i + 1) = std::exp(log_level);
      }
      return out;
    }
  }
  return transformed;
}

}  // namespace skewvar
