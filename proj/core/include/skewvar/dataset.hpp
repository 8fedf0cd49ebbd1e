#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace skewvar {

struct YearMonth {
  int year = 2000;
  int month = 1;

  /// Parses "YYYY-MM"; a trailing "-DD" day is accepted and ignored.
  static YearMonth parse(std::string_view text);
  std::string str() const;
  int ordinal() const { return year * 12 + (month - 1); }
  YearMonth plus_months(int n) const;

  friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

enum class Transform { Level, Log, LogDiff };

std::string_view transform_name(Transform t);
Transform parse_transform(std::string_view name);

/// Observed series after transformation, one row per month.
struct Dataset {
  std::vector<std::string> names;
  std::vector<YearMonth> dates;
  Eigen::MatrixXd values;  // T x k
  std::vector<Transform> transforms;

  int T() const { return static_cast<int>(values.rows()); }
  int k() const { return static_cast<int>(values.cols()); }

  /// Throws DataError on missing values, non-increasing dates or shape mismatch.
  void validate() const;
  /// Checks T > k p + 1 once the first p rows are spent on lags.
  void require_sample_size(int p) const;
  /// First n rows.
  Dataset head(int n) const;
  int index_of(const YearMonth& date) const;
};

/// Applies a transform to one level series; LogDiff drops the first entry.
Eigen::VectorXd apply_transform(const Eigen::VectorXd& levels, Transform t);
/// Inverse of apply_transform; LogDiff needs the first level as anchor.
Eigen::VectorXd invert_transform(const Eigen::VectorXd& transformed, Transform t,
                                 double anchor_level = 0.0);

}  // namespace skewvar
