#include "skewvar/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest(line);
  while (true) {
    const auto pos = rest.find(',');
    out.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::vector<std::string>& selection,
                  const std::vector<Transform>& transforms, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_row(line);
  int date_col = -1;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (lower(header[c]) == "date") date_col = c;
  }
  if (date_col < 0) throw DataError(source + ": no 'date' column");

  std::vector<int> cols;
  std::vector<std::string> names;
  if (selection.empty()) {
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
      if (c != date_col) {
        cols.push_back(c);
        names.push_back(header[c]);
      }
    }
  } else {
    for (const auto& want : selection) {
      const auto it = std::find(header.begin(), header.end(), want);
      if (it == header.end()) throw DataError(source + ": no column named '" + want + "'");
      cols.push_back(static_cast<int>(it - header.begin()));
      names.push_back(want);
    }
  }
  if (cols.empty()) throw DataError(source + ": no data columns");
  std::vector<Transform> tf = transforms;
  if (tf.empty()) tf.assign(cols.size(), Transform::Level);
  if (tf.size() != cols.size()) throw ConfigError("transform count does not match the selection");

  std::vector<YearMonth> dates;
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()));
    }
    dates.push_back(YearMonth::parse(cells[date_col]));
    std::vector<double> row;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::string& cell = cells[cols[j]];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw DataError(source + ":" + std::to_string(line_no) + ": missing or invalid value '" +
                        cell + "' in column " + names[j]);
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw DataError(source + ": no data rows");
  const bool any_diff = std::find(tf.begin(), tf.end(), Transform::LogDiff) != tf.end();
  const int drop = any_diff ? 1 : 0;
  if (n <= drop) throw DataError(source + ": too few rows for a log-difference");

  Dataset d;
  d.names = names;
  d.transforms = tf;
  d.dates.assign(dates.begin() + drop, dates.end());
  d.values.resize(n - drop, static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd level(n);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int t = 0; t < n; ++t) level(t) = rows[t][j];
    Eigen::VectorXd out;
    try {
      out = apply_transform(level, tf[j]);
    } catch (const DataError& e) {
      throw DataError(source + ", column " + names[j] + ": " + e.what());
    }
    d.values.col(static_cast<Eigen::Index>(j)) = out.tail(n - drop);
  }
  d.validate();
  return d;
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& selection,
                 const std::vector<Transform>& transforms) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return parse_csv(in, selection, transforms, path);
}

void write_csv(const Dataset& data, std::ostream& out) {
  out << "date";
  for (const auto& n : data.names) out << ',' << n;
  out << '\n' << std::setprecision(17);
  for (int t = 0; t < data.T(); ++t) {
    out << data.dates[t].str();
    for (int i = 0; i < data.k(); ++i) out << ',' << data.values(t, i);
    out << '\n';
  }
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(data, out);
}

}  // namespace skewvar
