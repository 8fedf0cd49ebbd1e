#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skewvar/dataset.hpp"

namespace skewvar {

/// Reads a CSV with a header row, a "date" column (YYYY-MM) and one column
/// per series in levels. `selection` picks columns by name (all when empty);
/// `transforms` is aligned with the selection (all Level when empty). A
/// log-difference on any series drops the first row from every series.
Dataset load_csv(const std::string& path, const std::vector<std::string>& selection = {},
                 const std::vector<Transform>& transforms = {});
Dataset parse_csv(std::istream& in, const std::vector<std::string>& selection = {},
                  const std::vector<Transform>& transforms = {},
                  const std::string& source = "<stream>");

/// Writes the (already transformed) values with a date column.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::string& path);

}  // namespace skewvar
