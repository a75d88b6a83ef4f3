#pragma once

#include <string>
#include <vector>

namespace spa {

// Writes a header row plus numeric rows, one decimal form ("%.10g") per cell.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

// Reads a numeric CSV; a non-numeric first line is treated as a header and
// skipped. Every remaining row must have at least min_columns values.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  std::size_t min_columns);

}  // namespace spa
