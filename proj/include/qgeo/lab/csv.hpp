#pragma once

#include <string>
#include <vector>

#include "qgeo/protocols.hpp"

namespace qgeo::lab {

/// Shortest decimal that reads back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double value);

/// Column table written as comma-separated text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string render() const;
  std::vector<double> column(std::size_t index) const;
};

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text(const std::string& path, const std::string& content);

/// Protocol table `s,lambda_1[,lambda_2,lambda_3]` with s increasing from 0 to 1.
Protocol read_protocol_file(const std::string& path, int dimension);
Table protocol_table(const Protocol& protocol, int samples);

}  // namespace qgeo::lab
