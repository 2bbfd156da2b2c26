#include "qgeo/lab/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgeo/lab/config.hpp"

namespace qgeo::lab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void Table::add(std::vector<double> row) {
  if (row.size() != header.size()) throw Error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string Table::render() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::vector<double> Table::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(index));
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

Protocol read_protocol_file(const std::string& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open protocol file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("protocol file '" + path + "' is empty");

  std::string expected = "s";
  for (int i = 1; i <= dimension; ++i) expected += ",lambda_" + std::to_string(i);
  std::string header;
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) header += c;
  }
  if (header != expected) {
    throw UsageError("protocol file '" + path + "': header must be '" + expected + "', got '" + line + "'");
  }

  std::vector<double> knots;
  std::vector<RealVector> values;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream fields(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(fields, field, ',')) {
      const auto begin = field.find_first_not_of(" \t\r");
      const auto end = field.find_last_not_of(" \t\r");
      const std::string trimmed = begin == std::string::npos ? "" : field.substr(begin, end - begin + 1);
      double value = 0.0;
      const auto result = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
      if (result.ec != std::errc() || result.ptr != trimmed.data() + trimmed.size() || !std::isfinite(value)) {
        throw UsageError("protocol file '" + path + "' line " + std::to_string(line_number) + ": bad number '" +
                         trimmed + "'");
      }
      row.push_back(value);
    }
    if (static_cast<int>(row.size()) != dimension + 1) {
      throw UsageError("protocol file '" + path + "' line " + std::to_string(line_number) + ": expected " +
                       std::to_string(dimension + 1) + " columns");
    }
    if (!knots.empty() && !(row[0] > knots.back())) {
      throw UsageError("protocol file '" + path + "' line " + std::to_string(line_number) +
                       ": s must increase strictly");
    }
    knots.push_back(row[0]);
    values.push_back(Eigen::Map<const RealVector>(row.data() + 1, dimension));
  }
  if (knots.size() < 2) throw UsageError("protocol file '" + path + "': need at least two rows");
  if (knots.front() != 0.0 || knots.back() != 1.0) {
    throw UsageError("protocol file '" + path + "': s must run from 0 to 1");
  }
  return Protocol{Path::through_points(std::move(knots), std::move(values)), Timing::identity(), "file", std::nullopt};
}

Table protocol_table(const Protocol& protocol, int samples) {
  Table table;
  table.header.push_back("s");
  for (int i = 1; i <= protocol.path.dimension(); ++i) table.header.push_back("lambda_" + std::to_string(i));
  for (int j = 0; j < samples; ++j) {
    const double s = static_cast<double>(j) / (samples - 1);
    const RealVector lambda = protocol.at(s);
    std::vector<double> row{s};
    row.insert(row.end(), lambda.data(), lambda.data() + lambda.size());
    table.add(std::move(row));
  }
  return table;
}

}  // namespace qgeo::lab
