#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace srtlab::cli {

/// Shortest round-trip decimal form.
std::string fmt(double v);

/// CSV file whose first line is a "# generated" timestamp comment; every
/// later line depends only on the values written.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(std::int64_t v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = false;
};

/// Self-contained SVG line chart; non-finite and (on log axes) nonpositive points are skipped.
void write_svg_chart(const std::filesystem::path& path, const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace srtlab::cli
