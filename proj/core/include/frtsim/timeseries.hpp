#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace frtsim {

struct ColumnSpec {
  std::string name;
  std::string unit;
};

/// Uniformly sampled record of a scenario run, stored column-wise.
class TimeSeries {
public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<ColumnSpec> schema);

  /// Columns every run records.
  static std::vector<ColumnSpec> base_schema();
  /// Controller internals appended when verbose output is requested.
  static std::vector<ColumnSpec> verbose_schema();
  static TimeSeries for_run(bool verbose);

  const std::vector<ColumnSpec>& schema() const { return schema_; }
  std::size_t columns() const { return schema_.size(); }
  std::size_t size() const { return data_.empty() ? 0 : data_.front().size(); }
  bool empty() const { return size() == 0; }

  /// Appends one sample. Throws std::invalid_argument on a width mismatch or
  /// a non-increasing time column.
  void append(std::span<const double> row);

  bool has(const std::string& name) const;
  std::span<const double> column(const std::string& name) const;
  std::span<const double> column(std::size_t index) const { return data_.at(index); }
  std::size_t index_of(const std::string& name) const;

  /// Drops all samples after index n - 1.
  void truncate(std::size_t n);

private:
  std::vector<ColumnSpec> schema_;
  std::vector<std::vector<double>> data_;
};

/// Header "name[unit]" per column, shortest round-trip decimal formatting.
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);
std::string to_csv(const TimeSeries& ts);

/// Parses a CSV produced by write_csv (or any CSV with a "name[unit]" header).
TimeSeries read_csv(const std::filesystem::path& path);
TimeSeries parse_csv(const std::string& text);

}  // namespace frtsim
