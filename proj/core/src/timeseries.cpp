#include "frtsim/timeseries.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frtsim {

TimeSeries::TimeSeries(std::vector<ColumnSpec> schema)
    : schema_(std::move(schema)), data_(schema_.size()) {}

std::vector<ColumnSpec> TimeSeries::base_schema() {
  return {
      {"time", "s"},
      {"v_pcc", "pu"},
      {"v_pcc_d", "V"},
      {"v_pcc_q", "V"},
      {"i_grid", "A"},
      {"p_grid", "W"},
      {"q_grid", "var"},
      {"v_wecs", "pu"},
      {"i_wecs", "A"},
      {"p_wecs", "W"},
      {"q_wecs", "var"},
      {"i_statcom_d", "A"},
      {"i_statcom_q", "A"},
      {"q_statcom", "var"},
      {"v_dc", "V"},
      {"omega_r", "rad/s"},
      {"t_e", "N m"},
      {"t_m", "N m"},
      {"wind", "m/s"},
      {"fault", "-"},
      {"converter_saturated", "-"},
      {"current_limited", "-"},
      {"pll_coasting", "-"},
      {"load_impedance_mode", "-"},
  };
}

std::vector<ColumnSpec> TimeSeries::verbose_schema() {
  return {
      {"i_dref", "A"},      {"i_qref", "A"},   {"v_g_filtered", "pu"}, {"omega_pll", "rad/s"},
      {"theta_pll", "rad"}, {"v_conv_d", "V"}, {"v_conv_q", "V"},
  };
}

TimeSeries TimeSeries::for_run(bool verbose) {
  auto schema = base_schema();
  if (verbose) {
    auto extra = verbose_schema();
    schema.insert(schema.end(), extra.begin(), extra.end());
  }
  return TimeSeries(std::move(schema));
}

void TimeSeries::append(std::span<const double> row) {
  if (row.size() != schema_.size())
    throw std::invalid_argument("TimeSeries::append: row width does not match schema");
  if (!data_.empty() && !data_[0].empty() && !(row[0] > data_[0].back()))
    throw std::invalid_argument("TimeSeries::append: time must be strictly increasing");
  for (std::size_t c = 0; c < row.size(); ++c) data_[c].push_back(row[c]);
}

bool TimeSeries::has(const std::string& name) const {
  for (const auto& c : schema_)
    if (c.name == name) return true;
  return false;
}

std::size_t TimeSeries::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i)
    if (schema_[i].name == name) return i;
  throw std::out_of_range("TimeSeries: no column named '" + name + "'");
}

std::span<const double> TimeSeries::column(const std::string& name) const {
  return data_[index_of(name)];
}

void TimeSeries::truncate(std::size_t n) {
  for (auto& col : data_)
    if (col.size() > n) col.resize(n);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string to_csv(const TimeSeries& ts) {
  std::string out;
  const auto& schema = ts.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out += ',';
    out += schema[c].name + '[' + schema[c].unit + ']';
  }
  out += '\n';
  for (std::size_t r = 0; r < ts.size(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c) out += ',';
      append_double(out, ts.column(c)[r]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << to_csv(ts);
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

TimeSeries parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV is empty (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<ColumnSpec> schema;
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      const auto open = cell.find('[');
      if (open != std::string::npos && cell.back() == ']')
        schema.push_back({cell.substr(0, open), cell.substr(open + 1, cell.size() - open - 2)});
      else
        schema.push_back({cell, ""});
    }
  }
  TimeSeries ts(std::move(schema));
  std::vector<double> row(ts.columns());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t c = 0, pos = 0;
    while (pos <= line.size()) {
      const auto end = std::min(line.find(',', pos), line.size());
      if (c >= row.size()) throw std::runtime_error("CSV line " + std::to_string(line_no) + ": too many fields");
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      const auto res = std::from_chars(first, last, row[c]);
      if (res.ec != std::errc() || res.ptr != last)
        throw std::runtime_error("CSV line " + std::to_string(line_no) + ": bad number in column " +
                                 std::to_string(c + 1));
      ++c;
      pos = end + 1;
    }
    if (c != row.size()) throw std::runtime_error("CSV line " + std::to_string(line_no) + ": too few fields");
    ts.append(row);
  }
  return ts;
}

TimeSeries read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace frtsim
