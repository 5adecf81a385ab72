#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "frtsim/timeseries.hpp"

using namespace frtsim;

TEST(TimeSeries, AppendAndLookup) {
  TimeSeries ts({{"time", "s"}, {"x", "V"}});
  ts.append(std::vector<double>{0.0, 1.0});
  ts.append(std::vector<double>{0.1, 2.0});
  EXPECT_EQ(ts.size(), 2u);
  EXPECT_TRUE(ts.has("x"));
  EXPECT_FALSE(ts.has("y"));
  EXPECT_EQ(ts.column("x")[1], 2.0);
  EXPECT_EQ(ts.index_of("x"), 1u);
  EXPECT_THROW(ts.column("y"), std::out_of_range);
  EXPECT_THROW(ts.append(std::vector<double>{0.2}), std::invalid_argument);
  EXPECT_THROW(ts.append(std::vector<double>{0.1, 3.0}), std::invalid_argument);
  ts.truncate(1);
  EXPECT_EQ(ts.size(), 1u);
}

TEST(TimeSeries, RunSchema) {
  EXPECT_EQ(TimeSeries::for_run(false).columns(), TimeSeries::base_schema().size());
  EXPECT_EQ(TimeSeries::for_run(true).columns(),
            TimeSeries::base_schema().size() + TimeSeries::verbose_schema().size());
  EXPECT_EQ(TimeSeries::base_schema().front().name, "time");
}

TEST(Csv, RoundTripIsExact) {
  TimeSeries ts({{"time", "s"}, {"v_pcc", "pu"}, {"q", "var"}});
  ts.append(std::vector<double>{0.0, 1.0 / 3.0, -1.2345678901234567e7});
  ts.append(std::vector<double>{1e-4, std::nextafter(1.0, 2.0), 5e-324});
  const std::string text = to_csv(ts);
  EXPECT_EQ(text.substr(0, text.find('\n')), "time[s],v_pcc[pu],q[var]");
  const TimeSeries back = parse_csv(text);
  ASSERT_EQ(back.size(), ts.size());
  for (std::size_t c = 0; c < ts.columns(); ++c) {
    EXPECT_EQ(back.schema()[c].name, ts.schema()[c].name);
    EXPECT_EQ(back.schema()[c].unit, ts.schema()[c].unit);
    for (std::size_t r = 0; r < ts.size(); ++r) EXPECT_EQ(back.column(c)[r], ts.column(c)[r]);
  }
  EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, HeaderOnlyFile) {
  const TimeSeries empty = TimeSeries::for_run(false);
  const auto path = std::filesystem::temp_directory_path() / "frtsim_header_only.csv";
  write_csv(empty, path);
  const TimeSeries back = read_csv(path);
  EXPECT_EQ(back.size(), 0u);
  EXPECT_EQ(back.columns(), empty.columns());
  std::filesystem::remove(path);
}

TEST(Csv, MalformedInputRejected) {
  EXPECT_THROW(parse_csv("time[s],v[pu]\n0.0,abc\n"), std::exception);
  EXPECT_THROW(parse_csv("time[s],v[pu]\n0.0\n"), std::exception);
  EXPECT_THROW(read_csv("/nonexistent/dir/trace.csv"), std::exception);
}
