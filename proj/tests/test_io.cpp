#include <gtest/gtest.h>

#include <sstream>

#include <interlace/io.hpp>

using namespace interlace;

TEST(Io, NineSignificantDigits) {
  EXPECT_EQ(fmt9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(fmt9(2.0), "2");
  EXPECT_EQ(fmt9(123456789.123), "123456789");
  EXPECT_EQ(fmt9(NAN), "nan");
  EXPECT_EQ(json_number(1.0 / 3.0).dump(), "0.333333333");
  EXPECT_TRUE(json_number(INFINITY).is_null());
}

TEST(Io, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Io, PointsCsvHasHeader) {
  std::ostringstream os;
  write_points_csv(os, {OrderedPoint({1.0, 2.5}), OrderedPoint({0.125, 3.0})}, "y", 2);
  EXPECT_EQ(os.str(), "y1,y2\n1,2.5\n0.125,3\n");
}

TEST(Io, ReportJson) {
  TestReport r = TestReport::statistical("energy", 0.25, 0.5, 0.01);
  r.meta["n"] = 10LL;
  r.meta["label"] = std::string("x");
  const Json j = to_json(r);
  EXPECT_EQ(j["name"], "energy");
  EXPECT_EQ(j["passed"], true);
  EXPECT_DOUBLE_EQ(j["p_value"].get<double>(), 0.5);
  EXPECT_EQ(j["meta"]["n"], 10);
  EXPECT_EQ(j["meta"]["label"], "x");
  const Json d = to_json(TestReport::deterministic("det", 2.0, 1.0));
  EXPECT_TRUE(d["p_value"].is_null());
  EXPECT_EQ(d["passed"], false);
}
