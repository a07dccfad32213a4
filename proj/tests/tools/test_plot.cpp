#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpmod/error.hpp"
#include "dpmod_tools/plot.hpp"

namespace dpmod::tools {
namespace {

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

TEST(Csv, ReadsHeaderAndRows) {
  std::istringstream in("a,b,c\n1,2,3\n\n4,,6\n");
  const CsvTable t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.column_index("c"), 2u);
  const auto b = t.numeric_column("b");
  EXPECT_EQ(b[0], 2.0);
  EXPECT_TRUE(std::isnan(b[1]));
  EXPECT_THROW((void)t.column_index("zzz"), Error);
}

TEST(Csv, RaggedRowNamesTheLine) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    (void)read_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream empty("");
  EXPECT_THROW((void)read_csv(empty), Error);
}

TEST(Chart, OnePolylinePerSeries) {
  const std::string svg = render_line_chart({"t<1>", "x", "y", false},
                                            {{"one", {1, 2, 3}, {1, 4, 9}}, {"two", {1, 2, 3}, {2, 2, 2}}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_NE(svg.find("t&lt;1&gt;"), std::string::npos);
  EXPECT_NE(svg.find(">one<"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Chart, LogAxisSkipsNonPositive) {
  const std::string svg = render_line_chart({"t", "j", "v", true}, {{"s", {1, 2, 3}, {1e-3, 0.0, 1e-1}}});
  EXPECT_NE(svg.find("(log)"), std::string::npos);
  const auto start = svg.find("points=\"") + 8;
  const std::string pts = svg.substr(start, svg.find('"', start) - start);
  EXPECT_EQ(count(pts, ","), 2u);
}

TEST(Chart, EmptyInputStillRenders) {
  const std::string svg = render_line_chart({"t", "x", "y", false}, {});
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(PlotCsv, GroupsRowsIntoSeries) {
  const auto dir = std::filesystem::temp_directory_path() / "dpmod_plot_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "in.csv") << "p,value,x\n2,1,0\n4,2,0\n2,3,1\n4,4,1\n";
  plot_csv(dir / "in.csv", "p", {"value"}, {"x"}, {"title", "p", "value", false}, dir / "out.svg");
  std::ifstream in(dir / "out.svg");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(count(ss.str(), "<polyline"), 2u);
  EXPECT_NE(ss.str().find("x=0"), std::string::npos);
  EXPECT_NE(ss.str().find("x=1"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dpmod::tools
