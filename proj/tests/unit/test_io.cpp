#include <gtest/gtest.h>

#include <sstream>

#include "dpmod/error.hpp"
#include "dpmod/families.hpp"
#include "dpmod/io.hpp"
#include "test_support.hpp"

namespace dpmod {
namespace {

std::string message_of(auto&& fn, ErrorCode expected) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

TEST(MeshIo, RoundTripTorus) {
  const Domain d = make_flat(2, 4, true);
  std::stringstream buf;
  write_mesh(buf, *d.mesh);
  const MeshPtr back = read_mesh(buf);
  EXPECT_EQ(back->num_vertices(), d.mesh->num_vertices());
  EXPECT_EQ(back->num_cells(), d.mesh->num_cells());
  EXPECT_EQ(back->num_edges(), d.mesh->num_edges());
  for (int c = 0; c < back->num_cells(); ++c) {
    EXPECT_EQ(back->cell(c).vertices, d.mesh->cell(c).vertices);
    EXPECT_EQ(back->cell(c).volume, d.mesh->cell(c).volume);
  }
}

TEST(MeshIo, CommentsAndBlankLines) {
  std::istringstream in("# a comment\n\ndpmesh v1 1\nv 0\n  # inner\nv 1.5\nc 0 1\n");
  const MeshPtr m = read_mesh(in);
  EXPECT_EQ(m->num_vertices(), 2);
  EXPECT_DOUBLE_EQ(m->cell_euclidean_volume(0), 1.5);
}

TEST(MeshIo, ParseErrorsNameTheLine) {
  std::istringstream bad_header("dpmsh v1 2\nv 0 0\n");
  EXPECT_NE(message_of([&] { read_mesh(bad_header); }, ErrorCode::ParseError).find("line 1"), std::string::npos);

  std::istringstream bad_version("dpmesh v2 2\n");
  EXPECT_NE(message_of([&] { read_mesh(bad_version); }, ErrorCode::ParseError).find("line 1"), std::string::npos);

  std::istringstream short_vertex("dpmesh v1 2\nv 0 0\nv 1\n");
  EXPECT_NE(message_of([&] { read_mesh(short_vertex); }, ErrorCode::ParseError).find("line 3"), std::string::npos);

  std::istringstream trailing("dpmesh v1 1\nv 0\nv 1\nc 0 1 2\n");
  EXPECT_NE(message_of([&] { read_mesh(trailing); }, ErrorCode::ParseError).find("line 4"), std::string::npos);

  std::istringstream unknown("dpmesh v1 1\nv 0\nq 1\n");
  EXPECT_NE(message_of([&] { read_mesh(unknown); }, ErrorCode::ParseError).find("line 3"), std::string::npos);

  std::istringstream empty("");
  message_of([&] { read_mesh(empty); }, ErrorCode::ParseError);

  std::istringstream degenerate("dpmesh v1 1\nv 0\nv 0\nc 0 1\n");
  message_of([&] { read_mesh(degenerate); }, ErrorCode::DegenerateCell);
}

TEST(MetricIo, RoundTrip) {
  test::Rng rng(8);
  const Domain d = make_flat(2, 3, false);
  std::vector<Matrix> cells;
  for (int c = 0; c < d.mesh->num_cells(); ++c) cells.push_back(test::random_spd(rng, 2));
  const MetricField g(d.mesh, cells);
  std::stringstream buf;
  write_metric(buf, g);
  const MetricField back = read_metric(buf, d.mesh);
  for (int c = 0; c < g.num_cells(); ++c) EXPECT_EQ(back[c], g[c]);
}

TEST(MetricIo, Errors) {
  const MeshPtr sq = test::unit_square();
  std::istringstream wrong_count("dpmetric v1 2 3\n1 0 1\n1 0 1\n1 0 1\n");
  message_of([&] { read_metric(wrong_count, sq); }, ErrorCode::ParseError);

  std::istringstream short_row("dpmetric v1 2 2\n1 0 1\n1 0\n");
  EXPECT_NE(message_of([&] { read_metric(short_row, sq); }, ErrorCode::ParseError).find("line 3"),
            std::string::npos);

  std::istringstream indefinite("dpmetric v1 2 2\n1 0 1\n1 2 1\n");
  message_of([&] { read_metric(indefinite, sq); }, ErrorCode::NotSPD);

  EXPECT_THROW(read_mesh(std::filesystem::path("/nonexistent/dir/m.dpmesh")), Error);
}

}  // namespace
}  // namespace dpmod
