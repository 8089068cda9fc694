#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loglab/io.hpp"

using namespace loglab;

namespace {
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("csv writer emits stable bodies") {
  ResultTable table;
  table.name = "t";
  table.columns = {"a", "b"};
  table.add_row({1.0, 0.123456789012345});
  table.add_row({-2.5, 1e-12});

  auto dir = std::filesystem::temp_directory_path();
  auto p1 = dir / "loglab_io_a.csv";
  auto p2 = dir / "loglab_io_b.csv";
  write_csv(table, p1.string());
  write_csv(table, p2.string());
  std::string body = slurp(p1);
  REQUIRE(body == slurp(p2));
  REQUIRE(body.rfind("a,b\n", 0) == 0);
  REQUIRE(body.find("0.123456789012") != std::string::npos);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("fnv1a matches the reference constants") {
  REQUIRE(fnv1a_hash("") == 14695981039346656037ULL);
  REQUIRE(fnv1a_hash("a") == 12638187200555641996ULL);
  REQUIRE(fnv1a_hash("hello") == 11831194018420276491ULL);
}

TEST_CASE("sidecar json round trips") {
  json j;
  j["seed"] = 7;
  j["name"] = "x";
  auto p = std::filesystem::temp_directory_path() / "loglab_io_side.json";
  write_sidecar(j, p.string());
  std::ifstream in(p);
  json back = json::parse(in);
  REQUIRE(back["seed"] == 7);
  REQUIRE(back["name"] == "x");
  std::filesystem::remove(p);
}

TEST_CASE("svg chart writes polylines") {
  SvgSeries s;
  s.label = "risk";
  s.x = {1.0, 10.0, 100.0};
  s.y = {0.7, 0.5, 0.6};
  auto p = std::filesystem::temp_directory_path() / "loglab_io_chart.svg";
  write_svg_chart(p.string(), "demo", {s}, true);
  std::string body = slurp(p);
  REQUIRE(body.find("<svg") != std::string::npos);
  REQUIRE(body.find("polyline") != std::string::npos);
  REQUIRE(body.find("risk") != std::string::npos);
  std::filesystem::remove(p);
}
