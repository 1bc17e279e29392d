#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpd/errors.hpp"
#include "cpd/io.hpp"
#include "cpd/problems.hpp"
#include "cpd/saddle.hpp"
#include "cpd/snl.hpp"

namespace cpd {
namespace {

using nlohmann::json;

TEST(Io, ProblemRoundTrip) {
  const auto inst = quartic_instance(3, 4, 2);
  const json j = problem_to_json(inst.problem);
  const auto back = problem_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.A(), inst.problem.A());
  EXPECT_EQ(back.f(), inst.problem.f());
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(back.map()[k].A(), inst.problem.map()[k].A());
    EXPECT_EQ(back.map()[k].b(), inst.problem.map()[k].b());
  }
  EXPECT_EQ(back.canonical().targets(), inst.problem.canonical().targets());
  EXPECT_EQ(problem_to_json(back).dump(), j.dump());
}

TEST(Io, SnlRoundTripIsBitwiseOnTheCanonicalForm) {
  const auto inst = gen_instance(15, 2, 0.35, 0.001, 9);
  const std::string text = snl_to_json(inst).dump();
  EXPECT_EQ(snl_to_json(snl_from_json(json::parse(text))).dump(), text);
}

TEST(Io, SchemaViolationsAreInputErrors) {
  json j = problem_to_json(problem_four_minima());
  json missing = j;
  missing.erase("targets");
  EXPECT_THROW(problem_from_json(missing), InvalidInput);
  json short_f = j;
  short_f["f"] = {1.0};
  EXPECT_THROW(problem_from_json(short_f), InvalidInput);
  json bad_m = j;
  bad_m["m"] = 3;
  EXPECT_THROW(problem_from_json(bad_m), InvalidInput);
  json text_entry = j;
  text_entry["A"][0][0] = "zero";
  EXPECT_THROW(problem_from_json(text_entry), InvalidInput);
  EXPECT_THROW(problem_from_json(json::array()), InvalidInput);

  json s = snl_to_json(fixture_six_sensors());
  s["sensor_edges"][0] = {0, 1};
  EXPECT_THROW(snl_from_json(s), InvalidInput);
}

TEST(Io, MissingOrMalformedFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "cpd_io_test";
  std::filesystem::create_directories(dir);
  EXPECT_THROW(read_json_file(dir / "absent.json"), InvalidInput);
  {
    std::ofstream(dir / "bad.json") << "{\"n\": ";
  }
  EXPECT_THROW(read_json_file(dir / "bad.json"), InvalidInput);
  write_json_file(dir / "ok.json", json{{"a", 1}});
  EXPECT_EQ(read_json_file(dir / "ok.json")["a"], 1);
  std::filesystem::remove_all(dir);
}

TEST(Io, HistoryCsvHasOneRowPerIteration) {
  OuterConfig cfg;
  cfg.x0 = four_minima_starts()[0];
  const auto r = algorithm2(problem_four_minima(), Schedule{}, cfg, 1);
  std::ostringstream os;
  write_history_csv(os, r.history);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iter,rho,mu,xi,primal,dual,step_x,step_s,min_eig_G,canonical_residual");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, r.history.size());

  const json j = result_to_json(r);
  for (const char* key : {"x_bar", "s_bar", "primal_value", "status", "certificate",
                          "canonical_residual", "outer_iters", "degeneracy"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Io, PositionsCsvColumns) {
  const Positions est{Vector{{0.5, 0.5}}};
  const Positions truth{Vector{{0.5, 0.0}}};
  std::ostringstream with, without;
  write_positions_csv(with, est, truth);
  write_positions_csv(without, est, std::nullopt);
  EXPECT_EQ(with.str(), "sensor_index,est_x,est_y,true_x,true_y,error\n0,0.5,0.5,0.5,0,0.5\n");
  EXPECT_EQ(without.str(), "sensor_index,est_x,est_y\n0,0.5,0.5\n");
}

}  // namespace
}  // namespace cpd
