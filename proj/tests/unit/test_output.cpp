#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "extphase/errors.hpp"
#include "extphase/output.hpp"

namespace extphase {
namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("extphase_output_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TrajectoryRecord sample_record(bool with_state) {
  ExperimentSpec s = preset("testcase");
  s.method = MethodKind::semiexplicit;
  s.t_end = 0.5;
  s.record_state = with_state;
  return run_experiment(s);
}

TEST(FormatDouble, RoundTrips) {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Csv, HeaderAndRows) {
  const TrajectoryRecord rec = sample_record(false);
  std::ostringstream out;
  write_csv(rec, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "step,t,defect_norm,energy_rel_err,testcase_L_rel_err,testcase_Q_rel_err,itr,vf_evals");
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    ++lines;
  }
  EXPECT_EQ(lines, 5);
}

TEST(Csv, StateColumns) {
  const TrajectoryRecord rec = sample_record(true);
  std::ostringstream out;
  write_csv(rec, out);
  const std::string text = out.str();
  EXPECT_NE(text.find(",vf_evals,q1,q2,p1,p2\n"), std::string::npos);
}

TEST(Csv, RoundTripThroughFile) {
  const TrajectoryRecord rec = sample_record(true);
  const auto path = temp_path("roundtrip.csv");
  emit_csv(rec, path);
  const TrajectoryRecord back = read_csv(path);
  EXPECT_EQ(back.steps, rec.steps);
  EXPECT_EQ(back.times, rec.times);
  EXPECT_EQ(back.defect, rec.defect);
  EXPECT_EQ(back.energy_rel_err, rec.energy_rel_err);
  EXPECT_EQ(back.invariant_names, rec.invariant_names);
  EXPECT_EQ(back.invariant_drift, rec.invariant_drift);
  EXPECT_EQ(back.itr, rec.itr);
  EXPECT_EQ(back.vf_evals, rec.vf_evals);
  ASSERT_EQ(back.states.size(), rec.states.size());
  for (std::size_t i = 0; i < rec.states.size(); ++i) {
    EXPECT_EQ(back.states[i], rec.states[i]);
  }
  std::filesystem::remove(path);
}

TEST(Csv, CreatesMissingParentDirectories) {
  const TrajectoryRecord rec = sample_record(false);
  const auto dir = temp_path("nested_dir");
  std::filesystem::remove_all(dir);
  emit_csv(rec, dir / "a" / "out.csv");
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "out.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Csv, IoFailuresThrowIoError) {
  const TrajectoryRecord rec = sample_record(false);
  const auto blocker = temp_path("blocker_file");
  {
    std::ofstream out(blocker);
    out << "not a directory\n";
  }
  // The parent "directory" is a regular file.
  EXPECT_THROW(emit_csv(rec, blocker / "out.csv"), IoError);
  EXPECT_THROW((void)read_csv(temp_path("missing.csv")), IoError);
  EXPECT_THROW((void)read_csv(blocker), IoError);
  std::filesystem::remove(blocker);
}

TEST(Svg, WritesWellFormedDocument) {
  const TrajectoryRecord rec = sample_record(false);
  const auto path = temp_path("plot.svg");
  emit_svg(rec, path);
  const std::string text = slurp(path);
  EXPECT_EQ(text.rfind("<svg", 0), 0u);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
  EXPECT_NE(text.find("testcase_Q"), std::string::npos);
  std::filesystem::remove(path);

  const auto cmp = temp_path("cmp.svg");
  emit_comparison_svg({rec, rec}, cmp, "comparison");
  EXPECT_NE(slurp(cmp).find("comparison"), std::string::npos);
  std::filesystem::remove(cmp);
}

TEST(BenchmarkCsv, Columns) {
  BenchmarkRow row;
  row.label = "gl4";
  row.method = MethodKind::gl4;
  row.order = 4;
  row.dt = 0.001;
  row.t_end = 1.0;
  row.tol = 1e-10;
  row.time_s = 0.5;
  row.itr_avg = 4.0;
  row.vf_avg = 8.0;
  row.converged_steps = 1000;
  row.total_steps = 1000;
  std::ostringstream out;
  write_benchmark_csv({row}, out);
  EXPECT_EQ(out.str(),
            "method,order,dt,t_end,tol,time_s,itr_avg,vf_avg,converged_steps,total_steps\n"
            "gl4,4,0.001,1,1e-10,0.5,4,8,1000,1000\n");
}

}  // namespace
}  // namespace extphase
