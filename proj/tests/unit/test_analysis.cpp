// Copyright 2026 The qcompile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qcompile/analysis.hpp"
#include "qcompile/errors.hpp"
#include "qcompile/oracle.hpp"

using namespace qcompile;

namespace {

std::vector<ScalingPoint> law(double a, double c, std::size_t n, double noise = 0.0,
                              std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ScalingPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double eps = std::pow(10.0, -1.0 - 9.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    double l = a * std::pow(std::log(1.0 / eps), c) * (1.0 + noise * g(rng));
    pts.push_back({eps, l});
  }
  return pts;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("noiseless fits recover the law") {
  for (auto [a, c] : {std::pair{2.0, 1.5}, std::pair{0.89, 1.077}, std::pair{5.0, 4.0}}) {
    ScalingFit f = fit_scaling(law(a, c, 8));
    CHECK(std::abs(f.a - a) < 1e-9);
    CHECK(std::abs(f.c - c) < 1e-9);
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.points.size() == 8);
  }
}

TEST_CASE("fit agrees with a QR least-squares reference") {
  std::vector<ScalingPoint> pts{{0.3, 4.0}, {0.1, 9.0}, {0.05, 7.5}, {1e-3, 30.0}, {1e-5, 41.0}};
  Eigen::MatrixXd A(5, 2);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(std::log(1.0 / pts[i].epsilon));
    y(i) = std::log(pts[i].mean_length);
  }
  Eigen::VectorXd beta = A.colPivHouseholderQr().solve(y);
  ScalingFit f = fit_scaling(pts);
  CHECK(f.c == doctest::Approx(beta(1)).epsilon(1e-12));
  CHECK(f.a == doctest::Approx(std::exp(beta(0))).epsilon(1e-12));
  Eigen::VectorXd r = y - A * beta;
  double ybar = y.mean();
  double r2 = 1.0 - r.squaredNorm() / (y.array() - ybar).square().sum();
  CHECK(f.r_squared == doctest::Approx(r2).epsilon(1e-12));
  CHECK(f.r_squared < 1.0);
}

TEST_CASE("noisy fits stay near the exponent") {
  std::size_t within = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    ScalingFit f = fit_scaling(law(2.0, 1.5, 20, 0.01, 1000 + t));
    within += std::abs(f.c - 1.5) <= 0.05;
  }
  CHECK(within >= 95);
}

TEST_CASE("fit input validation") {
  std::vector<ScalingPoint> two{{0.1, 3.0}, {0.01, 5.0}};
  CHECK_THROWS_AS(fit_scaling(two), ContractError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 3.0}, {0.1, 4.0}, {0.1, 5.0}}), ContractError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 3.0}, {1.5, 4.0}, {0.01, 5.0}}), ContractError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 3.0}, {0.0, 4.0}, {0.01, 5.0}}), ContractError);
  CHECK_THROWS_AS(fit_scaling({{0.1, 3.0}, {0.05, 0.0}, {0.01, 5.0}}), ContractError);
}

TEST_CASE("runs CSV round trip") {
  std::vector<EvalRow> rows(2);
  rows[0] = {1e-3, 10, 9, 0.9, 4.333333333333333, 3e-4, 0.99999, 2e-4, 0.95};
  rows[1].eps = 0.5;
  rows[1].n = 3;
  rows[1].mean_length = std::numeric_limits<double>::quiet_NaN();
  rows[1].mean_m1 = rows[1].mean_m2 = rows[1].mean_m3 = rows[1].mean_length;
  std::stringstream ss;
  write_runs_csv(ss, rows);
  CHECK(ss.str().find("nan") != std::string::npos);
  auto back = read_runs_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].mean_length == rows[0].mean_length);
  CHECK(back[0].mean_m2 == rows[0].mean_m2);
  CHECK(back[0].successes == 9);
  CHECK(std::isnan(back[1].mean_m1));
  std::stringstream bad("eps,n\n1,2,3\n");
  CHECK_THROWS_AS(read_runs_csv(bad), FormatError);
  std::stringstream word("h\nx,1,1,1,1,1,1,1,1\n");
  try {
    read_runs_csv(word);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("eps") != std::string::npos);
  }
}

TEST_CASE("fit points from runs") {
  EvalRow a{1e-2, 10, 10, 1.0, 5.0, 4e-3, 0.9999, 3e-3, 0.9999};
  EvalRow none{1e-4, 10, 0, 0.0, NAN, NAN, NAN, NAN, 0.5};
  std::vector<EvalRow> rows{a, none};
  auto tol = points_from_runs(rows, FitAxis::kTolerance);
  REQUIRE(tol.size() == 1);
  CHECK(tol[0].epsilon == 1e-2);
  CHECK(points_from_runs(rows, FitAxis::kFidelity)[0].epsilon == doctest::Approx(1e-4));
  CHECK(points_from_runs(rows, FitAxis::kFnorm)[0].epsilon == 4e-3);
  CHECK(points_from_runs(rows, FitAxis::kSpectral)[0].epsilon == 3e-3);
  for (auto ax : {FitAxis::kTolerance, FitAxis::kFidelity, FitAxis::kFnorm, FitAxis::kSpectral}) {
    CHECK(parse_fit_axis(fit_axis_name(ax)) == ax);
  }
  CHECK_THROWS_AS(parse_fit_axis("entropy"), ConfigError);
}

TEST_CASE("points CSV") {
  std::stringstream in("# measured\nepsilon,mean_length\n0.1,3\n0.01,6.5\n");
  auto pts = read_points_csv(in);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].mean_length == 6.5);
  std::stringstream bad("0.1\n");
  CHECK_THROWS_AS(read_points_csv(bad), FormatError);
}

TEST_CASE("batch evaluation with the exact table") {
  GateSet ct = build_gateset("clifford_t");
  auto graph = std::make_shared<const StateGraph>(enumerate_states(ct, 4, 1e-3));
  TabularQ q = tabular_q_adapter(graph);
  auto targets = sample_targets(ct, TargetMode::kProduct, 4, 25, 5);
  double want_len = 0.0;
  for (const auto& t : targets) want_len += static_cast<double>(bfs_shortest(t, ct, 1e-3, 4)->length);
  want_len /= 25.0;
  auto rows = batch_evaluate(q, ct, targets, {1e-3, 1e-2}, 1000);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].successes == 25);
  CHECK(rows[0].success_fraction == 1.0);
  CHECK(rows[0].mean_length == doctest::Approx(want_len));
  CHECK(rows[0].mean_m1 < 1e-3);
  CHECK(rows[0].mean_m2 == doctest::Approx(1.0));
  CHECK(rows[0].mean_m2_all == doctest::Approx(rows[0].mean_m2));
  CHECK(rows[1].eps == 1e-2);

  std::mt19937_64 rng(2);
  std::vector<Unitary> haar{haar_random(2, rng), haar_random(2, rng), haar_random(2, rng)};
  auto fail = batch_evaluate(q, ct, haar, {1e-6}, 20);
  CHECK(fail[0].successes == 0);
  CHECK(std::isnan(fail[0].mean_length));
  CHECK(fail[0].mean_m2_all > 0.0);
  CHECK_THROWS_AS(batch_evaluate(q, ct, {}, {1e-3}, 10), ContractError);
}

TEST_CASE("report files") {
  auto dir = std::filesystem::temp_directory_path() / "qcompile_report_test";
  std::filesystem::remove_all(dir);
  std::vector<EvalRow> rows{{1e-2, 4, 4, 1.0, 3.0, 1e-3, 0.999, 1e-3, 0.999}};
  std::vector<NamedFit> fits{{FitAxis::kTolerance, fit_scaling(law(2.0, 1.5, 4))}};
  emit_report(rows, fits, dir.string());
  for (const char* f : {"runs.csv", "fits.csv", "plot.dat"}) CHECK(std::filesystem::exists(dir / f));
  std::ifstream plot(dir / "plot.dat");
  std::string first, second;
  std::getline(plot, first);
  std::getline(plot, second);
  CHECK(first == "# series tolerance");
  std::istringstream xy(second);
  double x = 0, y = 0;
  xy >> x >> y;
  CHECK(x == doctest::Approx(std::log(std::log(10.0))));
  CHECK(y == doctest::Approx(std::log(2.0 * std::pow(std::log(10.0), 1.5))));
  std::ifstream fc(dir / "fits.csv");
  std::string header, line;
  std::getline(fc, header);
  std::getline(fc, line);
  CHECK(header == "axis,a,c,r_squared,points");
  CHECK(line.rfind("tolerance,", 0) == 0);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
