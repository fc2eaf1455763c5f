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

// Batch compile-and-measure runs and the length scaling law
// L = a * log^c(1/eps).
//
// Report files written by emit_report(dir):
//
//   runs.csv   eps,n,successes,success_fraction,mean_length,mean_m1,mean_m2,mean_m3,mean_m2_all
//   fits.csv   axis,a,c,r_squared,points
//   plot.dat   blocks of "# series <axis>" followed by "x y" lines with
//              x = log(log(1/eps)) and y = log(mean_length)
//
// Means other than mean_m2_all are over successful searches only; a row with
// no successes has nan means.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcompile/gateset.hpp"
#include "qcompile/linalg.hpp"
#include "qcompile/value_function.hpp"

namespace qcompile {

struct EvalRow {
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t successes = 0;
  double success_fraction = 0.0;
  double mean_length = 0.0;
  double mean_m1 = 0.0;
  double mean_m2 = 0.0;
  double mean_m3 = 0.0;
  /// Fidelity averaged over every target, failures included.
  double mean_m2_all = 0.0;
};

/// Runs aq_search on every target for each tolerance (targets in parallel).
std::vector<EvalRow> batch_evaluate(const ActionValueFunction& q, const GateSet& gs,
                                    const std::vector<Unitary>& targets,
                                    const std::vector<double>& eps_list, std::size_t node_budget);

struct ScalingPoint {
  double epsilon = 0.0;
  double mean_length = 0.0;
};

struct ScalingFit {
  double a = 0.0;
  double c = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points;
};

/// OLS of log(L) on log(log(1/eps)). Needs >= 3 points with eps in (0, 1)
/// and L > 0.
ScalingFit fit_scaling(const std::vector<ScalingPoint>& points);

/// Which quantity plays the role of eps when turning runs into fit points.
enum class FitAxis {
  kTolerance,  ///< the search tolerance itself
  kFidelity,   ///< 1 - mean M2
  kFnorm,      ///< mean M1
  kSpectral,   ///< mean M3
};

FitAxis parse_fit_axis(const std::string& s);
std::string fit_axis_name(FitAxis axis);

/// Rows without successes or with a non-positive mean length are skipped.
std::vector<ScalingPoint> points_from_runs(const std::vector<EvalRow>& rows, FitAxis axis);

struct NamedFit {
  FitAxis axis = FitAxis::kTolerance;
  ScalingFit fit;
};

void write_runs_csv(std::ostream& out, const std::vector<EvalRow>& rows);
std::vector<EvalRow> read_runs_csv(std::istream& in);
void write_fits_csv(std::ostream& out, const std::vector<NamedFit>& fits);
void write_plot_data(std::ostream& out, const std::vector<NamedFit>& fits);

/// Two-column "epsilon,mean_length" input for fitting; '#' lines and the
/// header are skipped.
std::vector<ScalingPoint> read_points_csv(std::istream& in);

/// Writes runs.csv, fits.csv and plot.dat into dir (created if missing).
void emit_report(const std::vector<EvalRow>& runs, const std::vector<NamedFit>& fits,
                 const std::string& dir);

}  // namespace qcompile
