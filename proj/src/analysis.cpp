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

#include "qcompile/analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qcompile/errors.hpp"
#include "qcompile/parallel.hpp"
#include "qcompile/search.hpp"

namespace qcompile {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s, std::size_t line, const char* field) {
  if (s == "nan") return kNaN;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("line " + std::to_string(line) + ": field " + field + ": not a number: '" + s + "'");
}

}  // namespace

std::vector<EvalRow> batch_evaluate(const ActionValueFunction& q, const GateSet& gs,
                                    const std::vector<Unitary>& targets,
                                    const std::vector<double>& eps_list, std::size_t node_budget) {
  if (targets.empty()) throw ContractError("batch_evaluate: no targets");
  if (eps_list.empty()) throw ContractError("batch_evaluate: no tolerances");
  std::vector<EvalRow> rows;
  for (double eps : eps_list) {
    std::vector<SearchResult> results(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) {
      results[i] = aq_search(targets[i], gs, q, eps, node_budget);
    });
    EvalRow row;
    row.eps = eps;
    row.n = targets.size();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const SearchResult& r = results[i];
      row.mean_m2_all += r.fidelity;
      if (!r.success()) continue;
      ++row.successes;
      row.mean_length += static_cast<double>(r.actions.size());
      row.mean_m1 += r.distance;
      row.mean_m2 += r.fidelity;
      row.mean_m3 += spectral_dist(r.compiled, targets[i]);
    }
    row.mean_m2_all /= static_cast<double>(row.n);
    row.success_fraction = static_cast<double>(row.successes) / static_cast<double>(row.n);
    if (row.successes == 0) {
      row.mean_length = row.mean_m1 = row.mean_m2 = row.mean_m3 = kNaN;
    } else {
      const double k = static_cast<double>(row.successes);
      row.mean_length /= k;
      row.mean_m1 /= k;
      row.mean_m2 /= k;
      row.mean_m3 /= k;
    }
    rows.push_back(row);
  }
  return rows;
}

ScalingFit fit_scaling(const std::vector<ScalingPoint>& points) {
  if (points.size() < 3) {
    throw ContractError("fit_scaling: need at least 3 points, got " + std::to_string(points.size()));
  }
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
      throw ContractError("fit_scaling: epsilon " + fmt(p.epsilon) + " outside (0, 1)");
    }
    if (!(p.mean_length > 0.0)) {
      throw ContractError("fit_scaling: mean_length " + fmt(p.mean_length) + " must be > 0");
    }
    x.push_back(std::log(std::log(1.0 / p.epsilon)));
    y.push_back(std::log(p.mean_length));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ContractError("fit_scaling: all epsilons are equal");
  ScalingFit fit;
  fit.c = sxy / sxx;
  const double intercept = my - fit.c * mx;
  fit.a = std::exp(intercept);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (intercept + fit.c * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.points = points;
  return fit;
}

FitAxis parse_fit_axis(const std::string& s) {
  if (s == "tolerance") return FitAxis::kTolerance;
  if (s == "fidelity") return FitAxis::kFidelity;
  if (s == "fnorm") return FitAxis::kFnorm;
  if (s == "spectral") return FitAxis::kSpectral;
  throw ConfigError("unknown fit axis '" + s + "' (valid: tolerance, fidelity, fnorm, spectral)");
}

std::string fit_axis_name(FitAxis axis) {
  switch (axis) {
    case FitAxis::kTolerance: return "tolerance";
    case FitAxis::kFidelity: return "fidelity";
    case FitAxis::kFnorm: return "fnorm";
    case FitAxis::kSpectral: return "spectral";
  }
  return "tolerance";
}

std::vector<ScalingPoint> points_from_runs(const std::vector<EvalRow>& rows, FitAxis axis) {
  std::vector<ScalingPoint> pts;
  for (const auto& r : rows) {
    if (r.successes == 0 || !(r.mean_length > 0.0)) continue;
    double e = r.eps;
    if (axis == FitAxis::kFidelity) e = 1.0 - r.mean_m2;
    if (axis == FitAxis::kFnorm) e = r.mean_m1;
    if (axis == FitAxis::kSpectral) e = r.mean_m3;
    pts.push_back({e, r.mean_length});
  }
  return pts;
}

void write_runs_csv(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << "eps,n,successes,success_fraction,mean_length,mean_m1,mean_m2,mean_m3,mean_m2_all\n";
  for (const auto& r : rows) {
    out << fmt(r.eps) << ',' << r.n << ',' << r.successes << ',' << fmt(r.success_fraction) << ','
        << fmt(r.mean_length) << ',' << fmt(r.mean_m1) << ',' << fmt(r.mean_m2) << ','
        << fmt(r.mean_m3) << ',' << fmt(r.mean_m2_all) << '\n';
  }
}

std::vector<EvalRow> read_runs_csv(std::istream& in) {
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    auto c = split_csv(line);
    if (c.size() != 9) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 9 columns, got " +
                        std::to_string(c.size()));
    }
    EvalRow r;
    r.eps = to_double(c[0], lineno, "eps");
    r.n = static_cast<std::size_t>(to_double(c[1], lineno, "n"));
    r.successes = static_cast<std::size_t>(to_double(c[2], lineno, "successes"));
    r.success_fraction = to_double(c[3], lineno, "success_fraction");
    r.mean_length = to_double(c[4], lineno, "mean_length");
    r.mean_m1 = to_double(c[5], lineno, "mean_m1");
    r.mean_m2 = to_double(c[6], lineno, "mean_m2");
    r.mean_m3 = to_double(c[7], lineno, "mean_m3");
    r.mean_m2_all = to_double(c[8], lineno, "mean_m2_all");
    rows.push_back(r);
  }
  return rows;
}

void write_fits_csv(std::ostream& out, const std::vector<NamedFit>& fits) {
  out << "axis,a,c,r_squared,points\n";
  for (const auto& f : fits) {
    out << fit_axis_name(f.axis) << ',' << fmt(f.fit.a) << ',' << fmt(f.fit.c) << ','
        << fmt(f.fit.r_squared) << ',' << f.fit.points.size() << '\n';
  }
}

void write_plot_data(std::ostream& out, const std::vector<NamedFit>& fits) {
  for (const auto& f : fits) {
    out << "# series " << fit_axis_name(f.axis) << '\n';
    for (const auto& p : f.fit.points) {
      out << fmt(std::log(std::log(1.0 / p.epsilon))) << ' ' << fmt(std::log(p.mean_length)) << '\n';
    }
    out << '\n';
  }
}

std::vector<ScalingPoint> read_points_csv(std::istream& in) {
  std::vector<ScalingPoint> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto c = split_csv(line);
    if (c.size() < 2) {
      throw FormatError("line " + std::to_string(lineno) + ": expected epsilon,mean_length");
    }
    if (c[0] == "epsilon" || c[0] == "eps") continue;
    pts.push_back({to_double(c[0], lineno, "epsilon"), to_double(c[1], lineno, "mean_length")});
  }
  return pts;
}

void emit_report(const std::vector<EvalRow>& runs, const std::vector<NamedFit>& fits,
                 const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto open = [&](const std::string& name) {
    std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
  };
  {
    auto f = open("runs.csv");
    write_runs_csv(f, runs);
  }
  {
    auto f = open("fits.csv");
    write_fits_csv(f, fits);
  }
  {
    auto f = open("plot.dat");
    write_plot_data(f, fits);
  }
}

}  // namespace qcompile
