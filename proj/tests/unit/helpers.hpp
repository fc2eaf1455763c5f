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

// Independent reference computations shared by the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "qcompile/env.hpp"
#include "qcompile/linalg.hpp"

namespace qtest {

using qcompile::CMatrix;
using qcompile::Complex;
using qcompile::Unitary;

inline double max_entry_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  }
  return m;
}

inline double max_entry_diff(const Unitary& a, const Unitary& b) {
  return max_entry_diff(a.matrix(), b.matrix());
}

/// sqrt(Re Tr(2I - U^dagger Un - Un^dagger U)), written out with loops.
inline double fnorm_trace_form(const Unitary& un, const Unitary& u) {
  const int d = u.dim();
  Complex tr = 0.0;
  for (int i = 0; i < d; ++i) {
    Complex a = 0.0, b = 0.0;
    for (int k = 0; k < d; ++k) {
      a += std::conj(u(k, i)) * un(k, i);
      b += std::conj(un(k, i)) * u(k, i);
    }
    tr += 2.0 - a - b;
  }
  return std::sqrt(std::max(0.0, tr.real()));
}

/// Frobenius norm of Un^dagger U - I.
inline double fnorm_direct(const Unitary& un, const Unitary& u) {
  const int d = u.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex v = 0.0;
      for (int k = 0; k < d; ++k) v += std::conj(un(k, i)) * u(k, j);
      if (i == j) v -= 1.0;
      s += std::norm(v);
    }
  }
  return std::sqrt(s);
}

/// Monte-Carlo estimate of E_psi |<psi|M|psi>|^2 over Haar-random states,
/// M = Un^dagger U. Returns {mean, standard error}.
inline std::pair<double, double> haar_fidelity_mc(const Unitary& un, const Unitary& u, std::size_t n,
                                                  std::mt19937_64& rng) {
  const int d = u.dim();
  CMatrix m = un.matrix().adjoint() * u.matrix();
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> psi(d);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double norm = 0.0;
    for (auto& c : psi) {
      c = Complex(g(rng), g(rng));
      norm += std::norm(c);
    }
    Complex amp = 0.0;
    for (int i = 0; i < d; ++i) {
      Complex row = 0.0;
      for (int j = 0; j < d; ++j) row += m(i, j) * psi[j];
      amp += std::conj(psi[i]) * row;
    }
    double f = std::norm(amp) / (norm * norm);
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

/// Largest singular value of Un - U by power iteration on A^dagger A.
inline double spectral_power_iteration(const Unitary& un, const Unitary& u, int iters = 2000) {
  CMatrix a = un.matrix() - u.matrix();
  CMatrix ata = a.adjoint() * a;
  const int d = u.dim();
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(1.0 + 0.1 * i, 0.3 - 0.05 * i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = ata * v;
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lambda = std::real(v.dot(w));
    v = w / nw;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

/// Chi-square statistic of observed counts against uniform expectation.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double e = total / static_cast<double>(counts.size());
  double chi = 0.0;
  for (auto c : counts) chi += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  return chi;
}

}  // namespace qtest

#include "qcompile/qnet.hpp"

namespace qtest {

struct GradCheck {
  double worst_rel = 0.0;
  std::size_t checked = 0;
  std::size_t worst_layer = 0;
};

/// Central finite differences of the batch loss for every live parameter.
/// Relative error |g - fd| / max(|g|, |fd|, floor).
inline GradCheck finite_difference_check(qcompile::QNetwork net,
                                         std::span<const qcompile::Transition> batch, double gamma,
                                         double h = 1e-5, double floor = 1e-7) {
  using namespace qcompile;
  GradCheck out;
  LossAndGrad lg = loss_and_grad(net, batch, gamma);
  auto& layers = net.live().layers;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto probe = [&](double& p, double analytic) {
      const double keep = p;
      p = keep + h;
      double up = loss_and_grad(net, batch, gamma).loss;
      p = keep - h;
      double down = loss_and_grad(net, batch, gamma).loss;
      p = keep;
      double fd = (up - down) / (2.0 * h);
      double rel = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), floor});
      if (rel > out.worst_rel) {
        out.worst_rel = rel;
        out.worst_layer = l;
      }
      ++out.checked;
    };
    for (Eigen::Index i = 0; i < layers[l].weight.size(); ++i) {
      probe(layers[l].weight.data()[i], lg.grads.layers[l].weight.data()[i]);
    }
    for (Eigen::Index i = 0; i < layers[l].bias.size(); ++i) {
      probe(layers[l].bias.data()[i], lg.grads.layers[l].bias.data()[i]);
    }
  }
  return out;
}

/// Tiny random net with nonzero biases and a frozen copy that differs from
/// the live one.
inline qcompile::QNetwork random_tiny_net(const qcompile::NetConfig& cfg, std::uint64_t seed) {
  using namespace qcompile;
  QNetwork net(cfg, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g(0.0, 0.3);
  for (auto& layer : net.live().layers) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = g(rng);
  }
  for (auto& layer : net.frozen_mut().layers) {
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] += g(rng);
  }
  return net;
}

/// Mixed batch: trajectory transitions (some terminal) over the set.
inline std::vector<qcompile::Transition> sample_batch(const qcompile::GateSet& gs, std::size_t depth,
                                                      std::size_t n, std::uint64_t seed) {
  using namespace qcompile;
  std::vector<Transition> out;
  std::uint64_t s = seed;
  while (out.size() < n) {
    auto tr = generate_trajectory(gs, depth, 1e-3, s++);
    for (auto& t : tr.steps) {
      if (out.size() < n) out.push_back(t);
    }
  }
  return out;
}

}  // namespace qtest
