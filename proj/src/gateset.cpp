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

#include "qcompile/gateset.hpp"

#include <cmath>
#include <numbers>

#include "qcompile/errors.hpp"

namespace qcompile {

namespace {

bool entrywise_close(const Unitary& a, const Unitary& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < tol;
}

Unitary mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return Unitary::from_matrix(m);
}

}  // namespace

GateSet::GateSet(std::string name, std::vector<Gate> gates)
    : name_(std::move(name)), gates_(std::move(gates)) {
  if (gates_.empty()) throw ContractError("gate set '" + name_ + "' has no gates");
  const int dim = gates_.front().matrix.dim();
  for (const auto& g : gates_) {
    if (g.matrix.dim() != dim) {
      throw ContractError("gate set '" + name_ + "': gate " + g.label + " has mismatched dimension");
    }
  }
  qubits_ = dim == 2 ? 1 : 2;

  inverse_.resize(gates_.size());
  inverse_closed_ = true;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    Unitary adj = dagger(gates_[i].matrix);
    for (std::size_t j = 0; j < gates_.size(); ++j) {
      if (entrywise_close(adj, gates_[j].matrix, kUnitarityTolerance)) {
        inverse_[i] = j;
        break;
      }
    }
    if (!inverse_[i]) inverse_closed_ = false;
  }
}

const Gate& GateSet::gate(std::size_t idx) const {
  if (idx >= gates_.size()) {
    throw ContractError("action index " + std::to_string(idx) + " out of range for gate set '" +
                        name_ + "' of size " + std::to_string(gates_.size()));
  }
  return gates_[idx];
}

std::optional<std::size_t> GateSet::inverse_of(std::size_t idx) const {
  gate(idx);
  return inverse_[idx];
}

std::optional<std::size_t> GateSet::find(std::string_view label) const {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].label == label) return i;
  }
  return std::nullopt;
}

std::uint64_t GateSet::ordering_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
    h = (h ^ 0xffu) * 0x100000001b3ULL;
  };
  mix(name_);
  for (const auto& g : gates_) mix(g.label);
  return h;
}

Unitary GateSet::product(const std::vector<std::size_t>& sequence) const {
  Unitary u = Unitary::identity(dim());
  for (std::size_t a : sequence) u = matmul(matrix(a), u);
  return u;
}

namespace gates {

Unitary hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return mat2(s, s, s, -s);
}

Unitary phase_s() { return mat2(1.0, 0.0, 0.0, Complex(0.0, 1.0)); }

Unitary phase_t() { return mat2(1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)); }

Unitary pauli_x() { return mat2(0.0, 1.0, 1.0, 0.0); }

Unitary hrc_b1() {
  const double s = 1.0 / std::sqrt(5.0);
  return mat2(s, Complex(0.0, 2.0 * s), Complex(0.0, 2.0 * s), s);
}

Unitary hrc_b2() {
  const double s = 1.0 / std::sqrt(5.0);
  return mat2(s, 2.0 * s, -2.0 * s, s);
}

Unitary hrc_b3() {
  const double s = 1.0 / std::sqrt(5.0);
  return mat2(Complex(s, 2.0 * s), 0.0, 0.0, Complex(s, -2.0 * s));
}

Unitary fibonacci_a1() {
  const double pi = std::numbers::pi;
  return mat2(std::polar(1.0, -4.0 * pi / 5.0), 0.0, 0.0, std::polar(1.0, 3.0 * pi / 5.0));
}

Unitary fibonacci_a2() {
  const double pi = std::numbers::pi;
  const double phi = (std::sqrt(5.0) + 1.0) / 2.0;
  Complex off = std::polar(1.0 / std::sqrt(phi), -3.0 * pi / 5.0);
  return mat2(std::polar(1.0 / phi, -pi / 5.0) * -1.0, off, off, -1.0 / phi);
}

CMatrix diffusive_f_printed() {
  CMatrix m(2, 2);
  m << Complex(-0.40194, -0.43507), Complex(-0.36803, -0.71674), Complex(0.36803, -0.71674),
      Complex(-0.40194, 0.43507);
  return m;
}

Unitary diffusive_f() { return Unitary::nearest(diffusive_f_printed()); }

}  // namespace gates

const std::vector<std::string>& gateset_names() {
  static const std::vector<std::string> names = {"clifford_t", "hrc", "fibonacci", "diffusive",
                                                 "two_qubit_hrc"};
  return names;
}

GateSet build_gateset(std::string_view name) {
  using namespace gates;
  if (name == "clifford_t") {
    // S is replaced by H*S; the two non-self-inverse gates get their daggers.
    Unitary hs = matmul(hadamard(), phase_s());
    return GateSet("clifford_t", {{"H", hadamard()},
                                  {"HS", hs},
                                  {"HSdg", dagger(hs)},
                                  {"T", phase_t()},
                                  {"Tdg", dagger(phase_t())}});
  }
  if (name == "hrc") {
    return GateSet("hrc", {{"B1", hrc_b1()},
                           {"B1dg", dagger(hrc_b1())},
                           {"B2", hrc_b2()},
                           {"B2dg", dagger(hrc_b2())},
                           {"B3", hrc_b3()},
                           {"B3dg", dagger(hrc_b3())}});
  }
  if (name == "fibonacci") {
    return GateSet("fibonacci", {{"A1", fibonacci_a1()},
                                 {"A1dg", dagger(fibonacci_a1())},
                                 {"A2", fibonacci_a2()},
                                 {"A2dg", dagger(fibonacci_a2())}});
  }
  if (name == "diffusive") {
    Unitary f = diffusive_f();
    return GateSet("diffusive", {{"A", matmul(hadamard(), f)}, {"B", matmul(phase_t(), f)}});
  }
  if (name == "two_qubit_hrc") {
    const Unitary id = Unitary::identity(2);
    std::vector<Gate> list;
    const std::pair<const char*, Unitary> singles[] = {
        {"B1", hrc_b1()}, {"B2", hrc_b2()}, {"B3", hrc_b3()}};
    for (const auto& [lbl, g] : singles) {
      const std::string base(lbl);
      list.push_back({base + "_0", kron(g, id)});
      list.push_back({base + "dg_0", kron(dagger(g), id)});
      list.push_back({base + "_1", kron(id, g)});
      list.push_back({base + "dg_1", kron(id, dagger(g))});
    }
    CMatrix p0 = CMatrix::Zero(2, 2);
    CMatrix p1 = CMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CMatrix cx01 = CMatrix::Zero(4, 4);
    CMatrix cx10 = CMatrix::Zero(4, 4);
    const CMatrix& x = pauli_x().matrix();
    const CMatrix& i2 = id.matrix();
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) {
            cx01(2 * a + c, 2 * b + d) = p0(a, b) * i2(c, d) + p1(a, b) * x(c, d);
            cx10(2 * a + c, 2 * b + d) = i2(a, b) * p0(c, d) + x(a, b) * p1(c, d);
          }
        }
      }
    }
    list.push_back({"CX01", Unitary::from_matrix(cx01)});
    list.push_back({"CX10", Unitary::from_matrix(cx10)});
    return GateSet("two_qubit_hrc", std::move(list));
  }
  std::string valid;
  for (const auto& n : gateset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown gate set '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace qcompile
