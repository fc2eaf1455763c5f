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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcompile/linalg.hpp"

namespace qcompile {

struct Gate {
  std::string label;
  Unitary matrix;
};

/// Ordered action space. Action indices are stable per named set and are part
/// of the model-file contract.
///
/// Label vocabulary of the named sets, in action order:
///
///   clifford_t     H HS HSdg T Tdg            (HS is the matrix H*S)
///   hrc            B1 B1dg B2 B2dg B3 B3dg
///   fibonacci      A1 A1dg A2 A2dg
///   diffusive      A B                        (A = H*F, B = T*F)
///   two_qubit_hrc  B1_0 B1dg_0 B1_1 B1dg_1 B2_0 B2dg_0 B2_1 B2dg_1
///                  B3_0 B3dg_0 B3_1 B3dg_1 CX01 CX10
///
/// Suffix _0 means the gate acts on wire 0 (the left tensor factor), _1 on
/// wire 1. CX01 is controlled on wire 0 targeting wire 1, CX10 the reverse.
class GateSet {
 public:
  /// Builds a set from explicit gates; inverse metadata is derived by
  /// matching daggers entrywise within 1e-10.
  GateSet(std::string name, std::vector<Gate> gates);

  const std::string& name() const { return name_; }
  int qubits() const { return qubits_; }
  int dim() const { return 1 << qubits_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(std::size_t idx) const;
  const Unitary& matrix(std::size_t idx) const { return gate(idx).matrix; }
  const std::string& label(std::size_t idx) const { return gate(idx).label; }
  bool inverse_closed() const { return inverse_closed_; }

  /// Index of the gate equal to gates[idx]^dagger, or nullopt.
  std::optional<std::size_t> inverse_of(std::size_t idx) const;

  /// Index for a label, or nullopt.
  std::optional<std::size_t> find(std::string_view label) const;

  /// FNV-1a over the name and the ordered label list.
  std::uint64_t ordering_hash() const;

  /// Matrix product of a sequence in application order (first element acts
  /// first, i.e. is rightmost in the product).
  Unitary product(const std::vector<std::size_t>& sequence) const;

 private:
  std::string name_;
  int qubits_ = 1;
  std::vector<Gate> gates_;
  std::vector<std::optional<std::size_t>> inverse_;
  bool inverse_closed_ = false;
};

/// Builds one of: clifford_t, hrc, fibonacci, diffusive, two_qubit_hrc.
/// Unknown names throw ConfigError listing the valid ones.
GateSet build_gateset(std::string_view name);

const std::vector<std::string>& gateset_names();

/// Named single-qubit constants used to assemble the sets.
namespace gates {
Unitary hadamard();
Unitary phase_s();
Unitary phase_t();
Unitary pauli_x();
Unitary hrc_b1();
Unitary hrc_b2();
Unitary hrc_b3();
Unitary fibonacci_a1();
Unitary fibonacci_a2();
/// The printed diffusive matrix re-unitarised by polar decomposition.
Unitary diffusive_f();
/// The printed entries of the diffusive matrix (unitary only to ~1e-5).
CMatrix diffusive_f_printed();
}  // namespace gates

}  // namespace qcompile
