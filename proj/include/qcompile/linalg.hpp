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

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qcompile {

using Complex = std::complex<double>;

/// Small dense complex matrix, row-major, at most 4x4 (stack storage).
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 4, 4>;

inline constexpr double kUnitarityTolerance = 1e-10;

/// Square unitary matrix of dimension 2 (one qubit) or 4 (two qubits).
///
/// Every Unitary satisfies ||U^dagger U - I||_F < 1e-10. Public construction
/// validates the invariant; products and adjoints of valid unitaries are
/// produced without re-checking.
class Unitary {
 public:
  /// Identity of dimension 2.
  Unitary() : Unitary(identity(2)) {}

  static Unitary identity(int dim);

  /// Validates dimension and unitarity; throws ContractError otherwise.
  static Unitary from_matrix(const CMatrix& m);

  /// Row-major entries, dim*dim of them.
  static Unitary from_entries(int dim, std::span<const Complex> entries);

  /// Nearest unitary in Frobenius norm (polar factor W V^dagger of the SVD).
  /// Used for matrices that are unitary only up to printed precision.
  static Unitary nearest(const CMatrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Exact entrywise equality.
  bool operator==(const Unitary& other) const;

 private:
  explicit Unitary(CMatrix m) : m_(std::move(m)) {}

  CMatrix m_;

  friend Unitary matmul(const Unitary& a, const Unitary& b);
  friend Unitary dagger(const Unitary& u);
  friend Unitary matmul_dagger(const Unitary& a, const Unitary& b);
  friend Unitary scaled_phase(const Unitary& u, double phi);
  friend Unitary kron(const Unitary& a, const Unitary& b);
};

/// a * b. Throws ContractError on dimension mismatch.
Unitary matmul(const Unitary& a, const Unitary& b);

/// Conjugate transpose.
Unitary dagger(const Unitary& u);

/// a * b^dagger, without forming the adjoint.
Unitary matmul_dagger(const Unitary& a, const Unitary& b);

/// e^{i phi} u.
Unitary scaled_phase(const Unitary& u, double phi);

/// Tensor product a (x) b; the left factor acts on the first (most significant)
/// wire.
Unitary kron(const Unitary& a, const Unitary& b);

/// ||U^dagger U - I||_F for an arbitrary square matrix.
double unitarity_error(const CMatrix& m);

enum class PhaseMode {
  kSensitive,  ///< distances as defined, global phase matters
  kQuotient,   ///< minimised over a global phase of the first argument
};

/// F-norm distance sqrt(Tr(2I - U^dagger Un - Un^dagger U)).
///
/// For unitary arguments the trace equals sum |Un_ij - U_ij|^2 exactly, and it is
/// evaluated in that form so that values near zero stay accurate. With
/// PhaseMode::kQuotient returns min_phi ||e^{i phi} Un - U||_F.
double fnorm_dist(const Unitary& un, const Unitary& u, PhaseMode mode = PhaseMode::kSensitive);

/// fnorm_dist(s, I), without building the identity.
double fnorm_to_identity(const Unitary& s);

/// Haar-averaged state fidelity (D + |Tr(Un^dagger U)|^2) / (D (D + 1)).
double avg_fidelity(const Unitary& un, const Unitary& u);

/// Largest singular value of Un - U.
double spectral_dist(const Unitary& un, const Unitary& u);

/// Real vector of length 2*dim^2: for each entry in row-major order, real part
/// then imaginary part. This is also the canonical serialization order.
std::vector<double> encode_state(const Unitary& u);

/// Writes encode_state(u) into out; out.size() must be 2*dim^2.
void encode_state_into(const Unitary& u, std::span<double> out);

/// Haar-random unitary via QR of a complex Ginibre matrix with the phases of
/// R's diagonal folded back into Q.
Unitary haar_random(int dim, std::mt19937_64& rng);

/// exp(-i alpha/2 X (x) Z).
Unitary xz_rotation(double alpha);

/// Hash key for a unitary: every real component rounded to a 1e-9 grid. Exact
/// products of the same gates map to the same key.
class StateKey {
 public:
  static constexpr double kGrid = 1e-9;

  explicit StateKey(const Unitary& u);

  bool operator==(const StateKey& other) const;
  std::size_t hash() const { return hash_; }

 private:
  std::array<std::int64_t, 32> q_{};
  std::uint8_t len_ = 0;
  std::size_t hash_ = 0;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const { return k.hash(); }
};

/// Text format: first line `dim`, then dim lines of dim entries `re+imj`.
Unitary parse_unitary(std::istream& in);
Unitary parse_unitary_string(const std::string& text);
void write_unitary(std::ostream& out, const Unitary& u);
std::string format_unitary(const Unitary& u);

/// Parses one `re+imj` token (also accepts `re`, `imj`, `re-imj`).
Complex parse_complex(const std::string& token);

}  // namespace qcompile
