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

#include "qcompile/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qcompile/errors.hpp"

namespace qcompile {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 4) {
    throw ContractError("unitary dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void check_same_dim(const Unitary& a, const Unitary& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw ContractError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                        " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Unitary Unitary::identity(int dim) {
  check_dim(dim);
  return Unitary(CMatrix::Identity(dim, dim));
}

Unitary Unitary::from_matrix(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("unitary must be square");
  check_dim(static_cast<int>(m.rows()));
  double err = unitarity_error(m);
  if (!(err < kUnitarityTolerance)) {
    std::ostringstream os;
    os << "matrix is not unitary: ||U^dagger U - I||_F = " << err;
    throw ContractError(os.str());
  }
  return Unitary(m);
}

Unitary Unitary::from_entries(int dim, std::span<const Complex> entries) {
  check_dim(dim);
  if (entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw ContractError("expected " + std::to_string(dim * dim) + " entries, got " +
                        std::to_string(entries.size()));
  }
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = entries[r * dim + c];
  }
  return from_matrix(m);
}

Unitary Unitary::nearest(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("unitary must be square");
  check_dim(static_cast<int>(m.rows()));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(m),
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
  return from_matrix(polar);
}

bool Unitary::operator==(const Unitary& other) const {
  return dim() == other.dim() && m_ == other.m_;
}

Unitary matmul(const Unitary& a, const Unitary& b) {
  check_same_dim(a, b, "matmul");
  return Unitary(a.m_ * b.m_);
}

Unitary dagger(const Unitary& u) { return Unitary(u.m_.adjoint()); }

Unitary matmul_dagger(const Unitary& a, const Unitary& b) {
  check_same_dim(a, b, "matmul_dagger");
  return Unitary(a.m_ * b.m_.adjoint());
}

Unitary scaled_phase(const Unitary& u, double phi) { return Unitary(u.m_ * std::polar(1.0, phi)); }

Unitary kron(const Unitary& a, const Unitary& b) {
  if (a.dim() != 2 || b.dim() != 2) throw ContractError("kron: only 2x2 factors are supported");
  CMatrix m(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a.m_(i, j) * b.m_(k, l);
      }
    }
  }
  return Unitary(m);
}

double unitarity_error(const CMatrix& m) {
  CMatrix g = m.adjoint() * m;
  g -= CMatrix::Identity(m.rows(), m.cols());
  return g.norm();
}

double fnorm_dist(const Unitary& un, const Unitary& u, PhaseMode mode) {
  check_same_dim(un, u, "fnorm_dist");
  if (mode == PhaseMode::kQuotient) {
    // The minimising phase aligns Tr(Un^dagger U) with the positive real axis.
    Complex tr = (un.matrix().adjoint() * u.matrix()).trace();
    double phi = std::abs(tr) > 0.0 ? std::arg(tr) : 0.0;
    return (un.matrix() * std::polar(1.0, phi) - u.matrix()).norm();
  }
  return (un.matrix() - u.matrix()).norm();
}

double fnorm_to_identity(const Unitary& s) {
  const auto& m = s.matrix();
  double acc = 0.0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      Complex d = r == c ? m(r, c) - 1.0 : m(r, c);
      acc += std::norm(d);
    }
  }
  return std::sqrt(acc);
}

double avg_fidelity(const Unitary& un, const Unitary& u) {
  check_same_dim(un, u, "avg_fidelity");
  const double d = un.dim();
  Complex tr = (un.matrix().adjoint() * u.matrix()).trace();
  double f = (d + std::norm(tr)) / (d * (d + 1.0));
  return std::min(1.0, std::max(0.0, f));
}

double spectral_dist(const Unitary& un, const Unitary& u) {
  check_same_dim(un, u, "spectral_dist");
  Eigen::MatrixXcd diff = un.matrix() - u.matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return svd.singularValues()(0);
}

std::vector<double> encode_state(const Unitary& u) {
  std::vector<double> out(2 * u.dim() * u.dim());
  encode_state_into(u, out);
  return out;
}

void encode_state_into(const Unitary& u, std::span<double> out) {
  const int n = u.dim();
  if (out.size() != static_cast<std::size_t>(2 * n * n)) {
    throw ContractError("encode_state_into: output length mismatch");
  }
  const auto& m = u.matrix();
  std::size_t k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out[k++] = m(r, c).real();
      out[k++] = m(r, c).imag();
    }
  }
}

Unitary haar_random(int dim, std::mt19937_64& rng) {
  check_dim(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd z(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      // Explicit sequencing keeps the draw order independent of evaluation order.
      double re = normal(rng);
      double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    Complex d = rmat(c, c);
    Complex ph = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
    q.col(c) *= ph;
  }
  return Unitary::from_matrix(CMatrix(q));
}

Unitary xz_rotation(double alpha) {
  // (X (x) Z)^2 = I, so exp(-i a/2 XZ) = cos(a/2) I - i sin(a/2) XZ.
  CMatrix xz = CMatrix::Zero(4, 4);
  xz(0, 2) = 1.0;
  xz(1, 3) = -1.0;
  xz(2, 0) = 1.0;
  xz(3, 1) = -1.0;
  CMatrix m = std::cos(alpha / 2.0) * CMatrix::Identity(4, 4) -
              Complex(0.0, std::sin(alpha / 2.0)) * xz;
  return Unitary::from_matrix(m);
}

StateKey::StateKey(const Unitary& u) {
  const auto& m = u.matrix();
  const int n = u.dim();
  std::size_t k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      q_[k++] = std::llround(m(r, c).real() / kGrid);
      q_[k++] = std::llround(m(r, c).imag() / kGrid);
    }
  }
  len_ = static_cast<std::uint8_t>(k);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t x = static_cast<std::uint64_t>(q_[i]);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h = (h ^ x) * 0x100000001b3ULL;
  }
  hash_ = static_cast<std::size_t>(h);
}

bool StateKey::operator==(const StateKey& other) const {
  if (len_ != other.len_ || hash_ != other.hash_) return false;
  for (std::size_t i = 0; i < len_; ++i) {
    if (q_[i] != other.q_[i]) return false;
  }
  return true;
}

Complex parse_complex(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  double first = std::strtod(begin, &end);
  if (end == begin) throw FormatError("cannot parse complex number '" + token + "'");
  if (*end == '\0') return {first, 0.0};
  if ((*end == 'j' || *end == 'i') && end[1] == '\0') return {0.0, first};
  const char* second_begin = end;
  if (*second_begin != '+' && *second_begin != '-') {
    throw FormatError("cannot parse complex number '" + token + "'");
  }
  double second = std::strtod(second_begin, &end);
  if (end == second_begin || (*end != 'j' && *end != 'i') || end[1] != '\0') {
    throw FormatError("cannot parse complex number '" + token + "'");
  }
  return {first, second};
}

Unitary parse_unitary(std::istream& in) {
  int dim = 0;
  if (!(in >> dim)) throw FormatError("unitary text: missing dimension line");
  if (dim != 2 && dim != 4) {
    throw FormatError("unitary text: dimension must be 2 or 4, got " + std::to_string(dim));
  }
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      std::string tok;
      if (!(in >> tok)) {
        throw FormatError("unitary text: expected " + std::to_string(dim * dim) +
                          " entries, got " + std::to_string(r * dim + c));
      }
      m(r, c) = parse_complex(tok);
    }
  }
  return Unitary::from_matrix(m);
}

Unitary parse_unitary_string(const std::string& text) {
  std::istringstream is(text);
  return parse_unitary(is);
}

void write_unitary(std::ostream& out, const Unitary& u) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << u.dim() << '\n';
  for (int r = 0; r < u.dim(); ++r) {
    for (int c = 0; c < u.dim(); ++c) {
      Complex z = u(r, c);
      if (c) os << ' ';
      os << z.real() << (std::signbit(z.imag()) ? '-' : '+') << std::abs(z.imag()) << 'j';
    }
    os << '\n';
  }
  out << os.str();
}

std::string format_unitary(const Unitary& u) {
  std::ostringstream os;
  write_unitary(os, u);
  return os.str();
}

}  // namespace qcompile
