// SPDX-License-Identifier: Apache-2.0
//
// qwalk: coined quantum walk Bell-test toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qwalk {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CoinVector = Eigen::Vector2cd;
using Matrix2c = Eigen::Matrix2cd;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

// Pauli matrices in the computational coin basis {|0>, |1>}.
inline Matrix2c pauli_x() { return (Matrix2c() << 0, 1, 1, 0).finished(); }
inline Matrix2c pauli_y() {
  return (Matrix2c() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
inline Matrix2c pauli_z() { return (Matrix2c() << 1, 0, 0, -1).finished(); }

// n . sigma
inline Matrix2c bloch_operator(const Vec3& n) {
  return n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
}

// Bloch vector (<sx>, <sy>, <sz>) of a normalized coin vector.
inline Vec3 bloch_of(const CoinVector& v) {
  const Complex c = std::conj(v(0)) * v(1);
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(v(0)) - std::norm(v(1))};
}

}  // namespace qwalk
