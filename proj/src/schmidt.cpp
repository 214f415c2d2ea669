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

#include "qwalk/schmidt.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// Rotate so the first component with magnitude above 1e-12 is real positive.
template <typename Vec>
void fix_phase(Vec& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-12) {
      v *= std::conj(v(k)) / mag;
      return;
    }
  }
}

double chsh_on_state(const WalkState& state, const CoinObservable& a0, const CoinObservable& a1,
                     const WalkerObservable& b0, const WalkerObservable& b1) {
  const EvolvedEnsemble single = {{1.0, state}};
  return joint_table(single, a0, a1, b0, b1).chsh();
}

}  // namespace

double SchmidtData::reconstruction_residual(const WalkState& state) const {
  const auto& psi = state.amplitudes();
  const MatrixXc rebuilt = s0 * b0 * u0.transpose() + s1 * b1 * u1.transpose();
  return (rebuilt - psi).norm();
}

SchmidtData schmidt_decompose(const WalkState& state) {
  const auto& psi = state.amplitudes();  // walker x coin, psi(x, c) = M(c, x)
  const double norm = std::sqrt(state.norm_squared());
  if (std::abs(norm - 1.0) > 1e-10) throw NormalizationError("schmidt_decompose: state is not normalized");

  // rho_c = M M^dagger with M = psi^T.
  const Matrix2c rho_c = psi.transpose() * psi.conjugate();
  Eigen::SelfAdjointEigenSolver<Matrix2c> eig(rho_c);
  const Eigen::Vector2d lambda = eig.eigenvalues();  // ascending

  SchmidtData sd;
  sd.t_max = state.t_max();
  const double l0 = std::max(lambda(1), 0.0);
  const double l1 = std::max(lambda(0), 0.0);
  if (std::abs(l0 - l1) < 1e-12) {
    // rho_c proportional to I: any orthonormal coin basis works; take the computational one.
    sd.u0 = CoinVector(1.0, 0.0);
    sd.u1 = CoinVector(0.0, 1.0);
  } else {
    sd.u0 = eig.eigenvectors().col(1);
    sd.u1 = eig.eigenvectors().col(0);
    fix_phase(sd.u0);
    fix_phase(sd.u1);
  }
  sd.s0 = std::sqrt(l0);
  sd.s1 = std::sqrt(l1);

  // psi = sum_mu s_mu b_mu u_mu^T, so b_mu = psi conj(u_mu) / s_mu.
  sd.b0 = psi * sd.u0.conjugate() / sd.s0;
  if (sd.s1 > 1e-12) {
    sd.b1 = psi * sd.u1.conjugate() / sd.s1;
  } else {
    sd.degenerate = true;
    sd.s1 = 0.0;
    // Complete with the site basis vector least overlapping b0.
    Eigen::Index site = 0;
    sd.b0.cwiseAbs().minCoeff(&site);
    VectorXc e = VectorXc::Zero(sd.b0.size());
    e(site) = 1.0;
    if (sd.b0.size() == 1) {
      sd.b1 = e;  // a single site has no orthogonal complement
    } else {
      e -= sd.b0 * sd.b0.dot(e);
      sd.b1 = e.normalized();
    }
  }
  return sd;
}

double horodecki_max(double s0, double s1) {
  if (!(s0 >= 0.0 && s1 >= 0.0) || std::abs(s0 * s0 + s1 * s1 - 1.0) > 1e-10)
    throw DomainError("horodecki_max: coefficients must be nonnegative with s0^2 + s1^2 = 1");
  return 2.0 * std::sqrt(1.0 + 4.0 * s0 * s0 * s1 * s1);
}

EmbeddedWalkerObservable embed_subspace_observable(const Matrix2c& sub, const SchmidtData& sd) {
  if (!sub.isApprox(sub.adjoint(), 1e-10) || (sub * sub - Matrix2c::Identity()).norm() > 1e-10)
    throw DomainError("embed_subspace_observable: subspace operator is not a Hermitian involution");
  EmbeddedWalkerObservable out;
  out.t_max = sd.t_max;
  out.subspace = sub;
  out.basis.resize(sd.b0.size(), 2);
  out.basis.col(0) = sd.b0;
  out.basis.col(1) = sd.b1;
  return out;
}

Matrix2c xz_plane_observable(double theta) { return std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x(); }

ChshSettings optimal_chsh_settings(const SchmidtData& sd, const WalkState& state) {
  if (sd.degenerate || sd.s1 <= 1e-9) throw NoEntanglementError("optimal_chsh_settings: state is a product state");

  ChshSettings out;
  // Coin: sz~ = u0 u0^dag - u1 u1^dag has Bloch direction of u0; sx~ that of (u0 + u1)/sqrt2.
  out.a0 = CoinObservable(bloch_of(sd.u0).normalized());
  out.a1 = CoinObservable(bloch_of(((sd.u0 + sd.u1) / std::sqrt(2.0)).eval()).normalized());
  const double mu = std::atan(2.0 * sd.s0 * sd.s1);
  out.b0 = embed_subspace_observable(xz_plane_observable(mu), sd);
  out.b1 = embed_subspace_observable(xz_plane_observable(-mu), sd);
  out.target = horodecki_max(sd.s0, sd.s1);
  out.achieved = chsh_on_state(state, out.a0, out.a1, out.b0, out.b1);
  if (std::abs(out.achieved - out.target) <= 1e-9) return out;

  // Compass search over Bob's two angles.
  double theta[2] = {mu, -mu};
  double best = out.achieved;
  double h = 0.25;
  auto value = [&](double t0, double t1) {
    return chsh_on_state(state, out.a0, out.a1, embed_subspace_observable(xz_plane_observable(t0), sd),
                         embed_subspace_observable(xz_plane_observable(t1), sd));
  };
  while (h > 1e-12) {
    bool moved = false;
    for (int k = 0; k < 2; ++k)
      for (double dir : {+1.0, -1.0}) {
        double trial[2] = {theta[0], theta[1]};
        trial[k] += dir * h;
        const double v = value(trial[0], trial[1]);
        if (v > best) {
          best = v;
          theta[0] = trial[0];
          theta[1] = trial[1];
          moved = true;
        }
      }
    if (!moved) h *= 0.5;
  }
  out.b0 = embed_subspace_observable(xz_plane_observable(theta[0]), sd);
  out.b1 = embed_subspace_observable(xz_plane_observable(theta[1]), sd);
  out.achieved = best;
  out.refined = true;
  return out;
}

}  // namespace qwalk
