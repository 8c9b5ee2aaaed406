// SPDX-License-Identifier: Apache-2.0
//
// risalign - measurement-only phase alignment for RIS energy harvesting
// Copyright (C) 2026 risalign contributors
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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "risalign/signal_model.hpp"

namespace risalign {

/// Probe offsets applied to one element while its optimal shift is
/// estimated. At least three offsets, each kept in [0, 2pi).
class MeasurementPhaseSet {
 public:
  explicit MeasurementPhaseSet(std::vector<double> offsets);

  /// rotation, rotation + 2pi/L, ..., rotation + 2pi(L-1)/L
  static MeasurementPhaseSet equally_spaced(std::size_t count, double rotation = 0.0);

  std::size_t size() const noexcept { return offsets_.size(); }
  double operator[](std::size_t l) const { return offsets_[l]; }
  std::span<const double> values() const noexcept { return offsets_; }

 private:
  std::vector<double> offsets_;
};

/// L x 3, row l = [1, cos(phi_l), sin(phi_l)].
using DesignMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;
/// 3 x L left inverse of a design matrix.
using LeftInverse = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Sufficient statistics of a single-element power curve
/// y(phi) = x1 + x2 cos(phi) + x3 sin(phi).
struct XEstimate {
  double x1 = 0.0;  // |z0|^2 + |z|^2
  double x2 = 0.0;  // 2 Re(z0 z*)
  double x3 = 0.0;  // 2 Im(z0 z*)

  Eigen::Vector3d vector() const { return {x1, x2, x3}; }
  static XEstimate from_vector(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

/// Ground-truth statistics for a fixed part z0 and a rotating term z.
XEstimate x_from_gains(Complex z0, Complex z);

/// Phase in (-pi, pi].
struct PhaseEstimate {
  double theta = 0.0;
};

/// Relative magnitude below which an estimated direction is treated as zero.
inline constexpr double kAmbiguityTolerance = 1e-12;

DesignMatrix build_design_matrix(const MeasurementPhaseSet& phi);

/// (A^T A)^{-1} A^T. Throws SingularDesignError when A is rank deficient.
LeftInverse pseudoinverse(const DesignMatrix& a);

/// sin(phi1 - phi3) + sin(phi2 - phi1) + sin(phi3 - phi2), the determinant of
/// the 3 x 3 design matrix.
double probe_triple_determinant(double phi1, double phi2, double phi3) noexcept;
bool admissible_probe_triple(double phi1, double phi2, double phi3) noexcept;

/// Least-squares x = A^+ y. No cone projection.
XEstimate linear_estimate(std::span<const double> y, const DesignMatrix& a);
XEstimate linear_estimate(std::span<const double> y, const LeftInverse& a_pinv);

/// arg(x2 + j x3). Throws AmbiguousPhaseError when (x2, x3) vanishes.
PhaseEstimate phase_from_x(const XEstimate& x);

/// arg(sum_l y_l e^{j 2pi (l-1)/L}) for probes equally spaced from offset 0.
PhaseEstimate dft_phase_estimate(std::span<const double> y);

/// Optimal shift from probes at 0, pi/2 and pi:
/// arg(y1 - y3 + j (2 y2 - y1 - y3)).
PhaseEstimate closed_form_three_phase(double y1, double y2, double y3);

/// Negative log-likelihood of x for noncentral chi-square power samples,
///   sum_l [ a_l^T x / s^2 - log I0( 2 sqrt(a_l^T x y_l) / s^2 ) ].
/// `shifted_value` drops the x-independent constant -sum_l y_l / s^2, which
/// keeps the number well conditioned at high SNR.
class MlObjective {
 public:
  MlObjective(std::span<const double> y, const DesignMatrix& a, double sigma);

  double value(const Eigen::Vector3d& x) const;
  double shifted_value(const Eigen::Vector3d& x) const;
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const;

 private:
  std::vector<double> y_;
  DesignMatrix a_;
  double variance_;
};

/// Euclidean projection onto {x : x1 >= sqrt(x2^2 + x3^2)}.
Eigen::Vector3d project_onto_cone(const Eigen::Vector3d& x);

struct MlOptions {
  std::size_t max_iterations = 10000;
  double relative_tolerance = 1e-10;
};

struct MlSolution {
  XEstimate x;
  double objective = 0.0;  // shifted objective at x
  std::size_t iterations = 0;
  std::vector<double> objective_trace;  // shifted objective per accepted iterate
};

/// Raised when the solver hits its iteration cap. Carries the best iterate.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, MlSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const MlSolution& best() const noexcept { return best_; }

 private:
  MlSolution best_;
};

/// Projected gradient descent with Barzilai-Borwein steps and backtracking,
/// started from the cone projection of the least-squares estimate.
MlSolution ml_solve(std::span<const double> y, const DesignMatrix& a, double sigma,
                    const MlOptions& options = {});

XEstimate ml_estimate(std::span<const double> y, const DesignMatrix& a, double sigma,
                      const MlOptions& options = {});

/// E||x_hat - x||^2 of the linear estimator for a fixed x.
double mse_linear(const DesignMatrix& a, const XEstimate& x, double sigma);

/// tr((A^T A)^{-1}) = sum_i 1/d_i^2 from the Gram matrix eigenvalues.
double trace_criterion(const MeasurementPhaseSet& phi);

}  // namespace risalign
