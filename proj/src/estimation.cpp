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

#include "risalign/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "risalign/bessel.hpp"
#include "risalign/errors.hpp"

namespace risalign {
namespace {

// Rank test on the Gram matrix: smallest eigenvalue relative to the largest.
constexpr double kRankTolerance = 1e-12;

Eigen::Vector3d gram_eigenvalues(const DesignMatrix& a) {
  const Eigen::Matrix3d gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();  // ascending
}

void require_full_rank(const DesignMatrix& a) {
  if (a.rows() < 3)
    throw SingularDesignError("design matrix needs at least 3 rows, got " + std::to_string(a.rows()));
  const Eigen::Vector3d ev = gram_eigenvalues(a);
  if (!(ev(0) > kRankTolerance * ev(2)))
    throw SingularDesignError("measurement phases do not give a rank-3 design matrix");
}

PhaseEstimate direction_phase(Complex v, double scale) {
  if (!(std::abs(v) > kAmbiguityTolerance * scale))
    throw AmbiguousPhaseError("estimated direction is zero; the optimal phase is undefined");
  return {std::arg(v)};
}

}  // namespace

MeasurementPhaseSet::MeasurementPhaseSet(std::vector<double> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.size() < 3)
    throw std::invalid_argument("need L >= 3 measurement phases, got " + std::to_string(offsets_.size()));
  for (double& p : offsets_) {
    if (!std::isfinite(p)) throw std::invalid_argument("measurement phases must be finite");
    p = wrap_phase(p);
  }
}

MeasurementPhaseSet MeasurementPhaseSet::equally_spaced(std::size_t count, double rotation) {
  std::vector<double> v(count);
  for (std::size_t l = 0; l < count; ++l)
    v[l] = rotation + kTwoPi * static_cast<double>(l) / static_cast<double>(count);
  return MeasurementPhaseSet(std::move(v));
}

XEstimate x_from_gains(Complex z0, Complex z) {
  const Complex c = z0 * std::conj(z);
  return {std::norm(z0) + std::norm(z), 2.0 * c.real(), 2.0 * c.imag()};
}

DesignMatrix build_design_matrix(const MeasurementPhaseSet& phi) {
  DesignMatrix a(static_cast<Eigen::Index>(phi.size()), 3);
  for (std::size_t l = 0; l < phi.size(); ++l) {
    const auto r = static_cast<Eigen::Index>(l);
    a(r, 0) = 1.0;
    a(r, 1) = std::cos(phi[l]);
    a(r, 2) = std::sin(phi[l]);
  }
  return a;
}

LeftInverse pseudoinverse(const DesignMatrix& a) {
  require_full_rank(a);
  const Eigen::Matrix3d gram = a.transpose() * a;
  return gram.ldlt().solve(a.transpose());
}

double probe_triple_determinant(double phi1, double phi2, double phi3) noexcept {
  return std::sin(phi1 - phi3) + std::sin(phi2 - phi1) + std::sin(phi3 - phi2);
}

bool admissible_probe_triple(double phi1, double phi2, double phi3) noexcept {
  return std::abs(probe_triple_determinant(phi1, phi2, phi3)) > 1e-9;
}

XEstimate linear_estimate(std::span<const double> y, const DesignMatrix& a) {
  return linear_estimate(y, pseudoinverse(a));
}

XEstimate linear_estimate(std::span<const double> y, const LeftInverse& a_pinv) {
  if (static_cast<Eigen::Index>(y.size()) != a_pinv.cols())
    throw DimensionError("got " + std::to_string(y.size()) + " power samples for " +
                         std::to_string(a_pinv.cols()) + " measurement phases");
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return XEstimate::from_vector(a_pinv * yv);
}

PhaseEstimate phase_from_x(const XEstimate& x) {
  const Complex v{x.x2, x.x3};
  return direction_phase(v, std::max(std::abs(x.x1), std::abs(v)));
}

PhaseEstimate dft_phase_estimate(std::span<const double> y) {
  const std::size_t count = y.size();
  if (count < 3) throw std::invalid_argument("need L >= 3 power samples, got " + std::to_string(count));
  Complex v{};
  double scale = 0.0;
  for (std::size_t l = 0; l < count; ++l) {
    v += y[l] * std::polar(1.0, kTwoPi * static_cast<double>(l) / static_cast<double>(count));
    scale += std::abs(y[l]);
  }
  return direction_phase(v, scale);
}

PhaseEstimate closed_form_three_phase(double y1, double y2, double y3) {
  const Complex v{y1 - y3, 2.0 * y2 - y1 - y3};
  return direction_phase(v, std::abs(y1) + std::abs(y2) + std::abs(y3));
}

MlObjective::MlObjective(std::span<const double> y, const DesignMatrix& a, double sigma)
    : y_(y.begin(), y.end()), a_(a), variance_(sigma * sigma) {
  if (!(sigma > 0.0)) throw DomainError("ML estimation needs sigma > 0");
  if (static_cast<Eigen::Index>(y_.size()) != a_.rows())
    throw DimensionError("got " + std::to_string(y_.size()) + " power samples for " +
                         std::to_string(a_.rows()) + " measurement phases");
  if (a_.rows() < 3) throw std::invalid_argument("ML estimation needs L >= 3");
  for (double& v : y_) v = std::max(v, 0.0);
}

double MlObjective::shifted_value(const Eigen::Vector3d& x) const {
  double f = 0.0;
  for (Eigen::Index l = 0; l < a_.rows(); ++l) {
    const double u = std::max(a_.row(l).dot(x), 0.0);
    const double y = y_[static_cast<std::size_t>(l)];
    const double v = 2.0 * std::sqrt(u * y) / variance_;
    const double d = std::sqrt(u) - std::sqrt(y);
    f += d * d / variance_ - bessel::log_i0_scaled(v);
  }
  return f;
}

double MlObjective::value(const Eigen::Vector3d& x) const {
  double total_y = 0.0;
  for (double y : y_) total_y += y;
  return shifted_value(x) - total_y / variance_;
}

Eigen::Vector3d MlObjective::gradient(const Eigen::Vector3d& x) const {
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (Eigen::Index l = 0; l < a_.rows(); ++l) {
    const double u = std::max(a_.row(l).dot(x), 0.0);
    const double y = y_[static_cast<std::size_t>(l)];
    const double v = 2.0 * std::sqrt(u * y) / variance_;
    // d/du of the l-th term is (1 - R(v) sqrt(y/u)) / s^2 with R = I1/I0.
    double du;
    if (v < 1e-4) {
      // R(v) sqrt(y/u) = (y/s^2)(1 - v^2/8 + O(v^4)); finite as u -> 0
      du = (1.0 - (y / variance_) * (1.0 - v * v / 8.0)) / variance_;
    } else {
      const double su = std::sqrt(u);
      const double s = std::sqrt(y / u);
      const double one_minus_s = (u - y) / (su * (su + std::sqrt(y)));
      du = (one_minus_s + s * bessel::one_minus_i1_over_i0(v)) / variance_;
    }
    g += du * a_.row(l).transpose();
  }
  return g;
}

Eigen::Vector3d project_onto_cone(const Eigen::Vector3d& x) {
  const double t = x(0);
  const double s = std::hypot(x(1), x(2));
  if (s <= t) return x;
  if (s <= -t) return Eigen::Vector3d::Zero();
  const double alpha = 0.5 * (t + s);
  return {alpha, alpha * x(1) / s, alpha * x(2) / s};
}

MlSolution ml_solve(std::span<const double> y, const DesignMatrix& a, double sigma,
                    const MlOptions& options) {
  const MlObjective objective(y, a, sigma);

  Eigen::Vector3d x = project_onto_cone(linear_estimate(y, a).vector());
  double f = objective.shifted_value(x);
  Eigen::Vector3d g = objective.gradient(x);

  MlSolution sol;
  sol.objective_trace.push_back(f);

  const double gnorm = g.norm();
  double step = gnorm > 0.0 ? std::max(x.norm(), 1e-300) / gnorm : 1.0;

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    Eigen::Vector3d x_next;
    double f_next = f;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      x_next = project_onto_cone(x - step * g);
      const Eigen::Vector3d d = x_next - x;
      f_next = objective.shifted_value(x_next);
      const double model = f + g.dot(d) + d.squaredNorm() / (2.0 * step);
      if (f_next <= model && f_next <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    const bool stalled = !accepted || (x_next - x).norm() <= 1e-15 * std::max(x.norm(), 1e-300);
    if (stalled) {
      sol.x = XEstimate::from_vector(x);
      sol.objective = f;
      sol.iterations = it;
      return sol;
    }

    const Eigen::Vector3d g_next = objective.gradient(x_next);
    const Eigen::Vector3d s = x_next - x;
    const Eigen::Vector3d dg = g_next - g;
    const double change = f - f_next;

    x = x_next;
    g = g_next;
    f = f_next;
    sol.objective_trace.push_back(f);

    if (change <= options.relative_tolerance * std::max(std::abs(f), std::numeric_limits<double>::min())) {
      sol.x = XEstimate::from_vector(x);
      sol.objective = f;
      sol.iterations = it;
      return sol;
    }

    const double curvature = s.dot(dg);
    if (curvature > 0.0) step = s.squaredNorm() / curvature;
  }

  sol.x = XEstimate::from_vector(x);
  sol.objective = f;
  sol.iterations = options.max_iterations;
  throw SolverFailure("ML solver did not converge in " + std::to_string(options.max_iterations) +
                          " iterations",
                      std::move(sol));
}

XEstimate ml_estimate(std::span<const double> y, const DesignMatrix& a, double sigma,
                      const MlOptions& options) {
  return ml_solve(y, a, sigma, options).x;
}

double mse_linear(const DesignMatrix& a, const XEstimate& x, double sigma) {
  const LeftInverse p = pseudoinverse(a);
  const Eigen::MatrixXd m = p.transpose() * p;  // L x L
  const Eigen::VectorXd ax = a * x.vector();
  const double s2 = sigma * sigma;
  double weighted = 0.0;
  for (Eigen::Index l = 0; l < m.rows(); ++l) weighted += m(l, l) * ax(l);
  return 2.0 * s2 * weighted + s2 * s2 * m.trace() + s2 * s2;
}

double trace_criterion(const MeasurementPhaseSet& phi) {
  const DesignMatrix a = build_design_matrix(phi);
  require_full_rank(a);
  const Eigen::Vector3d ev = gram_eigenvalues(a);
  return 1.0 / ev(0) + 1.0 / ev(1) + 1.0 / ev(2);
}

}  // namespace risalign
