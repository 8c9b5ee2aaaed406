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

#include "risalign/bessel.hpp"

#include <cmath>
#include <numbers>

#include "risalign/errors.hpp"

namespace risalign::bessel {
namespace {

void check_argument(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("Bessel argument must be finite and >= 0");
}

struct SeriesPair {
  double i0;
  double i1;
};

// I0 and I1 from their power series; all terms positive so no cancellation.
SeriesPair power_series(double v) {
  const double q = 0.25 * v * v;
  double t0 = 1.0;      // (v/2)^{2k} / (k!)^2
  double t1 = 0.5 * v;  // (v/2)^{2k+1} / (k! (k+1)!)
  double i0 = t0;
  double i1 = t1;
  for (int k = 1; k < 500; ++k) {
    const double kd = k;
    t0 *= q / (kd * kd);
    t1 *= q / (kd * (kd + 1.0));
    i0 += t0;
    i1 += t1;
    if (t0 <= 1e-17 * i0 && t1 <= 1e-17 * i1) break;
  }
  return {i0, i1};
}

// Large-argument expansion of e^{-v} sqrt(2 pi v) I_nu(v) for nu = 0 and 1,
// plus the difference of the two computed term by term.
struct AsymptoticSums {
  double s0;
  double s1;
  double diff;  // s0 - s1
};

AsymptoticSums asymptotic_sums(double v) {
  double c0 = 1.0;
  double c1 = 1.0;
  double s0 = 1.0;
  double s1 = 1.0;
  double diff = 0.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double denom = k * 8.0 * v;
    // coefficient recursion: c_k = c_{k-1} * (-(4 nu^2 - (2k-1)^2)) / (8 k v)
    c0 *= (odd * odd) / denom;
    c1 *= -(4.0 - odd * odd) / denom;
    const double size = std::abs(c0) + std::abs(c1);
    if (size > prev) break;  // the expansion started diverging
    s0 += c0;
    s1 += c1;
    diff += c0 - c1;
    prev = size;
    if (size <= 1e-17) break;
  }
  return {s0, s1, diff};
}

}  // namespace

double log_i0(double v) {
  check_argument(v);
  if (v < kSeriesLimit) return std::log(power_series(v).i0);
  return v + log_i0_scaled(v);
}

double log_i0_scaled(double v) {
  check_argument(v);
  if (v < kSeriesLimit) return std::log(power_series(v).i0) - v;
  const AsymptoticSums a = asymptotic_sums(v);
  return std::log(a.s0) - 0.5 * std::log(2.0 * std::numbers::pi * v);
}

double i1_over_i0(double v) {
  check_argument(v);
  if (v < kSeriesLimit) {
    const SeriesPair p = power_series(v);
    return p.i1 / p.i0;
  }
  const AsymptoticSums a = asymptotic_sums(v);
  return a.s1 / a.s0;
}

double one_minus_i1_over_i0(double v) {
  check_argument(v);
  if (v < kSeriesLimit) return 1.0 - i1_over_i0(v);
  const AsymptoticSums a = asymptotic_sums(v);
  return a.diff / a.s0;
}

}  // namespace risalign::bessel
