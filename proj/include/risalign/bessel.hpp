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

namespace risalign::bessel {

/// Arguments below this use the power series, the rest the large-argument
/// expansion.
inline constexpr double kSeriesLimit = 20.0;

/// log I0(v) for v >= 0.
double log_i0(double v);

/// log(e^{-v} I0(v)) for v >= 0. Stays O(log v) where log_i0 grows like v.
double log_i0_scaled(double v);

/// I1(v) / I0(v) for v >= 0.
double i1_over_i0(double v);

/// 1 - I1(v)/I0(v), accurate when the ratio is close to one.
double one_minus_i1_over_i0(double v);

}  // namespace risalign::bessel
