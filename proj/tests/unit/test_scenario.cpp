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

#include <catch2/catch_amalgamated.hpp>

#include "risalign/errors.hpp"
#include "risalign/scenario.hpp"

#include <cmath>
#include <vector>

using namespace risalign;
using Catch::Approx;

TEST_CASE("generate_iid_channel - moments")
{
    RandomStream s(1, 0, StreamTag::channel);
    const auto ch = generate_iid_channel(1000000, 0.5, s);
    double e2 = 0.0;
    Complex mean{};
    for (const Complex &z : ch.gains())
    {
        e2 += std::norm(z);
        mean += z;
    }
    const double n = 1e6;
    CHECK(e2 / n == Approx(1.0).epsilon(0.01));
    mean /= n;
    const double se = std::sqrt(0.5 / n);
    CHECK(std::abs(mean.real()) <= 3.0 * se);
    CHECK(std::abs(mean.imag()) <= 3.0 * se);
    CHECK(ch.noise_sigma() == 0.5);
}

TEST_CASE("generate_iid_channel - reproducible and checked")
{
    RandomStream a(5, 2, StreamTag::channel), b(5, 2, StreamTag::channel), c(5, 3, StreamTag::channel);
    const auto x = generate_iid_channel(16, 0.0, a);
    const auto y = generate_iid_channel(16, 0.0, b);
    const auto z = generate_iid_channel(16, 0.0, c);
    for (std::size_t n = 0; n < 16; ++n)
        CHECK(x.gains()[n] == y.gains()[n]);
    CHECK(x.gains()[0] != z.gains()[0]);
    CHECK_THROWS(generate_iid_channel(0, 0.0, a));
}

TEST_CASE("GeometryScenario - element layout")
{
    GeometryScenario g;
    g.rows = 2;
    g.cols = 3;
    const auto p = g.element_positions();
    REQUIRE(p.size() == 6);
    const double d = g.wavelength / 2.0;
    CHECK(p[0][0] == Approx(-d));
    CHECK(p[0][1] == Approx(-d / 2.0));
    CHECK(p[1][0] == Approx(0.0).margin(1e-15));
    CHECK(p[3][1] == Approx(d / 2.0));
    CHECK(p[5][0] == Approx(d));
    for (const auto &q : p)
        CHECK(q[2] == 0.0);

    // 16 x 16 at lambda = 0.125 spans 1 m per side
    GeometryScenario big;
    const auto e = big.element_positions();
    CHECK(e.back()[0] - e.front()[0] + 2.0 * big.wavelength / 4.0 == Approx(1.0));
}

TEST_CASE("near_field_gains - examples")
{
    GeometryScenario g;
    g.rows = g.cols = 1;
    g.tx_position = {0.0, 0.0, g.wavelength};
    g.rx_position = {0.0, 0.0, 2.0 * g.wavelength};
    const auto gains = near_field_gains(g);
    CHECK(std::abs(gains.h[0]) == Approx(1.0 / (4.0 * kPi)));
    CHECK(std::abs(std::arg(gains.h[0])) <= 1e-12);
    CHECK(std::abs(gains.g[0]) == Approx(0.5 / (4.0 * kPi)));

    g.rx_position = {0.0, 0.0, 2.0 * g.wavelength + g.wavelength};
    const auto shifted = near_field_gains(g);
    CHECK(std::abs(principal_phase(std::arg(shifted.g[0]) - std::arg(gains.g[0]))) <= 1e-9);
}

TEST_CASE("near_field_gains - independent recomputation")
{
    const GeometryScenario g;
    const auto gains = near_field_gains(g);
    REQUIRE(gains.h.size() == 256);
    const long double lam = g.wavelength;
    const long double pi = 3.141592653589793238462643383279502884L;
    std::size_t n = 0;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c, ++n)
        {
            const long double x = (c - 7.5L) * lam / 2.0L;
            const long double y = (r - 7.5L) * lam / 2.0L;
            const long double dt = std::sqrt(x * x + (y + 3.0L) * (y + 3.0L) + 16.0L);
            const long double dr = std::sqrt(x * x + (y - 1.0L) * (y - 1.0L) + 4.0L);
            const long double at = lam / (4.0L * pi * dt), ar = lam / (4.0L * pi * dr);
            const Complex h_ref((double)(at * cosl(-2.0L * pi * dt / lam)), (double)(at * sinl(-2.0L * pi * dt / lam)));
            const Complex g_ref((double)(ar * cosl(-2.0L * pi * dr / lam)), (double)(ar * sinl(-2.0L * pi * dr / lam)));
            CHECK(std::abs(gains.h[n] - h_ref) <= 1e-12 * std::abs(h_ref));
            CHECK(std::abs(gains.g[n] - g_ref) <= 1e-12 * std::abs(g_ref));
        }

    const auto ch = geometry_channel(g);
    CHECK(std::abs(ch.gains()[17] - gains.h[17] * gains.g[17]) <= 1e-15);
}

TEST_CASE("near_field_gains - amplitude law")
{
    GeometryScenario g;
    g.rows = g.cols = 1;
    g.tx_position = {0.0, 0.0, 1.0};
    const double a1 = std::abs(near_field_gains(g).h[0]);
    g.tx_position = {0.0, 0.0, 2.0};
    const double a2 = std::abs(near_field_gains(g).h[0]);
    CHECK(a2 == Approx(a1 / 2.0).epsilon(1e-14));
}

TEST_CASE("GeometryScenario - validation")
{
    GeometryScenario g;
    g.rows = g.cols = 1;
    g.tx_position = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(near_field_gains(g), GeometryError);
    g.tx_position = {0.0, 0.0, 1.0};
    g.rx_position = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(g.validate(), GeometryError);
    g.rx_position = {0.0, 0.0, 2.0};
    g.wavelength = 0.0;
    CHECK_THROWS_AS(g.validate(), GeometryError);
    g.wavelength = 0.1;
    g.rows = 0;
    CHECK_THROWS_AS(g.validate(), GeometryError);
}

TEST_CASE("conversion_efficiency - examples")
{
    // direct evaluation in extended precision
    const long double a = 30.0L, b = 0.07L, ps = 0.1L, x = 0.07L;
    const long double floor = 1.0L / (1.0L + expl(a * b));
    const long double eta = ps * (1.0L / (1.0L + expl(-a * (x - b))) - floor) / (x * (1.0L - floor));
    CHECK(conversion_efficiency(0.07) == Approx((double)eta).epsilon(1e-14));
    CHECK(conversion_efficiency(0.07) == Approx(0.6268).margin(5e-5));

    CHECK(std::abs(harvested_power(10.0) - 0.1) <= 1e-6);
    CHECK(harvested_power(0.0) == 0.0);
    CHECK_THROWS_AS(conversion_efficiency(0.0), DomainError);
    CHECK_THROWS_AS(conversion_efficiency(-1.0), DomainError);
}

TEST_CASE("harvested_power - monotone and bounded")
{
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i)
    {
        const double x = i / 1000.0;
        const double h = harvested_power(x);
        CHECK(h >= prev);
        prev = h;
    }
    for (int i = 1; i <= 10000; ++i)
    {
        const double x = i / 1000.0;
        CHECK(harvested_power(x) <= 0.1);
        if (x <= 1.0)
            CHECK(harvested_power(x) < 0.1);
    }
    CHECK(harvested_power(1e-9) > 0.0);
}

TEST_CASE("noise sigma for a target SNR")
{
    const std::vector<Complex> z{Complex(1, 0), Complex(0, 2)};
    const double s = noise_sigma_for_snr(z, 0.5);
    CHECK(average_snr(ChannelRealization(z, s)) == Approx(0.5));
    CHECK(noise_sigma_for_unit_gain_snr(10.0) == Approx(std::sqrt(0.1)));
    CHECK_THROWS(noise_sigma_for_snr(z, 0.0));
}
