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
#include "risalign/signal_model.hpp"

#include <cmath>
#include <vector>

using namespace risalign;
using Catch::Approx;

namespace
{
// Reference sum in extended precision.
long double power_ld(const std::vector<Complex> &z, const std::vector<double> &phases)
{
    long double re = 0.0L, im = 0.0L;
    for (std::size_t n = 0; n < z.size(); ++n)
    {
        const long double a = phases[n];
        re += (long double)z[n].real() * cosl(a) - (long double)z[n].imag() * sinl(a);
        im += (long double)z[n].real() * sinl(a) + (long double)z[n].imag() * cosl(a);
    }
    return re * re + im * im;
}

std::vector<Complex> draws(std::size_t n, std::uint64_t seed)
{
    RandomStream s(seed, 0, StreamTag::channel);
    std::vector<Complex> z(n);
    for (auto &v : z)
        v = s.complex_normal(1.0);
    return z;
}
} // namespace

TEST_CASE("Phase helpers - ranges")
{
    CHECK(wrap_phase(-0.1) == Approx(kTwoPi - 0.1).epsilon(1e-15));
    CHECK(wrap_phase(kTwoPi) == 0.0);
    CHECK(wrap_phase(3.0 * kTwoPi + 1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(wrap_phase(-1e-18) < kTwoPi);
    CHECK(principal_phase(kPi) == Approx(kPi));
    CHECK(principal_phase(-kPi) == Approx(kPi));
    CHECK(principal_phase(1.5 * kPi) == Approx(-0.5 * kPi));
    CHECK(circular_distance(0.1, kTwoPi - 0.1) == Approx(0.2).epsilon(1e-12));
    CHECK(db_to_linear(-10.0) == Approx(0.1));
    CHECK(linear_to_db(100.0) == Approx(20.0));

    RandomStream s(7, 0, StreamTag::proposals);
    for (int i = 0; i < 10000; ++i)
    {
        const double a = (s.uniform_phase() - kPi) * 1e3;
        const double w = wrap_phase(a);
        CHECK((w >= 0.0 && w < kTwoPi));
        const double p = principal_phase(a);
        CHECK((p > -kPi && p <= kPi));
    }
}

TEST_CASE("PhaseVector - canonical storage")
{
    PhaseVector v(std::vector<double>{-kPi / 2.0, 5.0 * kPi, 0.25});
    CHECK(v[0] == Approx(1.5 * kPi));
    CHECK(v[1] == Approx(kPi));
    v.set(2, -0.25);
    CHECK(v[2] == Approx(kTwoPi - 0.25));
    CHECK(PhaseVector(3).values()[1] == 0.0);
}

TEST_CASE("DiscretePhaseSet - validation")
{
    CHECK_THROWS_AS(DiscretePhaseSet({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePhaseSet({0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePhaseSet({0.0, 1.0, kTwoPi}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePhaseSet({0.0, 1.0, -0.5}), std::invalid_argument);

    const auto q = DiscretePhaseSet::psk(4);
    REQUIRE(q.size() == 4);
    CHECK(q[1] == Approx(kPi / 2.0));
    CHECK(q[3] == Approx(1.5 * kPi));
    CHECK(q.index_of(-kPi / 2.0) == std::optional<std::size_t>(3));
    CHECK_FALSE(q.contains(0.3));
}

TEST_CASE("ChannelRealization - validation")
{
    CHECK_THROWS(ChannelRealization({}, 0.0));
    CHECK_THROWS(ChannelRealization({Complex(NAN, 0.0)}, 0.0));
    CHECK_THROWS(ChannelRealization({Complex(1.0, 0.0)}, -1.0));
    CHECK_THROWS(ChannelRealization({Complex(1.0, 0.0)}, 0.0, 0.0));

    const ChannelRealization ch({Complex(3.0, 4.0), Complex(0.0, -1.0)}, 0.5);
    CHECK(ch.max_power() == Approx(36.0));
    CHECK(ch.total_gain_energy() == Approx(26.0));
    CHECK(ch.noise_variance() == Approx(0.25));
    CHECK(ch.with_noise_sigma(2.0).noise_sigma() == 2.0);
}

TEST_CASE("received_power_noiseless - examples")
{
    const ChannelRealization a({Complex(1, 0), Complex(0, 1)}, 0.0);
    CHECK(received_power_noiseless(a, PhaseVector(std::vector<double>{0.0, 1.5 * kPi})).value == Approx(4.0).epsilon(1e-15));

    const ChannelRealization b({Complex(1, 0), Complex(-1, 0)}, 0.0);
    CHECK(received_power_noiseless(b, PhaseVector(2)).value == Approx(0.0).margin(1e-30));

    CHECK_THROWS_AS(received_power_noiseless(b, PhaseVector(3)), DimensionError);

    const auto z = draws(5, 11);
    const ChannelRealization c(z, 0.0);
    const std::vector<double> zero(5, 0.0);
    CHECK(received_power_noiseless(c, PhaseVector(5)).value == Approx((double)power_ld(z, zero)).epsilon(1e-14));
}

TEST_CASE("received_power_noiseless - global phase and upper bound")
{
    RandomStream s(3, 0, StreamTag::initial_phases);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto z = draws(8, 100 + trial);
        const ChannelRealization ch(z, 0.0);
        std::vector<double> p(8);
        for (auto &v : p)
            v = s.uniform_phase();
        const double base = received_power_noiseless(ch, PhaseVector(p)).value;
        const double c = s.uniform_phase();
        std::vector<double> q(p);
        for (auto &v : q)
            v += c;
        CHECK(received_power_noiseless(ch, PhaseVector(q)).value == Approx(base).epsilon(1e-12));
        CHECK(base <= ch.max_power() * (1.0 + 1e-12));

        std::vector<double> aligned(8);
        for (std::size_t n = 0; n < 8; ++n)
            aligned[n] = c - std::arg(z[n]);
        CHECK(received_power_noiseless(ch, PhaseVector(aligned)).value == Approx(ch.max_power()).epsilon(1e-12));
    }
}

TEST_CASE("received_power_noisy - zero noise and determinism")
{
    const auto z = draws(6, 5);
    const ChannelRealization quiet(z, 0.0);
    RandomStream r(1, 2, StreamTag::noise);
    const PhaseVector p(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    CHECK(received_power_noisy(quiet, p, r).value == received_power_noiseless(quiet, p).value);

    const ChannelRealization loud(z, 0.7);
    RandomStream r1(9, 4, StreamTag::noise), r2(9, 4, StreamTag::noise);
    for (int i = 0; i < 10; ++i)
        CHECK(received_power_noisy(loud, p, r1).value == received_power_noisy(loud, p, r2).value);

    RandomStream other(9, 5, StreamTag::noise);
    RandomStream same(9, 4, StreamTag::noise);
    CHECK(received_power_noisy(loud, p, other).value != received_power_noisy(loud, p, same).value);
}

TEST_CASE("received_power_noisy - first two moments")
{
    const std::vector<Complex> z{Complex(0.8, -0.3), Complex(-0.2, 0.5), Complex(0.4, 0.4)};
    const double sigma = 0.6;
    const ChannelRealization ch(z, sigma);
    const PhaseVector p(std::vector<double>{0.3, 1.1, 2.0});
    const double f = received_power_noiseless(ch, p).value;
    const double s2 = sigma * sigma;

    RandomStream r(2024, 0, StreamTag::noise);
    const int count = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < count; ++i)
    {
        const double y = received_power_noisy(ch, p, r).value;
        sum += y;
        sum2 += y * y;
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    const double var_model = 2.0 * s2 * f + s2 * s2;
    CHECK(std::abs(mean - (f + s2)) <= 3.0 * std::sqrt(var_model / count));
    CHECK(var == Approx(var_model).epsilon(0.03));
}

TEST_CASE("average_snr - examples")
{
    CHECK(average_snr(ChannelRealization({Complex(1, 0), Complex(1, 0)}, 1.0)) == Approx(1.0));
    CHECK(average_snr(ChannelRealization({Complex(3, 0)}, 1.0)) == Approx(9.0));
    CHECK_THROWS_AS(average_snr(ChannelRealization({Complex(3, 0)}, 0.0)), DomainError);

    // sigma for -10 dB on unit-variance gains, averaged over realizations
    const double sigma = std::sqrt(1.0 / 0.1);
    double acc = 0.0;
    for (int t = 0; t < 1000; ++t)
    {
        RandomStream s(77, t, StreamTag::channel);
        std::vector<Complex> z(100);
        for (auto &v : z)
            v = s.complex_normal(1.0);
        acc += average_snr(ChannelRealization(z, sigma));
    }
    CHECK(acc / 1000.0 == Approx(0.1).epsilon(0.05));
}

TEST_CASE("compose_indirect - examples")
{
    const std::vector<Complex> one{Complex(1, 0)}, j{Complex(0, 1)};
    CHECK(compose_indirect(one, one, 4.0).gains()[0] == Complex(2.0, 0.0));
    const Complex jj = compose_indirect(j, j, 1.0).gains()[0];
    CHECK(jj.real() == Approx(-1.0));
    CHECK(jj.imag() == Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(compose_indirect(one, std::vector<Complex>{}, 1.0), DimensionError);
    CHECK_THROWS(compose_indirect(one, one, 0.0));

    const auto h = draws(8, 1), g = draws(8, 2);
    const auto ch = compose_indirect(h, g, 2.5, 0.1);
    for (std::size_t n = 0; n < 8; ++n)
    {
        const Complex ref = std::sqrt(2.5) * h[n] * g[n];
        CHECK(std::abs(ch.gains()[n] - ref) <= 1e-14 * std::abs(ref));
    }
    CHECK(ch.noise_sigma() == 0.1);
    CHECK(compose_direct(h, 4.0).gains()[3] == 2.0 * h[3]);
}

TEST_CASE("RandomStream - complex normal moments")
{
    RandomStream s(5, 0, StreamTag::channel);
    const int count = 200000;
    double re2 = 0.0, im2 = 0.0, cross = 0.0;
    for (int i = 0; i < count; ++i)
    {
        const Complex w = s.complex_normal(2.0);
        re2 += w.real() * w.real();
        im2 += w.imag() * w.imag();
        cross += w.real() * w.imag();
    }
    CHECK(re2 / count == Approx(1.0).epsilon(0.02));
    CHECK(im2 / count == Approx(1.0).epsilon(0.02));
    CHECK(std::abs(cross / count) < 0.02);

    RandomStream a(5, 0, StreamTag::channel), b(5, 0, StreamTag::noise);
    CHECK(a.normal() != b.normal());
}

TEST_CASE("ChannelOracle - counting and incremental sum")
{
    const auto z = draws(40, 8);
    const ChannelRealization ch(z, 0.0);
    ChannelOracle oracle(ch);
    CHECK(oracle.count() == 0);

    RandomStream s(1, 1, StreamTag::proposals);
    for (int i = 0; i < 20000; ++i)
    {
        oracle.set_phase(s.uniform_index(40), s.uniform_phase());
        if (i % 997 == 0)
        {
            const double direct = received_power_noiseless(ch, oracle.configuration()).value;
            CHECK(oracle.measure().value == Approx(direct).epsilon(1e-11));
        }
    }
    const auto before = oracle.count();
    const PhaseVector p(40);
    CHECK(oracle.measure(p).value == Approx(received_power_noiseless(ch, p).value));
    CHECK(oracle.count() == before + 1);
    CHECK(oracle.configuration() == p);
    CHECK_THROWS_AS(oracle.configure(PhaseVector(3)), DimensionError);
    CHECK_THROWS(oracle.set_phase(40, 0.0));
}

TEST_CASE("ChannelOracle - one noise draw per measurement")
{
    const auto z = draws(4, 2);
    const ChannelRealization ch(z, 0.3);
    RandomStream n1(4, 4, StreamTag::noise), n2(4, 4, StreamTag::noise);
    ChannelOracle oracle(ch, &n1);
    const PhaseVector p(std::vector<double>{0.5, 1.0, 1.5, 2.0});
    for (int i = 0; i < 5; ++i)
        CHECK(oracle.measure(p).value == Approx(received_power_noisy(ch, p, n2).value).epsilon(1e-13));
}

TEST_CASE("FunctionOracle - forwards the configuration")
{
    FunctionOracle f(2, [](const PhaseVector &p) { return p[0] + 10.0 * p[1]; });
    f.set_phase(1, 0.5);
    CHECK(f.measure().value == Approx(5.0));
    CHECK(f.count() == 1);
}
