// Copyright 2026 The focksim Authors
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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "focksim/rng.hpp"

using namespace focksim;

TEST(Philox, KnownAnswerVectors) {
    using Block = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, DeterministicPerSeedAndStream) {
    CounterRng a(42), b(42), c(43), d(42, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
        EXPECT_NE(x, d());
        seen.insert(x);
    }
    EXPECT_EQ(seen.size(), 100u);
    EXPECT_EQ(a.blocks_used(), 50u);
}

TEST(CounterRng, UniformStaysInsideOpenInterval) {
    CounterRng r(1);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
}

TEST(CounterRng, NormalMoments) {
    CounterRng r(2);
    const int n = 100000;
    double s1 = 0, s2 = 0, tail = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s1 += z;
        s2 += z * z;
        if (z > 1.96) ++tail;
    }
    EXPECT_NEAR(s1 / n, 0.0, 3 / std::sqrt(double(n)));
    EXPECT_NEAR(s2 / n, 1.0, 3 * std::sqrt(2.0 / n));
    EXPECT_NEAR(tail / n, 0.025, 3 * std::sqrt(0.025 * 0.975 / n));
}

TEST(CounterRng, WorksWithStandardDistributions) {
    CounterRng r(3);
    std::uniform_int_distribution<int> die(1, 6);
    std::array<int, 7> counts{};
    for (int i = 0; i < 60000; ++i) ++counts[die(r)];
    for (int f = 1; f <= 6; ++f) EXPECT_NEAR(counts[f], 10000, 3 * std::sqrt(60000 * (1.0 / 6) * (5.0 / 6)));
}
