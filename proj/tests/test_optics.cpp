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

#include "focksim/optics.hpp"
#include "focksim/pdc_source.hpp"
#include "test_support.hpp"

using namespace focksim;
using oracle::twin_ket;

namespace {

FockKet eq4_expected(double m, double n) {
    const double q = 0.25, r = std::sqrt(3.0) / 4;
    return twin_ket(3, 0, 0, 3, q * (m + 3 * n)) + twin_ket(0, 3, 3, 0, -q * (m + 3 * n)) + twin_ket(1, 2, 2, 1, q * (3 * m + n)) +
           twin_ket(2, 1, 1, 2, -q * (3 * m + n)) + twin_ket(3, 2, 0, 1, r * (m - n)) + twin_ket(0, 1, 3, 2, -r * (m - n)) +
           twin_ket(1, 0, 2, 3, r * (m - n)) + twin_ket(2, 3, 1, 0, -r * (m - n));
}

double max_abs_difference(const FockKet& a, const FockKet& b) {
    double d = 0;
    for (const auto& [occ, amp] : a.terms()) d = std::max(d, std::abs(amp - b.amplitude(occ)));
    for (const auto& [occ, amp] : b.terms()) d = std::max(d, std::abs(amp - a.amplitude(occ)));
    return d;
}

}  // namespace

TEST(BeamSplitter, HongOuMandelBunching) {
    const auto reg = ModeRegister::spatial({"a", "b"});
    const FockKet out = apply_mode_transform(FockKet::basis(reg, make_occupation({1, 0, 1, 0})), bs_5050(reg, "a", "b"));
    EXPECT_EQ(out.size(), 2u);
    EXPECT_NEAR(out.amplitude(make_occupation({0, 0, 2, 0})).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out.amplitude(make_occupation({2, 0, 0, 0})).real(), -1 / std::sqrt(2.0), 1e-15);
}

TEST(BeamSplitter, TwinBeamCoefficientsWithSignPattern) {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_pair(gen);
        const FockKet out = apply_mode_transform(twin_beam_state(p), bs_5050(twin_beam_register(), "a", "b"));
        EXPECT_LT(max_abs_difference(out, eq4_expected(p.m, p.n)), 1e-12);
    }
}

TEST(BeamSplitter, OtherSignConventionFlipsTheOverallSign) {
    // b -> (a - b)/sqrt2 instead of (b - a)/sqrt2: same physics, global -1.
    const auto reg = twin_beam_register();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    const double h = 1 / std::sqrt(2.0);
    for (int p = 0; p < 2; ++p) {
        m(p, p) = h;
        m(p, p + 2) = h;
        m(p + 2, p) = h;
        m(p + 2, p + 2) = -h;
    }
    const CoefficientPair pair{0.3, std::sqrt(0.5 - 0.09)};
    const FockKet out = apply_mode_transform(twin_beam_state(pair), ModeTransform(reg, m));
    EXPECT_LT(max_abs_difference(out, eq4_expected(pair.m, pair.n).scaled(-1.0)), 1e-12);
}

TEST(BeamSplitter, SingletsAreInvariant) {
    for (int n = 0; n <= 5; ++n) {
        const FockKet k = psi_n(n);
        const FockKet out = apply_mode_transform(k, bs_5050(k.reg(), "a", "b"));
        EXPECT_NEAR(fidelity(out, k), 1.0, 1e-12) << n;
        EXPECT_LT(max_abs_difference(out, k), 1e-12) << n;
    }
}

TEST(BeamSplitter, ReversedPortsUndoTheSplitter) {
    const FockKet k = twin_beam_state({0.6, std::sqrt(0.5 - 0.36)});
    const FockKet there = apply_mode_transform(k, bs_5050(k.reg(), "a", "b"));
    const FockKet back = apply_mode_transform(there, bs_5050(k.reg(), "b", "a"));
    EXPECT_LT(max_abs_difference(back, k), 1e-12);
}

TEST(ModeTransform, ComposedEqualsSequential) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.05, 0.95), ang(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
        FockKet k = with_vacuum_modes(psi_n(2), ModeRegister::spatial({"c"}));
        const ModeTransform t1 = polarization_rotation(k.reg(), "b", ang(gen));
        const ModeTransform t2 = bs_unbalanced(t1.output(), "a", "c", "a2", u(gen));
        const ModeTransform t3 = bs_5050(t2.output(), "a2", "b");
        const FockKet seq = apply_mode_transform(apply_mode_transform(apply_mode_transform(k, t1), t2), t3);
        const FockKet direct = apply_mode_transform(k, then(then(t1, t2), t3));
        EXPECT_LT(max_abs_difference(seq, direct), 1e-12);
        EXPECT_NEAR(seq.norm_squared(), 1.0, 1e-12);
    }
}

TEST(ModeTransform, RejectsNonUnitaryAndMismatchedShapes) {
    const auto reg = ModeRegister::spatial({"a"});
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    m(0, 0) = 1.1;
    EXPECT_THROW(ModeTransform(reg, m), InvalidInput);
    EXPECT_THROW(ModeTransform(reg, Eigen::MatrixXcd::Identity(3, 3)), InvalidInput);
    EXPECT_THROW(apply_mode_transform(psi_n(1), ModeTransform::identity(reg)), InvalidInput);
}

TEST(BeamSplitterUnbalanced, SplitsOnePhotonByTransmissivity) {
    const auto reg = ModeRegister::spatial({"a", "r"});
    const FockKet one = FockKet::basis(reg, make_occupation({1, 0, 0, 0}));
    const ModeTransform t = bs_unbalanced(reg, "a", "r", "t", 2.0 / 3.0);
    const FockKet out = apply_mode_transform(one, t);
    EXPECT_EQ(out.reg().describe(), ModeRegister::spatial({"t", "r"}).describe());
    EXPECT_NEAR(std::norm(out.amplitude(make_occupation({1, 0, 0, 0}))), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(std::norm(out.amplitude(make_occupation({0, 0, 1, 0}))), 1.0 / 3.0, 1e-14);
}

TEST(BeamSplitterUnbalanced, RejectsBadParameters) {
    const auto reg = ModeRegister::spatial({"a", "r"});
    EXPECT_THROW(bs_unbalanced(reg, "a", "r", "t", 0.0), InvalidInput);
    EXPECT_THROW(bs_unbalanced(reg, "a", "r", "t", 1.0), InvalidInput);
    EXPECT_THROW(bs_unbalanced(reg, "a", "a", "t", 0.5), InvalidInput);
    EXPECT_THROW(bs_unbalanced(reg, "a", "q", "t", 0.5), InvalidInput);
    EXPECT_THROW(bs_unbalanced(reg, "a", "r", "r", 0.5), InvalidInput);
    EXPECT_THROW(bs_5050(reg, "a", "a"), InvalidInput);
}

TEST(PolarizationRotation, QuarterTurnSwapsPolarizations) {
    const auto reg = ModeRegister::spatial({"b"});
    const FockKet v = FockKet::basis(reg, make_occupation({0, 1}));
    const FockKet out = apply_mode_transform(v, polarization_rotation(reg, "b", std::numbers::pi / 2));
    EXPECT_NEAR(out.amplitude(make_occupation({1, 0})).real(), 1.0, 1e-15);
    const FockKet h = FockKet::basis(reg, make_occupation({1, 0}));
    const FockKet out_h = apply_mode_transform(h, polarization_rotation(reg, "b", std::numbers::pi / 2));
    EXPECT_NEAR(out_h.amplitude(make_occupation({0, 1})).real(), -1.0, 1e-15);
}

TEST(PolarizingBeamSplitter, RoutesAndRecombines) {
    const auto reg = ModeRegister::spatial({"c"});
    const FockKet diag = FockKet::basis(reg, make_occupation({1, 0}), 0.6) + FockKet::basis(reg, make_occupation({0, 1}), 0.8);
    const ModeTransform split = pbs(reg, "c", "ch", "cv");
    const FockKet routed = apply_mode_transform(diag, split);
    EXPECT_EQ(routed.reg()[0].label(), "chH");
    EXPECT_EQ(routed.reg()[1].label(), "cvV");
    const FockKet merged = apply_mode_transform(routed, pbs_combine(routed.reg(), "ch", "cv", "e"));
    EXPECT_EQ(merged.reg().describe(), ModeRegister::spatial({"e"}).describe());
    EXPECT_NEAR(merged.amplitude(make_occupation({0, 1})).real(), 0.8, 1e-15);
    EXPECT_THROW(pbs(reg, "c", "x", "x"), InvalidInput);
    EXPECT_THROW(pbs_combine(routed.reg(), "cv", "ch", "e"), InvalidInput);
}
