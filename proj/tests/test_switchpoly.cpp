#include <switchocp/switchpoly.hpp>
#include <switchocp_oracles/validation.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

using namespace switchocp;

namespace {

std::vector<std::vector<double>> as_lists(const std::vector<Eigen::VectorXd>& vs) {
    std::vector<std::vector<double>> out;
    for (const auto& v : vs) out.emplace_back(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(ShiftCount, Examples) {
    EXPECT_EQ(shift_count(std::vector<double>{0, 0, 0}), 0);
    EXPECT_EQ(shift_count(std::vector<double>{1, 1, 1}), 1);
    // transitions of (0, 0, 1, 0, 1)
    EXPECT_EQ(shift_count(std::vector<double>{0, 1, 0, 1}), 3);
    EXPECT_EQ(shift_count(std::vector<double>{1, 0, 1, 0}), 4);
    EXPECT_THROW(shift_count(std::vector<double>{0.5}), std::invalid_argument);
}

TEST(EnumerateVertices, Examples) {
    EXPECT_EQ(as_lists(enumerate_vertices(3, SwitchingBudget{1})),
              (std::vector<std::vector<double>>{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
    EXPECT_EQ(enumerate_vertices(2, SwitchingBudget{2}).size(), 4u);
    EXPECT_EQ(as_lists(enumerate_vertices(1, SwitchingBudget{0})), (std::vector<std::vector<double>>{{0}}));
}

TEST(Separate, SingleShiftBudget) {
    const auto sep = separate(std::vector<double>{0, 1, 0}, SwitchingBudget{1});
    ASSERT_TRUE(sep);
    EXPECT_DOUBLE_EQ(sep->violation, 1.0);
    EXPECT_EQ(sep->cut.support, (std::vector<int>{1, 2}));
    EXPECT_EQ(sep->cut.coefficients, Eigen::Vector3d(0, 1, -1));
    EXPECT_EQ(sep->cut.rhs, 0.0);
}

TEST(Separate, TwoShiftBudget) {
    const auto sep = separate(std::vector<double>{1, 0, 1, 0, 1}, SwitchingBudget{2});
    ASSERT_TRUE(sep);
    EXPECT_DOUBLE_EQ(sep->violation, 1.0);
    EXPECT_EQ(sep->cut.support, (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(sep->cut.rhs, 1.0);
}

TEST(Separate, FeasibleVerticesAreNotCut) {
    for (int sigma = 1; sigma <= 3; ++sigma) {
        for (int m = 1; m <= 10; ++m) {
            for (const auto& v : enumerate_vertices(m, SwitchingBudget{sigma})) {
                EXPECT_FALSE(separate(v, SwitchingBudget{sigma}));
            }
        }
    }
}

TEST(Separate, FirstEntryIsOutsideTheFamily) {
    // Shift count 2 exceeds sigma_max = 1, but no alternating inequality on
    // positions 2..M is violated.
    EXPECT_FALSE(separate(std::vector<double>{1, 0, 0}, SwitchingBudget{1}));
}

TEST(Separate, CutShape) {
    const auto sep = separate(std::vector<double>{0.9, 0.1, 0.8, 0.2, 0.95, 0.0, 1.0}, SwitchingBudget{3});
    ASSERT_TRUE(sep);
    const auto& s = sep->cut.support;
    EXPECT_GT(static_cast<int>(s.size()), 3);
    EXPECT_EQ((static_cast<int>(s.size()) - 3) % 2, 1);
    EXPECT_GE(s.front(), 1);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j > 0) {
            EXPECT_LT(s[j - 1], s[j]);
        }
        EXPECT_EQ(sep->cut.coefficients[s[j]], j % 2 == 0 ? 1.0 : -1.0);
    }
    EXPECT_EQ(sep->cut.coefficients.cwiseAbs().sum(), static_cast<double>(s.size()));
    EXPECT_EQ(sep->cut.rhs, 1.0);
}

TEST(Separate, ClipsTinyExcursionsRejectsLarge) {
    EXPECT_NO_THROW(separate(std::vector<double>{1.0 + 1e-12, -1e-12}, SwitchingBudget{1}));
    EXPECT_THROW(separate(std::vector<double>{1.1, 0.0}, SwitchingBudget{1}), std::domain_error);
}

TEST(SeparateBruteforce, TrivialCases) {
    EXPECT_FALSE(separate_bruteforce(std::vector<double>(6, 0.0), SwitchingBudget{2}));
    EXPECT_FALSE(separate_bruteforce(std::vector<double>{1, 1, 1}, SwitchingBudget{1}));
}

TEST(SeparateBruteforce, AgreesOnBinaryPatterns) {
    const auto r = oracle::check_separation_binary(12, 3);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(SeparateBruteforce, AgreesOnFractionalPoints) {
    const auto r = oracle::check_separation_fractional(1000, 12, 3, 42);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(SeparateSwitches, PicksMostViolatedSwitch) {
    Eigen::VectorXd w(6);
    w << 0, 1, 0.5, 0, 1, 0;
    const auto sep = separate_switches(w, 2, SwitchingBudget{1});
    ASSERT_TRUE(sep);
    EXPECT_EQ(sep->switch_index, 1);
    EXPECT_DOUBLE_EQ(sep->separation.violation, 1.0);
    EXPECT_EQ(sep->separation.cut.coefficients.size(), 6);
    EXPECT_DOUBLE_EQ(max_violation(w, 2, SwitchingBudget{1}), 1.0);
    EXPECT_THROW(separate_switches(Eigen::VectorXd::Zero(5), 2, SwitchingBudget{1}), std::invalid_argument);
}
