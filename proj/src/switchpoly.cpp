#include "switchocp/switchpoly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace switchocp {

namespace {

constexpr double clip_tolerance = 1e-9;

std::vector<double> clipped(std::span<const double> w) {
    std::vector<double> v(w.begin(), w.end());
    for (double& x : v) {
        if (!(x >= -clip_tolerance && x <= 1.0 + clip_tolerance)) {
            throw std::domain_error("separation input " + std::to_string(x) + " lies outside [0,1]");
        }
        x = std::min(1.0, std::max(0.0, x));
    }
    return v;
}

void check_budget(SwitchingBudget budget) {
    if (budget.max_shifts < 1) throw std::invalid_argument("sigma_max must be a positive integer");
}

Separation make_separation(int length, std::vector<int> support, double value, double rhs) {
    CuttingPlane cut;
    cut.coefficients = Eigen::VectorXd::Zero(length);
    for (std::size_t j = 0; j < support.size(); ++j) cut.coefficients[support[j]] = (j % 2 == 0) ? 1.0 : -1.0;
    cut.rhs = rhs;
    cut.support = std::move(support);
    return Separation{std::move(cut), value - rhs};
}

}  // namespace

int shift_count(std::span<const double> w) {
    int shifts = 0;
    double previous = 0.0;
    for (double x : w) {
        if (x != 0.0 && x != 1.0) throw std::invalid_argument("shift_count expects a binary pattern");
        if (x != previous) ++shifts;
        previous = x;
    }
    return shifts;
}

std::vector<Eigen::VectorXd> enumerate_vertices(int length, SwitchingBudget budget) {
    if (budget.max_shifts < 0) throw std::invalid_argument("sigma_max must be nonnegative");
    if (length < 1 || length > 20) throw std::invalid_argument("vertex enumeration supports 1 <= M <= 20");
    std::vector<Eigen::VectorXd> vertices;
    Eigen::VectorXd w(length);
    for (std::uint32_t mask = 0; mask < (1u << length); ++mask) {
        for (int i = 0; i < length; ++i) w[i] = (mask >> i) & 1u ? 1.0 : 0.0;
        if (shift_count({w.data(), static_cast<std::size_t>(length)}) <= budget.max_shifts) vertices.push_back(w);
    }
    return vertices;
}

std::optional<Separation> separate(std::span<const double> input, SwitchingBudget budget) {
    check_budget(budget);
    const std::vector<double> w = clipped(input);
    const int length = static_cast<int>(w.size());
    const int sigma = budget.max_shifts;

    // States 0..sigma: exactly that many terms taken. sigma+1 / sigma+2: more
    // than sigma terms, with an even / odd count.
    const int states = sigma + 3;
    auto parity = [&](int s) { return s <= sigma ? s % 2 : s - sigma - 1; };
    auto successor = [&](int s) {
        if (s < sigma) return s + 1;
        const int next_parity = s == sigma ? (sigma + 1) % 2 : 1 - parity(s);
        return sigma + 1 + next_parity;
    };
    const int accepting = sigma + 1 + (sigma + 1) % 2;

    constexpr double none = -std::numeric_limits<double>::infinity();
    std::vector<double> best(states, none);
    best[0] = 0.0;
    // from[p * states + s]: predecessor state if position p was taken into s, else -1.
    std::vector<int> from(static_cast<std::size_t>(std::max(length, 1)) * states, -1);

    for (int p = 1; p < length; ++p) {
        std::vector<double> next = best;
        for (int s = 0; s < states; ++s) {
            if (best[s] == none) continue;
            const int t = successor(s);
            const double value = best[s] + (parity(s) == 0 ? w[p] : -w[p]);
            if (value > next[t]) {
                next[t] = value;
                from[p * states + t] = s;
            }
        }
        best = std::move(next);
    }

    const double rhs = budget.alternating_rhs();
    if (best[accepting] == none || !(best[accepting] - rhs > 0.0)) return std::nullopt;

    std::vector<int> support;
    int s = accepting;
    for (int p = length - 1; p >= 1; --p) {
        const int prev = from[p * states + s];
        if (prev >= 0) {
            support.push_back(p);
            s = prev;
        }
    }
    std::reverse(support.begin(), support.end());
    return make_separation(length, std::move(support), best[accepting], rhs);
}

std::optional<Separation> separate(const Eigen::VectorXd& w, SwitchingBudget budget) {
    return separate(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())), budget);
}

std::optional<Separation> separate_bruteforce(std::span<const double> input, SwitchingBudget budget) {
    check_budget(budget);
    const std::vector<double> w = clipped(input);
    const int length = static_cast<int>(w.size());
    if (length > 18) throw std::invalid_argument("brute-force separation supports M <= 18");
    const int sigma = budget.max_shifts;
    const int free_positions = std::max(length - 1, 0);

    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < (1u << free_positions); ++mask) {
        const int m = std::popcount(mask);
        if (m <= sigma || (m - sigma) % 2 == 0) continue;
        double value = 0.0;
        int j = 0;
        for (int b = 0; b < free_positions; ++b) {
            if ((mask >> b) & 1u) value += (j++ % 2 == 0) ? w[b + 1] : -w[b + 1];
        }
        if (value > best) {
            best = value;
            best_mask = mask;
        }
    }
    const double rhs = budget.alternating_rhs();
    if (best_mask == 0 || !(best - rhs > 0.0)) return std::nullopt;
    std::vector<int> support;
    for (int b = 0; b < free_positions; ++b) {
        if ((best_mask >> b) & 1u) support.push_back(b + 1);
    }
    return make_separation(length, std::move(support), best, rhs);
}

std::optional<SwitchSeparation> separate_switches(const Eigen::VectorXd& projected, int switches,
                                                  SwitchingBudget budget) {
    if (switches < 1 || projected.size() % switches != 0) {
        throw std::invalid_argument("projected vector does not split evenly across switches");
    }
    const int length = static_cast<int>(projected.size()) / switches;
    std::optional<SwitchSeparation> best;
    for (int j = 0; j < switches; ++j) {
        const Eigen::VectorXd block = projected.segment(j * length, length);
        auto sep = separate(block, budget);
        if (!sep) continue;
        if (!best || sep->violation > best->separation.violation) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(projected.size());
            full.segment(j * length, length) = sep->cut.coefficients;
            for (int& i : sep->cut.support) i += j * length;
            sep->cut.coefficients = std::move(full);
            best = SwitchSeparation{std::move(*sep), j};
        }
    }
    return best;
}

double max_violation(const Eigen::VectorXd& projected, int switches, SwitchingBudget budget) {
    const auto sep = separate_switches(projected, switches, budget);
    return sep ? sep->separation.violation : 0.0;
}

}  // namespace switchocp
