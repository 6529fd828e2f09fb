#pragma once

#include <switchocp/heat.hpp>
#include <switchocp/ssnewton.hpp>

#include <cstdint>
#include <memory>

namespace switchocp::oracle {

/// One switch on (0,1), y_d = S(u_target) for a random target in
/// [-1/2, 3/2]. With `cuts` > 0 the pool holds that many random
/// cuts on the control grid, each violated by the box-only minimizer.
struct TinyCase {
    TrackingProblem problem;
    CutPool pool;
};

TinyCase make_tiny_case(std::uint64_t seed, int nt, int cuts, double alpha = 1e-2, int nx = 5);

/// Random tracking problem with `switches` bump-shaped form functions
/// centred at different points.
TrackingProblem random_problem(std::uint64_t seed, int nx, int nt, int switches, double alpha, double horizon = 1.0);

}  // namespace switchocp::oracle
