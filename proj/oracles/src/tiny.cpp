#include "switchocp_oracles/tiny.hpp"

#include "switchocp_oracles/dense_kkt.hpp"

#include <switchocp/instancegen.hpp>

#include <cmath>
#include <random>

namespace switchocp::oracle {

TrackingProblem random_problem(std::uint64_t seed, int nx, int nt, int switches, double alpha, double horizon) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> centre(0.25, 0.75);
    std::uniform_real_distribution<double> target(-0.5, 1.5);

    SpatialMesh mesh(nx);
    std::vector<ScalarField> fields;
    fields.push_back(quadratic_bump);
    for (int j = 1; j < switches; ++j) {
        const double cx = centre(rng), cy = centre(rng);
        fields.push_back([cx, cy](double x, double y) {
            return std::exp(-8.0 * ((x - cx) * (x - cx) + (y - cy) * (y - cy)));
        });
    }
    FormFunctions forms = FormFunctions::from_fields(mesh, fields);
    auto ops = std::make_shared<const HeatOperators>(std::move(mesh), TimePartition::uniform(horizon, nt),
                                                     std::move(forms));
    Control u(ops->grid(), switches, 0.0);
    for (int i = 0; i < u.dimension(); ++i) u.values()[i] = target(rng);
    StateTrajectory desired = ops->solve_forward(u);
    return make_tracking_problem(ops, std::move(desired), Eigen::VectorXd::Zero(ops->dofs()), alpha);
}

TinyCase make_tiny_case(std::uint64_t seed, int nt, int cuts, double alpha, int nx) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    TinyCase tc{random_problem(seed, nx, nt, 1, alpha), CutPool(TimePartition::uniform(1.0, nt), 1)};
    const Projection projection(tc.problem.ops->grid(), 1);

    for (int k = 0; k < cuts; ++k) {
        const OracleSolution current = solve_by_enumeration(dense_qp(tc.problem, tc.pool));
        for (int attempt = 0; attempt < 100; ++attempt) {
            CuttingPlane plane;
            plane.coefficients = Eigen::VectorXd(nt);
            for (int i = 0; i < nt; ++i) plane.coefficients[i] = coeff(rng);
            const Eigen::VectorXd w = projection.project(Control(tc.problem.ops->grid(), 1, current.u));
            const double at_solution = plane.coefficients.dot(w);
            const double lowest = plane.coefficients.cwiseMin(0.0).sum();
            if (at_solution - lowest < 1e-2) continue;
            plane.rhs = at_solution - 0.5 * (at_solution - lowest);
            tc.pool.add(projection, std::move(plane));
            break;
        }
    }
    return tc;
}

}  // namespace switchocp::oracle
