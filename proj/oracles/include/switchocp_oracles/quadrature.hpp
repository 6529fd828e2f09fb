#pragma once

#include <switchocp/mesh_fem.hpp>

#include <Eigen/Dense>

#include <span>

namespace switchocp::oracle {

/// 7-point Dunavant rule on the reference triangle, exact for degree 5.
/// Weights sum to 1/2.
std::span<const QuadraturePoint> dunavant_degree5();

double integrate_degree5(const SpatialMesh& mesh, const ScalarField& f);

/// int f phi_i on interior nodes, by the degree-5 rule.
Eigen::VectorXd load_vector_degree5(const SpatialMesh& mesh, const ScalarField& f);

}  // namespace switchocp::oracle
