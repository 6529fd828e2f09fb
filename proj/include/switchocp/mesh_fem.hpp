#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace switchocp {

using SparseOperator = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(double, double)>;

struct Point {
    double x;
    double y;
};

/// Structured right-angled triangulation of the unit square with n_x nodes
/// per side. Each square cell is split along its (x0,y0)-(x1,y1) diagonal.
class SpatialMesh {
public:
    explicit SpatialMesh(int nodes_per_side);

    int nodes_per_side() const { return n_; }
    double spacing() const { return 1.0 / (n_ - 1); }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int interior_count() const { return interior_count_; }

    std::span<const Point> nodes() const { return nodes_; }
    std::span<const std::array<int, 3>> triangles() const { return triangles_; }

    bool is_boundary(int node) const { return interior_index_[node] < 0; }
    /// Index of the node among interior unknowns, or -1 on the boundary.
    int interior_index(int node) const { return interior_index_[node]; }

    /// Signed area of triangle t (positive for counter-clockwise orientation).
    double area(int t) const;

private:
    int n_;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<int> interior_index_;
    int interior_count_ = 0;
};

struct QuadraturePoint {
    double xi;
    double eta;
    double weight;  // on the reference triangle, weights sum to 1/2
};

/// Conical-product Gauss-Legendre rule on the reference triangle, exact for
/// polynomials of total degree 3.
std::span<const QuadraturePoint> triangle_rule_order3();

enum class Boundary { eliminate, keep };

struct FemOperators {
    SparseOperator mass;
    SparseOperator stiffness;
};

/// P1 mass and stiffness matrices. With Boundary::eliminate the rows and
/// columns of Dirichlet nodes are removed (homogeneous Dirichlet data).
FemOperators assemble(const SpatialMesh& mesh, Boundary boundary = Boundary::eliminate);

/// Entries int_Omega f phi_i dx, by the order-3 rule on every triangle.
Eigen::VectorXd load_vector(const SpatialMesh& mesh, const ScalarField& f,
                            Boundary boundary = Boundary::eliminate);

/// int_Omega f dx by the order-3 rule.
double integrate(const SpatialMesh& mesh, const ScalarField& f);

/// Nodal values of f.
Eigen::VectorXd interpolate(const SpatialMesh& mesh, const ScalarField& f,
                            Boundary boundary = Boundary::eliminate);

}  // namespace switchocp
