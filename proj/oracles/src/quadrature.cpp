#include "switchocp_oracles/quadrature.hpp"

#include <array>
#include <cmath>

namespace switchocp::oracle {

std::span<const QuadraturePoint> dunavant_degree5() {
    static const std::array<QuadraturePoint, 7> rule = [] {
        const double r = std::sqrt(15.0);
        const double a1 = (6.0 - r) / 21.0, a2 = (6.0 + r) / 21.0;
        const double w1 = (155.0 - r) / 2400.0, w2 = (155.0 + r) / 2400.0;
        return std::array<QuadraturePoint, 7>{{
            {1.0 / 3.0, 1.0 / 3.0, 9.0 / 80.0},
            {a1, a1, w1}, {1.0 - 2.0 * a1, a1, w1}, {a1, 1.0 - 2.0 * a1, w1},
            {a2, a2, w2}, {1.0 - 2.0 * a2, a2, w2}, {a2, 1.0 - 2.0 * a2, w2},
        }};
    }();
    return rule;
}

namespace {

template <class Visit>
void for_each_point(const SpatialMesh& mesh, const ScalarField& f, Visit visit) {
    const auto nodes = mesh.nodes();
    for (const auto& tri : mesh.triangles()) {
        const Point a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
        const double jac = std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
        for (const auto& q : dunavant_degree5()) {
            const double x = a.x + q.xi * (b.x - a.x) + q.eta * (c.x - a.x);
            const double y = a.y + q.xi * (b.y - a.y) + q.eta * (c.y - a.y);
            const std::array<double, 3> phi{1.0 - q.xi - q.eta, q.xi, q.eta};
            visit(tri, phi, q.weight * jac * f(x, y));
        }
    }
}

}  // namespace

double integrate_degree5(const SpatialMesh& mesh, const ScalarField& f) {
    double sum = 0.0;
    for_each_point(mesh, f, [&](const auto&, const auto&, double v) { sum += v; });
    return sum;
}

Eigen::VectorXd load_vector_degree5(const SpatialMesh& mesh, const ScalarField& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.interior_count());
    for_each_point(mesh, f, [&](const std::array<int, 3>& tri, const std::array<double, 3>& phi, double v) {
        for (int k = 0; k < 3; ++k) {
            const int dof = mesh.interior_index(tri[k]);
            if (dof >= 0) out[dof] += phi[k] * v;
        }
    });
    return out;
}

}  // namespace switchocp::oracle
