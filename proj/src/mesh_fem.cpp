#include "switchocp/mesh_fem.hpp"

#include <cmath>
#include <stdexcept>

namespace switchocp {

SpatialMesh::SpatialMesh(int nodes_per_side) : n_(nodes_per_side) {
    if (n_ < 3) {
        throw std::invalid_argument("mesh needs at least 3 nodes per side");
    }
    const double h = spacing();
    nodes_.reserve(n_ * n_);
    interior_index_.assign(n_ * n_, -1);
    for (int iy = 0; iy < n_; ++iy) {
        for (int ix = 0; ix < n_; ++ix) {
            const int k = iy * n_ + ix;
            nodes_.push_back({ix == n_ - 1 ? 1.0 : ix * h, iy == n_ - 1 ? 1.0 : iy * h});
            if (ix > 0 && ix < n_ - 1 && iy > 0 && iy < n_ - 1) {
                interior_index_[k] = interior_count_++;
            }
        }
    }
    triangles_.reserve(2 * (n_ - 1) * (n_ - 1));
    for (int iy = 0; iy + 1 < n_; ++iy) {
        for (int ix = 0; ix + 1 < n_; ++ix) {
            const int a = iy * n_ + ix;
            const int b = a + 1;
            const int c = a + n_ + 1;
            const int d = a + n_;
            triangles_.push_back({a, b, c});
            triangles_.push_back({a, c, d});
        }
    }
}

double SpatialMesh::area(int t) const {
    const auto& tri = triangles_[t];
    const Point& p0 = nodes_[tri[0]];
    const Point& p1 = nodes_[tri[1]];
    const Point& p2 = nodes_[tri[2]];
    return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

std::span<const QuadraturePoint> triangle_rule_order3() {
    // Collapsed square [0,1]^2 -> triangle, xi = a, eta = b (1 - a), Jacobian (1 - a).
    // Three Gauss-Legendre points in a (integrand degree <= 4), two in b.
    static const std::vector<QuadraturePoint> rule = [] {
        const double ga[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
        const double wa[3] = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
        const double gb[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
        const double wb[2] = {0.5, 0.5};
        std::vector<QuadraturePoint> pts;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 2; ++j) {
                pts.push_back({ga[i], gb[j] * (1.0 - ga[i]), wa[i] * wb[j] * (1.0 - ga[i])});
            }
        }
        return pts;
    }();
    return rule;
}

namespace {

void check_mesh(const SpatialMesh& mesh) {
    for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
        if (!(mesh.area(t) > 0.0)) {
            throw std::invalid_argument("degenerate or inverted triangle in mesh");
        }
    }
}

int dof(const SpatialMesh& mesh, int node, Boundary boundary) {
    return boundary == Boundary::eliminate ? mesh.interior_index(node) : node;
}

int dof_count(const SpatialMesh& mesh, Boundary boundary) {
    return boundary == Boundary::eliminate ? mesh.interior_count() : mesh.node_count();
}

}  // namespace

FemOperators assemble(const SpatialMesh& mesh, Boundary boundary) {
    check_mesh(mesh);
    std::vector<Eigen::Triplet<double>> mass_entries;
    std::vector<Eigen::Triplet<double>> stiff_entries;
    mass_entries.reserve(9 * mesh.triangles().size());
    stiff_entries.reserve(9 * mesh.triangles().size());

    for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
        const auto& tri = mesh.triangles()[t];
        const double area = mesh.area(t);
        // Gradients of the barycentric coordinates.
        double bx[3], by[3];
        for (int k = 0; k < 3; ++k) {
            const Point& p1 = mesh.nodes()[tri[(k + 1) % 3]];
            const Point& p2 = mesh.nodes()[tri[(k + 2) % 3]];
            bx[k] = (p1.y - p2.y) / (2.0 * area);
            by[k] = (p2.x - p1.x) / (2.0 * area);
        }
        for (int a = 0; a < 3; ++a) {
            const int row = dof(mesh, tri[a], boundary);
            if (row < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int col = dof(mesh, tri[b], boundary);
                if (col < 0) continue;
                mass_entries.emplace_back(row, col, area / 12.0 * (a == b ? 2.0 : 1.0));
                stiff_entries.emplace_back(row, col, area * (bx[a] * bx[b] + by[a] * by[b]));
            }
        }
    }
    const int n = dof_count(mesh, boundary);
    FemOperators ops;
    ops.mass.resize(n, n);
    ops.stiffness.resize(n, n);
    ops.mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
    ops.stiffness.setFromTriplets(stiff_entries.begin(), stiff_entries.end());
    ops.mass.makeCompressed();
    ops.stiffness.makeCompressed();
    return ops;
}

Eigen::VectorXd load_vector(const SpatialMesh& mesh, const ScalarField& f, Boundary boundary) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(dof_count(mesh, boundary));
    const auto rule = triangle_rule_order3();
    for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
        const auto& tri = mesh.triangles()[t];
        const Point& p0 = mesh.nodes()[tri[0]];
        const Point& p1 = mesh.nodes()[tri[1]];
        const Point& p2 = mesh.nodes()[tri[2]];
        const double jac = 2.0 * mesh.area(t);
        for (const auto& q : rule) {
            const double l1 = q.xi, l2 = q.eta, l0 = 1.0 - q.xi - q.eta;
            const double x = l0 * p0.x + l1 * p1.x + l2 * p2.x;
            const double y = l0 * p0.y + l1 * p1.y + l2 * p2.y;
            const double fw = f(x, y) * q.weight * jac;
            const double phi[3] = {l0, l1, l2};
            for (int a = 0; a < 3; ++a) {
                const int row = dof(mesh, tri[a], boundary);
                if (row >= 0) load[row] += fw * phi[a];
            }
        }
    }
    return load;
}

double integrate(const SpatialMesh& mesh, const ScalarField& f) {
    return load_vector(mesh, f, Boundary::keep).sum();
}

Eigen::VectorXd interpolate(const SpatialMesh& mesh, const ScalarField& f, Boundary boundary) {
    Eigen::VectorXd v(dof_count(mesh, boundary));
    for (int k = 0; k < mesh.node_count(); ++k) {
        const int row = dof(mesh, k, boundary);
        if (row >= 0) v[row] = f(mesh.nodes()[k].x, mesh.nodes()[k].y);
    }
    return v;
}

}  // namespace switchocp
