#include "drmgfe/fem/fem_space.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "drmgfe/errors.hpp"

namespace drmgfe::fem {

namespace {

using Triplet = Eigen::Triplet<double>;

struct ElementMatrices {
  std::array<std::array<double, 3>, 3> mass{};
  std::array<std::array<double, 3>, 3> stiffness{};
};

ElementMatrices interval_matrices(double h) {
  ElementMatrices e;
  e.mass[0] = {h / 3.0, h / 6.0, 0.0};
  e.mass[1] = {h / 6.0, h / 3.0, 0.0};
  e.stiffness[0] = {1.0 / h, -1.0 / h, 0.0};
  e.stiffness[1] = {-1.0 / h, 1.0 / h, 0.0};
  return e;
}

// Barycentric gradients of a P1 triangle: grad(lambda_k) = (y_{k+1} - y_{k+2}, x_{k+2} - x_{k+1}) / det.
ElementMatrices triangle_matrices(const std::array<Point, 3>& p) {
  const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
  const double area = 0.5 * std::abs(det);
  std::array<double, 3> gx{}, gy{};
  for (int k = 0; k < 3; ++k) {
    const auto& a = p[(k + 1) % 3];
    const auto& b = p[(k + 2) % 3];
    gx[k] = (a.y - b.y) / det;
    gy[k] = (b.x - a.x) / det;
  }
  ElementMatrices e;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      e.mass[r][c] = area * (r == c ? 1.0 / 6.0 : 1.0 / 12.0);
      e.stiffness[r][c] = area * (gx[r] * gx[c] + gy[r] * gy[c]);
    }
  }
  return e;
}

double squared_norm(const StateVector& v) { return v.squaredNorm(); }

}  // namespace

FemSpace::FemSpace(Mesh mesh) : mesh_(std::move(mesh)) {
  const auto n = static_cast<Eigen::Index>(mesh_.dof_count());
  const auto dofs = mesh_.dof_of_node();
  const auto nodes = mesh_.nodes();
  const std::size_t local = mesh_.nodes_per_element();

  std::vector<Triplet> mass_entries;
  std::vector<Triplet> stiffness_entries;
  mass_entries.reserve(mesh_.element_count() * local * local);
  stiffness_entries.reserve(mass_entries.capacity());

  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const auto vertices = mesh_.element(e);
    ElementMatrices em;
    if (mesh_.dim() == 1) {
      em = interval_matrices(nodes[vertices[1]].x - nodes[vertices[0]].x);
    } else {
      em = triangle_matrices({nodes[vertices[0]], nodes[vertices[1]], nodes[vertices[2]]});
    }
    for (std::size_t r = 0; r < local; ++r) {
      const auto row = dofs[vertices[r]];
      if (row == Mesh::kBoundary) continue;
      for (std::size_t c = 0; c < local; ++c) {
        const auto col = dofs[vertices[c]];
        if (col == Mesh::kBoundary) continue;
        mass_entries.emplace_back(row, col, em.mass[r][c]);
        stiffness_entries.emplace_back(row, col, em.stiffness[r][c]);
      }
    }
  }

  mass_.resize(n, n);
  stiffness_.resize(n, n);
  mass_.setFromTriplets(mass_entries.begin(), mass_entries.end());
  stiffness_.setFromTriplets(stiffness_entries.begin(), stiffness_entries.end());
  mass_.makeCompressed();
  stiffness_.makeCompressed();
}

void FemSpace::check_size(const StateVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dof_count()) {
    throw std::invalid_argument("state vector has " + std::to_string(v.size()) + " entries, space has " +
                                std::to_string(dof_count()) + " dofs");
  }
}

StateVector FemSpace::interpolate(const ScalarField& f) const {
  StateVector v(static_cast<Eigen::Index>(dof_count()));
  for (std::size_t i = 0; i < dof_count(); ++i) v[static_cast<Eigen::Index>(i)] = f(mesh_.dof_point(i));
  return v;
}

StateVector FemSpace::l2_project(const ScalarField& f) const {
  StateVector load = StateVector::Zero(static_cast<Eigen::Index>(dof_count()));
  const auto dofs = mesh_.dof_of_node();
  const auto nodes = mesh_.nodes();

  if (mesh_.dim() == 1) {
    // two-point Gauss-Legendre on each interval
    const double g = 0.5 / std::sqrt(3.0);
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      const auto v = mesh_.element(e);
      const double x0 = nodes[v[0]].x;
      const double len = nodes[v[1]].x - x0;
      for (double s : {0.5 - g, 0.5 + g}) {
        const double fx = f({x0 + s * len, 0.0}) * 0.5 * len;
        if (dofs[v[0]] != Mesh::kBoundary) load[dofs[v[0]]] += fx * (1.0 - s);
        if (dofs[v[1]] != Mesh::kBoundary) load[dofs[v[1]]] += fx * s;
      }
    }
  } else {
    // three-point interior rule, exact for quadratics
    static constexpr std::array<std::array<double, 3>, 3> kBary = {{
        {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
        {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
    }};
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      const auto v = mesh_.element(e);
      const Point& a = nodes[v[0]];
      const Point& b = nodes[v[1]];
      const Point& c = nodes[v[2]];
      const double area = 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
      for (const auto& l : kBary) {
        const Point q{l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
        const double fq = f(q) * area / 3.0;
        for (int k = 0; k < 3; ++k) {
          if (dofs[v[k]] != Mesh::kBoundary) load[dofs[v[k]]] += fq * l[k];
        }
      }
    }
  }
  if (load.squaredNorm() == 0.0) return load;
  return solve_shifted(0.0, load, kProjectionTolerance);
}

StateVector FemSpace::resolvent_solve(double alpha, const StateVector& v) const {
  check_size(v);
  if (alpha < 0.0) throw std::invalid_argument("resolvent parameter must be nonnegative");
  if (alpha == 0.0) return v;
  return solve_shifted(alpha, mass_ * v);
}

StateVector FemSpace::solve_shifted(double alpha, const StateVector& rhs, double tolerance) const {
  check_size(rhs);
  if (squared_norm(rhs) == 0.0) return StateVector::Zero(rhs.size());

  SparseMatrix system = mass_;
  if (alpha != 0.0) system += alpha * stiffness_;

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(tolerance);
  cg.setMaxIterations(kIterationsPerDof * static_cast<Eigen::Index>(dof_count()));
  cg.compute(system);
  StateVector x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverError("conjugate gradients stopped after " + std::to_string(cg.iterations()) +
                      " iterations with relative residual " + std::to_string(cg.error()) +
                      " (alpha = " + std::to_string(alpha) + ")");
  }
  return x;
}

double FemSpace::mass_norm(const StateVector& v) const {
  check_size(v);
  return std::sqrt(std::max(0.0, v.dot(mass_ * v)));
}

struct CachedResolvent::Factor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

CachedResolvent::CachedResolvent(const FemSpace& space, double alpha)
    : space_(&space), alpha_(alpha), factor_(std::make_unique<Factor>()) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cached resolvent needs alpha > 0");
  SparseMatrix system = space.mass() + alpha * space.stiffness();
  factor_->ldlt.compute(system);
  if (factor_->ldlt.info() != Eigen::Success) {
    throw SolverError("sparse LDLT factorization of M + alpha K failed");
  }
}

CachedResolvent::~CachedResolvent() = default;
CachedResolvent::CachedResolvent(CachedResolvent&&) noexcept = default;
CachedResolvent& CachedResolvent::operator=(CachedResolvent&&) noexcept = default;

StateVector CachedResolvent::solve(const StateVector& rhs) const {
  if (static_cast<std::size_t>(rhs.size()) != space_->dof_count()) {
    throw std::invalid_argument("right-hand side size does not match the cached space");
  }
  return factor_->ldlt.solve(rhs);
}

StateVector CachedResolvent::apply(const StateVector& v) const { return solve(space_->mass() * v); }

namespace {

int nesting_ratio(const Mesh& fm, const Mesh& cm) {
  if (fm.dim() != cm.dim()) throw std::invalid_argument("transfer between meshes of different dimension");
  const int nf = fm.cells_per_side();
  const int nc = cm.cells_per_side();
  const int ratio = nf / nc;
  if (nf % nc != 0 || (ratio & (ratio - 1)) != 0) {
    throw std::invalid_argument("fine mesh (n=" + std::to_string(nf) +
                                ") is not a power-of-two refinement of the coarse mesh (n=" + std::to_string(nc) + ")");
  }
  return ratio;
}

}  // namespace

StateVector restrict_to_coarse(const FemSpace& fine, const FemSpace& coarse, const StateVector& v_fine) {
  const Mesh& fm = fine.mesh();
  const Mesh& cm = coarse.mesh();
  const int ratio = nesting_ratio(fm, cm);
  const int nc = cm.cells_per_side();
  if (static_cast<std::size_t>(v_fine.size()) != fine.dof_count()) {
    throw std::invalid_argument("fine vector size does not match the fine space");
  }

  StateVector out(static_cast<Eigen::Index>(coarse.dof_count()));
  const auto fine_dofs = fm.dof_of_node();
  const int rows = cm.dim() == 1 ? 1 : nc - 1;
  Eigen::Index k = 0;
  for (int j = 0; j < rows; ++j) {
    for (int i = 1; i < nc; ++i) {
      const int jj = cm.dim() == 1 ? 0 : (j + 1) * ratio;
      out[k++] = v_fine[fine_dofs[fm.node_index(i * ratio, jj)]];
    }
  }
  return out;
}

StateVector prolongate_to_fine(const FemSpace& coarse, const FemSpace& fine, const StateVector& v_coarse) {
  const Mesh& fm = fine.mesh();
  const Mesh& cm = coarse.mesh();
  const int ratio = nesting_ratio(fm, cm);
  if (static_cast<std::size_t>(v_coarse.size()) != coarse.dof_count()) {
    throw std::invalid_argument("coarse vector size does not match the coarse space");
  }
  const auto coarse_dofs = cm.dof_of_node();
  auto nodal = [&](int i, int j) {
    const auto d = coarse_dofs[cm.node_index(i, j)];
    return d == Mesh::kBoundary ? 0.0 : v_coarse[d];
  };

  StateVector out(static_cast<Eigen::Index>(fine.dof_count()));
  for (std::size_t d = 0; d < fine.dof_count(); ++d) {
    const auto node = fm.node_of_dof()[d];
    const int nf1 = fm.cells_per_side() + 1;
    const int fi = static_cast<int>(node) % nf1;
    const int fj = static_cast<int>(node) / nf1;
    const int i = fi / ratio;
    const double s = static_cast<double>(fi % ratio) / ratio;
    if (fm.dim() == 1) {
      out[static_cast<Eigen::Index>(d)] = s == 0.0 ? nodal(i, 0) : (1.0 - s) * nodal(i, 0) + s * nodal(i + 1, 0);
      continue;
    }
    const int j = fj / ratio;
    const double t = static_cast<double>(fj % ratio) / ratio;
    // cells split along the (+1,+1) diagonal: (a,b,c) below it, (a,c,d) above
    out[static_cast<Eigen::Index>(d)] =
        s >= t ? (1.0 - s) * nodal(i, j) + (s - t) * nodal(i + 1, j) + t * nodal(i + 1, j + 1)
               : (1.0 - t) * nodal(i, j) + s * nodal(i + 1, j + 1) + (t - s) * nodal(i, j + 1);
  }
  return out;
}

}  // namespace drmgfe::fem
