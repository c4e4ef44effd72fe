#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>

#include "drmgfe/fem/mesh.hpp"

namespace drmgfe::fem {

/// Nodal P1 coefficients over the interior dofs of one FemSpace.
using StateVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(Point)>;

/// Relative residual and iteration cap for the conjugate-gradient solves.
inline constexpr double kResolventTolerance = 1e-10;
inline constexpr double kProjectionTolerance = 1e-12;
inline constexpr int kIterationsPerDof = 10;

/// P1 Lagrange space with homogeneous Dirichlet conditions on a uniform mesh.
///
/// Holds the interior-dof mass matrix M and stiffness matrix K. The discrete
/// Laplacian is A_h = M^{-1} K, and the resolvent (I + alpha A_h)^{-1} P_h acts
/// on a member v of the space by solving (M + alpha K) x = M v.
///
/// Immutable after construction; every const member is reentrant.
class FemSpace {
 public:
  explicit FemSpace(Mesh mesh);

  const Mesh& mesh() const noexcept { return mesh_; }
  int dim() const noexcept { return mesh_.dim(); }
  double h() const noexcept { return mesh_.h(); }
  std::size_t dof_count() const noexcept { return mesh_.dof_count(); }

  const SparseMatrix& mass() const noexcept { return mass_; }
  const SparseMatrix& stiffness() const noexcept { return stiffness_; }

  /// Nodal interpolant of f.
  StateVector interpolate(const ScalarField& f) const;

  /// L2-orthogonal projection. The load vector uses a degree-2 quadrature per
  /// element, so projection is exact on members of the space.
  StateVector l2_project(const ScalarField& f) const;

  /// Applies the resolvent: solves (M + alpha K) x = M v. alpha == 0 returns v.
  /// Throws SolverError if CG misses kResolventTolerance within the cap.
  StateVector resolvent_solve(double alpha, const StateVector& v) const;

  /// Solves (M + alpha K) x = rhs for a right-hand side already in mass form.
  StateVector solve_shifted(double alpha, const StateVector& rhs, double tolerance = kResolventTolerance) const;

  /// sqrt(v^T M v), the L2(D) norm of the P1 function with coefficients v.
  double mass_norm(const StateVector& v) const;

 private:
  void check_size(const StateVector& v) const;

  Mesh mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
};

/// Sparse Cholesky factorization of M + alpha K for a fixed alpha > 0.
///
/// Keeps a non-owning pointer to the space, which must outlive it.
class CachedResolvent {
 public:
  CachedResolvent(const FemSpace& space, double alpha);
  ~CachedResolvent();
  CachedResolvent(CachedResolvent&&) noexcept;
  CachedResolvent& operator=(CachedResolvent&&) noexcept;

  double alpha() const noexcept { return alpha_; }
  const FemSpace& space() const noexcept { return *space_; }

  StateVector solve(const StateVector& rhs) const;
  StateVector apply(const StateVector& v) const;

 private:
  struct Factor;
  const FemSpace* space_;
  double alpha_;
  std::unique_ptr<Factor> factor_;
};

/// Copies nodal values of a fine-space vector onto the nodes of a coarse
/// space. The fine mesh must be a power-of-two refinement of the coarse one.
StateVector restrict_to_coarse(const FemSpace& fine, const FemSpace& coarse, const StateVector& v_fine);

/// Coefficients on the fine space of the same P1 function (exact embedding;
/// the meshes are nested). Same refinement requirement as restrict_to_coarse.
StateVector prolongate_to_fine(const FemSpace& coarse, const FemSpace& fine, const StateVector& v_coarse);

}  // namespace drmgfe::fem
