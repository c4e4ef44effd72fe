#pragma once

#include <cstdint>
#include <vector>

#include "drmgfe/oracle/oracle.hpp"

namespace drmgfe::oracle {

// Property checks that pair an implementation route with an independent one.
// Each returns one pass/fail line; the fixed seeds keep them deterministic.

/// Sparse P1 pencil vs the closed-form spectrum and a dense eigensolve, n in {4, 8, 16}.
OracleResult check_fem_eigenvalues();

/// ||S v||_M <= ||v||_M (1 + 1e-10) for random v and alpha in (0, T].
OracleResult check_resolvent_contractivity(std::size_t draws = 1000, std::uint64_t seed = 7);

/// Repeated resolvent application never increases the mass norm.
OracleResult check_resolvent_powers(std::uint64_t seed = 11);

/// Projection reproduces members of V_h to 1e-10.
OracleResult check_projection_idempotence();

/// Empirical KL covariance at 3 standard errors (1D, J = 4, t = 0.1).
OracleResult check_covariance(std::size_t samples = 10000);

/// The same check with doubled eigenvalues as hypothesis; passes iff rejected.
OracleResult check_covariance_negative_control(std::size_t samples = 10000);

/// Nodal Milstein correction vs the explicit double sum for J = 1, 2, 3, to 1e-12.
OracleResult check_milstein_double_sum();

/// Coarse increments equal the sum of their fine sub-increments exactly.
OracleResult check_path_additivity();

/// DRMGFE with xi forced to zero vs the semi-implicit Milstein baseline on
/// random paths; largest final-state ||.||_M difference, tolerance 1e-9.
OracleResult check_degeneration(std::size_t paths = 100);

/// Deterministic linear heat (delta = 0, F = 0) against the exact solution:
/// least-squares slope of log error in dt, accepted in [0.95, 1.05].
OracleResult check_deterministic_time_slope();

/// As above in h, accepted in [1.9, 2.1].
OracleResult check_deterministic_space_slope();

/// Two runs of a small study with the same seed give identical reports.
OracleResult check_study_reproducibility();

std::vector<OracleResult> run_validation_suite();

}  // namespace drmgfe::oracle
