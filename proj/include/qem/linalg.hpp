#pragma once

#include <vector>

namespace qem {

// Dense helpers for the small (n <= 8) symmetric matrices the charts produce.

// Gauss-Jordan inverse with partial pivoting; throws SingularMetric when the
// condition estimate exceeds 1e12.
std::vector<double> invert_matrix(const std::vector<double>& m, int n);

// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
std::vector<double> sym_eigenvalues(std::vector<double> m, int n);

// Eigenvalues of A relative to an SPD metric G (solves det(A - x G) = 0).
std::vector<double> generalized_sym_eigenvalues(const std::vector<double>& a,
                                                const std::vector<double>& g, int n);

bool is_positive_definite(const std::vector<double>& m, int n);

} // namespace qem
