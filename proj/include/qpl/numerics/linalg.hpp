#pragma once

#include "qpl/numerics/precision.hpp"

#include <vector>

namespace qpl {

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws
/// DomainError on an exactly singular pivot.
std::vector<Real> solve_linear(std::vector<std::vector<Real>> A, std::vector<Real> b);

/// Weights w_j with f'(x) ~ sum_j w_j f(x + offsets[j]), exact for polynomials
/// of degree offsets.size() - 1 (Fornberg's recursion, first derivative only).
std::vector<Real> fd_weights_first_derivative(const std::vector<Real>& offsets);

}  // namespace qpl
