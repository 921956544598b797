#pragma once

#include <vector>

#include "renorm/rational.hpp"

namespace renorm {

/// Roots of sum_i c[i] z^i. Zero leading coefficients are stripped; zero
/// low-order coefficients give exact roots at 0. Degrees up to 64 use the
/// eigenvalues of a balanced companion matrix, larger degrees the
/// Aberth-Ehrlich iteration; all roots are Newton-polished.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& c);

std::vector<Complex> roots_companion(const std::vector<Complex>& c);
std::vector<Complex> roots_aberth(const std::vector<Complex>& c);

/// Newton correction p(z)/p'(z), stable for large |z|.
Complex newton_correction(const std::vector<Complex>& c, Complex z);

/// Horner evaluation, switching to the reversed polynomial for |z| > 1.
Complex poly_eval(const std::vector<Complex>& c, Complex z);

}  // namespace renorm
