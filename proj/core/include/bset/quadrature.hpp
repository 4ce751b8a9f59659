#pragma once

#include <functional>

namespace bset {

// Composite 15-point Gauss-Legendre over [lo, hi], panel count doubled until
// two successive refinements agree to rel_tol (or max_panels is reached).
double integrate(const std::function<double(double)>& g, double lo, double hi,
                 double rel_tol = 1e-12, int initial_panels = 8,
                 int max_panels = 1 << 16);

}  // namespace bset
