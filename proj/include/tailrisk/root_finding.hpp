#pragma once

#include <functional>

namespace tailrisk {

// Brent's method on [lo, hi]. Requires f(lo) and f(hi) to be finite with
// opposite signs (an exact zero at either endpoint is returned directly).
// Stops when the bracket shrinks below rel_tol * |x| + abs_tol.
// Throws std::domain_error when the bracket does not straddle a root and
// std::runtime_error if max_iter is exhausted.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-12, double abs_tol = 1e-300, int max_iter = 300);

}  // namespace tailrisk
