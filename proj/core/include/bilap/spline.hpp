#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bilap {

// Interpolating cubic spline on a uniform grid with spacing h > 0 through the
// values v[0..n].  Returns one coefficient quadruple per interval: on piece j
// the spline is c0 + c1*t + c2*t^2 + c3*t^3 with t = s - s_j in [0, h].
//
// End conditions are not-a-knot (third derivative continuous across the first
// and last interior knots); for fewer than four points the natural conditions
// are used instead.  Not-a-knot reproduces any global cubic exactly, which
// keeps the interpolation error O(h^4) uniformly up to the ends — natural
// conditions would inject an O(h^2) defect in the last pieces.
std::vector<std::array<double, 4>> spline_cubic_coeffs(const std::vector<double>& v, double h);

}  // namespace bilap
