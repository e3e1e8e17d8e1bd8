#pragma once

namespace starkband {

// Bessel function of the first kind J_n(x) for integer order.
//
// Uses the ascending power series in extended precision for |x| <= 10 and
// |n| <= 200, which covers every argument the two-band model produces
// (x = t/F is well below one). Outside that range it defers to
// std::cyl_bessel_j.
double bessel_j(int n, double x);

}  // namespace starkband
