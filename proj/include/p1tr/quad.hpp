#ifndef P1TR_QUAD_HPP
#define P1TR_QUAD_HPP

#include <functional>
#include <vector>

#include "p1tr/types.hpp"

namespace p1tr {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int start_nodes = 64;
    int max_nodes = 1 << 16;
};

struct CircleQuad {
    cplx value;      // (1/2pi i) * contour integral of f dx, counterclockwise
    int nodes;       // node count of the accepted pass
    double change;   // |difference| between the last two passes
};

// Trapezoidal rule on the circle |x - center| = radius, node count doubled
// until two passes agree.  The integrand factory is invoked once per pass and
// the returned callable is swept in increasing angle order, so it may carry
// state (branch tracking).  Geometric convergence for integrands analytic in
// a neighbourhood of the circle.
CircleQuad circle_mean(const std::function<std::function<cplx(cplx)>()>& make_f,
                       cplx center, double radius, const QuadOptions& opt = {});

// Same, for a plain stateless integrand.
CircleQuad circle_mean(const std::function<cplx(cplx)>& f, cplx center, double radius,
                       const QuadOptions& opt = {});

// Trapezoidal rule along the straight segment from a to a+shift for an
// integrand that is periodic with period `shift` (integral of f dz).
CircleQuad period_line_mean(const std::function<cplx(cplx)>& f, cplx a, cplx shift,
                            const QuadOptions& opt = {});

// Adaptive Gauss-Kronrod 15(7) on the straight segment [a,b].
cplx segment_integral(const std::function<cplx(cplx)>& f, cplx a, cplx b,
                      double rel_tol = 1e-10, double abs_tol = 1e-13, int max_depth = 28);

// Integral along a polyline through the given waypoints.
cplx path_integral(const std::function<cplx(cplx)>& f, const std::vector<cplx>& waypoints,
                   double rel_tol = 1e-10, double abs_tol = 1e-13);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1], cached.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

// Fixed-order Gauss-Legendre approximation on [a,b].
cplx segment_gauss(const std::function<cplx(cplx)>& f, cplx a, cplx b, int n);

// Derivative of an analytic function by the Cauchy integral over a small
// circle: f^(k)(z0) = k!/(2pi i) * contour integral of f(z)/(z-z0)^{k+1} dz.
// Trapezoidal nodes on the circle; exact up to the discretisation error,
// which decays geometrically in the node count.
std::vector<cplx> cauchy_derivatives(const std::function<cplx(cplx)>& f, cplx z0,
                                     double radius, int max_order, int nodes = 32);

// Same Cauchy derivative from precomputed samples f(z0 + r e^{2 pi i k/n}),
// k = 0..n-1 in increasing angle order:
//   f^(m)(z0) = m!/(n r^m) * sum_k f_k e^{-2 pi i m k/n}.
cplx ring_derivative(const std::vector<cplx>& ring_values, double radius, int order);

// Removes branch jumps from consecutive samples of a log-type quantity: when
// neighbours differ by more than half a quantum in imaginary part the later
// value is shifted by a multiple of i*quantum.  Also reconciles the wrap-around
// from the last sample back to the first; a wrap mismatch means the quantity
// winds around a branch point and the ring is unusable, reported as
// NumericalError.
void unwind_ring(std::vector<cplx>& vals, double quantum);

}  // namespace p1tr

#endif
