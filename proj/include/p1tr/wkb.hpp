#ifndef P1TR_WKB_HPP
#define P1TR_WKB_HPP

#include <vector>

#include "p1tr/frame.hpp"
#include "p1tr/toprec.hpp"
#include "p1tr/types.hpp"

namespace p1tr {

// WKB phase coefficients S_m(x) of the operator
//
//   hbar^2 (d/dx)^2 - 2 hbar^2 (d/dt) - (4x^3 + 2tx + 2 hbar^2 dF/dt),
//
// with psi_pm = exp( sum_{m >= -1} (+-hbar)^m S_m(x) ).  The coefficients
// pull the slot primitives of the correlators back through the Abel map
// z(x) of the frame (the chart with z ~ -x^{-1/2} at large positive x, so
// wp'(z(x)) = +2x^{3/2}(1 + ...) there):
//
//   S_{-1}(x) = (4/5) x^{5/2} + t x^{1/2}
//               + int_inf^x ( y - 2 s^{3/2} - (t/2) s^{-1/2} ) ds,
//   S_0(x)    = -(1/4) log Q(x) + log( -theta11'(0|tau) / omega_A )
//               - log theta11( z(x)/omega_A | tau ),        Q = 4x^3+2tx+u,
//   S_m(x)    = sum over 2g-2+n = m, n >= 1 of (1/n!) times the n-fold
//               integral of w_{g,n} from 0 to z(x) in every slot.
//
// Branch conventions: x^{1/2}, x^{5/2} and log Q are principal, so S_{-1}
// carries an artificial cut along the negative real x-axis on top of the
// genuine branch points at the roots of Q; evaluation points must keep off
// that axis.  The regularizing integral runs from a large positive real
// anchor along the straight segment to x, detoured around the roots when the
// segment passes too close, with y continued along the path from its
// positive large-x branch.

// Regularized leading phase.  Throws PathCrossesCut for x on the negative
// real axis (or when the descent path cannot avoid it), BranchPointInput at
// a root of Q.
cplx s_minus1(cplx x, const EllipticFrame& fr);

// Subleading phase in its theta-function closed form, principal logs.
cplx s_zero(cplx x, const EllipticFrame& fr);

// S_m for m >= 1 by nested quadrature of the correlators along a common
// z-plane path from 0 to z(x); every slot integrand is holomorphic at 0 and
// the only poles sit at the half-period translates, which the path clears by
// the evaluator's published margin.  Budgeted through m = 2.
cplx s_higher(int m, cplx x, CorrelatorEvaluator& ev);

// Same value along a caller-supplied waypoint chain from 0 to z(x); slot
// integrals have no residues at their poles, so any chain that keeps the
// evaluator's clearance gives the same result.  Used to confirm path
// independence.
cplx s_higher_via(int m, cplx x, CorrelatorEvaluator& ev,
                  const std::vector<cplx>& z_waypoints);

// Residual of the phase recursion at order m >= 0:
//
//   sum_{m1+m2=m-1} S'_{m1} S'_{m2} + S''_{m-1} - 2 dS_{m-1}/dt - T_m,
//
// where T_m is the hbar^{m-1} coefficient of 2 dF/dt (zero for even m,
// 2 dF_{(m+1)/2}/dt for odd m).  Derivatives in x come from Cauchy rings of
// the S_m implementations above; dS_{-1}/dt enters through its closed form
// P(z(x)) and dS_0/dt, dF_1/dt through rings of frames rebuilt at nearby t.
// A value near zero confirms the coefficients solve the operator above
// order by order.  Budgeted through m = 1.
cplx riccati_residual(int m, cplx x, CorrelatorEvaluator& ev);

// Integral of dS_m over a closed A-period line in the z-chart, kept clear
// of the half periods and the lattice.  Equals 2 pi i nu at m = -1 (the
// cycle normalization of the frame) and vanishes for m >= 0, which is the
// statement that the exponentiated series gains only e^{+-2 pi i nu/hbar}
// around the cycle.  Budgeted through m = 1.
cplx a_cycle_monodromy(int m, CorrelatorEvaluator& ev);

// Bundle of the coefficients at one point, for the exponentiated series.
struct WkbCoefficients {
    cplx x;
    int order;             // highest m held
    std::vector<cplx> s;   // s[k] = S_{k-1}(x), k = 0 .. order+1

    cplx at(int m) const;  // S_m(x), InputError outside -1 .. order
};

// Compute S_{-1} .. S_order at x (order <= 2).
WkbCoefficients wkb_coefficients(cplx x, CorrelatorEvaluator& ev, int order);

// Truncated exponentiated series sum_{m} (+-hbar)^m S_m; psi_minus(c, h) is
// by construction identical to psi_plus(c, -h).
cplx psi_plus(const WkbCoefficients& c, cplx hbar);
cplx psi_minus(const WkbCoefficients& c, cplx hbar);

}  // namespace p1tr

#endif
