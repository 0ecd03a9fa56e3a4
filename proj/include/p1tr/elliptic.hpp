#ifndef P1TR_ELLIPTIC_HPP
#define P1TR_ELLIPTIC_HPP

#include <array>
#include <functional>
#include <vector>

#include "p1tr/quad.hpp"
#include "p1tr/theta.hpp"
#include "p1tr/types.hpp"

namespace p1tr {

// The family of genus-one curves  y^2 = 4x^3 + 2tx + u.
struct Cubic {
    cplx t;
    cplx u;
    std::array<cplx, 3> e;  // roots, sorted by (Re, Im)
    double scale;           // max pairwise root distance
    double min_gap;         // min pairwise root distance

    cplx Q(cplx x) const { return ((4.0 * x * x) + 2.0 * t) * x + u; }
    cplx dQ(cplx x) const { return 12.0 * x * x + 2.0 * t; }
};

// Roots of 4x^3 + 2tx + u (Cardano + Newton polish), sorted lexicographically
// by (Re, Im).  disc16 = 16 * prod_{i<j} (e_i - e_j)^2 = -(8t^3 + 27u^2).
// Throws DegenerateCurve when 8t^3 + 27u^2 vanishes to relative precision.
struct CubicRoots {
    std::array<cplx, 3> e;
    cplx disc16;
};
CubicRoots cubic_roots(cplx t, cplx u);
Cubic make_cubic(cplx t, cplx u);

// y continued from a starting value along straight segments: the principal
// product 2*sqrt(x-e0)*sqrt(x-e1)*sqrt(x-e2) times a sign that flips each
// time a factor crosses its branch cut.
cplx y_principal(const Cubic& c, cplx x);

// Integral of g(x, y(x)) dx along the polyline, y continued from
// sign_start * y_principal at the first waypoint.  Returns the integral and,
// via sign_end, the branch sign at the last waypoint.
cplx branched_path_integral(const Cubic& c, const std::vector<cplx>& pts, int sign_start,
                            const std::function<cplx(cplx, cplx)>& g, double rel_tol = 1e-11,
                            double abs_tol = 1e-13, int* sign_end = nullptr);

// Periods and quasi-periods of dx/y and -x dx/y over the cycles
//   A: counterclockwise contour around {e1, e2},
//   B: counterclockwise contour around {e2, e3},
// with the B orientation flipped if needed so that Im tau > 0.  A is the
// cycle that vanishes when the first two roots merge, which is the regime
// t -> -infinity at small nu of the deformed family.  The branch of y on
// each contour starts from the principal product at angle 0.
struct LatticeFrame {
    cplx omega_A, omega_B;  // periods of dx/y
    cplx eta_A, eta_B;      // periods of -x dx/y
    cplx tau;               // omega_B / omega_A, Im tau > 0

    cplx bilinear_residual() const { return eta_A * omega_B - eta_B * omega_A - TWO_PI_I; }
};

struct PeriodContour {
    cplx center;
    double radius;
    int nodes;       // trapezoid nodes of the accepted pass; 0 for the cut route
    bool flipped;    // orientation reversed to enforce Im tau > 0
    bool on_cut;     // evaluated as 2x the cut integral instead of an ellipse
};

// Raw cycle data over one root pair (same counterclockwise convention as
// periods_from_roots).  The ellipse route needs the third root well outside;
// the cut route parametrises 2x the integral between the pair and works in
// any geometry, including nearly merged pairs.  Exposed for cross-checks.
struct CycleData {
    cplx omega;  // integral of dx/y
    cplx eta;    // integral of -x dx/y
    cplx ydx;    // integral of y dx
};
CycleData cycle_via_ellipse(const Cubic& c, int pi, int pj, const QuadOptions& opt = {},
                            PeriodContour* contour = nullptr);
CycleData cycle_via_cut(const Cubic& c, int pi, int pj);
struct PeriodInfo {
    PeriodContour a, b;
    cplx a_ydx;  // (1/2pi i) * A-cycle integral of y dx, same branch convention
    cplx b_ydx;  // plain B-cycle integral of y dx
};

LatticeFrame periods_from_roots(const Cubic& c, const QuadOptions& opt = {},
                                PeriodInfo* info = nullptr);

// Carlson symmetric elliptic integral R_F(x,y,z) for complex arguments,
// principal branches; used as an independent cross-check on the periods.
cplx carlson_rf(cplx x, cplx y, cplx z);

// Weierstrass data from the theta representation on the lattice spanned by
// (omega_A, omega_B):
//   sigma(z) = exp(eta_A z^2 / (2 omega_A)) * (omega_A / theta11'(0)) * theta11(z/omega_A)
//   zeta = (log sigma)', wp = -zeta', wp1 = wp', wp2 = wp''.
// log_sigma uses principal logarithms of the factors.  Throws LatticePoint
// within about 1e-9 * |omega_A| of a lattice point.
struct WeierstrassJet {
    cplx wp, wp1, wp2;
    cplx zeta;
    cplx log_sigma;
};
WeierstrassJet weierstrass_jet(cplx z, const LatticeFrame& fr);

// Abel map z(x) = int_infty^x dx'/y with y ~ +2 x^{3/2} at large positive x,
// along a straight descent from a large anchor (bumped away from roots),
// polished by Newton on wp(z) = x.  Throws BranchPointInput near a root.
cplx inverse_abel(cplx x, const Cubic& c, const LatticeFrame& fr);

// z-plane representatives of the three ramification points (half periods)
// paired with the roots they map to under wp: r[i] corresponds to c.e[i].
std::array<cplx, 3> half_period_of_root(const Cubic& c, const LatticeFrame& fr);

}  // namespace p1tr

#endif
