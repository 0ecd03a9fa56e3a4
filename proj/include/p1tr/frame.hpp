#pragma once

#include <array>

#include "p1tr/elliptic.hpp"
#include "p1tr/quad.hpp"

namespace p1tr {

// One member of the curve family y^2 = 4x^3 + 2tx + u with u pinned by the
// A-cycle normalization (1/2pi i) oint_A y dx = nu, together with the period
// lattice and the first-order response of (u, phi) to (t, nu).
struct EllipticFrame {
    cplx t, nu, u;
    Cubic curve;
    LatticeFrame lat;
    PeriodInfo periods;
    cplx phi;       // (1/2pi i) oint_B y dx
    cplx du_dt;     // 2 eta_A / omega_A
    cplx du_dnu;    // 4 pi i / omega_A
    cplx dphi_dt;   // 1 / omega_A
    cplx dphi_dnu;  // tau
    std::array<cplx, 3> half_period;  // z with wp(z) = curve.e[i]

    // Genus 0 free energy t u / 5 + (nu/2) oint_B y dx.
    cplx f0() const { return t * u / 5.0 + PI * I * nu * phi; }

    // Genus 1 free energy -(1/12) log(omega_A^6 Delta).  The log is taken on
    // the principal branch; callers differentiating f1 across a family must
    // unwind the branch themselves (the argument is exposed for that).
    cplx f1_log_arg() const {
        const cplx disc = -(8.0 * t * t * t + 27.0 * u * u);  // 16 prod (e_i - e_j)^2
        return std::pow(lat.omega_A, 6) * disc;
    }
    cplx f1() const { return -std::log(f1_log_arg()) / 12.0; }
};

// Leading large-|t| approximation of u(t, nu), good enough to seed the solver
// throughout the regime the library targets.
cplx u_leading(cplx t, cplx nu);

// Solve (1/2pi i) oint_A y dx = nu for u by Newton iteration from u_seed.
// d/du of the left side is omega_A / (4 pi i), so each step is exact up to
// the nonlinearity of the period map.
cplx solve_u(cplx t, cplx nu, cplx u_seed, const QuadOptions& opt = {});

// Solve for u from the built-in seed and assemble the full frame.
EllipticFrame build_frame(cplx t, cplx nu, const QuadOptions& opt = {});

// Assemble a frame at a known u (skips the solve; u must already satisfy the
// A-cycle normalization for the stored nu to mean anything).
EllipticFrame frame_at_u(cplx t, cplx nu, cplx u, const QuadOptions& opt = {});

// Rebuild at nearby (t, nu), seeding the solve with the first-order
// prediction from `base` so Newton stays in the same branch of the family.
EllipticFrame build_frame_near(const EllipticFrame& base, cplx t, cplx nu,
                               const QuadOptions& opt = {});

// Frames on a circle of the given radius around base in the t-plane
// (which = 't') or the nu-plane (which = 'n'), equally spaced in increasing
// angle starting at angle 0, each seeded from its predecessor so the whole
// ring stays on one branch of the family.  Feed the per-frame values into
// ring_derivative for parameter derivatives of frame data.
std::vector<EllipticFrame> frame_ring(const EllipticFrame& base, char which, double radius,
                                      int n, const QuadOptions& opt = {});

}  // namespace p1tr
