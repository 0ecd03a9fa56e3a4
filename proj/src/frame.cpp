#include "p1tr/frame.hpp"

#include <cmath>

namespace p1tr {

cplx u_leading(cplx t, cplx nu) {
    const cplx s = std::pow(24.0, 0.25) * std::pow(-t, 1.25);
    return s * s / (9.0 * t) + 2.0 * I * nu * s / t - 5.0 * nu * nu / (4.0 * t);
}

namespace {

struct SolveState {
    cplx u;
    Cubic curve;
    LatticeFrame lat;
    PeriodInfo periods;
    cplx residual;
};

SolveState eval_state(cplx t, cplx nu, cplx u, const QuadOptions& opt) {
    SolveState st;
    st.u = u;
    st.curve = make_cubic(t, u);
    if (st.curve.min_gap < 1e-3 * st.curve.scale)
        throw DegenerateCurve("solve_u: branch points nearly collide along the iteration");
    st.lat = periods_from_roots(st.curve, opt, &st.periods);
    st.residual = st.periods.a_ydx - nu;
    return st;
}

}  // namespace

cplx solve_u(cplx t, cplx nu, cplx u_seed, const QuadOptions& opt) {
    SolveState st = eval_state(t, nu, u_seed, opt);
    const double tol = 1e-11 * (1.0 + std::abs(nu));
    for (int it = 0; it < 50; ++it) {
        if (std::abs(st.residual) < tol) return st.u;
        cplx step = -4.0 * PI * I * st.residual / st.lat.omega_A;
        const double cap = 0.25 * (1.0 + std::abs(st.u));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        // Backtrack if the full step overshoots; the period map is smooth so
        // this only fires far from the solution.
        for (double damp = 1.0; damp > 1.0 / 64.0; damp *= 0.5) {
            try {
                SolveState next = eval_state(t, nu, st.u + damp * step, opt);
                if (std::abs(next.residual) < std::abs(st.residual) || damp <= 1.0 / 32.0) {
                    st = next;
                    break;
                }
            } catch (const DegenerateCurve&) {
                if (damp * 0.5 <= 1.0 / 64.0) throw;
            }
        }
    }
    throw NoConvergence("solve_u: Newton iteration did not reach tolerance");
}

EllipticFrame frame_at_u(cplx t, cplx nu, cplx u, const QuadOptions& opt) {
    EllipticFrame fr;
    fr.t = t;
    fr.nu = nu;
    fr.u = u;
    fr.curve = make_cubic(t, u);
    fr.lat = periods_from_roots(fr.curve, opt, &fr.periods);
    fr.phi = fr.periods.b_ydx / TWO_PI_I;
    fr.du_dt = 2.0 * fr.lat.eta_A / fr.lat.omega_A;
    fr.du_dnu = 4.0 * PI * I / fr.lat.omega_A;
    fr.dphi_dt = 1.0 / fr.lat.omega_A;
    fr.dphi_dnu = fr.lat.tau;
    fr.half_period = half_period_of_root(fr.curve, fr.lat);
    return fr;
}

EllipticFrame build_frame(cplx t, cplx nu, const QuadOptions& opt) {
    return frame_at_u(t, nu, solve_u(t, nu, u_leading(t, nu), opt), opt);
}

EllipticFrame build_frame_near(const EllipticFrame& base, cplx t, cplx nu,
                               const QuadOptions& opt) {
    const cplx u_pred = base.u + base.du_dt * (t - base.t) + base.du_dnu * (nu - base.nu);
    return frame_at_u(t, nu, solve_u(t, nu, u_pred, opt), opt);
}

std::vector<EllipticFrame> frame_ring(const EllipticFrame& base, char which, double radius,
                                      int n, const QuadOptions& opt) {
    if (which != 't' && which != 'n') throw InputError("frame_ring: which must be 't' or 'n'");
    if (n < 4) throw InputError("frame_ring: need at least 4 samples");
    std::vector<EllipticFrame> out;
    out.reserve(n);
    const EllipticFrame* prev = &base;
    for (int k = 0; k < n; ++k) {
        const cplx offs = radius * std::exp(cplx(0.0, 2.0 * PI * k / n));
        const cplx tk = which == 't' ? base.t + offs : base.t;
        const cplx nk = which == 'n' ? base.nu + offs : base.nu;
        out.push_back(build_frame_near(*prev, tk, nk, opt));
        prev = &out.back();
    }
    return out;
}

}  // namespace p1tr
