#include "p1tr/wkb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "p1tr/elliptic.hpp"
#include "p1tr/quad.hpp"
#include "p1tr/theta.hpp"

namespace p1tr {

namespace {

// ---------------------------------------------------------------------------
// Path planning.  Straight segment from `from` to `to`, detoured around the
// listed obstacle points until every sub-segment keeps at least `clear`
// distance from all of them.  Detour waypoints are pushed to 1.35 * clear on
// the side of the obstacle the segment already favors.

std::vector<cplx> bumped_path(cplx from, cplx to, const std::vector<cplx>& obstacles,
                              double clear) {
    std::vector<cplx> way{from, to};
    for (int pass = 0; pass < 24; ++pass) {
        bool touched = false;
        for (std::size_t i = 0; i + 1 < way.size() && !touched; ++i) {
            const cplx a = way[i], b = way[i + 1];
            const cplx d = b - a;
            const double len2 = std::norm(d);
            if (len2 < 1e-30) continue;
            double worst = clear * 0.999;
            cplx bad{}, foot{};
            for (const cplx& o : obstacles) {
                const double s = std::clamp(((o - a) / d).real(), 0.0, 1.0);
                const cplx p = a + s * d;
                const double dist = std::abs(o - p);
                if (dist < worst) {
                    worst = dist;
                    bad = o;
                    foot = p;
                }
            }
            if (worst < clear * 0.999) {
                cplx dir = foot - bad;
                if (std::abs(dir) < 1e-12 * clear) dir = I * d / std::abs(d);
                way.insert(way.begin() + i + 1, bad + dir / std::abs(dir) * (1.35 * clear));
                touched = true;
            }
        }
        if (!touched) return way;
    }
    throw QuadratureFailure("bumped_path: could not route the integration path clear of "
                            "the singular points");
}

// Half-period translates near the fundamental cell, the obstacle set for
// paths in the z-chart.
std::vector<cplx> half_period_obstacles(const EllipticFrame& fr) {
    std::vector<cplx> obs;
    obs.reserve(3 * 49);
    for (int mw = -3; mw <= 3; ++mw)
        for (int kw = -3; kw <= 3; ++kw) {
            const cplx shift =
                double(mw) * fr.lat.omega_A + double(kw) * fr.lat.omega_B;
            for (const cplx& r : fr.half_period) obs.push_back(r + shift);
        }
    return obs;
}

// Composite Gauss-Legendre rule along a waypoint chain, each leg split into
// pieces no longer than max_piece.
struct PathRule {
    std::vector<cplx> node;
    std::vector<cplx> weight;
};

PathRule path_rule(const std::vector<cplx>& way, double max_piece, int order) {
    const auto& [xs, ws] = gauss_legendre(order);
    PathRule r;
    for (std::size_t i = 0; i + 1 < way.size(); ++i) {
        const cplx a = way[i], b = way[i + 1];
        const double len = std::abs(b - a);
        if (len < 1e-15) continue;
        const int pieces = std::max(1, int(std::ceil(len / max_piece)));
        for (int p = 0; p < pieces; ++p) {
            const cplx pa = a + (b - a) * (double(p) / pieces);
            const cplx pb = a + (b - a) * (double(p + 1) / pieces);
            const cplx mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
            for (int q = 0; q < order; ++q) {
                r.node.push_back(mid + half * xs[q]);
                r.weight.push_back(half * ws[q]);
            }
        }
    }
    return r;
}

std::vector<cplx> ring_points(cplx center, double radius, int n) {
    std::vector<cplx> p(n);
    for (int k = 0; k < n; ++k)
        p[k] = center + radius * std::exp(cplx(0.0, 2.0 * PI * k / n));
    return p;
}

// ---------------------------------------------------------------------------
// Leading phase.

// Tail of the regularizing integral at its large positive anchor X, from the
// expansion y = 2x^{3/2} + (t/2)x^{-1/2} + (u/4)x^{-3/2} - (t^2/16)x^{-5/2}
//              - (tu/16)x^{-7/2} + ((t^3-u^2)/64)x^{-9/2} + ...
cplx tail_at(const Cubic& c, double X) {
    const cplx t = c.t, u = c.u;
    const double rX = std::sqrt(X);
    const double rX3 = rX * rX * rX;
    return -(u / 2.0) / rX + (t * t / 24.0) / rX3 + (t * u / 40.0) / (rX3 * X)
           - ((t * t * t - u * u) / 224.0) / (rX3 * X * X);
}

double root_scale(const Cubic& c) {
    return std::max({1.0, std::abs(c.e[0]), std::abs(c.e[1]), std::abs(c.e[2])});
}

double anchor_for(const Cubic& c) { return std::max(50.0, 60.0 * root_scale(c) * root_scale(c)); }

// Hand-off point between the real-axis descent and the complex leg to x.
double mid_anchor(const Cubic& c) { return std::max(6.0, 1.5 * root_scale(c)); }

// Integral of y - 2s^{3/2} - (t/2)s^{-1/2} over [X0, Xm] on the real axis,
// in the cancellation-free form
//   (u - t^2/(4s)) / ( y + 2s^{3/2} + (t/2)s^{-1/2} ),
// valid there because y stays on its positive branch.
cplx far_descent(const Cubic& c, double X0, double Xm) {
    return segment_integral(
        [&c](cplx s) {
            const cplx y = std::sqrt(c.Q(s));
            const cplx counter = 2.0 * std::pow(s, 1.5) + 0.5 * c.t / std::sqrt(s);
            return (c.u - c.t * c.t / (4.0 * s)) / (y + counter);
        },
        cplx(X0, 0.0), cplx(Xm, 0.0), 1e-12, 1e-14);
}

void check_off_negative_axis(const std::vector<cplx>& way) {
    for (std::size_t i = 0; i + 1 < way.size(); ++i) {
        const cplx a = way[i], b = way[i + 1];
        if (a.imag() == 0.0 && b.imag() == 0.0) {
            if (std::min(a.real(), b.real()) < 0.0)
                throw PathCrossesCut("s_minus1: integration path runs along the "
                                     "negative real axis");
            continue;
        }
        if (a.imag() * b.imag() < 0.0) {
            const double s = a.imag() / (a.imag() - b.imag());
            const double xr = a.real() + s * (b.real() - a.real());
            if (xr < 0.0)
                throw PathCrossesCut("s_minus1: integration path crosses the negative "
                                     "real axis, where the counterterm powers jump");
        }
    }
}

// Near leg: branched integral along the waypoint chain from the mid anchor
// to x.  The same cancellation-free quotient is used with the continued
// branch of y (the identity y - C = (Q - C^2)/(y + C) holds on both sheets);
// direct subtraction only in the regime y ~ -C, where it costs no digits.
cplx s_minus1_along(const Cubic& c, const std::vector<cplx>& way, double X0) {
    check_off_negative_axis(way);
    const cplx x = way.back();
    const cplx t = c.t, u = c.u;
    const cplx near_leg = branched_path_integral(
        c, way, +1, [&t, &u](cplx s, cplx y) {
            const cplx counter = 2.0 * std::pow(s, 1.5) + 0.5 * t / std::sqrt(s);
            if (std::abs(y + counter) > 0.5 * std::abs(counter))
                return (u - t * t / (4.0 * s)) / (y + counter);
            return y - counter;
        });
    return 0.8 * std::pow(x, 2.5) + t * std::sqrt(x) + tail_at(c, X0) +
           far_descent(c, X0, way.front().real()) + near_leg;
}

std::vector<cplx> s_minus1_path(cplx x, const Cubic& c) {
    double dmin = 1e300;
    for (const cplx& e : c.e) dmin = std::min(dmin, std::abs(x - e));
    if (dmin < 1e-8 * std::max(1.0, c.scale))
        throw BranchPointInput("s_minus1: x is at a branch point of the curve");
    if (x.real() <= 0.0 && std::abs(x.imag()) < 1e-12 * (1.0 + std::abs(x.real())))
        throw PathCrossesCut("s_minus1: x lies on the negative real axis, where the "
                             "principal powers are cut");
    const double clear = std::min(0.45 * c.min_gap, 0.8 * dmin);
    return bumped_path(cplx(mid_anchor(c), 0.0), x, {c.e[0], c.e[1], c.e[2]}, clear);
}

// ---------------------------------------------------------------------------
// Nested slot integrals for the higher coefficients.

// Multiplicity of a sorted index multiset among ordered tuples.
double tuple_multiplicity(const std::vector<int>& sorted_idx) {
    double fact = 1.0;
    for (std::size_t k = 2; k <= sorted_idx.size(); ++k) fact *= double(k);
    double rep = 1.0;
    std::size_t i = 0;
    while (i < sorted_idx.size()) {
        std::size_t j = i;
        while (j < sorted_idx.size() && sorted_idx[j] == sorted_idx[i]) ++j;
        double f = 1.0;
        for (std::size_t k = 2; k <= j - i; ++k) f *= double(k);
        rep *= f;
        i = j;
    }
    return fact / rep;
}

// (1/2) int_0^z int_0^z w03(z, s, s') ds ds' along the given rule; the slot
// derivative of the (0,3) part of S_1 with the 1/3! and the 3 equal slots
// folded in.
cplx w03_double_integral(CorrelatorEvaluator& ev, cplx z, const PathRule& rule) {
    const int K = int(rule.node.size());
    cplx acc{};
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j) {
            const double mult = (i == j) ? 1.0 : 2.0;
            const std::array<cplx, 3> args{z, rule.node[i], rule.node[j]};
            acc += mult * rule.weight[i] * rule.weight[j] * ev.w(0, args);
        }
    return 0.5 * acc;
}

cplx s1_from_rule(CorrelatorEvaluator& ev, const PathRule& rule) {
    const int K = int(rule.node.size());
    cplx single{};
    for (int i = 0; i < K; ++i) {
        const std::array<cplx, 1> a1{rule.node[i]};
        single += rule.weight[i] * ev.w(1, a1);
    }
    cplx triple{};
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j)
            for (int k = j; k < K; ++k) {
                const double mult = tuple_multiplicity({i, j, k});
                const std::array<cplx, 3> a3{rule.node[i], rule.node[j], rule.node[k]};
                triple += mult * rule.weight[i] * rule.weight[j] * rule.weight[k] *
                          ev.w(0, a3);
            }
    return single + triple / 6.0;
}

cplx s2_from_rule(CorrelatorEvaluator& ev, const PathRule& rule) {
    const int K = int(rule.node.size());
    cplx pair_sum{};
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j) {
            const double mult = (i == j) ? 1.0 : 2.0;
            const std::array<cplx, 2> a2{rule.node[i], rule.node[j]};
            pair_sum += mult * rule.weight[i] * rule.weight[j] * ev.w(1, a2);
        }
    cplx quad_sum{};
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j)
            for (int k = j; k < K; ++k)
                for (int l = k; l < K; ++l) {
                    const double mult = tuple_multiplicity({i, j, k, l});
                    const std::array<cplx, 4> a4{rule.node[i], rule.node[j],
                                                 rule.node[k], rule.node[l]};
                    quad_sum += mult * rule.weight[i] * rule.weight[j] *
                                rule.weight[k] * rule.weight[l] * ev.w(0, a4);
                }
    return pair_sum / 2.0 + quad_sum / 24.0;
}

double slot_clearance(const CorrelatorEvaluator& ev, int m) {
    return 1.02 * (m == 1 ? ev.required_clearance(0, 3) : ev.required_clearance(0, 4));
}

// x-plane image of the z-clearance disc around the half period over e_j:
// wp(r_j + eps) - e_j ~ (e_j - e_i)(e_j - e_k) eps^2, so x inside the
// corresponding ball maps to z too close to the ramification point.
void require_x_clear(const Cubic& c, cplx x, double clear) {
    for (int j = 0; j < 3; ++j) {
        const cplx ej = c.e[j];
        const cplx ei = c.e[(j + 1) % 3], ek = c.e[(j + 2) % 3];
        const double ball = 0.8 * std::abs((ej - ei) * (ej - ek)) * clear * clear;
        if (std::abs(x - ej) < ball)
            throw RamificationPole("s_higher: x is too close to a branch point for "
                                   "the nested slot integrals");
    }
}

PathRule slot_rule(CorrelatorEvaluator& ev, int m, const std::vector<cplx>& way) {
    const double gap = ev.base_gap();
    return (m == 1) ? path_rule(way, 0.55 * gap, 12) : path_rule(way, 0.80 * gap, 10);
}

// ---------------------------------------------------------------------------
// Closed-form pieces shared by the recursion residual and the cycle checks.

// P(z) = -zeta(z) + (eta_A/omega_A) z, the odd elliptic-adjacent primitive
// that the correlator kernel is built from.
cplx p_function(cplx z, const EllipticFrame& fr) {
    const WeierstrassJet J = weierstrass_jet(z, fr.lat);
    return -J.zeta + (fr.lat.eta_A / fr.lat.omega_A) * z;
}

// dS_0/dz = -(1/4) Q'(wp(z))/wp'(z) + P(z).
cplx ds0_dz(cplx z, const EllipticFrame& fr) {
    const WeierstrassJet J = weierstrass_jet(z, fr.lat);
    return -0.25 * fr.curve.dQ(J.wp) / J.wp1 - J.zeta +
           (fr.lat.eta_A / fr.lat.omega_A) * z;
}

// Lattice coordinates of z, for keeping cycle lines clear of the poles of
// zeta at the lattice points.
double lattice_distance(cplx z, const LatticeFrame& lat) {
    const double den = (std::conj(lat.omega_A) * lat.omega_B).imag();
    const double a = (std::conj(lat.omega_B) * z).imag() / -den;
    const double b = (std::conj(lat.omega_A) * z).imag() / den;
    double best = 1e300;
    for (int da = 0; da <= 1; ++da)
        for (int db = 0; db <= 1; ++db) {
            const cplx p = (std::floor(a) + da) * lat.omega_A +
                           (std::floor(b) + db) * lat.omega_B;
            best = std::min(best, std::abs(z - p));
        }
    return best;
}

// Base point for an A-period line with the given clearance from both the
// half-period translates and the lattice points.
cplx cycle_base(const CorrelatorEvaluator& ev, double clear) {
    static const double alphas[] = {0.2711, 0.1937, 0.3273, 0.4483, 0.0731, 0.1259};
    const EllipticFrame& fr = ev.frame();
    for (double al : alphas) {
        const cplx z0 = al * fr.lat.omega_B;
        double worst = 1e300;
        for (int s = 0; s <= 96; ++s) {
            const cplx z = z0 + (double(s) / 96.0) * fr.lat.omega_A;
            worst = std::min(worst, std::min(ev.ramification_distance(z),
                                             lattice_distance(z, fr.lat)));
        }
        if (worst >= clear) return z0;
    }
    throw QuadratureFailure("a_cycle_monodromy: no period line with the required "
                            "clearance");
}

// ---------------------------------------------------------------------------
// Frame rings for t-derivatives.

std::vector<EllipticFrame> frame_ring(const EllipticFrame& fr, double radius, int n) {
    std::vector<EllipticFrame> out;
    out.reserve(n);
    const EllipticFrame* seed = &fr;
    for (int k = 0; k < n; ++k) {
        const cplx tk = fr.t + radius * std::exp(cplx(0.0, 2.0 * PI * k / n));
        out.push_back(build_frame_near(*seed, tk, fr.nu));
        seed = &out.back();
    }
    return out;
}

cplx dt_f1(const EllipticFrame& fr, const std::vector<EllipticFrame>& ring,
           double radius) {
    std::vector<cplx> vals;
    vals.reserve(ring.size());
    for (const EllipticFrame& g : ring) vals.push_back(g.f1());
    unwind_ring(vals, PI / 6.0);
    (void)fr;
    return ring_derivative(vals, radius, 1);
}

}  // namespace

// ---------------------------------------------------------------------------

cplx s_minus1(cplx x, const EllipticFrame& fr) {
    const Cubic& c = fr.curve;
    return s_minus1_along(c, s_minus1_path(x, c), anchor_for(c));
}

cplx s_zero(cplx x, const EllipticFrame& fr) {
    const cplx Q = fr.curve.Q(x);
    if (std::abs(Q) < 1e-10 * std::pow(std::max(1.0, fr.curve.scale), 3))
        throw BranchPointInput("s_zero: x is at a branch point of the curve");
    const cplx z = inverse_abel(x, fr.curve, fr.lat);
    const cplx v = z / fr.lat.omega_A;
    const ThetaJet t0 = theta_jet(ThetaKind::Theta11, cplx{}, fr.lat.tau, 1);
    const ThetaJet tv = theta_jet(ThetaKind::Theta11, v, fr.lat.tau, 0);
    return -0.25 * std::log(Q) + std::log(-t0.d[1] / fr.lat.omega_A) -
           std::log(tv.d[0]);
}

cplx s_higher_via(int m, cplx x, CorrelatorEvaluator& ev,
                  const std::vector<cplx>& z_waypoints) {
    if (m < 1)
        throw InputError("s_higher: m >= 1 (the lower coefficients have closed forms)");
    if (m > 2)
        throw BudgetExceeded("s_higher: nested slot integrals are budgeted through m = 2");
    if (z_waypoints.size() < 2 || std::abs(z_waypoints.front()) > 1e-12)
        throw InputError("s_higher: waypoint chain must start at z = 0");
    const EllipticFrame& fr = ev.frame();
    // The endpoint is pinned to the chart's z(x): a chain ending at another
    // lattice translate would shift the value by cycle periods.
    const cplx z = inverse_abel(x, fr.curve, fr.lat);
    if (std::abs(z_waypoints.back() - z) > 1e-8 * std::abs(fr.lat.omega_A))
        throw InputError("s_higher: waypoint chain must end at z(x)");
    const PathRule rule = slot_rule(ev, m, z_waypoints);
    return (m == 1) ? s1_from_rule(ev, rule) : s2_from_rule(ev, rule);
}

cplx s_higher(int m, cplx x, CorrelatorEvaluator& ev) {
    if (m < 1)
        throw InputError("s_higher: m >= 1 (the lower coefficients have closed forms)");
    if (m > 2)
        throw BudgetExceeded("s_higher: nested slot integrals are budgeted through m = 2");
    const EllipticFrame& fr = ev.frame();
    const double clear = slot_clearance(ev, m);
    require_x_clear(fr.curve, x, clear);
    const cplx z = inverse_abel(x, fr.curve, fr.lat);
    if (ev.ramification_distance(z) < clear)
        throw RamificationPole("s_higher: z(x) is too close to a ramification point "
                               "for the nested integrals");
    const std::vector<cplx> way =
        bumped_path(cplx{}, z, half_period_obstacles(fr), clear);
    return s_higher_via(m, x, ev, way);
}

cplx riccati_residual(int m, cplx x, CorrelatorEvaluator& ev) {
    if (m < 0) throw InputError("riccati_residual: m >= 0");
    if (m > 1)
        throw BudgetExceeded("riccati_residual: the derivative rings at this depth are "
                             "outside the default budget");
    const EllipticFrame& fr = ev.frame();
    const Cubic& c = fr.curve;

    double dmin = 1e300;
    for (const cplx& e : c.e) dmin = std::min(dmin, std::abs(x - e));
    const double rx = 0.2 * dmin;
    const int nx = 16;

    // x-rings of the leading and subleading phases.  The leading-phase ring
    // reuses one planned path with only its endpoint moved, so every sample
    // sits on the same branch.
    const double X0 = anchor_for(c);
    std::vector<cplx> way = s_minus1_path(x, c);
    std::vector<cplx> sm1(nx), s0v(nx);
    const std::vector<cplx> xr = ring_points(x, rx, nx);
    for (int k = 0; k < nx; ++k) {
        way.back() = xr[k];
        sm1[k] = s_minus1_along(c, way, X0);
        s0v[k] = s_zero(xr[k], fr);
    }
    unwind_ring(s0v, PI / 2.0);
    const cplx ds_m1 = ring_derivative(sm1, rx, 1);
    const cplx dds_m1 = ring_derivative(sm1, rx, 2);
    const cplx ds_0 = ring_derivative(s0v, rx, 1);

    const cplx z = inverse_abel(x, c, fr.lat);
    if (m == 0) {
        // 2 S'_{-1} S'_0 + S''_{-1} - 2 dS_{-1}/dt, with dS_{-1}/dt = P(z(x)).
        return 2.0 * ds_m1 * ds_0 + dds_m1 - 2.0 * p_function(z, fr);
    }

    // m == 1:  2 S'_{-1} S'_1 + (S'_0)^2 + S''_0 - 2 dS_0/dt - 2 dF_1/dt.
    const cplx dds_0 = ring_derivative(s0v, rx, 2);

    // S'_1 through the chain rule: dS_1/dz = w11(z) + (1/2) iint w03(z,.,.),
    // dz/dx = 1/wp'(z).
    const double clear = slot_clearance(ev, 1);
    if (ev.ramification_distance(z) < clear)
        throw RamificationPole("riccati_residual: z(x) is too close to a ramification "
                               "point for the nested integrals");
    const PathRule rule =
        slot_rule(ev, 1, bumped_path(cplx{}, z, half_period_obstacles(fr), clear));
    const std::array<cplx, 1> a1{z};
    const cplx ds1_dz = ev.w(1, a1) + w03_double_integral(ev, z, rule);
    const cplx y = weierstrass_jet(z, fr.lat).wp1;
    const cplx ds_1 = ds1_dz / y;

    // t-rings at fixed x over re-solved frames.
    const double rt = 0.05 * (1.0 + std::abs(fr.t));
    const int nt = 16;
    const std::vector<EllipticFrame> ring = frame_ring(fr, rt, nt);
    std::vector<cplx> s0t;
    s0t.reserve(nt);
    for (const EllipticFrame& g : ring) s0t.push_back(s_zero(x, g));
    unwind_ring(s0t, PI / 2.0);
    const cplx dt_s0 = ring_derivative(s0t, rt, 1);
    const cplx dtF1 = dt_f1(fr, ring, rt);

    return 2.0 * ds_m1 * ds_1 + ds_0 * ds_0 + dds_0 - 2.0 * dt_s0 - 2.0 * dtF1;
}

cplx a_cycle_monodromy(int m, CorrelatorEvaluator& ev) {
    if (m < -1) throw InputError("a_cycle_monodromy: m >= -1");
    if (m > 1)
        throw BudgetExceeded("a_cycle_monodromy: implemented through m = 1");
    if (m == -1) return ev.cycle_integral('A', 0);

    const EllipticFrame& fr = ev.frame();
    if (m == 0) {
        const cplx z0 = cycle_base(ev, 0.25 * ev.base_gap());
        return period_line_mean(
                   [&fr](cplx z) { return ds0_dz(z, fr); }, z0, fr.lat.omega_A)
            .value;
    }

    // m == 1: the w11 line plus half the double slot integral of w03, whose
    // first-slot poles carry no residue, so the line may sit anywhere with
    // clearance.
    const cplx line_w11 = ev.cycle_integral('A', 1);
    const double clear = slot_clearance(ev, 1);
    const cplx z0 = cycle_base(ev, clear);
    const auto& [xs, ws] = gauss_legendre(10);
    const int pieces = 6;
    cplx acc{};
    for (int p = 0; p < pieces; ++p) {
        const cplx a = z0 + fr.lat.omega_A * (double(p) / pieces);
        const cplx b = z0 + fr.lat.omega_A * (double(p + 1) / pieces);
        const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 10; ++q) {
            const cplx z = mid + half * xs[q];
            const PathRule rule = slot_rule(
                ev, 1, bumped_path(cplx{}, z, half_period_obstacles(fr), clear));
            acc += half * ws[q] * w03_double_integral(ev, z, rule);
        }
    }
    return line_w11 + acc;
}

cplx WkbCoefficients::at(int m) const {
    if (m < -1 || m > order)
        throw InputError("WkbCoefficients: coefficient outside the stored range");
    return s[std::size_t(m + 1)];
}

WkbCoefficients wkb_coefficients(cplx x, CorrelatorEvaluator& ev, int order) {
    if (order < 0) throw InputError("wkb_coefficients: order >= 0");
    if (order > 2)
        throw BudgetExceeded("wkb_coefficients: budgeted through order 2");
    WkbCoefficients c;
    c.x = x;
    c.order = order;
    c.s.push_back(s_minus1(x, ev.frame()));
    c.s.push_back(s_zero(x, ev.frame()));
    for (int m = 1; m <= order; ++m) c.s.push_back(s_higher(m, x, ev));
    return c;
}

cplx psi_plus(const WkbCoefficients& c, cplx hbar) {
    cplx phase{};
    for (int m = -1; m <= c.order; ++m) phase += std::pow(hbar, m) * c.at(m);
    return std::exp(phase);
}

cplx psi_minus(const WkbCoefficients& c, cplx hbar) { return psi_plus(c, -hbar); }

}  // namespace p1tr
