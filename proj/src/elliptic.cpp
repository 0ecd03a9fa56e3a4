#include "p1tr/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace p1tr {

namespace {

bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double s = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(p - (a + s * d));
}

}  // namespace

CubicRoots cubic_roots(cplx t, cplx u) {
    const cplx del = 8.0 * t * t * t + 27.0 * u * u;
    const double del_scale = 8.0 * std::pow(std::abs(t), 3) + 27.0 * sq(std::abs(u));
    if (del_scale == 0.0 || std::abs(del) < 1e-12 * del_scale)
        throw DegenerateCurve("cubic_roots: 8t^3 + 27u^2 vanishes to working precision");

    // Depressed cubic x^3 + p x + q with p = t/2, q = u/4.
    const cplx p = t / 2.0;
    const cplx q = u / 4.0;
    const cplx sqrtD = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx C = std::pow(-q / 2.0 + sqrtD, 1.0 / 3.0);
    if (std::abs(C) < 1e-12 * (std::abs(p) + std::abs(q) + 1.0))
        C = std::pow(-q / 2.0 - sqrtD, 1.0 / 3.0);

    const cplx w{-0.5, 0.8660254037844386467637231707529362};
    std::array<cplx, 3> e;
    for (int k = 0; k < 3; ++k) {
        cplx Ck = C;
        if (k == 1) Ck *= w;
        if (k == 2) Ck *= std::conj(w);
        cplx x = Ck - p / (3.0 * Ck);
        for (int it = 0; it < 3; ++it) {
            const cplx f = ((4.0 * x * x) + 2.0 * t) * x + u;
            const cplx df = 12.0 * x * x + 2.0 * t;
            if (std::abs(df) == 0.0) break;
            x -= f / df;
        }
        e[k] = x;
    }
    std::sort(e.begin(), e.end(), lex_less);

    const cplx d01 = e[0] - e[1], d02 = e[0] - e[2], d12 = e[1] - e[2];
    CubicRoots out;
    out.e = e;
    out.disc16 = 16.0 * d01 * d01 * d02 * d02 * d12 * d12;
    return out;
}

Cubic make_cubic(cplx t, cplx u) {
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag()) || !std::isfinite(u.real()) ||
        !std::isfinite(u.imag()))
        throw InputError("make_cubic: coefficients must be finite");
    const CubicRoots r = cubic_roots(t, u);
    Cubic c;
    c.t = t;
    c.u = u;
    c.e = r.e;
    const double d01 = std::abs(r.e[0] - r.e[1]);
    const double d02 = std::abs(r.e[0] - r.e[2]);
    const double d12 = std::abs(r.e[1] - r.e[2]);
    c.scale = std::max({d01, d02, d12});
    c.min_gap = std::min({d01, d02, d12});
    return c;
}

cplx y_principal(const Cubic& c, cplx x) {
    return 2.0 * std::sqrt(x - c.e[0]) * std::sqrt(x - c.e[1]) * std::sqrt(x - c.e[2]);
}

cplx branched_path_integral(const Cubic& c, const std::vector<cplx>& pts, int sign_start,
                            const std::function<cplx(cplx, cplx)>& g, double rel_tol,
                            double abs_tol, int* sign_end) {
    int s = sign_start;
    cplx acc{0.0, 0.0};
    for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg) {
        const cplx a = pts[leg], b = pts[leg + 1];
        const cplx d = b - a;
        // Fractions along [a,b] where a factor x - e crosses its cut (R_-).
        std::vector<double> cuts;
        for (const cplx& e : c.e) {
            if (d.imag() == 0.0) continue;
            const double s0 = -(a - e).imag() / d.imag();
            if (s0 > 1e-14 && s0 < 1.0 - 1e-14 && (a + s0 * d - e).real() < 0.0)
                cuts.push_back(s0);
        }
        std::sort(cuts.begin(), cuts.end());
        double prev = 0.0;
        for (std::size_t i = 0; i <= cuts.size(); ++i) {
            const double next = (i < cuts.size()) ? cuts[i] : 1.0;
            if (next > prev) {
                const double sd = static_cast<double>(s);
                acc += segment_integral(
                    [&](cplx x) { return g(x, sd * y_principal(c, x)); }, a + prev * d,
                    a + next * d, rel_tol, abs_tol);
            }
            if (i < cuts.size()) s = -s;
            prev = next;
        }
    }
    if (sign_end) *sign_end = s;
    return acc;
}

namespace {

struct CycleIntegrals {
    cplx omega;  // integral of dx/y
    cplx eta;    // integral of -x dx/y
    cplx ydx;    // integral of y dx
    bool wrap_ok;
};

// One trapezoidal pass over the ellipse around root pair (pi, pj), tracking
// the branch of y by nearest-value continuation from the principal product at
// angle zero.
CycleIntegrals ellipse_pass(const Cubic& c, cplx center, cplx u_hat, double a, double b,
                            int n) {
    CycleIntegrals out{{0, 0}, {0, 0}, {0, 0}, true};
    cplx y_prev{0.0, 0.0};
    cplx y_first{0.0, 0.0};
    for (int k = 0; k <= n; ++k) {
        const double th = 2.0 * PI * k / n;
        const cplx x = center + u_hat * cplx{a * std::cos(th), b * std::sin(th)};
        cplx y = y_principal(c, x);
        if (k == 0) {
            y_first = y;
        } else if (std::abs(y - y_prev) > std::abs(-y - y_prev)) {
            y = -y;
        }
        if (k == n) {
            out.wrap_ok = std::abs(y - y_first) <= 1e-6 * std::abs(y_first);
            break;
        }
        y_prev = y;
        const cplx dxdth = u_hat * cplx{-a * std::sin(th), b * std::cos(th)};
        out.omega += dxdth / y;
        out.eta += -x * dxdth / y;
        out.ydx += y * dxdth;
    }
    const double h = 2.0 * PI / n;
    out.omega *= h;
    out.eta *= h;
    out.ydx *= h;
    return out;
}

int third_root(int pi, int pj) {
    for (int k = 0; k < 3; ++k)
        if (k != pi && k != pj) return k;
    throw InputError("cycle: pair indices must differ");
}

}  // namespace

CycleData cycle_via_ellipse(const Cubic& c, int pi, int pj, const QuadOptions& opt,
                            PeriodContour* contour) {
    const cplx p = c.e[pi], q = c.e[pj];
    const cplx w = c.e[third_root(pi, pj)];

    const cplx center = 0.5 * (p + q);
    const double r_in = 0.5 * std::abs(q - p);
    const cplx u_hat = (q - p) / std::abs(q - p);
    const double a = 1.45 * r_in;

    // Pick the minor semi-axis so the third root stays clearly outside.
    const cplx wrel = (w - center) / u_hat;
    const double wx = wrel.real(), wy = wrel.imag();
    double b = 0.9 * a;
    const double margin = 1.45;
    if (sq(wx / a) < margin) {
        const double need = (margin - sq(wx / a));
        b = std::min(b, std::abs(wy) / std::sqrt(need));
    }
    if (!(b > 0.25 * r_in))
        throw QuadratureFailure("cycle_via_ellipse: root pair not separable from third root");

    int n = opt.start_nodes;
    CycleIntegrals prev = ellipse_pass(c, center, u_hat, a, b, n);
    while (n < opt.max_nodes) {
        n *= 2;
        const CycleIntegrals cur = ellipse_pass(c, center, u_hat, a, b, n);
        const double change = std::abs(cur.omega - prev.omega) + std::abs(cur.eta - prev.eta) +
                              std::abs(cur.ydx - prev.ydx);
        const double size = std::abs(cur.omega) + std::abs(cur.eta) + std::abs(cur.ydx);
        if (cur.wrap_ok && prev.wrap_ok && change <= opt.abs_tol + opt.rel_tol * size) {
            if (contour) *contour = {center, a, n, false, false};
            return {cur.omega, cur.eta, cur.ydx};
        }
        prev = cur;
    }
    throw QuadratureFailure("cycle_via_ellipse: node doubling did not converge");
}

CycleData cycle_via_cut(const Cubic& c, int pi, int pj) {
    // Squeeze the contour onto the segment [p,q]: the cycle integral is twice
    // the integral over the cut, taken on the side a counterclockwise loop
    // sweeps through first.  With x(th) = p + (q-p) sin^2(th) the endpoint
    // square roots cancel analytically and the branch on the cut is
    //   y = eps * (-2i) (q-p) sin(th) cos(th) F(th),  F = continued sqrt(x - w).
    // The sign eps matches the branch seed used by the ellipse route
    // (+y_principal at p + 1.225 (q-p)), so both routes compute the same
    // oriented cycle wherever both converge.  eps is not a universal constant:
    // it flips whenever the principal-branch ray of sqrt(x - w) separates the
    // seed point from the underside of the cut.
    const cplx p = c.e[pi], q = c.e[pj];
    const cplx w = c.e[third_root(pi, pj)];
    const cplx d = q - p;
    const cplx seed = p + 1.225 * d;

    if (point_segment_distance(w, p, q) < 1e-6 * c.scale)
        throw QuadratureFailure("cycle_via_cut: third root touches the cut segment");
    const double w_gap = point_segment_distance(w, p, seed);
    if (w_gap < 1e-6 * c.scale)
        throw QuadratureFailure("cycle_via_cut: third root blocks the branch seed");

    // Sign flips of the principal sqrt(x - w) along the segment.
    const cplx z0 = p - w;
    double cross = 2.0;  // sigma value where (x - w) crosses the cut, if any
    if (d.imag() != 0.0) {
        const double s0 = -z0.imag() / d.imag();
        if (s0 > 1e-12 && s0 < 1.0 - 1e-12 && (z0 + s0 * d).real() < 0.0) cross = s0;
    }
    auto F = [&](double th) {
        const double sg = sq(std::sin(th));
        const cplx val = std::sqrt(z0 + sg * d);
        return (sg > cross) ? -val : val;
    };

    // Branch matching: continue sqrt(x - w) from the seed down to the middle
    // of the cut's underside along a hug path, counting how far the continued
    // argument drifts from the principal one.  An odd number of ray crossings
    // means the continued branch is the negative of F there.
    const cplx mid = p + 0.5 * d;
    const double hug = 0.45 * std::min(w_gap, 0.5 * std::abs(d));
    const cplx off = -I * (d / std::abs(d)) * hug;
    const std::array<cplx, 4> walk{seed, seed + off, mid + off, mid};
    double swept = 0.0;
    for (int i = 0; i + 1 < 4; ++i)
        swept += std::arg((walk[i + 1] - w) / (walk[i] - w));
    const double drift = swept - (std::arg(mid - w) - std::arg(seed - w));
    const long wind = std::lround(drift / (2.0 * PI));
    if (std::abs(drift - 2.0 * PI * static_cast<double>(wind)) > 0.5)
        throw NumericalError("cycle_via_cut: branch continuation did not close");
    double eps = (wind % 2 != 0) ? -1.0 : 1.0;
    if (cross < 0.5) eps = -eps;  // F itself flipped before the midpoint

    auto integrate = [&](const std::function<cplx(double)>& g) {
        return segment_integral([&](cplx th) { return g(th.real()); }, cplx{0.0, 0.0},
                                cplx{PI / 2.0, 0.0}, 1e-12, 1e-14);
    };
    const cplx two_i{0.0, 2.0};
    CycleData out;
    out.omega = eps * two_i * integrate([&](double th) { return 1.0 / F(th); });
    out.eta = -eps * two_i * integrate([&](double th) {
        return (p + sq(std::sin(th)) * d) / F(th);
    });
    out.ydx = -4.0 * eps * two_i * d * d * integrate([&](double th) {
        return sq(std::sin(th) * std::cos(th)) * F(th);
    });
    return out;
}

namespace {

CycleIntegrals cycle_integrals(const Cubic& c, int pi, int pj, const QuadOptions& opt,
                               PeriodContour* contour) {
    try {
        const CycleData d = cycle_via_ellipse(c, pi, pj, opt, contour);
        return {d.omega, d.eta, d.ydx, true};
    } catch (const QuadratureFailure&) {
        const CycleData d = cycle_via_cut(c, pi, pj);
        if (contour) *contour = {0.5 * (c.e[pi] + c.e[pj]), 0.0, 0, false, true};
        return {d.omega, d.eta, d.ydx, true};
    }
}

}  // namespace

LatticeFrame periods_from_roots(const Cubic& c, const QuadOptions& opt, PeriodInfo* info) {
    PeriodContour ca{}, cb{};
    const CycleIntegrals A = cycle_integrals(c, 0, 1, opt, &ca);
    CycleIntegrals B = cycle_integrals(c, 1, 2, opt, &cb);

    LatticeFrame fr;
    fr.omega_A = A.omega;
    fr.eta_A = A.eta;
    fr.omega_B = B.omega;
    fr.eta_B = B.eta;
    fr.tau = fr.omega_B / fr.omega_A;
    if (fr.tau.imag() < 0.0) {
        fr.omega_B = -fr.omega_B;
        fr.eta_B = -fr.eta_B;
        B.ydx = -B.ydx;
        fr.tau = -fr.tau;
        cb.flipped = true;
    }
    if (!(fr.tau.imag() > 0.0))
        throw QuadratureFailure("periods_from_roots: modulus landed on the real axis");
    if (info) {
        info->a = ca;
        info->b = cb;
        info->a_ydx = A.ydx / TWO_PI_I;
        info->b_ydx = B.ydx;
    }
    return fr;
}

cplx carlson_rf(cplx x, cplx y, cplx z) {
    for (int it = 0; it < 200; ++it) {
        const cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const cplx lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        const cplx mu = (x + y + z) / 3.0;
        const double spread = std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)});
        if (spread < 1e-12 * std::abs(mu)) {
            const cplx X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = -X - Y;
            const cplx E2 = X * Y - Z * Z, E3 = X * Y * Z;
            return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0) /
                   std::sqrt(mu);
        }
    }
    throw NoConvergence("carlson_rf: duplication did not converge");
}

namespace {

struct Theta11Data {
    ThetaJet at_v;    // degree 4 jet at v = z/omega_A
    cplx dtheta0;     // theta11'(0)
};

Theta11Data theta11_data(cplx v, cplx tau, int degree) {
    Theta11Data d;
    d.at_v = theta_jet_unbounded(ThetaKind::Theta11, v, tau, degree);
    d.dtheta0 = theta_jet_unbounded(ThetaKind::Theta11, cplx{0.0, 0.0}, tau, 1).d[1];
    return d;
}

}  // namespace

WeierstrassJet weierstrass_jet(cplx z, const LatticeFrame& fr) {
    const cplx v = z / fr.omega_A;
    const Theta11Data td = theta11_data(v, fr.tau, 4);
    const cplx th = td.at_v.d[0];
    if (std::abs(th) < 1e-9 * std::abs(td.dtheta0))
        throw LatticePoint("weierstrass_jet: z too close to a lattice point");

    const cplx r1 = td.at_v.d[1] / th;
    const cplx r2 = td.at_v.d[2] / th;
    const cplx r3 = td.at_v.d[3] / th;
    const cplx r4 = td.at_v.d[4] / th;
    const cplx L1 = r1;
    const cplx L2 = r2 - r1 * r1;
    const cplx L3 = r3 - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1;
    const cplx L4 = r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 -
                    6.0 * r1 * r1 * r1 * r1;

    const cplx cA = fr.eta_A / fr.omega_A;
    const cplx wA2 = fr.omega_A * fr.omega_A;
    WeierstrassJet out;
    out.wp = -cA - L2 / wA2;
    out.wp1 = -L3 / (wA2 * fr.omega_A);
    out.wp2 = -L4 / (wA2 * wA2);
    out.zeta = cA * z + L1 / fr.omega_A;
    out.log_sigma = 0.5 * cA * z * z + std::log(fr.omega_A / td.dtheta0) + std::log(th);
    return out;
}

cplx inverse_abel(cplx x, const Cubic& c, const LatticeFrame& fr) {
    for (const cplx& e : c.e)
        if (std::abs(x - e) < 1e-8 * c.scale)
            throw BranchPointInput("inverse_abel: x too close to a branch point");

    const double anchor = std::max(1e6, 1e3 * (1.0 + c.scale + std::abs(c.e[2])));
    const cplx X{anchor, 0.0};

    // Tail of int_infty^X dx/y from the large-x expansion of 1/y.
    const cplx t = c.t, u = c.u;
    const double rootX = std::sqrt(anchor);
    const double X52 = std::pow(anchor, 2.5), X72 = std::pow(anchor, 3.5),
                 X92 = std::pow(anchor, 4.5);
    cplx z = -1.0 / rootX + t / (20.0 * X52) + u / (56.0 * X72) - t * t / (96.0 * X92);

    std::vector<cplx> pts{X, x};
    // Bump the descent path away from any root it passes too close to.
    for (const cplx& e : c.e) {
        if (point_segment_distance(e, X, x) < 0.08 * c.scale) {
            const cplx d = x - X;
            const cplx n = I * d / std::abs(d);
            double side = ((e - X).real() * n.real() + (e - X).imag() * n.imag()) >= 0 ? -1.0 : 1.0;
            const cplx mid = 0.5 * (X + x) + side * 0.25 * c.scale * n;
            pts = {X, mid, x};
            break;
        }
    }

    z += branched_path_integral(c, pts, +1, [](cplx, cplx y) { return 1.0 / y; }, 1e-12, 1e-14);

    // Newton polish on wp(z) = x.
    for (int it = 0; it < 12; ++it) {
        const WeierstrassJet wj = weierstrass_jet(z, fr);
        const cplx f = wj.wp - x;
        if (std::abs(f) <= 1e-12 * (1.0 + std::abs(x))) break;
        z -= f / wj.wp1;
    }
    const WeierstrassJet wj = weierstrass_jet(z, fr);
    if (std::abs(wj.wp - x) > 1e-9 * (1.0 + std::abs(x)))
        throw NoConvergence("inverse_abel: polish on wp(z) = x did not converge");
    return z;
}

std::array<cplx, 3> half_period_of_root(const Cubic& c, const LatticeFrame& fr) {
    const std::array<cplx, 3> r = {0.5 * fr.omega_A, 0.5 * fr.omega_B,
                                   0.5 * (fr.omega_A + fr.omega_B)};
    std::array<cplx, 3> out;
    std::array<bool, 3> used{false, false, false};
    const std::array<cplx, 3> vals = {weierstrass_jet(r[0], fr).wp,
                                      weierstrass_jet(r[1], fr).wp,
                                      weierstrass_jet(r[2], fr).wp};
    for (int i = 0; i < 3; ++i) {
        int best = -1;
        double best_d = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double d = std::abs(vals[j] - c.e[i]);
            if (!used[j] && (best < 0 || d < best_d)) {
                best = j;
                best_d = d;
            }
        }
        if (best_d > 1e-6 * (1.0 + std::abs(c.e[i])))
            throw NumericalError("half_period_of_root: half periods do not match roots");
        used[best] = true;
        out[i] = r[best];
    }
    return out;
}

}  // namespace p1tr
