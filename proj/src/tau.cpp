#include "p1tr/tau.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "p1tr/quad.hpp"
#include "p1tr/wkb.hpp"

namespace p1tr {
namespace {

// ---------------------------------------------------------------------------
// Truncated bivariate Taylor jets.  Entry (j, l) multiplies dv^j dt^l around
// the working point (v*, t0).  The grid is sized so the deepest operator
// chain (four t-derivatives, ten v-derivatives reaching the corner, plus two
// v-orders per t-order consumed by the modulus flow of theta) stays inside.

constexpr int NV = 18;
constexpr int NT = 4;
constexpr int RING_N = 16;

struct Jet2 {
    std::array<cplx, (NV + 1) * (NT + 1)> c{};

    static int idx(int j, int l) { return j * (NT + 1) + l; }
    cplx at(int j, int l) const { return c[idx(j, l)]; }
    cplx& at(int j, int l) { return c[idx(j, l)]; }
    cplx corner() const { return c[0]; }
    bool is_zero() const {
        for (const cplx& z : c)
            if (z != 0.0) return false;
        return true;
    }
};

Jet2 j2_const(cplx v) {
    Jet2 r;
    r.at(0, 0) = v;
    return r;
}

Jet2 j2_add(const Jet2& a, const Jet2& b) {
    Jet2 r;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Jet2 j2_sub(const Jet2& a, const Jet2& b) {
    Jet2 r;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

Jet2 j2_scale(const Jet2& a, cplx s) {
    Jet2 r;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] * s;
    return r;
}

Jet2 j2_mul(const Jet2& a, const Jet2& b) {
    Jet2 r;
    for (int j1 = 0; j1 <= NV; ++j1)
        for (int l1 = 0; l1 <= NT; ++l1) {
            const cplx av = a.at(j1, l1);
            if (av == 0.0) continue;
            for (int j2 = 0; j1 + j2 <= NV; ++j2)
                for (int l2 = 0; l1 + l2 <= NT; ++l2)
                    r.at(j1 + j2, l1 + l2) += av * b.at(j2, l2);
        }
    return r;
}

Jet2 j2_dv(const Jet2& a) {
    Jet2 r;
    for (int j = 0; j < NV; ++j)
        for (int l = 0; l <= NT; ++l) r.at(j, l) = double(j + 1) * a.at(j + 1, l);
    return r;
}

Jet2 j2_dt(const Jet2& a) {
    Jet2 r;
    for (int j = 0; j <= NV; ++j)
        for (int l = 0; l < NT; ++l) r.at(j, l) = double(l + 1) * a.at(j, l + 1);
    return r;
}

Jet2 j2_inv(const Jet2& b) {
    if (b.at(0, 0) == 0.0) throw NumericalError("jet inverse: vanishing corner value");
    const cplx inv0 = 1.0 / b.at(0, 0);
    Jet2 q;
    for (int j = 0; j <= NV; ++j)
        for (int l = 0; l <= NT; ++l) {
            cplx acc = (j == 0 && l == 0) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            for (int j2 = 0; j2 <= j; ++j2)
                for (int l2 = 0; l2 <= l; ++l2) {
                    if (j2 == j && l2 == l) continue;
                    acc -= b.at(j - j2, l - l2) * q.at(j2, l2);
                }
            q.at(j, l) = acc * inv0;
        }
    return q;
}

// ---------------------------------------------------------------------------
// hbar-graded series of jets.  Coefficients are stored for the powers
// m0 .. m0+len-1 and are all trusted; powers below m0 are exactly zero,
// powers above the stored range are unknown (lost to truncation), so every
// operation shrinks the top to what it can actually determine.

struct Graded {
    int m0 = 0;
    std::vector<Jet2> g;

    int top() const { return m0 + int(g.size()) - 1; }
};

const Jet2& g_coeff(const Graded& a, int m) {
    static const Jet2 zero{};
    if (m < a.m0) return zero;
    assert(m <= a.top());
    return a.g[std::size_t(m - a.m0)];
}

Graded gr_range(int m0, int top) {
    Graded r;
    r.m0 = m0;
    r.g.resize(std::size_t(top - m0 + 1));
    return r;
}

Graded gr_add(const Graded& a, const Graded& b) {
    Graded r = gr_range(std::min(a.m0, b.m0), std::min(a.top(), b.top()));
    for (int m = r.m0; m <= r.top(); ++m)
        r.g[std::size_t(m - r.m0)] = j2_add(g_coeff(a, m), g_coeff(b, m));
    return r;
}

Graded gr_sub(const Graded& a, const Graded& b) {
    Graded r = gr_range(std::min(a.m0, b.m0), std::min(a.top(), b.top()));
    for (int m = r.m0; m <= r.top(); ++m)
        r.g[std::size_t(m - r.m0)] = j2_sub(g_coeff(a, m), g_coeff(b, m));
    return r;
}

Graded gr_scale(const Graded& a, cplx s) {
    Graded r = a;
    for (Jet2& j : r.g) j = j2_scale(j, s);
    return r;
}

Graded gr_shift(Graded a, int k) {
    a.m0 += k;
    return a;
}

Graded gr_mul(const Graded& a, const Graded& b) {
    Graded r = gr_range(a.m0 + b.m0, std::min(a.top() + b.m0, b.top() + a.m0));
    for (int m = r.m0; m <= r.top(); ++m) {
        Jet2 acc{};
        for (int i = a.m0; i <= a.top(); ++i) {
            const int j = m - i;
            if (j < b.m0 || j > b.top()) continue;
            acc = j2_add(acc, j2_mul(g_coeff(a, i), g_coeff(b, j)));
        }
        r.g[std::size_t(m - r.m0)] = acc;
    }
    return r;
}

Graded gr_div(const Graded& a, const Graded& b) {
    const Jet2 binv = j2_inv(g_coeff(b, b.m0));
    Graded q = gr_range(a.m0 - b.m0, std::min(a.top() - b.m0, a.m0 - 2 * b.m0 + b.top()));
    for (int m = q.m0; m <= q.top(); ++m) {
        Jet2 acc = g_coeff(a, m + b.m0);
        for (int k = q.m0; k < m; ++k)
            acc = j2_sub(acc, j2_mul(q.g[std::size_t(k - q.m0)], g_coeff(b, m - k + b.m0)));
        q.g[std::size_t(m - q.m0)] = j2_mul(acc, binv);
    }
    return q;
}

// Grading-shifting t-derivative: because the substituted theta argument
// carries phi(t)/hbar, the derivative of the hbar^m coefficient picks up
// (dphi/dt) d/dv of the coefficient one level higher.
Graded gr_flow(const Graded& a, const Jet2& dphi) {
    Graded r = gr_range(a.m0 - 1, a.top() - 1);
    for (int m = r.m0; m <= r.top(); ++m)
        r.g[std::size_t(m - r.m0)] =
            j2_add(j2_dt(g_coeff(a, m)), j2_mul(dphi, j2_dv(g_coeff(a, m + 1))));
    return r;
}

void gr_trim(Graded& a) {
    while (a.g.size() > 1 && a.g.front().is_zero()) {
        a.g.erase(a.g.begin());
        ++a.m0;
    }
}

// ---------------------------------------------------------------------------
// Jets of frame data along a t-circle.

struct FrameJets {
    Jet2 u_half;   // u(t)/2, the t-derivative of the genus-0 free energy
    Jet2 dtF1;     // d/dt of the genus-1 free energy
    Jet2 dphi;     // d/dt of the B-period phase (1/omega_A)
    Jet2 tau_jet;  // modulus tau(t)
    double rt = 0.0;
    std::vector<EllipticFrame> ring;
};

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

FrameJets t_jets_at(const EllipticFrame& fr) {
    FrameJets out;
    out.rt = 0.05 * (1.0 + std::abs(fr.t));
    out.ring = frame_ring(fr, 't', out.rt, RING_N);
    std::vector<cplx> uv(RING_N), dphv(RING_N), tauv(RING_N), f1v(RING_N);
    for (int k = 0; k < RING_N; ++k) {
        uv[k] = out.ring[k].u;
        dphv[k] = out.ring[k].dphi_dt;
        tauv[k] = out.ring[k].lat.tau;
        f1v[k] = out.ring[k].f1();
    }
    unwind_ring(f1v, PI / 6.0);
    out.u_half.at(0, 0) = fr.u / 2.0;
    out.dphi.at(0, 0) = fr.dphi_dt;
    out.tau_jet.at(0, 0) = fr.lat.tau;
    for (int l = 1; l <= NT; ++l) {
        const double lf = factorial(l);
        out.u_half.at(0, l) = ring_derivative(uv, out.rt, l) / (2.0 * lf);
        out.dphi.at(0, l) = ring_derivative(dphv, out.rt, l) / lf;
        out.tau_jet.at(0, l) = ring_derivative(tauv, out.rt, l) / lf;
    }
    for (int l = 0; l <= NT; ++l)
        out.dtF1.at(0, l) = ring_derivative(f1v, out.rt, l + 1) / factorial(l);
    return out;
}

// theta00 as a bivariate jet in (dv, dt): the t-dependence flows through the
// modulus, and each tau-derivative trades for two v-derivatives via
// d theta/d tau = theta''/(4 pi i).
Jet2 theta2d(cplx vstar, const Jet2& tau_jet) {
    const cplx tau0 = tau_jet.at(0, 0);
    const ThetaJet J = theta_jet_unbounded(ThetaKind::Theta00, vstar, tau0, NV + 2 * NT);
    if (std::abs(J[0]) * 1e8 < std::abs(J[1]))
        throw InputError("tau engine: evaluation point sits near a zero of theta00; move rho");
    Jet2 dtau = tau_jet;
    dtau.at(0, 0) = 0.0;
    Jet2 acc{};
    Jet2 tpow = j2_const(1.0);
    for (int p = 0; p <= NT; ++p) {
        if (p > 0) tpow = j2_mul(tpow, dtau);
        const cplx hp = std::pow(4.0 * PI * I, p) * factorial(p);
        Jet2 row{};
        for (int j = 0; j <= NV && j + 2 * p <= NV + 2 * NT; ++j)
            row.at(j, 0) = J[j + 2 * p] / (hp * factorial(j));
        acc = j2_add(acc, j2_mul(row, tpow));
    }
    return acc;
}

Jet2 dv_pow(Jet2 a, int n) {
    for (int i = 0; i < n; ++i) a = j2_dv(a);
    return a;
}

// ---------------------------------------------------------------------------
// Engine: assemble the graded series and the two residuals.

struct EngineInput {
    cplx t0;
    Jet2 u_half, dtF1, dphi, theta;
    Jet2 th1, th2;
    int L = 0;  // highest theta block supplied
};

struct EngineOut {
    Graded H, q, p, RP, RH;
};

EngineOut run_engine(const EngineInput& in) {
    Graded theta_hat;
    theta_hat.m0 = 0;
    theta_hat.g.push_back(in.theta);
    if (in.L >= 1) theta_hat.g.push_back(in.th1);
    if (in.L >= 2) theta_hat.g.push_back(in.th2);

    // d/dt of the genus expansion of log Z; the hbar^4 coefficient would be
    // the genus-2 term, beyond this range.
    Graded dtF;
    dtF.m0 = 0;
    dtF.g = {in.u_half, Jet2{}, in.dtF1, Jet2{}};

    const Graded frac = gr_div(gr_flow(theta_hat, in.dphi), theta_hat);
    const Graded H = gr_add(dtF, gr_shift(frac, 2));

    Graded q = gr_scale(gr_flow(H, in.dphi), -1.0);
    gr_trim(q);
    Graded p = gr_shift(gr_flow(q, in.dphi), 1);
    gr_trim(p);
    const Graded lhs = gr_shift(gr_flow(p, in.dphi), 1);

    // t itself, exact at every grading
    Graded tg;
    tg.m0 = 0;
    tg.g.resize(7);
    tg.g[0].at(0, 0) = in.t0;
    tg.g[0].at(0, 1) = 1.0;

    const Graded qq = gr_mul(q, q);
    const Graded RP = gr_sub(lhs, gr_add(gr_scale(qq, 6.0), tg));
    const Graded RH =
        gr_add(gr_sub(H, gr_scale(gr_mul(p, p), 0.5)),
               gr_add(gr_scale(gr_mul(qq, q), 2.0), gr_mul(tg, q)));
    return {H, q, p, RP, RH};
}

EngineInput make_input(const EllipticFrame& fr, const TauParameters& par, int L,
                       const NuDerivativeTable* tab, bool explicit_table_required) {
    if (par.hbar == 0.0) throw InputError("tau engine: hbar must be nonzero");
    if (std::abs(par.nu - fr.nu) > 1e-10 * (1.0 + std::abs(fr.nu)))
        throw InputError("tau engine: parameters disagree with the frame about nu");

    EngineInput in;
    in.t0 = fr.t;
    in.L = L;
    const FrameJets fj = t_jets_at(fr);
    in.u_half = fj.u_half;
    in.dtF1 = fj.dtF1;
    in.dphi = fj.dphi;
    in.theta = theta2d((fr.phi + par.rho) / par.hbar, fj.tau_jet);

    if (L >= 1) {
        const int need = L == 2 ? 4 : 3;
        NuDerivativeTable local;
        if (!tab) {
            if (explicit_table_required)
                throw MissingDerivativeTable(
                    "tau engine: this order needs an explicitly supplied depth-4 table");
            local = nu_table_by_rings(fr, need);
            tab = &local;
        }
        if (tab->depth < need)
            throw MissingDerivativeTable("tau engine: derivative table too shallow for the order");

        Jet2 a_t = j2_const(tab->d3F0 / (std::pow(TWO_PI_I, 3) * 6.0));
        Jet2 b_t = j2_const(tab->dF1 / TWO_PI_I);
        if (L == 2) {
            // at this order the t-dependence of the block coefficients enters
            // the flow; sample the table around the t-circle
            std::vector<cplx> av(RING_N), bv(RING_N);
            for (int k = 0; k < RING_N; ++k) {
                const NuDerivativeTable tk = nu_table_by_rings(fj.ring[k], 3);
                av[k] = tk.d3F0 / (std::pow(TWO_PI_I, 3) * 6.0);
                bv[k] = tk.dF1 / TWO_PI_I;
            }
            for (int l = 1; l <= NT; ++l) {
                a_t.at(0, l) = ring_derivative(av, fj.rt, l) / factorial(l);
                b_t.at(0, l) = ring_derivative(bv, fj.rt, l) / factorial(l);
            }
        }
        in.th1 = j2_add(j2_mul(a_t, dv_pow(in.theta, 3)), j2_mul(b_t, j2_dv(in.theta)));
        if (L == 2) {
            const cplx a = tab->d3F0 / 6.0, b = tab->dF1;
            const cplx A6 = a * a / (2.0 * std::pow(TWO_PI_I, 6));
            const cplx A4 = (a * b + tab->d4F0 / 24.0) / std::pow(TWO_PI_I, 4);
            const cplx A2 = (b * b + tab->d2F1) / (2.0 * std::pow(TWO_PI_I, 2));
            in.th2 = j2_add(j2_scale(dv_pow(in.theta, 6), A6),
                            j2_add(j2_scale(dv_pow(in.theta, 4), A4),
                                   j2_scale(dv_pow(in.theta, 2), A2)));
        }
    }
    return in;
}

// ---------------------------------------------------------------------------
// Iterated B-cycle quadrature for the third nu-derivative of F0: three full
// period lines, trapezoidal in each slot (the integrand is periodic and
// analytic near the lines, so the rule converges geometrically).  The three
// lines are offset slightly so no two slots ever coincide.

cplx triple_b_integral(CorrelatorEvaluator& ev) {
    const EllipticFrame& fr = ev.frame();
    const cplx wA = fr.lat.omega_A, wB = fr.lat.omega_B;
    const double clear = 1.03 * ev.required_clearance(0, 3);
    const double slot_off[3] = {0.0, 0.009, 0.018};

    double alpha = -1.0;
    for (const double cand : {0.23, 0.41, 0.17, 0.31, 0.47, 0.11, 0.37, 0.29}) {
        double dmin = 1e300;
        for (int s = 0; s < 3; ++s)
            for (int k = 0; k < 97; ++k)
                dmin = std::min(dmin, ev.ramification_distance((cand + slot_off[s]) * wA +
                                                              (double(k) / 97.0) * wB));
        if (dmin >= clear) {
            alpha = cand;
            break;
        }
    }
    if (alpha < 0.0)
        throw NumericalError("nu_table_by_cycles: no period line keeps clear of the "
                             "ramification points");

    constexpr int N = 32;
    std::array<std::array<cplx, N>, 3> node;
    for (int s = 0; s < 3; ++s)
        for (int j = 0; j < N; ++j)
            node[s][j] = (alpha + slot_off[s]) * wA + (double(j) / N) * wB;

    cplx full{}, half{};
    for (int j1 = 0; j1 < N; ++j1)
        for (int j2 = 0; j2 < N; ++j2)
            for (int j3 = 0; j3 < N; ++j3) {
                const std::array<cplx, 3> pts{node[0][j1], node[1][j2], node[2][j3]};
                const cplx w = ev.w(0, pts);
                full += w;
                if (j1 % 2 == 0 && j2 % 2 == 0 && j3 % 2 == 0) half += w;
            }
    const cplx step = wB / double(N);
    full *= step * step * step;
    half *= 8.0 * step * step * step;
    // geometric convergence squares the error from N/2 to N, so a modest
    // agreement here already certifies the full rule to far better
    if (std::abs(full - half) > 1e-4 * (1.0 + std::abs(full)))
        throw NumericalError("nu_table_by_cycles: period-line quadrature did not settle");
    return full;
}

}  // namespace

// ---------------------------------------------------------------------------

cplx ThetaCoeff::eval(const EllipticFrame& fr, const TauParameters& par) const {
    if (par.hbar == 0.0) throw InputError("ThetaCoeff::eval: hbar must be nonzero");
    if (std::abs(par.nu - fr.nu) > 1e-10 * (1.0 + std::abs(fr.nu)))
        throw InputError("ThetaCoeff::eval: parameters disagree with the frame about nu");
    int deg = 0;
    for (const auto& [aj, j] : terms) {
        if (j < 0) throw InputError("ThetaCoeff::eval: negative derivative order");
        deg = std::max(deg, j);
    }
    const cplx v = (fr.phi + par.rho) / par.hbar + shift;
    const ThetaJet J = theta_jet(ThetaKind::Theta00, v, fr.lat.tau, deg);
    cplx acc{};
    for (const auto& [aj, j] : terms) acc += aj * J[j];
    return acc;
}

NuDerivativeTable nu_table_by_rings(const EllipticFrame& fr, int depth) {
    if (depth != 3 && depth != 4)
        throw InputError("nu_table_by_rings: depth must be 3 or 4");
    const double rn = 0.02 * (1.0 + std::abs(fr.nu));
    const auto ring = frame_ring(fr, 'n', rn, RING_N);
    std::vector<cplx> tauv(RING_N), f1v(RING_N);
    for (int k = 0; k < RING_N; ++k) {
        tauv[k] = ring[k].lat.tau;
        f1v[k] = ring[k].f1();
    }
    unwind_ring(f1v, PI / 6.0);
    NuDerivativeTable tab;
    tab.depth = depth;
    tab.d3F0 = TWO_PI_I * ring_derivative(tauv, rn, 1);
    tab.dF1 = ring_derivative(f1v, rn, 1);
    if (depth == 4) {
        tab.d4F0 = TWO_PI_I * ring_derivative(tauv, rn, 2);
        tab.d2F1 = ring_derivative(f1v, rn, 2);
    }
    return tab;
}

NuDerivativeTable nu_table_by_cycles(CorrelatorEvaluator& ev, int depth) {
    if (depth != 3 && depth != 4)
        throw InputError("nu_table_by_cycles: depth must be 3 or 4");
    NuDerivativeTable tab;
    tab.depth = depth;
    tab.dF1 = ev.cycle_integral('B', 1, {});
    tab.d3F0 = triple_b_integral(ev);
    if (depth == 4) {
        // a fourth nested period integral is not worth its cost; these two
        // entries come from parameter rings of exact period data instead and
        // are cross-checked against the ring table in the tests
        const NuDerivativeTable rt = nu_table_by_rings(ev.frame(), 4);
        tab.d4F0 = rt.d4F0;
        tab.d2F1 = rt.d2F1;
    }
    return tab;
}

ThetaCoeff theta_block(int m, const EllipticFrame&, const NuDerivativeTable& dnuF) {
    if (m < 0) throw InputError("theta_block: m must be >= 0");
    if (m > 2) throw BudgetExceeded("theta_block: blocks beyond m = 2 are not budgeted");
    ThetaCoeff out;
    if (m == 0) {
        out.terms = {{cplx{1.0, 0.0}, 0}};
        return out;
    }
    if (dnuF.depth < (m == 2 ? 4 : 3))
        throw MissingDerivativeTable("theta_block: derivative table too shallow");
    if (m == 1) {
        out.terms = {{dnuF.d3F0 / (std::pow(TWO_PI_I, 3) * 6.0), 3},
                     {dnuF.dF1 / TWO_PI_I, 1}};
        return out;
    }
    const cplx a = dnuF.d3F0 / 6.0, b = dnuF.dF1;
    out.terms = {{a * a / (2.0 * std::pow(TWO_PI_I, 6)), 6},
                 {(a * b + dnuF.d4F0 / 24.0) / std::pow(TWO_PI_I, 4), 4},
                 {(b * b + dnuF.d2F1) / (2.0 * std::pow(TWO_PI_I, 2)), 2}};
    return out;
}

WaveNuTable wave_nu_table(cplx x, const EllipticFrame& fr) {
    const double rn = 0.02 * (1.0 + std::abs(fr.nu));
    const auto ring = frame_ring(fr, 'n', rn, RING_N);
    std::vector<cplx> sm1(RING_N), s0v(RING_N);
    for (int k = 0; k < RING_N; ++k) {
        sm1[k] = s_minus1(x, ring[k]);
        s0v[k] = s_zero(x, ring[k]);
    }
    unwind_ring(s0v, PI / 2.0);
    WaveNuTable out;
    out.d2S_minus1 = ring_derivative(sm1, rn, 2);
    out.dS0 = ring_derivative(s0v, rn, 1);
    return out;
}

ThetaCoeff xi_block(int sign, int m, cplx x, const EllipticFrame& fr,
                    const NuDerivativeTable& dnuF, const WaveNuTable& ws) {
    if (sign != 1 && sign != -1) throw InputError("xi_block: sign must be +1 or -1");
    if (m < 0) throw InputError("xi_block: m must be >= 0");
    if (m > 1) throw BudgetExceeded("xi_block: blocks beyond m = 1 are not budgeted");
    ThetaCoeff out;
    out.shift = double(sign) * inverse_abel(x, fr.curve, fr.lat) / fr.lat.omega_A;
    if (m == 0) {
        out.terms = {{cplx{1.0, 0.0}, 0}};
        return out;
    }
    if (dnuF.depth < 3)
        throw MissingDerivativeTable("xi_block: derivative table too shallow");
    out.terms = {{dnuF.d3F0 / (std::pow(TWO_PI_I, 3) * 6.0), 3},
                 {double(sign) * ws.d2S_minus1 / (std::pow(TWO_PI_I, 2) * 2.0), 2},
                 {(dnuF.dF1 + ws.dS0) / TWO_PI_I, 1}};
    return out;
}

cplx HbarSeries::at(int m) const {
    if (m < lowest) return {0.0, 0.0};
    if (m > highest()) throw InputError("HbarSeries::at: beyond the computed order");
    return coeff[std::size_t(m - lowest)];
}

HqpSeries hqp_series(int order, const EllipticFrame& fr, const TauParameters& par,
                     const NuDerivativeTable* dnuF) {
    if (order < 0) throw InputError("hqp_series: order must be >= 0");
    if (order > 2) throw BudgetExceeded("hqp_series: orders beyond 2 are not budgeted");
    const EngineOut out = run_engine(make_input(fr, par, order, dnuF,
                                                /*explicit_table_required=*/order == 2));
    HqpSeries s;
    s.H.lowest = s.q.lowest = s.p.lowest = 0;
    for (int m = 0; m <= order; ++m) {
        s.H.coeff.push_back(g_coeff(out.H, m).corner());
        s.q.coeff.push_back(g_coeff(out.q, m).corner());
        s.p.coeff.push_back(g_coeff(out.p, m).corner());
    }
    return s;
}

cplx q_leading(cplx t, cplx nu, cplx rho, cplx hbar) {
    if (hbar == 0.0) throw InputError("q_leading: hbar must be nonzero");
    const EllipticFrame fr = build_frame(t, nu);
    const cplx wA = fr.lat.omega_A, wB = fr.lat.omega_B;
    cplx z = 4.0 * t / (5.0 * hbar) + (rho / hbar + 0.5) * wA + (nu / hbar + 0.5) * wB;
    const double det = wA.real() * wB.imag() - wA.imag() * wB.real();
    const double al = (z.real() * wB.imag() - z.imag() * wB.real()) / det;
    const double be = (wA.real() * z.imag() - wA.imag() * z.real()) / det;
    z -= std::round(al) * wA + std::round(be) * wB;
    return weierstrass_jet(z, fr.lat).wp;
}

cplx painleve_residual(int order, const EllipticFrame& fr, const TauParameters& par,
                       const NuDerivativeTable* dnuF) {
    if (order < 0) throw InputError("painleve_residual: order must be >= 0");
    if (order > 1) throw BudgetExceeded("painleve_residual: orders beyond 1 are not budgeted");
    const EngineOut out = run_engine(make_input(fr, par, order, dnuF, false));
    assert(out.RP.top() >= order && out.RH.top() >= order);
    const cplx rp = g_coeff(out.RP, order).corner();
    const cplx rh = g_coeff(out.RH, order).corner();
    return std::abs(rp) >= std::abs(rh) ? rp : rh;
}

std::array<cplx, 5> stokes_multipliers(const TauParameters& par) {
    if (par.hbar == 0.0) throw InputError("stokes_multipliers: hbar must be nonzero");
    const cplx en = std::exp(TWO_PI_I * par.nu / par.hbar);
    const cplx er = std::exp(TWO_PI_I * par.rho / par.hbar);
    return {
        I * (1.0 / er - en / er),
        I * (1.0 / en - er / en),
        I * en,
        I * (1.0 / en - 1.0 / (en * er) + 1.0 / er),
        I * er,
    };
}

std::array<cplx, 5> multipliers_from_graph(const std::vector<StokesCurveLabel>& curves,
                                           const TauParameters& par) {
    if (par.hbar == 0.0) throw InputError("multipliers_from_graph: hbar must be nonzero");
    std::array<cplx, 5> acc{};
    for (const StokesCurveLabel& c : curves) {
        if (c.sign != 1 && c.sign != -1)
            throw UnlabeledCurve("multipliers_from_graph: curve carries no dominance sign");
        if (c.ell < -2 || c.ell > 2)
            throw InputError("multipliers_from_graph: direction index outside -2..2");
        const double parity = (c.m * c.n) % 2 != 0 ? -1.0 : 1.0;
        acc[std::size_t(c.ell + 2)] +=
            parity * std::exp(double(c.sign) * TWO_PI_I *
                              (double(c.m) * par.nu - double(c.n) * par.rho) / par.hbar);
    }
    for (cplx& s : acc) s *= I;
    return acc;
}

std::vector<StokesCurveLabel> reference_configuration() {
    // three curves leave each branch point; (ell, m, n, sign)
    return {
        {0, 1, 0, +1},
        {1, 1, 0, -1},
        {-1, 1, 0, -1},
        {1, 0, -1, -1},
        {2, 0, -1, +1},
        {-2, 0, 1, +1},
        {1, 1, -1, -1},
        {-1, 1, 1, -1},
        {-2, 1, 1, +1},
    };
}

}  // namespace p1tr
