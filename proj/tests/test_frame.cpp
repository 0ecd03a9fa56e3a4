#include <cmath>

#include "doctest.h"
#include "p1tr/frame.hpp"

using namespace p1tr;

namespace {

// Far-field expansion of the genus 0 free energy, through the nu^4/s^2 term.
cplx f0_series(cplx t, cplx nu, int terms) {
    const cplx s = std::pow(24.0, 0.25) * std::pow(-t, 1.25);
    const cplx pieces[6] = {
        s * s / 45.0,
        0.8 * I * nu * s,
        0.5 * nu * nu * std::log(nu / (48.0 * I * s)),
        -0.75 * nu * nu,
        -47.0 * I * nu * nu * nu / (48.0 * s),
        -7717.0 * nu * nu * nu * nu / (4608.0 * s * s),
    };
    cplx acc = 0.0;
    for (int i = 0; i < terms; ++i) acc += pieces[i];
    return acc;
}

}  // namespace

TEST_CASE("u solver pins the A-cycle integral to nu") {
    const std::pair<cplx, cplx> pts[] = {
        {{-50.0, 0.0}, {0.3, 0.0}},
        {{-30.0, 5.0}, {0.1, 0.05}},
        {{-80.0, -10.0}, {-0.2, 0.0}},
        {{-25.0, 0.0}, {0.5, 0.0}},
        {{-60.0, 20.0}, {0.25, -0.1}},
    };
    for (const auto& [t, nu] : pts) {
        const EllipticFrame fr = build_frame(t, nu);
        CHECK(std::abs(fr.periods.a_ydx - nu) < 1e-10 * (1.0 + std::abs(nu)));
        CHECK(fr.lat.tau.imag() > 0.0);
        CHECK(std::abs(fr.lat.bilinear_residual()) < 1e-10);
        // The far-field seed should land in the same basin as the solution.
        CHECK(std::abs(fr.u - u_leading(t, nu)) < 5e-2 * std::abs(fr.u));
    }

    // Two different seeds must reach the same member of the family.
    const cplx t{-50.0, 0.0}, nu{0.3, 0.0};
    const cplx u1 = solve_u(t, nu, u_leading(t, nu));
    const cplx u2 = solve_u(t, nu, u_leading(t, nu) * cplx{1.04, 0.03});
    CHECK(std::abs(u1 - u2) < 1e-9 * std::abs(u1));
}

TEST_CASE("frame derivative fields match direct differentiation of the family") {
    const std::pair<cplx, cplx> pts[] = {
        {{-50.0, 0.0}, {0.3, 0.0}},
        {{-35.0, 6.0}, {0.21, -0.08}},
    };
    for (const auto& [t0, nu0] : pts) {
        const EllipticFrame base = build_frame(t0, nu0);

        const double rt = 0.02 * (1.0 + std::abs(t0));
        auto u_of_t = [&](cplx t) { return build_frame_near(base, t, nu0).u; };
        auto phi_of_t = [&](cplx t) { return build_frame_near(base, t, nu0).phi; };
        auto f0_of_t = [&](cplx t) { return build_frame_near(base, t, nu0).f0(); };
        const auto du = cauchy_derivatives(u_of_t, t0, rt, 1);
        const auto dphi = cauchy_derivatives(phi_of_t, t0, rt, 1);
        const auto df0 = cauchy_derivatives(f0_of_t, t0, rt, 2);
        CHECK(std::abs(du[1] - base.du_dt) < 1e-7 * std::abs(base.du_dt));
        CHECK(std::abs(dphi[1] - base.dphi_dt) < 1e-7 * std::abs(base.dphi_dt));
        CHECK(std::abs(df0[1] - 0.5 * base.u) < 1e-8 * std::abs(base.u));
        const cplx d2f0 = base.lat.eta_A / base.lat.omega_A;
        CHECK(std::abs(df0[2] - d2f0) < 1e-7 * std::abs(d2f0));

        const double rn = 0.05 * (1.0 + std::abs(nu0));
        auto u_of_nu = [&](cplx nu) { return build_frame_near(base, t0, nu).u; };
        auto phi_of_nu = [&](cplx nu) { return build_frame_near(base, t0, nu).phi; };
        auto f0_of_nu = [&](cplx nu) { return build_frame_near(base, t0, nu).f0(); };
        const auto dun = cauchy_derivatives(u_of_nu, nu0, rn, 1);
        const auto dphin = cauchy_derivatives(phi_of_nu, nu0, rn, 1);
        const auto df0n = cauchy_derivatives(f0_of_nu, nu0, rn, 2);
        CHECK(std::abs(dun[1] - base.du_dnu) < 1e-7 * std::abs(base.du_dnu));
        CHECK(std::abs(dphin[1] - base.dphi_dnu) < 1e-7 * std::abs(base.dphi_dnu));
        CHECK(std::abs(df0n[1] - TWO_PI_I * base.phi) < 1e-7 * std::abs(TWO_PI_I * base.phi));
        const cplx d2f0n = TWO_PI_I * base.lat.tau;
        CHECK(std::abs(df0n[2] - d2f0n) < 1e-7 * std::abs(d2f0n));
    }
}

TEST_CASE("genus 0 free energy approaches the far-field series") {
    // Point chosen so the nu^4/s^2 term (about 5e-7 here) clearly exceeds the
    // quadrature noise: the test resolves every retained coefficient.
    const cplx t{-60.0, 0.0}, nu{0.45, 0.0};
    const EllipticFrame fr = build_frame(t, nu);
    CHECK(std::abs(fr.f0() - f0_series(t, nu, 6)) < 1.5e-7);
    CHECK(std::abs(fr.f0() - f0_series(t, nu, 5)) > 3e-7);

    // Looser far-field agreement at the canonical desk points.
    const EllipticFrame fa = build_frame({-50.0, 0.0}, {0.1, 0.0});
    CHECK(std::abs(fa.f0() - f0_series(fa.t, fa.nu, 4)) < 1e-2 * std::abs(fa.f0()));
    const EllipticFrame fb = build_frame({-200.0, 0.0}, {0.1, 0.0});
    CHECK(std::abs(fb.f0() - f0_series(fb.t, fb.nu, 4)) < 1e-3 * std::abs(fb.f0()));
}
