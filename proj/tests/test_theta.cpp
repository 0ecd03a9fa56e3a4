#include <cmath>
#include <random>

#include "doctest.h"
#include "p1tr/theta.hpp"

using namespace p1tr;

namespace {

// Direct series sum with a fixed wide truncation, no argument reduction.
// Slow reference used to pin the production implementation.
cplx theta_direct(ThetaKind kind, cplx v, cplx tau, int order, int K = 60) {
    double a = 0.0, b = 0.0;
    switch (kind) {
        case ThetaKind::Theta00: break;
        case ThetaKind::Theta01: b = 0.5; break;
        case ThetaKind::Theta10: a = 0.5; break;
        case ThetaKind::Theta11: a = 0.5; b = 0.5; break;
    }
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        const double n = k + a;
        const cplx term = std::exp(cplx{0.0, PI} * tau * (n * n) + TWO_PI_I * n * (v + b));
        acc += std::pow(TWO_PI_I * n, order) * term;
    }
    return acc;
}

std::mt19937 rng_for(const char* tag) {
    std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
    return std::mt19937(seq);
}

cplx rand_box(std::mt19937& g, double re_lo, double re_hi, double im_lo, double im_hi) {
    std::uniform_real_distribution<double> re(re_lo, re_hi), im(im_lo, im_hi);
    return {re(g), im(g)};
}

}  // namespace

TEST_CASE("theta00 at the lemniscatic point matches the frozen reference") {
    const ThetaJet j = theta_jet(ThetaKind::Theta00, {0.0, 0.0}, {0.0, 1.0}, 0);
    CHECK(std::abs(j[0] - cplx{1.086434811213308, 0.0}) < 1e-14);
}

TEST_CASE("theta jets agree with the direct truncated sum") {
    auto g = rng_for("theta-direct");
    const ThetaKind kinds[] = {ThetaKind::Theta00, ThetaKind::Theta01, ThetaKind::Theta10,
                               ThetaKind::Theta11};
    for (int trial = 0; trial < 12; ++trial) {
        const cplx tau = rand_box(g, -0.45, 0.45, 0.55, 1.9);
        const cplx v = rand_box(g, -0.48, 0.48, -0.4, 0.4);
        for (ThetaKind k : kinds) {
            const ThetaJet j = theta_jet(k, v, tau, 6);
            for (int d = 0; d <= 6; ++d) {
                const cplx ref = theta_direct(k, v, tau, d);
                CHECK(std::abs(j[d] - ref) <= 1e-12 * (std::abs(ref) + 1.0));
            }
        }
    }
}

TEST_CASE("argument reduction reproduces the direct sum away from the cell") {
    auto g = rng_for("theta-reduce");
    for (int trial = 0; trial < 10; ++trial) {
        const cplx tau = rand_box(g, -0.4, 0.4, 0.7, 1.6);
        const cplx v = rand_box(g, -4.0, 4.0, -3.0, 3.0);
        for (int d = 0; d <= 3; ++d) {
            const cplx ref = theta_direct(ThetaKind::Theta00, v, tau, d, 80);
            const cplx got = theta_jet(ThetaKind::Theta00, v, tau, 3)[d];
            CHECK(std::abs(got - ref) <= 1e-11 * (std::abs(ref) + 1.0));
        }
    }
}

TEST_CASE("theta00 addition identity") {
    auto g = rng_for("theta-addition");
    for (int trial = 0; trial < 10; ++trial) {
        const cplx tau = rand_box(g, -0.45, 0.45, 0.6, 1.7);
        const cplx X = rand_box(g, -0.45, 0.45, -0.35, 0.35);
        const cplx Y = rand_box(g, -0.45, 0.45, -0.35, 0.35);
        auto t00 = [&](cplx v) { return theta_jet(ThetaKind::Theta00, v, tau, 0)[0]; };
        auto t11 = [&](cplx v) { return theta_jet(ThetaKind::Theta11, v, tau, 0)[0]; };
        const cplx z0 = t00({0.0, 0.0});
        const cplx lhs = t00(X + Y) * t00(X - Y) * z0 * z0;
        const cplx rhs = sq(t00(X)) * sq(t00(Y)) + sq(t11(X)) * sq(t11(Y));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs)));
    }
}

TEST_CASE("theta parity") {
    auto g = rng_for("theta-parity");
    for (int trial = 0; trial < 6; ++trial) {
        const cplx tau = rand_box(g, -0.4, 0.4, 0.6, 1.5);
        const cplx v = rand_box(g, -0.45, 0.45, -0.3, 0.3);
        const cplx e00 = theta_jet(ThetaKind::Theta00, v, tau, 0)[0] -
                         theta_jet(ThetaKind::Theta00, -v, tau, 0)[0];
        const cplx o11 = theta_jet(ThetaKind::Theta11, v, tau, 0)[0] +
                         theta_jet(ThetaKind::Theta11, -v, tau, 0)[0];
        CHECK(std::abs(e00) < 1e-13);
        CHECK(std::abs(o11) < 1e-13);
    }
}

TEST_CASE("theta00 as a shifted theta11") {
    // theta00(v) = -exp(pi i v + pi i tau/4) theta11(v + 1/2 + tau/2)
    auto g = rng_for("theta-shift");
    for (int trial = 0; trial < 6; ++trial) {
        const cplx tau = rand_box(g, -0.4, 0.4, 0.7, 1.5);
        const cplx v = rand_box(g, -0.45, 0.45, -0.3, 0.3);
        const cplx lhs = theta_jet(ThetaKind::Theta00, v, tau, 0)[0];
        const cplx shifted = theta_jet(ThetaKind::Theta11, v + 0.5 + 0.5 * tau, tau, 0)[0];
        const cplx rhs = -std::exp(cplx{0.0, PI} * (v + 0.25 * tau)) * shifted;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1.0));
    }
}

TEST_CASE("jet derivatives agree with central differences of the value") {
    auto g = rng_for("theta-fd");
    const double h = 1e-3;
    for (int trial = 0; trial < 5; ++trial) {
        const cplx tau = rand_box(g, -0.4, 0.4, 0.7, 1.5);
        const cplx v = rand_box(g, -0.4, 0.4, -0.25, 0.25);
        const ThetaJet j = theta_jet(ThetaKind::Theta00, v, tau, 5);
        for (int k = 0; k <= 4; ++k) {
            auto f = [&](double s) { return theta_jet(ThetaKind::Theta00, v + s, tau, 5)[k]; };
            const cplx fd =
                (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
            CHECK(std::abs(fd - j[k + 1]) <= 1e-6 * (std::abs(j[k + 1]) + 1.0));
        }
    }
}

TEST_CASE("theta error cases") {
    CHECK_THROWS_AS(theta_jet(ThetaKind::Theta00, {0.1, 0.0}, {0.5, -1.0}, 0), BadModulus);
    CHECK_THROWS_AS(theta_jet(ThetaKind::Theta00, {0.1, 0.0}, {0.5, 0.0}, 0), BadModulus);
    CHECK_THROWS_AS(theta_jet(ThetaKind::Theta00, {0.1, 0.0}, {0.0, 1.0}, 9), InputError);
}
