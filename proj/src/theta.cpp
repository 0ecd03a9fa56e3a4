#include "p1tr/theta.hpp"

#include <cmath>
#include <cstdlib>

namespace p1tr {

namespace {

struct Characteristic {
    double a;
    double b;
};

Characteristic characteristic(ThetaKind kind) {
    switch (kind) {
        case ThetaKind::Theta00: return {0.0, 0.0};
        case ThetaKind::Theta01: return {0.0, 0.5};
        case ThetaKind::Theta10: return {0.5, 0.0};
        case ThetaKind::Theta11: return {0.5, 0.5};
    }
    throw InputError("theta_jet: unknown kind");
}

// Direct series sum at a reduced argument.  Terms are added in rings
// k = 0, ±1, ±2, ... and the loop stops once a whole ring contributes less
// than 1e-17 of the largest magnitude seen in the top derivative row.
ThetaJet sum_reduced(const Characteristic& ch, cplx v, cplx tau, int degree) {
    std::vector<cplx> acc(degree + 1, cplx{0.0, 0.0});
    const cplx pit = cplx{0.0, PI} * tau;

    double top_max = 0.0;
    int quiet_rings = 0;
    const int max_k = 4000;

    auto add_term = [&](double k) {
        const double n = k + ch.a;
        const cplx expo = pit * (n * n) + TWO_PI_I * n * (v + ch.b);
        const cplx base = std::exp(expo);
        cplx weight{1.0, 0.0};
        const cplx step = TWO_PI_I * n;
        for (int j = 0; j <= degree; ++j) {
            acc[j] += weight * base;
            if (j == degree) {
                const double mag = std::abs(weight * base);
                if (mag > top_max) top_max = mag;
            }
            weight *= step;
        }
        return std::abs(base) * std::pow(std::abs(step) + 1.0, degree);
    };

    for (int k = 0; k <= max_k; ++k) {
        double ring = add_term(static_cast<double>(k));
        if (k > 0 || ch.a != 0.0) ring += add_term(-static_cast<double>(k) - 2.0 * ch.a);
        if (k >= 2 && ring <= 1e-17 * (top_max + 1e-300)) {
            if (++quiet_rings >= 2) {
                ThetaJet jet;
                jet.d = std::move(acc);
                return jet;
            }
        } else {
            quiet_rings = 0;
        }
    }
    throw QuadratureFailure("theta_jet: series did not settle (Im tau too small?)");
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

}  // namespace

ThetaJet theta_jet_unbounded(ThetaKind kind, cplx v, cplx tau, int degree) {
    if (degree < 0) throw InputError("theta_jet: negative degree");
    if (!(tau.imag() > 1e-8)) throw BadModulus("theta_jet: need Im tau > 1e-8");

    const Characteristic ch = characteristic(kind);

    // v = v0 + n + m*tau with v0 in the fundamental cell.
    const double m_real = v.imag() / tau.imag();
    const long m = std::lround(m_real);
    cplx shifted = v - static_cast<double>(m) * tau;
    const long n = std::lround(shifted.real());
    const cplx v0 = shifted - static_cast<double>(n);

    ThetaJet base = sum_reduced(ch, v0, tau, degree);
    if (m == 0 && n == 0) return base;

    // theta(v0 + n + m*tau) = s * exp(pi*i*tau*m^2) * exp(-2*pi*i*m*v) * theta(v0),
    // s = exp(2*pi*i*(a*n - b*m)) = ±1.  As a function of v this multiplies the
    // jet by an exponential, so derivatives mix by a binomial sum.
    const double md = static_cast<double>(m);
    double sign = 1.0;
    if (std::lround(2.0 * ch.a) % 2 != 0 && n % 2 != 0) sign = -sign;
    if (std::lround(2.0 * ch.b) % 2 != 0 && m % 2 != 0) sign = -sign;

    const cplx log_pref = cplx{0.0, PI} * tau * (md * md) - TWO_PI_I * md * v;
    if (log_pref.real() > 690.0)
        throw NumericalError("theta_jet: quasi-periodicity factor overflows");
    const cplx pref = sign * std::exp(log_pref);
    const cplx lam = -TWO_PI_I * md;

    ThetaJet out;
    out.d.assign(degree + 1, cplx{0.0, 0.0});
    for (int j = 0; j <= degree; ++j) {
        cplx s{0.0, 0.0};
        cplx lam_pow{1.0, 0.0};
        for (int i = j; i >= 0; --i) {
            s += binomial(j, j - i) * lam_pow * base.d[i];
            lam_pow *= lam;
        }
        out.d[j] = pref * s;
    }
    return out;
}

ThetaJet theta_jet(ThetaKind kind, cplx v, cplx tau, int degree) {
    if (degree > 8) throw InputError("theta_jet: derivative order capped at 8");
    return theta_jet_unbounded(kind, v, tau, degree);
}

}  // namespace p1tr
