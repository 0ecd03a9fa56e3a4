#ifndef P1TR_THETA_HPP
#define P1TR_THETA_HPP

#include <vector>

#include "p1tr/types.hpp"

namespace p1tr {

// Jacobi theta functions with half-integer characteristics, series convention
//   theta[a,b](v,tau) = sum_k exp(pi*i*tau*(k+a)^2 + 2*pi*i*(k+a)*(v+b)),
// a,b in {0,1/2}.  Theta00 = theta[0,0], Theta01 = theta[0,1/2],
// Theta10 = theta[1/2,0], Theta11 = theta[1/2,1/2] (odd).
enum class ThetaKind { Theta00, Theta01, Theta10, Theta11 };

// Value and v-derivatives at a point: d[j] = (d/dv)^j theta(v,tau).
struct ThetaJet {
    std::vector<cplx> d;
    const cplx& operator[](std::size_t j) const { return d[j]; }
    int degree() const { return static_cast<int>(d.size()) - 1; }
};

// Derivative jet of theta[kind] at (v,tau), degrees 0..degree.  The argument
// is reduced into the fundamental cell (m = round(Im v/Im tau) copies of tau,
// then an integer shift), the series is summed there with the truncation tail
// below 1e-16 of the leading term, and the jet is transported back through
// the quasi-periodicity factor.  Throws BadModulus unless Im tau > 1e-8,
// NumericalError if the quasi-periodicity factor overflows.
ThetaJet theta_jet_unbounded(ThetaKind kind, cplx v, cplx tau, int degree);

// Same with the degree capped at 8 (InputError beyond); the advertised entry
// point for callers that only need low-order jets.
ThetaJet theta_jet(ThetaKind kind, cplx v, cplx tau, int degree);

}  // namespace p1tr

#endif
