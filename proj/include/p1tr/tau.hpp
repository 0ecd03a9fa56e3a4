#ifndef P1TR_TAU_HPP
#define P1TR_TAU_HPP

#include <array>
#include <vector>

#include "p1tr/frame.hpp"
#include "p1tr/theta.hpp"
#include "p1tr/toprec.hpp"
#include "p1tr/types.hpp"

namespace p1tr {

// The two-parameter series built from the partition function Z(t,nu) by a
// discrete Fourier transform in nu with dual variable rho,
//   tau_hat = sum_k e^{2 pi i k rho/hbar} Z(t, nu + k hbar)
//           = Z(t, nu) * sum_m hbar^m Theta_m,
// reorganized so that each coefficient Theta_m is a finite combination of
// v-derivatives of theta00 evaluated at v = (phi + rho)/hbar.  The wave
// analogue shifts the argument by +-z(x)/omega_A.  From tau_hat the series
//   H = hbar^2 d/dt log tau_hat,  q = -dH/dt,  p = hbar dq/dt
// satisfy, order by order in hbar, the Hamiltonian relation
// H = p^2/2 - 2q^3 - tq and the flow equation hbar dp/dt = 6q^2 + t.
// The t-derivative here acts on coefficients at fixed v plus the shift
// (dphi/dt) d/dv applied one grading level up, because the substituted
// argument carries 1/hbar.

struct TauParameters {
    cplx nu;    // must match the frame that accompanies the call
    cplx rho;   // Fourier dual; rho -> rho + hbar shifts v by one period
    cplx hbar;  // numeric evaluation point, nonzero
};

// A finite combination  sum_j a_j (d/dv)^j theta00(v, tau)  evaluated at
// v = (phi + rho)/hbar + shift.
struct ThetaCoeff {
    std::vector<std::pair<cplx, int>> terms;  // (a_j, derivative order j)
    cplx shift{0.0, 0.0};

    cplx eval(const EllipticFrame& fr, const TauParameters& par) const;
};

// nu-derivatives of the free energies entering the blocks below.  Depth 3
// carries the third derivative of F0 and the first of F1; depth 4 adds the
// fourth of F0 and the second of F1.
struct NuDerivativeTable {
    int depth = 3;
    cplx d3F0{0.0, 0.0};
    cplx dF1{0.0, 0.0};
    cplx d4F0{0.0, 0.0};
    cplx d2F1{0.0, 0.0};
};

// Table from iterated B-cycle integrals of the correlators: one B-integral
// per nu-derivative slot.  depth in {3, 4}; the depth-4 entries fall back to
// ring derivatives of the period data (documented in the implementation).
NuDerivativeTable nu_table_by_cycles(CorrelatorEvaluator& ev, int depth = 3);

// Same table from Cauchy rings of exact frame data: d^n F0/dnu^n from rings
// of the modulus, dF1 entries from rings of the genus-one free energy.
NuDerivativeTable nu_table_by_rings(const EllipticFrame& fr, int depth = 3);

// Coefficient block m of the Fourier-transformed partition function.
// m = 0 is theta00 itself; m = 1 combines the third and first derivative
// with weights d3F0/((2 pi i)^3 3!) and dF1/(2 pi i); m = 2 is assembled
// from the exponential expansion (needs a depth-4 table).
// Throws MissingDerivativeTable when the table is too shallow, InputError
// for m < 0, BudgetExceeded for m > 2.
ThetaCoeff theta_block(int m, const EllipticFrame& fr, const NuDerivativeTable& dnuF);

// nu-derivatives of the phase functions at a fixed base point x, feeding the
// wave blocks: second derivative of the leading phase, first of the
// subleading one.
struct WaveNuTable {
    cplx d2S_minus1{0.0, 0.0};
    cplx dS0{0.0, 0.0};
};
WaveNuTable wave_nu_table(cplx x, const EllipticFrame& fr);

// Wave-function coefficient block m for the branch labelled by sign (+1 or
// -1), evaluated at the shifted argument v +- z(x)/omega_A.  m <= 1.
ThetaCoeff xi_block(int sign, int m, cplx x, const EllipticFrame& fr,
                    const NuDerivativeTable& dnuF, const WaveNuTable& ws);

// Coefficients of a formal power series in hbar, already evaluated at the
// given parameters; `lowest` is the power of the first stored coefficient.
struct HbarSeries {
    int lowest = 0;
    std::vector<cplx> coeff;

    cplx at(int m) const;  // 0 below `lowest`, InputError above the stored range
    int highest() const { return lowest + static_cast<int>(coeff.size()) - 1; }
};

struct HqpSeries {
    HbarSeries H, q, p;
};

// The H, q, p series through the given order (0, 1, or 2), evaluated at
// par.  Order 0 needs no table; orders 1 and 2 need depth 3 resp. 4 (a
// missing table is built from rings internally; a too-shallow explicit
// table throws MissingDerivativeTable).  Order > 2 throws BudgetExceeded.
HqpSeries hqp_series(int order, const EllipticFrame& fr, const TauParameters& par,
                     const NuDerivativeTable* dnuF = nullptr);

// Leading coefficient of q in closed elliptic form,
//   wp(4t/(5 hbar) + (rho/hbar + 1/2) omega_A + (nu/hbar + 1/2) omega_B),
// on the lattice of the frame built at (t, nu).  Throws LatticePoint when
// the argument lands on the lattice.
cplx q_leading(cplx t, cplx nu, cplx rho, cplx hbar);

// Largest residual coefficient at the given hbar-order of the two defining
// identities (flow: hbar dp/dt - 6q^2 - t; energy: H - p^2/2 + 2q^3 + tq),
// evaluated at par with the grading-shifting t-derivative.  Returns the
// complex residual of larger magnitude.  order <= 1; BudgetExceeded above.
cplx painleve_residual(int order, const EllipticFrame& fr, const TauParameters& par,
                       const NuDerivativeTable* dnuF = nullptr);

// ---- Connection multipliers around the irregular direction ----------------

// Closed forms of the five multipliers [s_-2, s_-1, s_0, s_1, s_2] attached
// to the asymptotic directions arg x = 2 l pi/5.
std::array<cplx, 5> stokes_multipliers(const TauParameters& par);

// Label data of one trajectory reaching infinity: its direction index l in
// [-2, 2], the half-period integers (m, n) of the branch point it leaves
// (one of them odd), and the dominance sign (+1 or -1) along it.  sign = 0
// marks a curve that has not been labelled.
struct StokesCurveLabel {
    int ell = 0;
    int m = 0, n = 0;
    int sign = 0;
};

// Assembles each multiplier as
//   s_l = i * sum_C (-1)^{m n} e^{sign * 2 pi i (m nu - n rho)/hbar}
// over the labelled curves with direction l.  Throws UnlabeledCurve on
// sign = 0, InputError on a direction outside [-2, 2].
std::array<cplx, 5> multipliers_from_graph(const std::vector<StokesCurveLabel>& curves,
                                           const TauParameters& par);

// The nine-curve label set of the reference graph (three trajectories per
// branch point, directions and signs frozen from the connection analysis);
// multipliers_from_graph on it reproduces stokes_multipliers exactly.
std::vector<StokesCurveLabel> reference_configuration();

}  // namespace p1tr

#endif
