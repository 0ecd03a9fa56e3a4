#ifndef P1TR_TOPREC_HPP
#define P1TR_TOPREC_HPP

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "p1tr/elliptic.hpp"
#include "p1tr/frame.hpp"
#include "p1tr/types.hpp"

namespace p1tr {

// Correlator densities w_{g,n} of the curve y^2 = 4x^3 + 2tx + u in the
// elliptic parametrization x = wp(z), y = wp'(z).  The deck transformation of
// the double cover x is z -> -z, the ramification points are the three half
// periods, and all results are densities with respect to dz in every slot.
//
// w_{0,1} = wp'(z)^2,  w_{0,2}(z1,z2) = wp(z1-z2) + eta_A/omega_A, and for
// 2g-2+n >= 1 the recursion integrates
//   k(z1,z) * [ sum_m w02(z,z_m) w_{g,n-1}(-z, ..) + w02(-z,z_m) w_{g,n-1}(z, ..)
//               + w_{g-1,n+1}(z,-z, ..) + sum' w_{g1}(z, I) w_{g2}(-z, J) ]
// counterclockwise around the half periods, with the primed sum skipping the
// unstable (0,1) and (0,2) factors and
//   k(z1,z) = -(P(z1-z) - P(z1+z)) / (4 wp'(z)^2),
//   P(z) = -zeta(z) + (eta_A/omega_A) z.
//
// Circle radii grow with the complexity level 2g-2+n, so the nodes of an
// outer integral always clear the contours of the integrals they feed.  The
// node count per circle is fixed at construction and convergence is checked
// by comparing evaluators with different node counts.
class CorrelatorEvaluator {
public:
    explicit CorrelatorEvaluator(const EllipticFrame& fr, int nodes_per_circle = 64);

    // w_{g,n}(z...), n = z.size().  For 2g-2+n >= 1 the points must clear the
    // integration circles around the half periods (RamificationPole
    // otherwise); any lattice translate of a valid point is fine.
    cplx w(int g, std::span<const cplx> z);

    cplx w01(cplx z) const;            // wp'(z)^2
    cplx w02(cplx z1, cplx z2) const;  // wp(z1-z2) + eta_A/omega_A

    // F_g = [1/(2-2g)] sum_j (1/2pi i) oint Phi w_{g,1} dz for g >= 2, with
    // Phi(z) = (2/5) wp wp' - (4t/5) zeta + (3u/5) z, a primitive of wp'^2.
    cplx free_energy(int g);

    // Res_{z=0} w_{g,n}(z, fixed...)/z, the mean of w over a small circle
    // around the origin.  Equals d/dt of F_g when fixed is empty (n = 1) and
    // of w_{g,n-1}(fixed...) in general.
    cplx residue_at_zero(int g, std::span<const cplx> fixed = {});

    // Integral of w_{g,n}(z, fixed...) dz over a full A- or B-period line
    // kept clear of the ramification points.  'B' with empty fixed is
    // d/dnu of F_g.
    cplx cycle_integral(char cycle, int g, std::span<const cplx> fixed = {});

    const EllipticFrame& frame() const { return fr_; }
    int nodes() const { return n_; }
    double base_gap() const { return gap_; }

    // Clearance from the ramification points that an argument of w_{g,n}
    // must keep.  Deeper recursion levels use wider circles, so the bound
    // grows with 2g-2+n; callers that route integration paths (nested slot
    // integrals of the correlators) plan them against this bound.
    double required_clearance(int g, int n) const;

    // Distance from z to the nearest lattice translate of a half period.
    double ramification_distance(cplx z) const { return special_gap(z); }

private:
    EllipticFrame fr_;
    int n_;                          // nodes per circle, even
    double gap_;                     // min distance among half periods, 0, lattice
    double rho_[5];                  // integration radius by level 2g-2+n
    double margin_;                  // clearance required of external points
    std::array<cplx, 3> r_;          // half periods
    cplx ca_;                        // eta_A / omega_A
    std::vector<cplx> pts_;          // id -> point; contour nodes first
    std::vector<int32_t> neg_;       // id -> id of the negated point
    std::vector<char> has_jet_;
    std::vector<WeierstrassJet> jet_;
    std::vector<cplx> wp_nn_;  // flat node-node cache of wp(z_a - z_b)
    std::vector<char> wp_nn_ok_;
    std::unordered_map<uint64_t, cplx> wp_xp_;     // wp pairs involving externals
    std::unordered_map<uint64_t, cplx> p_map_;     // P(z_a - z_b), a < b
    std::unordered_map<uint64_t, cplx> psum_map_;  // P(z_a + z_b), a <= b
    std::unordered_map<uint64_t, cplx> bracket_memo_;
    std::map<std::pair<double, double>, int32_t> ext_ids_;
    std::map<std::vector<int32_t>, cplx> memo_;

    int node_count() const { return 12 * n_; }
    int node_id(int level, int j, int i) const { return ((level - 1) * 3 + j) * n_ + i; }
    int register_point(cplx z);
    void require_clear(cplx z, double margin) const;
    double special_gap(cplx z) const;
    const WeierstrassJet& jet(int id);
    cplx wp_diff(int a, int b);  // wp(z_a - z_b)
    cplx p_diff(int a, int b);   // P(z_a - z_b)
    cplx p_sum(int a, int b);    // P(z_a + z_b)
    cplx kernel(int id1, int idz);
    cplx corr(int g, int n, int id1, const std::vector<int32_t>& rest);
    cplx eval(int g, int n, int id1, const std::vector<int32_t>& rest);
    cplx bracket(int g, int n, const std::vector<int32_t>& rest, int idz);
};

}  // namespace p1tr

#endif
