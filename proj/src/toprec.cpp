#include "p1tr/toprec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace p1tr {

namespace {

// coordinates of z in the basis (omega_A, omega_B)
std::pair<double, double> lattice_coords(cplx z, const LatticeFrame& lat) {
    const double xa = lat.omega_A.real(), ya = lat.omega_A.imag();
    const double xb = lat.omega_B.real(), yb = lat.omega_B.imag();
    const double det = xa * yb - ya * xb;
    const double a = (z.real() * yb - z.imag() * xb) / det;
    const double b = (z.imag() * xa - z.real() * ya) / det;
    return {a, b};
}

// |z - m omega_A - n omega_B| minimized over integers m, n
double reduced_abs(cplx z, const LatticeFrame& lat) {
    const auto [a, b] = lattice_coords(z, lat);
    const double m0 = std::round(a), n0 = std::round(b);
    double best = 1e300;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -1; dn <= 1; ++dn)
            best = std::min(best,
                            std::abs(z - (m0 + dm) * lat.omega_A - (n0 + dn) * lat.omega_B));
    return best;
}

uint64_t pair_key(int a, int b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
}

}  // namespace

CorrelatorEvaluator::CorrelatorEvaluator(const EllipticFrame& fr, int nodes_per_circle)
    : fr_(fr), n_(nodes_per_circle) {
    if (n_ < 16 || n_ % 2 != 0)
        throw InputError("CorrelatorEvaluator: node count must be even and at least 16");
    r_ = fr_.half_period;
    ca_ = fr_.lat.eta_A / fr_.lat.omega_A;

    // closest approach among the half periods, the origin, and their lattice
    // translates; every pole of a recursion integrand sits at one of these
    double gap = 1e300;
    for (int m = -2; m <= 2; ++m)
        for (int k = -2; k <= 2; ++k)
            if (m != 0 || k != 0)
                gap = std::min(gap,
                               std::abs(static_cast<double>(m) * fr_.lat.omega_A +
                                        static_cast<double>(k) * fr_.lat.omega_B));
    const std::array<cplx, 4> special{cplx{0.0, 0.0}, r_[0], r_[1], r_[2]};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            gap = std::min(gap, reduced_abs(special[i] - special[j], fr_.lat));
    gap_ = gap;

    // radius ladder: wide enough apart that the trapezoid aliasing of the pole
    // on the neighbouring circle decays fast, small enough that every circle
    // stays clear of the other half periods
    for (int L = 1; L <= 4; ++L) rho_[L] = (0.12 + 0.07 * L) * gap_;
    margin_ = 1.30 * rho_[3];

    pts_.resize(node_count());
    neg_.resize(node_count());
    for (int L = 1; L <= 4; ++L)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < n_; ++i) {
                const double th = 2.0 * PI * i / n_;
                const int id = node_id(L, j, i);
                pts_[id] = r_[j] + rho_[L] * std::exp(I * th);
                // -z equals the antipodal node modulo the lattice, and every
                // place a negated point is consumed is lattice periodic
                neg_[id] = node_id(L, j, (i + n_ / 2) % n_);
            }
    has_jet_.assign(node_count(), 0);
    jet_.resize(node_count());
    const size_t nn = static_cast<size_t>(node_count()) * node_count();
    wp_nn_.assign(nn, cplx{});
    wp_nn_ok_.assign(nn, 0);
}

int CorrelatorEvaluator::register_point(cplx z) {
    const auto norm = [](double x) { return x == 0.0 ? 0.0 : x; };
    const std::pair<double, double> key{norm(z.real()), norm(z.imag())};
    if (auto it = ext_ids_.find(key); it != ext_ids_.end()) return it->second;
    const int id = static_cast<int>(pts_.size());
    pts_.push_back(z);
    pts_.push_back(-z);
    neg_.push_back(id + 1);
    neg_.push_back(id);
    has_jet_.push_back(0);
    has_jet_.push_back(0);
    jet_.emplace_back();
    jet_.emplace_back();
    ext_ids_.emplace(key, id);
    ext_ids_.emplace(std::pair<double, double>{norm(-z.real()), norm(-z.imag())}, id + 1);
    return id;
}

double CorrelatorEvaluator::special_gap(cplx z) const {
    double best = 1e300;
    for (int j = 0; j < 3; ++j) best = std::min(best, reduced_abs(z - r_[j], fr_.lat));
    return best;
}

double CorrelatorEvaluator::required_clearance(int g, int n) const {
    const int level = std::clamp(2 * g - 2 + n, 1, 4);
    return 1.30 * rho_[level];
}

void CorrelatorEvaluator::require_clear(cplx z, double margin) const {
    if (special_gap(z) < margin)
        throw RamificationPole(
            "CorrelatorEvaluator: evaluation point too close to a ramification point");
}

const WeierstrassJet& CorrelatorEvaluator::jet(int id) {
    if (!has_jet_[id]) {
        jet_[id] = weierstrass_jet(pts_[id], fr_.lat);
        has_jet_[id] = 1;
    }
    return jet_[id];
}

cplx CorrelatorEvaluator::wp_diff(int a, int b) {
    if (a > b) std::swap(a, b);  // wp is even
    if (b < node_count()) {
        const size_t idx = static_cast<size_t>(a) * node_count() + b;
        if (wp_nn_ok_[idx]) return wp_nn_[idx];
        const cplx v = weierstrass_jet(pts_[a] - pts_[b], fr_.lat).wp;
        wp_nn_[idx] = v;
        wp_nn_ok_[idx] = 1;
        return v;
    }
    const uint64_t key = pair_key(a, b);
    if (auto it = wp_xp_.find(key); it != wp_xp_.end()) return it->second;
    const cplx v = weierstrass_jet(pts_[a] - pts_[b], fr_.lat).wp;
    wp_xp_.emplace(key, v);
    return v;
}

cplx CorrelatorEvaluator::p_diff(int a, int b) {
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;  // P is odd
    }
    const uint64_t key = pair_key(a, b);
    if (auto it = p_map_.find(key); it != p_map_.end()) return sign * it->second;
    const cplx w = pts_[a] - pts_[b];
    const cplx v = -weierstrass_jet(w, fr_.lat).zeta + ca_ * w;
    p_map_.emplace(key, v);
    return sign * v;
}

cplx CorrelatorEvaluator::p_sum(int a, int b) {
    if (a > b) std::swap(a, b);
    const uint64_t key = pair_key(a, b);
    if (auto it = psum_map_.find(key); it != psum_map_.end()) return it->second;
    const cplx w = pts_[a] + pts_[b];
    const cplx v = -weierstrass_jet(w, fr_.lat).zeta + ca_ * w;
    psum_map_.emplace(key, v);
    return v;
}

// k(z1, z) with z an integration node; P(z1-z) - P(z1+z) is invariant under
// lattice shifts of z1, so any stored representative of z1 works.  The sign
// folds in the d(-z) = -dz factor every bracket term carries through its
// slot at the involuted point.
cplx CorrelatorEvaluator::kernel(int id1, int idz) {
    const WeierstrassJet& J = jet(idz);
    return (p_diff(id1, idz) - p_sum(id1, idz)) / (4.0 * J.wp1 * J.wp1);
}

cplx CorrelatorEvaluator::corr(int g, int n, int id1, const std::vector<int32_t>& rest) {
    if (g == 0 && n == 1) {
        const WeierstrassJet& J = jet(id1);
        return J.wp1 * J.wp1;
    }
    if (g == 0 && n == 2) return wp_diff(id1, rest[0]) + ca_;
    return eval(g, n, id1, rest);
}

cplx CorrelatorEvaluator::bracket(int g, int n, const std::vector<int32_t>& rest, int idz) {
    const bool cacheable = (n == 1);  // independent of z1 and reused heavily
    uint64_t bkey = 0;
    if (cacheable) {
        bkey = pair_key(g, idz);
        if (auto it = bracket_memo_.find(bkey); it != bracket_memo_.end()) return it->second;
    }
    const int nz = neg_[idz];
    const int m = static_cast<int>(rest.size());
    cplx acc{0.0, 0.0};
    // cross terms pairing w02(.., z_a) with w_{g,n-1} of the remaining points;
    // when the partner is itself a two point function the two orderings of the
    // pair coincide, so each product is kept once
    const double cross = (g == 0 && n == 3) ? 0.5 : 1.0;
    std::vector<int32_t> sub(m > 0 ? m - 1 : 0);
    for (int a = 0; a < m; ++a) {
        for (int b = 0, k = 0; b < m; ++b)
            if (b != a) sub[k++] = rest[b];
        acc += cross * ((wp_diff(idz, rest[a]) + ca_) * corr(g, n - 1, nz, sub) +
                        (wp_diff(nz, rest[a]) + ca_) * corr(g, n - 1, idz, sub));
    }
    if (g >= 1) {
        std::vector<int32_t> aug(m + 1);
        aug[0] = nz;
        std::copy(rest.begin(), rest.end(), aug.begin() + 1);
        acc += corr(g - 1, n + 1, idz, aug);
    }
    for (int g1 = 0; g1 <= g; ++g1) {
        const int g2 = g - g1;
        for (uint32_t mask = 0; mask < (1u << m); ++mask) {
            const int sz1 = std::popcount(mask);
            const int sz2 = m - sz1;
            if (g1 == 0 && sz1 < 2) continue;  // skip unstable factors
            if (g2 == 0 && sz2 < 2) continue;
            std::vector<int32_t> setI, setJ;
            for (int b = 0; b < m; ++b) (((mask >> b) & 1u) ? setI : setJ).push_back(rest[b]);
            acc += corr(g1, sz1 + 1, idz, setI) * corr(g2, sz2 + 1, nz, setJ);
        }
    }
    if (cacheable) bracket_memo_.emplace(bkey, acc);
    return acc;
}

cplx CorrelatorEvaluator::eval(int g, int n, int id1, const std::vector<int32_t>& rest) {
    const int level = 2 * g - 2 + n;
    if (level < 1) throw InputError("CorrelatorEvaluator: unstable correlator requested");
    if (level > 4)
        throw BudgetExceeded("CorrelatorEvaluator: 2g-2+n exceeds the contour ladder");
    std::vector<int32_t> key;
    key.reserve(3 + rest.size());
    key.push_back(g);
    key.push_back(n);
    key.push_back(id1);
    if (!rest.empty()) {
        std::vector<int32_t> sorted(rest);
        std::sort(sorted.begin(), sorted.end());
        key.insert(key.end(), sorted.begin(), sorted.end());
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    cplx acc{0.0, 0.0};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < n_; ++i) {
            const int idz = node_id(level, j, i);
            acc += kernel(id1, idz) * bracket(g, n, rest, idz) * (pts_[idz] - r_[j]);
        }
    acc /= static_cast<double>(n_);
    memo_.emplace(std::move(key), acc);
    return acc;
}

cplx CorrelatorEvaluator::w(int g, std::span<const cplx> z) {
    const int n = static_cast<int>(z.size());
    if (g < 0 || n < 1) throw InputError("w: need g >= 0 and at least one point");
    if (g == 0 && n == 1) return w01(z[0]);
    if (g == 0 && n == 2) return w02(z[0], z[1]);
    const double margin = required_clearance(g, n);
    for (const cplx& p : z) require_clear(p, margin);
    const int id1 = register_point(z[0]);
    std::vector<int32_t> rest;
    rest.reserve(n - 1);
    for (int i = 1; i < n; ++i) rest.push_back(register_point(z[i]));
    return eval(g, n, id1, rest);
}

cplx CorrelatorEvaluator::w01(cplx z) const {
    const cplx wp1 = weierstrass_jet(z, fr_.lat).wp1;
    return wp1 * wp1;
}

cplx CorrelatorEvaluator::w02(cplx z1, cplx z2) const {
    return weierstrass_jet(z1 - z2, fr_.lat).wp + ca_;
}

cplx CorrelatorEvaluator::free_energy(int g) {
    if (g < 2) throw InputError("free_energy: g >= 2 only; lower orders live on the frame");
    if (g != 2) throw BudgetExceeded("free_energy: only g = 2 fits the contour ladder");
    const cplx t = fr_.t, u = fr_.u;
    cplx acc{0.0, 0.0};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < n_; ++i) {
            const int id = node_id(4, j, i);
            const WeierstrassJet& J = jet(id);
            const cplx z = pts_[id];
            // primitive of wp'^2: d/dz [ (2/5) wp wp' - (4t/5) zeta + (3u/5) z ]
            const cplx phi = 0.4 * J.wp * J.wp1 - 0.8 * t * J.zeta + 0.6 * u * z;
            acc += phi * eval(g, 1, id, {}) * (z - r_[j]);
        }
    return acc / static_cast<double>(n_) / (2.0 - 2.0 * g);
}

cplx CorrelatorEvaluator::residue_at_zero(int g, std::span<const cplx> fixed) {
    const int n = static_cast<int>(fixed.size()) + 1;
    std::vector<int32_t> rest;
    rest.reserve(fixed.size());
    const double margin = required_clearance(g, n);
    for (const cplx& p : fixed) {
        require_clear(p, margin);
        rest.push_back(register_point(p));
    }
    // (1/2pi i) oint w(z,..)/z dz = mean of w over a circle around the origin
    const double radius = 0.35 * gap_;
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n_; ++i) {
        const cplx zi = radius * std::exp(I * (2.0 * PI * i / n_));
        acc += corr(g, n, register_point(zi), rest);
    }
    return acc / static_cast<double>(n_);
}

cplx CorrelatorEvaluator::cycle_integral(char cycle, int g, std::span<const cplx> fixed) {
    cplx shift, other;
    if (cycle == 'A' || cycle == 'a') {
        shift = fr_.lat.omega_A;
        other = fr_.lat.omega_B;
    } else if (cycle == 'B' || cycle == 'b') {
        shift = fr_.lat.omega_B;
        other = fr_.lat.omega_A;
    } else {
        throw InputError("cycle_integral: cycle must be 'A' or 'B'");
    }
    const int n = static_cast<int>(fixed.size()) + 1;
    std::vector<int32_t> rest;
    rest.reserve(fixed.size());
    const double ext_margin = required_clearance(g, n);
    for (const cplx& p : fixed) {
        require_clear(p, ext_margin);
        rest.push_back(register_point(p));
    }
    // straight period line, shifted sideways until it clears the contours
    const double alphas[] = {0.2711, 0.1937, 0.3273, 0.4483, 0.0731, 0.1259};
    cplx base;
    bool found = false;
    for (const double alpha : alphas) {
        base = alpha * other;
        double worst = 1e300;
        for (int i = 0; i < n_ && worst >= margin_; ++i)
            worst = std::min(worst,
                             special_gap(base + (static_cast<double>(i) / n_) * shift));
        if (worst >= margin_) {
            found = true;
            break;
        }
    }
    if (!found)
        throw QuadratureFailure("cycle_integral: no period line clears the contours");
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n_; ++i) {
        const cplx zi = base + (static_cast<double>(i) / n_) * shift;
        acc += corr(g, n, register_point(zi), rest);
    }
    return acc * shift / static_cast<double>(n_);
}

}  // namespace p1tr
