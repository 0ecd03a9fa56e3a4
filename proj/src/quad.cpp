#include "p1tr/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace p1tr {

namespace {

cplx circle_pass(const std::function<cplx(cplx)>& f, cplx center, double radius, int n) {
    // (1/2pi i) closed integral of f dx  ->  (R/n) * sum f(x_k) e^{i theta_k}
    cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * PI * k / n;
        const cplx e{std::cos(th), std::sin(th)};
        acc += f(center + radius * e) * e;
    }
    return acc * (radius / n);
}

}  // namespace

CircleQuad circle_mean(const std::function<std::function<cplx(cplx)>()>& make_f,
                       cplx center, double radius, const QuadOptions& opt) {
    int n = opt.start_nodes;
    cplx prev = circle_pass(make_f(), center, radius, n);
    while (n < opt.max_nodes) {
        n *= 2;
        const cplx cur = circle_pass(make_f(), center, radius, n);
        const double change = std::abs(cur - prev);
        if (change <= opt.abs_tol + opt.rel_tol * std::abs(cur))
            return {cur, n, change};
        prev = cur;
    }
    throw QuadratureFailure("circle_mean: node doubling did not converge");
}

CircleQuad circle_mean(const std::function<cplx(cplx)>& f, cplx center, double radius,
                       const QuadOptions& opt) {
    return circle_mean([&]() { return f; }, center, radius, opt);
}

CircleQuad period_line_mean(const std::function<cplx(cplx)>& f, cplx a, cplx shift,
                            const QuadOptions& opt) {
    auto pass = [&](int n) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < n; ++k) acc += f(a + (static_cast<double>(k) / n) * shift);
        return acc * shift / static_cast<double>(n);
    };
    int n = opt.start_nodes;
    cplx prev = pass(n);
    while (n < opt.max_nodes) {
        n *= 2;
        const cplx cur = pass(n);
        const double change = std::abs(cur - prev);
        if (change <= opt.abs_tol + opt.rel_tol * std::abs(cur))
            return {cur, n, change};
        prev = cur;
    }
    throw QuadratureFailure("period_line_mean: node doubling did not converge");
}

namespace {

// Gauss-Kronrod 15 on [-1,1] with the embedded 7-point Gauss rule.
const double gk_x[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
const double gk_w[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
const double g7_w[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct GKResult {
    cplx value;
    double err;
};

GKResult gk15(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    cplx k{0.0, 0.0};
    cplx g{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        const cplx fv = f(mid + gk_x[i] * half);
        k += gk_w[i] * fv;
        if (i % 2 == 1) g += g7_w[i / 2] * fv;
    }
    k *= half;
    g *= half;
    return {k, std::abs(k - g)};
}

cplx gk_adaptive(const std::function<cplx(cplx)>& f, cplx a, cplx b, double rel_tol,
                 double abs_tol, int depth) {
    const GKResult r = gk15(f, a, b);
    if (!std::isfinite(r.err) || !std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw NumericalError("segment_integral: integrand produced non-finite values");
    if (r.err <= abs_tol + rel_tol * std::abs(r.value) || depth <= 0) {
        if (depth <= 0 && r.err > 1e3 * (abs_tol + rel_tol * std::abs(r.value)))
            throw QuadratureFailure("segment_integral: max subdivision depth reached");
        return r.value;
    }
    const cplx mid = 0.5 * (a + b);
    return gk_adaptive(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1) +
           gk_adaptive(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

cplx segment_integral(const std::function<cplx(cplx)>& f, cplx a, cplx b, double rel_tol,
                      double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    return gk_adaptive(f, a, b, rel_tol, abs_tol, max_depth);
}

cplx path_integral(const std::function<cplx(cplx)>& f, const std::vector<cplx>& waypoints,
                   double rel_tol, double abs_tol) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        acc += segment_integral(f, waypoints[i], waypoints[i + 1], rel_tol, abs_tol);
    return acc;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess.
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            const double dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        const double dp = n * (z * p0 - p1) / (z * z - 1.0);
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

cplx segment_gauss(const std::function<cplx(cplx)>& f, cplx a, cplx b, int n) {
    const auto& rule = gauss_legendre(n);
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) acc += rule.second[i] * f(mid + rule.first[i] * half);
    return acc * half;
}

std::vector<cplx> cauchy_derivatives(const std::function<cplx(cplx)>& f, cplx z0,
                                     double radius, int max_order, int nodes) {
    std::vector<cplx> ring(nodes);
    for (int k = 0; k < nodes; ++k) {
        const double th = 2.0 * PI * k / nodes;
        ring[k] = f(z0 + radius * cplx{std::cos(th), std::sin(th)});
    }
    std::vector<cplx> out(max_order + 1);
    double fact = 1.0;
    for (int m = 0; m <= max_order; ++m) {
        if (m > 0) fact *= m;
        cplx acc{0.0, 0.0};
        for (int k = 0; k < nodes; ++k) {
            const double th = -2.0 * PI * k * m / nodes;
            acc += ring[k] * cplx{std::cos(th), std::sin(th)};
        }
        out[m] = acc * (fact / (nodes * std::pow(radius, m)));
    }
    return out;
}

cplx ring_derivative(const std::vector<cplx>& f, double radius, int order) {
    const int n = int(f.size());
    cplx acc{};
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * PI * k / n;
        acc += f[k] * std::exp(cplx(0.0, -order * th));
    }
    double fact = 1.0;
    for (int j = 2; j <= order; ++j) fact *= j;
    return acc * fact / (double(n) * std::pow(radius, order));
}

void unwind_ring(std::vector<cplx>& v, double quantum) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double d = (v[k] - v[k - 1]).imag();
        v[k] -= I * (quantum * std::round(d / quantum));
    }
    const double wrap = (v.front() - v.back()).imag();
    if (std::round(wrap / quantum) != 0.0)
        throw NumericalError("unwind_ring: branch winding around the sample ring does "
                             "not close; shrink the ring or move the center");
}

}  // namespace p1tr
