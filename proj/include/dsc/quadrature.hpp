#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature and Gauss-Legendre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <vector>

namespace dsc::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T>
inline double magnitude(const T& v) { return std::abs(v); }

template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T fc = f(center);
    T kron = fc * kronrod_weights[7];
    T gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        T sum = f(center - dx) + f(center + dx);
        kron += sum * kronrod_weights[j];
        if (j % 2 == 1) gauss += sum * gauss_weights[j / 2];
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, magnitude(T(kron - gauss))};
}

} // namespace detail

/// Global adaptive integration over [a, b] split at the given breakpoints.
/// Breakpoints outside (a, b) are ignored.
template <class F>
auto integrate(F&& f, double a, double b, std::span<const double> breakpoints,
               const Options& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > std::min(a, b) && p < std::max(a, b)) cuts.push_back(p);
    cuts.push_back(b);
    if (a < b)
        std::sort(cuts.begin(), cuts.end());
    else
        std::sort(cuts.begin(), cuts.end(), std::greater<>());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::kronrod15<T>(f, cuts[i], cuts[i + 1]);
        out.evaluations += 15;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    while (!heap.empty()) {
        if (err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
            out.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= opt.max_intervals) break;
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            // Interval exhausted in floating point; keep it and give up refining it.
            err -= worst.error;
            out.error += worst.error;
            continue;
        }
        auto left = detail::kronrod15<T>(f, worst.a, mid);
        auto right = detail::kronrod15<T>(f, mid, worst.b);
        out.evaluations += 30;
        total += (left.value + right.value) - worst.value;
        err += (left.error + right.error) - worst.error;
        heap.push(left);
        heap.push(right);
    }
    out.value = total;
    out.error += std::max(err, 0.0);
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
    return integrate(std::forward<F>(f), a, b, std::span<const double>{}, opt);
}

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

} // namespace dsc::quad
