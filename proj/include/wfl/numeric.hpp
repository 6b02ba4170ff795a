#ifndef WFL_NUMERIC_HPP
#define WFL_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "wfl/errors.hpp"

namespace wfl {

using cplx = std::complex<double>;

inline std::vector<double> linear_grid(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) { g[0] = a; return g; }
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// Log-spaced grid, a > 0, b > a.
inline std::vector<double> log_grid(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) { g[0] = a; return g; }
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

// Golden-section maximization of a unimodal function on [a, b].
// Returns the abscissa of the maximizer; rel_tol applies to the bracket width.
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-10, int max_iter = 400) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1.0); ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-10, int max_iter = 400) {
    return golden_max([&](double x) { return -f(x); }, a, b, rel_tol, max_iter);
}

// Kahan compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }
private:
    double sum_ = 0.0, comp_ = 0.0;
};

class KahanSumC {
public:
    void add(cplx x) { re_.add(x.real()); im_.add(x.imag()); }
    cplx value() const { return {re_.value(), im_.value()}; }
private:
    KahanSum re_, im_;
};

namespace detail {
template <class F>
auto simpson_panel(const F& f, double a, double b, decltype(f(0.0)) fa,
                   decltype(f(0.0)) fm, decltype(f(0.0)) fb, double tol,
                   int depth, bool& converged) -> decltype(f(0.0)) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const auto flm = f(lm), frm = f(rm);
    const auto whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const auto left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const auto right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const auto split = left + right;
    if (depth <= 0) {
        if (std::abs(split - whole) > 15.0 * tol) converged = false;
        return split + (split - whole) / 15.0;
    }
    if (std::abs(split - whole) <= 15.0 * tol)
        return split + (split - whole) / 15.0;
    return simpson_panel(f, a, m, fa, flm, fm, tol / 2.0, depth - 1, converged) +
           simpson_panel(f, m, b, fm, frm, fb, tol / 2.0, depth - 1, converged);
}
} // namespace detail

// Adaptive Simpson quadrature; works for double and cplx integrands.
template <class F>
auto adaptive_simpson(const F& f, double a, double b, double tol = 1e-10,
                      int max_depth = 40) -> decltype(f(0.0)) {
    if (a == b) return decltype(f(0.0)){};
    bool converged = true;
    const auto r = detail::simpson_panel(f, a, b, f(a), f(0.5 * (a + b)), f(b), tol,
                                         max_depth, converged);
    if (!converged)
        throw QuadratureNotConverged("adaptive Simpson did not reach tolerance on [" +
                                     std::to_string(a) + ", " + std::to_string(b) + "]");
    return r;
}

// Composite trapezoid rule over samples on a uniform grid.
template <class T>
T trapezoid(const std::vector<double>& x, const std::vector<T>& y) {
    T s{};
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

// k-th derivative of a scalar closure by Richardson-extrapolated central differences.
// Adequate for k <= 6 at ~1e-8 accuracy on well-scaled functions.
double fd_derivative(const std::function<double(double)>& f, int k, double x,
                     double h0 = 0.05);

cplx fd_derivative_c(const std::function<cplx(double)>& f, int k, double x,
                     double h0 = 0.05);

} // namespace wfl

#endif
