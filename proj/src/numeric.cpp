#include "wfl/numeric.hpp"

#include <array>

namespace wfl {

namespace {

// Central-difference weights for the k-th derivative, error O(h^2) per level;
// Richardson extrapolation over halved steps brings it to ~O(h^8).
template <class T>
T central_diff(const std::function<T(double)>& f, int k, double x, double h) {
    switch (k) {
        case 0: return f(x);
        case 1: return (f(x + h) - f(x - h)) / (2 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
                       (2 * h * h * h);
        case 4: return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) +
                        f(x - 2 * h)) / (h * h * h * h);
        default: {
            // k-th forward-backward binomial stencil, centered.
            const int n = k;
            T acc{};
            double sign = 1.0;
            double binom = 1.0;
            for (int j = 0; j <= n; ++j) {
                acc += sign * binom * f(x + (n / 2.0 - j) * h);
                sign = -sign;
                binom = binom * (n - j) / (j + 1.0);
            }
            return acc / std::pow(h, n);
        }
    }
}

template <class T>
T richardson(const std::function<T(double)>& f, int k, double x, double h0) {
    constexpr int levels = 5;
    std::array<T, levels> tab{};
    double h = h0;
    for (int i = 0; i < levels; ++i) {
        tab[i] = central_diff(f, k, x, h);
        double fac = 4.0;
        for (int j = i - 1; j >= 0; --j) {
            tab[j] = tab[j + 1] + (tab[j + 1] - tab[j]) / (fac - 1.0);
            fac *= 4.0;
        }
        h /= 2.0;
    }
    return tab[0];
}

} // namespace

double fd_derivative(const std::function<double(double)>& f, int k, double x, double h0) {
    return richardson<double>(f, k, x, h0);
}

cplx fd_derivative_c(const std::function<cplx(double)>& f, int k, double x, double h0) {
    return richardson<cplx>(f, k, x, h0);
}

} // namespace wfl
