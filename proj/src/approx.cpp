#include "wfl/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <utility>

namespace wfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kernel_series(double x) {
    // (1 - cos x) / (2 x^2) near 0: sum (-1)^k x^{2k} / (2 (2k+2)!)
    double term = 0.25, s = 0.0;
    const double x2 = x * x;
    for (int k = 0; k < 8; ++k) {
        s += term;
        term *= -x2 / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    }
    return s;
}

cplx kernel_series_c(cplx z) {
    cplx term{0.25, 0.0}, s{};
    const cplx z2 = z * z;
    for (int k = 0; k < 8; ++k) {
        s += term;
        term *= -z2 / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    }
    return s;
}

double kernel_value(double x) {
    if (std::abs(x) < 1e-4) return kernel_series(x);
    return (1.0 - std::cos(x)) / (2.0 * x * x);
}

// integral of the kernel over [T, infinity), asymptotic in 1/T; good to
// ~1/T^5 absolute
double kernel_tail(double T) {
    const double s = std::sin(T), c = std::cos(T);
    return 1.0 / (2.0 * T) + s / (2.0 * T * T) - c / (T * T * T) -
           3.0 * s / (T * T * T * T);
}

// one-sided tail integral from T, numeric up to the asymptotic threshold
double kernel_tail_from(double T) {
    const double far = 200.0;
    if (T >= far) return kernel_tail(T);
    return adaptive_simpson([](double t) { return kernel_value(t); }, T, far, 1e-10) +
           kernel_tail(far);
}

const std::vector<double>& pascal_row(int k) {
    static thread_local std::vector<std::vector<double>> rows{{1.0}};
    while (static_cast<int>(rows.size()) <= k) {
        const auto& prev = rows.back();
        std::vector<double> next(prev.size() + 1, 0.0);
        for (std::size_t j = 0; j < prev.size(); ++j) {
            next[j] += prev[j];
            next[j + 1] += prev[j];
        }
        rows.push_back(std::move(next));
    }
    return rows[static_cast<std::size_t>(k)];
}

// Plateau cutoff profile: 1 on [-1,1], 0 outside [-2,2], glued with
// exp(-1/t) bump factors on the transition.
double bump_side(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double plateau_value(double x) {
    const double a = std::abs(x);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double s1 = bump_side(2.0 - a), s2 = bump_side(a - 1.0);
    return s1 / (s1 + s2);
}

struct PlateauTable {
    static constexpr int kMaxOrder = 6;
    double lo = 0.5, hi = 2.5;
    std::size_t n = 20001;
    std::vector<std::vector<double>> rows; // rows[j-1][i] = gamma^{(j)}(x_i)

    PlateauTable() {
        rows.assign(kMaxOrder, std::vector<double>(n, 0.0));
        const double h = (hi - lo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + h * static_cast<double>(i);
            if (x < 0.9 || x > 2.1) continue; // flat to machine precision
            for (int j = 1; j <= kMaxOrder; ++j)
                rows[j - 1][i] = fd_derivative(plateau_value, j, x, 0.02);
        }
    }

    double deriv(int j, double x) const {
        const double a = std::abs(x);
        if (a <= lo || a >= hi) return 0.0;
        const double h = (hi - lo) / static_cast<double>(n - 1);
        const double u = (a - lo) / h;
        const std::size_t i = std::min(n - 2, static_cast<std::size_t>(u));
        const double frac = u - static_cast<double>(i);
        const auto& row = rows[j - 1];
        double v = (1.0 - frac) * row[i] + frac * row[i + 1];
        if (x < 0.0 && (j % 2) != 0) v = -v; // even profile: odd orders flip sign
        return v;
    }
};

} // namespace

MollifierKernel MollifierKernel::standard(int taylor_count) {
    if (taylor_count < 1) throw InvariantViolated("kernel needs at least one Taylor term");
    MollifierKernel kern;
    kern.h = EntireFunctionModel::closure(
        [](cplx z) -> cplx {
            if (std::abs(z) < 1e-4) return kernel_series_c(z);
            return (1.0 - std::cos(z)) / (2.0 * z * z);
        },
        "smoothing kernel");

    // fine trapezoid over [0, T] (the adaptive rule aliases on the
    // oscillation), then the asymptotic tail
    const double T = 200.0;
    {
        const std::size_t n = 400001;
        const double h = T / static_cast<double>(n - 1);
        KahanSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            const double wgt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc.add(wgt * kernel_value(h * static_cast<double>(i)));
        }
        kern.A = 2.0 * h * acc.value() + 2.0 * kernel_tail(T);
    }
    if (!(kern.A > 0.0) || !std::isfinite(kern.A))
        throw InvariantViolated("kernel mass is not a positive number");

    kern.taylor.resize(static_cast<std::size_t>(taylor_count));
    for (int k = 0; k < taylor_count; ++k) {
        const double mag = std::exp(-std::log(2.0) - std::lgamma(2.0 * k + 3.0));
        kern.taylor[static_cast<std::size_t>(k)] = (k % 2 == 0) ? mag : -mag;
    }

    double cg = 0.0;
    for (double x : linear_grid(0.0, 30.0, 121)) {
        cg = std::max(cg, std::abs(kernel_value(x)));
        for (int k = 1; k <= 12; ++k)
            cg = std::max(cg, std::abs(kern.h.derivative(cplx{x, 0.0}, k, 3.0)));
    }
    kern.C_g = cg;

    for (double x : linear_grid(0.0, 50.0, 501))
        if (kernel_value(x) < -1e-12)
            throw InvariantViolated("kernel is not nonnegative on the real line");
    for (int N : {2, 4, 6})
        for (double x : {0.5, 1.0, 2.0}) {
            const double rem = std::abs(kernel_value(x) - kern.taylor_partial(N, x));
            const double cap = kern.C_g * std::pow(x, 2.0 * N + 1.0) /
                               std::exp(std::lgamma(2.0 * N + 2.0));
            if (rem > cap * (1.0 + 1e-6))
                throw InvariantViolated("kernel Taylor remainder exceeds its envelope");
        }
    for (double y : {1.0, 3.0, 6.0}) {
        const double v = std::abs(kern.h.eval(cplx{0.0, y})) * std::exp(-y);
        if (!(v <= 1.0))
            throw InvariantViolated("kernel exceeds exponential type one on the axis");
    }
    return kern;
}

double MollifierKernel::eval(double x) const { return kernel_value(x); }

double MollifierKernel::taylor_partial(int N, double x) const {
    if (N < 0 || static_cast<std::size_t>(N) >= taylor.size())
        throw InvariantViolated("Taylor partial degree outside the stored range");
    const double x2 = x * x;
    double s = 0.0;
    for (int k = N; k >= 0; --k) s = s * x2 + taylor[static_cast<std::size_t>(k)];
    return s;
}

SampledFunction default_cutoff() {
    static const auto table = std::make_shared<const PlateauTable>();
    return SampledFunction(
        [tab = table](int k, double x) -> cplx {
            if (k == 0) return cplx{plateau_value(x), 0.0};
            return cplx{tab->deriv(k, x), 0.0};
        },
        PlateauTable::kMaxOrder, SampledFunction::Interval{-2.0, 2.0});
}

SampledFunction cutoff(const SampledFunction& f, int nu, const SampledFunction& gamma) {
    if (nu < 1) throw InvariantViolated("cutoff scale must be a positive integer");
    if (gamma.max_order() < 1)
        throw BadCutoff("cutoff profile must expose at least one derivative");
    for (double x : {0.0, 0.5, -0.5, 0.999, -0.999})
        if (std::abs(gamma.eval(0, x) - 1.0) > 1e-9)
            throw BadCutoff("profile is not 1 on the inner plateau");
    for (double x : {2.001, -2.001, 2.5, -2.5, 3.0, -3.0})
        if (std::abs(gamma.eval(0, x)) > 1e-9)
            throw BadCutoff("profile does not vanish outside [-2, 2]");
    for (double x : linear_grid(-2.5, 2.5, 101)) {
        const cplx v = gamma.eval(0, x);
        if (std::abs(v.imag()) > 1e-12 || v.real() < -1e-9 || v.real() > 1.0 + 1e-9)
            throw BadCutoff("profile leaves [0, 1] on the real line");
    }

    const int order = std::min(f.max_order(), gamma.max_order());
    const double scale = static_cast<double>(nu);
    SampledFunction::Interval supp{-2.0 * scale, 2.0 * scale};
    if (f.support()) {
        supp.first = std::max(supp.first, f.support()->first);
        supp.second = std::min(supp.second, f.support()->second);
    }
    auto deriv = [f, gamma, scale](int k, double x) -> cplx {
        const auto& binom = pascal_row(k);
        KahanSumC acc;
        for (int j = 0; j <= k; ++j)
            acc.add(binom[static_cast<std::size_t>(j)] * f.eval(j, x) *
                    gamma.eval(k - j, x / scale) * std::pow(scale, -(k - j)));
        return acc.value();
    };
    return SampledFunction(deriv, order, supp);
}

SampledFunction mollify(const SampledFunction& f_nu, double lambda,
                        const MollifierKernel& kernel) {
    if (!(lambda > 0.0)) throw InvariantViolated("mollification scale must be positive");
    if (!f_nu.support())
        throw InvariantViolated("mollification needs a compactly supported input");
    const double lo = f_nu.support()->first, hi = f_nu.support()->second;
    auto cache = std::make_shared<std::map<std::pair<int, double>, cplx>>();
    const double A = kernel.A;
    auto deriv = [f_nu, lambda, A, lo, hi, cache](int k, double x) -> cplx {
        const auto key = std::make_pair(k, x);
        if (auto it = cache->find(key); it != cache->end()) return it->second;
        // The integrand vanishes to all orders at the support edges, so the
        // uniform trapezoid rule is spectrally accurate once the kernel
        // oscillation (period 2 pi / lambda) is sampled ~6 times per cycle.
        const std::size_t n =
            std::max<std::size_t>(4000, static_cast<std::size_t>(lambda * (hi - lo))) + 1;
        const double h = (hi - lo) / static_cast<double>(n - 1);
        KahanSumC acc;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = lo + h * static_cast<double>(i);
            const double wgt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc.add(wgt * f_nu.eval(k, y) * kernel_value(lambda * (x - y)));
        }
        const cplx v = (lambda / A) * h * acc.value();
        (*cache)[key] = v;
        return v;
    };
    return SampledFunction(deriv, f_nu.max_order(), std::nullopt);
}

double mollify_budget(const SampledFunction& f_nu, double lambda,
                      const MollifierKernel& kernel, int n, int m,
                      const ThetaFamily& theta) {
    if (!f_nu.support()) throw InvariantViolated("budget needs a compactly supported input");
    const double lo = f_nu.support()->first, hi = f_nu.support()->second;
    const int k_top = std::min(n + 1, f_nu.max_order());
    double K = 0.0;
    for (double x : linear_grid(lo, hi, 2001))
        for (int k = 0; k <= k_top; ++k) K = std::max(K, std::abs(f_nu.eval(k, x)));
    const double T = std::cbrt(lambda);
    const double theta_inf = std::exp(theta.log_theta_inf(m));
    return (K * std::pow(lambda, -2.0 / 3.0) +
            (4.0 * K / kernel.A) * kernel_tail_from(T)) /
           theta_inf;
}

cplx Polynomial::eval(double x) const {
    cplx s{};
    for (std::size_t j = coeffs.size(); j-- > 0;) s = s * x + coeffs[j];
    return s;
}

SampledFunction Polynomial::as_function() const {
    auto c = coeffs;
    auto deriv = [c](int k, double x) -> cplx {
        // Horner on the k-th derivative coefficients j!/(j-k)! c_j
        cplx s{};
        for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
            double fall = 1.0;
            for (int i = 0; i < k; ++i) fall *= static_cast<double>(j - i);
            s = s * x + fall * c[j];
        }
        return s;
    };
    return SampledFunction(deriv, 128);
}

Polynomial polynomialize(const SampledFunction& f_nu, double lambda, int N,
                         const MollifierKernel& kernel, double L) {
    if (!(lambda > 0.0) || !(L > 0.0))
        throw InvariantViolated("polynomialization needs positive scale and window");
    if (N < 0 || static_cast<std::size_t>(N) >= kernel.taylor.size())
        throw InvariantViolated("polynomial degree outside the kernel Taylor range");

    // scaled moments m_i = integral of f_nu(y) (y/L)^i dy, |m_i| <= L * max|f|
    std::vector<cplx> mom(static_cast<std::size_t>(2 * N + 1));
    for (int i = 0; i <= 2 * N; ++i)
        mom[static_cast<std::size_t>(i)] = adaptive_simpson(
            [&](double y) { return f_nu.eval(0, y) * std::pow(y / L, i); }, -L, L, 1e-12);

    const double logA = std::log(kernel.A);
    const double logLam = std::log(lambda);
    const double logL = std::log(L);
    Polynomial q;
    q.coeffs.assign(static_cast<std::size_t>(2 * N + 1), cplx{});
    for (int j = 0; j <= 2 * N; ++j) {
        KahanSumC acc;
        double max_term = 0.0;
        for (int k = (j + 1) / 2; k <= N; ++k) {
            const int i = 2 * k - j;
            const cplx m = mom[static_cast<std::size_t>(i)];
            if (m == cplx{}) continue;
            const double log_binom = std::lgamma(2.0 * k + 1.0) - std::lgamma(j + 1.0) -
                                     std::lgamma(i + 1.0);
            // a_k lambda^{2k+1} / A * binom(2k, j) * (-1)^i * L^i * m_i
            const double log_mag = -std::log(2.0) - std::lgamma(2.0 * k + 3.0) +
                                   (2.0 * k + 1.0) * logLam - logA + log_binom +
                                   static_cast<double>(i) * logL;
            double sign = (k % 2 == 0) ? 1.0 : -1.0; // sign of a_k
            if (i % 2 != 0) sign = -sign;
            const cplx term = sign * std::exp(log_mag) * m;
            if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
                throw CoefficientOverflow("coefficient " + std::to_string(j) +
                                          " overflows double range");
            max_term = std::max(max_term, std::abs(term));
            acc.add(term);
        }
        const cplx s = acc.value();
        if (max_term > 1e6 * std::max(std::abs(s), 1e-12))
            throw CoefficientOverflow("coefficient " + std::to_string(j) +
                                      " loses more than 6 digits to cancellation");
        q.coeffs[static_cast<std::size_t>(j)] = s;
    }
    return q;
}

std::pair<Polynomial, double> exp_taylor_approx(double xi, int N, const ThetaFamily& theta,
                                                int n, int m) {
    if (N < 0) throw InvariantViolated("Taylor degree must be nonnegative");
    Polynomial p;
    p.coeffs.assign(static_cast<std::size_t>(N + 1), cplx{});
    double c = 1.0;
    for (int v = 0; v <= N; ++v) {
        p.coeffs[static_cast<std::size_t>(v)] = cplx{c, 0.0};
        c *= xi / static_cast<double>(v + 1);
    }
    auto expf = SampledFunction(
        [xi](int k, double x) -> cplx {
            return cplx{std::pow(xi, k) * std::exp(xi * x), 0.0};
        },
        128);
    const auto diff = SampledFunction::combine(1.0, expf, -1.0, p.as_function());
    const double gap = norm_EPhi(diff, n, m, theta).value;
    return {std::move(p), gap};
}

std::vector<PipelineRow> run_pipeline(const SampledFunction& f,
                                      const SampledFunction& gamma,
                                      const MollifierKernel& kernel,
                                      const PipelineSchedules& sched, int n, int m,
                                      const ThetaFamily& theta) {
    if (sched.nu.empty() || sched.lambda.empty() || sched.N.empty())
        throw InvariantViolated("pipeline schedules must be nonempty");
    std::vector<PipelineRow> rows;

    int best_nu = sched.nu.front();
    double best_gap = kInf;
    for (int nu : sched.nu) {
        const auto f_nu = cutoff(f, nu, gamma);
        const auto diff = SampledFunction::combine(1.0, f_nu, -1.0, f);
        const double gap = norm_EPhi(diff, n, m, theta).value;
        rows.push_back({"cutoff", nu, 0.0, 0, n, m, gap});
        if (gap < best_gap) { best_gap = gap; best_nu = nu; }
    }

    const auto f_nu = cutoff(f, best_nu, gamma);
    std::vector<SampledFunction> smoothed;
    std::size_t best_li = 0;
    best_gap = kInf;
    for (std::size_t li = 0; li < sched.lambda.size(); ++li) {
        smoothed.push_back(mollify(f_nu, sched.lambda[li], kernel));
        const auto diff = SampledFunction::combine(1.0, smoothed.back(), -1.0, f_nu);
        const double gap = norm_EPhi(diff, n, m, theta).value;
        rows.push_back({"mollify", best_nu, sched.lambda[li], 0, n, m, gap});
        if (gap < best_gap) { best_gap = gap; best_li = li; }
    }

    const double best_lambda = sched.lambda[best_li];
    const auto& f_nl = smoothed[best_li]; // shares the memoized evaluations
    const double L = 2.0 * static_cast<double>(best_nu);
    for (int N : sched.N) {
        double gap3 = kInf, total = kInf;
        try {
            const auto q = polynomialize(f_nu, best_lambda, N, kernel, L).as_function();
            gap3 = norm_EPhi(SampledFunction::combine(1.0, f_nl, -1.0, q), n, m, theta).value;
            total = norm_EPhi(SampledFunction::combine(1.0, f, -1.0, q), n, m, theta).value;
        } catch (const CoefficientOverflow&) {
            // leave the gaps infinite: the cell is unusable at this precision
        }
        rows.push_back({"polynomial", best_nu, best_lambda, N, n, m, gap3});
        rows.push_back({"total", best_nu, best_lambda, N, n, m, total});
    }
    return rows;
}

double fit_decay_exponent(const std::vector<int>& Ns, const std::vector<double>& gaps) {
    if (Ns.size() != gaps.size())
        throw InvariantViolated("fit needs matching degree and gap lists");
    // least squares for ln gap = c0 + c1 s + c2 s ln s, s = 2N + 1
    double a[3][3] = {};
    double b[3] = {};
    std::size_t used = 0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (!(gaps[i] > 0.0) || !std::isfinite(gaps[i])) continue;
        const double s = 2.0 * Ns[i] + 1.0;
        const double basis[3] = {1.0, s, s * std::log(s)};
        const double y = std::log(gaps[i]);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += basis[r] * basis[c];
            b[r] += basis[r] * y;
        }
        ++used;
    }
    if (used < 4) throw InvariantViolated("fit needs at least four usable gaps");
    // Gaussian elimination with partial pivoting on the 3x3 system
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12)
            throw InvariantViolated("fit normal equations are singular");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double fmul = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= fmul * a[col][c];
            b[r] -= fmul * b[col];
        }
    }
    double x[3];
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return -x[2];
}

} // namespace wfl
