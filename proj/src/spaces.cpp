#include "wfl/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace wfl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(cplx v) {
    const double a = std::abs(v);
    return a > 0.0 ? std::log(a) : kNegInf;
}
} // namespace

SampledFunction::SampledFunction(std::function<cplx(int, double)> deriv, int max_order,
                                 std::optional<Interval> support)
    : deriv_(std::move(deriv)), max_order_(max_order), support_(std::move(support)) {
    if (!deriv_ || max_order_ < 0)
        throw InvariantViolated("sampled function needs a derivative rule");
    if (support_ && !(support_->first < support_->second))
        throw InvariantViolated("empty support interval");
}

cplx SampledFunction::eval(int k, double x) const {
    if (k < 0 || k > max_order_)
        throw InsufficientDerivatives("derivative order " + std::to_string(k) +
                                      " exceeds available " + std::to_string(max_order_));
    if (support_ && (x < support_->first || x > support_->second)) return {};
    return deriv_(k, x);
}

SampledFunction SampledFunction::constant(cplx c) {
    return SampledFunction([c](int k, double) { return k == 0 ? c : cplx{}; },
                           std::numeric_limits<int>::max() / 2);
}

SampledFunction SampledFunction::monomial(int n) {
    if (n < 0) throw InvariantViolated("monomial degree must be nonnegative");
    return SampledFunction(
        [n](int k, double x) {
            if (k > n) return cplx{};
            double c = 1.0;
            for (int j = 0; j < k; ++j) c *= static_cast<double>(n - j);
            return cplx{c * std::pow(x, n - k), 0.0};
        },
        std::numeric_limits<int>::max() / 2);
}

SampledFunction SampledFunction::gaussian() {
    return SampledFunction(
        [](int k, double x) {
            // d^k/dx^k exp(-x^2) = (-1)^k H_k(x) exp(-x^2)
            const double e = std::exp(-x * x);
            if (e == 0.0) return cplx{};
            double hm1 = 0.0, h = 1.0;
            for (int j = 0; j < k; ++j) {
                const double next = 2.0 * x * h - 2.0 * j * hm1;
                hm1 = h;
                h = next;
            }
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            return cplx{sign * h * e, 0.0};
        },
        256);
}

SampledFunction SampledFunction::exponential(cplx z) {
    return SampledFunction(
        [z](int k, double x) {
            const cplx miz{z.imag(), -z.real()}; // -i z
            cplx p{1.0, 0.0};
            for (int j = 0; j < k; ++j) p *= miz;
            return p * std::exp(miz * x);
        },
        std::numeric_limits<int>::max() / 2);
}

SampledFunction SampledFunction::combine(cplx a, SampledFunction f, cplx b,
                                         SampledFunction g) {
    const int order = std::min(f.max_order(), g.max_order());
    std::optional<Interval> support;
    if (f.support() && g.support())
        support = Interval{std::min(f.support()->first, g.support()->first),
                           std::max(f.support()->second, g.support()->second)};
    return SampledFunction(
        [a, b, f = std::move(f), g = std::move(g)](int k, double x) {
            return a * f.eval(k, x) + b * g.eval(k, x);
        },
        order, support);
}

SampledFunction exponential_element(cplx z) { return SampledFunction::exponential(z); }

void check_derivative_consistency(const SampledFunction& f,
                                  const std::vector<double>& probes, double tol) {
    const double h = 1e-5;
    const int top = std::min(f.max_order() - 1, 6);
    for (double x : probes) {
        for (int k = 0; k <= top; ++k) {
            const cplx fd = (f.eval(k, x + h) - f.eval(k, x - h)) / (2.0 * h);
            const cplx exact = f.eval(k + 1, x);
            const double scale = 1.0 + std::abs(exact) + std::abs(f.eval(k, x)) / h * 1e-11;
            if (std::abs(fd - exact) > tol * scale)
                throw InvariantViolated("derivative tower inconsistent at k=" +
                                        std::to_string(k) + ", x=" + std::to_string(x));
        }
    }
}

EntireFunctionModel EntireFunctionModel::closure(std::function<cplx(cplx)> f,
                                                 std::string name) {
    EntireFunctionModel m;
    m.kind_ = Kind::Closure;
    m.fn_ = std::move(f);
    m.name_ = std::move(name);
    if (!m.fn_) throw InvariantViolated("null closure");
    return m;
}

EntireFunctionModel EntireFunctionModel::polynomial(std::vector<cplx> coeffs) {
    EntireFunctionModel m;
    m.kind_ = Kind::Polynomial;
    m.coeffs_ = std::move(coeffs);
    if (m.coeffs_.empty()) m.coeffs_.push_back({});
    m.name_ = "polynomial(deg " + std::to_string(m.coeffs_.size() - 1) + ")";
    return m;
}

EntireFunctionModel EntireFunctionModel::zero_product(
    cplx prefactor, std::vector<std::pair<cplx, int>> zeros) {
    EntireFunctionModel m;
    m.kind_ = Kind::ZeroProduct;
    m.prefactor_ = prefactor;
    m.zeros_ = std::move(zeros);
    for (const auto& [z, mult] : m.zeros_) {
        if (z == cplx{}) throw InvariantViolated("zero-product factors need nonzero zeros");
        if (mult < 1) throw InvariantViolated("zero multiplicities must be positive");
    }
    m.name_ = "product(" + std::to_string(m.zeros_.size()) + " zeros)";
    return m;
}

EntireFunctionModel EntireFunctionModel::exp_sum(std::vector<ExpTerm> terms) {
    EntireFunctionModel m;
    m.kind_ = Kind::ExpSum;
    m.terms_ = std::move(terms);
    m.name_ = "exp-sum(" + std::to_string(m.terms_.size()) + " terms)";
    return m;
}

cplx EntireFunctionModel::eval(cplx z) const {
    switch (kind_) {
        case Kind::Closure: return fn_(z);
        case Kind::Polynomial: {
            cplx acc{};
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
        case Kind::ZeroProduct: {
            cplx acc = prefactor_;
            for (const auto& [zero, mult] : zeros_) {
                const cplx factor = 1.0 - z / zero;
                for (int j = 0; j < mult; ++j) acc *= factor;
            }
            return acc;
        }
        case Kind::ExpSum: {
            KahanSumC acc;
            for (const auto& t : terms_)
                acc.add(t.a * std::exp(cplx{0.0, -t.lambda} * z));
            return acc.value();
        }
    }
    return {};
}

cplx EntireFunctionModel::derivative(cplx z, int k, double radius) const {
    if (k == 0) return eval(z);
    if (kind_ == Kind::Polynomial) {
        cplx acc{};
        for (std::size_t j = coeffs_.size(); j-- > static_cast<std::size_t>(k);) {
            double c = 1.0;
            for (int i = 0; i < k; ++i) c *= static_cast<double>(j - i);
            acc = acc * z + c * coeffs_[j];
        }
        return acc;
    }
    if (kind_ == Kind::ExpSum) {
        KahanSumC acc;
        for (const auto& t : terms_) {
            cplx p{1.0, 0.0};
            for (int j = 0; j < k; ++j) p *= cplx{0.0, -t.lambda};
            acc.add(t.a * p * std::exp(cplx{0.0, -t.lambda} * z));
        }
        return acc.value();
    }
    // Cauchy integral on a circle around z, trapezoid rule.
    const std::size_t n = 1024;
    KahanSumC acc;
    double kfact = 1.0;
    for (int j = 2; j <= k; ++j) kfact *= j;
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * std::acos(-1.0) * static_cast<double>(j) / n;
        const cplx w = std::polar(1.0, th);
        acc.add(eval(z + radius * w) * std::polar(1.0, -k * th));
    }
    return acc.value() * kfact / (static_cast<double>(n) * std::pow(radius, k));
}

std::vector<cplx> EntireFunctionModel::taylor(int count, double radius,
                                              std::size_t nodes) const {
    std::vector<cplx> coeffs(count);
    std::vector<cplx> samples(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        const double th = 2.0 * std::acos(-1.0) * static_cast<double>(j) / nodes;
        samples[j] = eval(radius * std::polar(1.0, th));
    }
    for (int k = 0; k < count; ++k) {
        KahanSumC acc;
        for (std::size_t j = 0; j < nodes; ++j) {
            const double th = 2.0 * std::acos(-1.0) * static_cast<double>(j) / nodes;
            acc.add(samples[j] * std::polar(1.0, -k * th));
        }
        coeffs[k] = acc.value() / (static_cast<double>(nodes) * std::pow(radius, k));
    }
    return coeffs;
}

const std::vector<cplx>* EntireFunctionModel::poly_coeffs() const {
    return kind_ == Kind::Polynomial ? &coeffs_ : nullptr;
}
const std::vector<EntireFunctionModel::ExpTerm>* EntireFunctionModel::exp_terms() const {
    return kind_ == Kind::ExpSum ? &terms_ : nullptr;
}
const std::vector<std::pair<cplx, int>>* EntireFunctionModel::zeros() const {
    return kind_ == Kind::ZeroProduct ? &zeros_ : nullptr;
}

namespace {

struct Scan {
    double log_sup = kNegInf;
    double arg_x = 0.0;
    int arg_k = 0;
};

// sup over [-range, range] (intersected with the support) and k <= k_top of
// the log objective log|f^(k)(x)| - penalty(k, x).
template <class Penalty>
Scan scan_sup(const SampledFunction& f, double range, int k_top, const Penalty& pen) {
    double lo = -range, hi = range;
    if (f.support()) {
        lo = std::max(lo, f.support()->first);
        hi = std::min(hi, f.support()->second);
    }
    Scan s;
    if (lo > hi) return s;
    const auto xs = linear_grid(lo, hi, 2001);
    for (double x : xs) {
        for (int k = 0; k <= k_top; ++k) {
            const double v = log_abs(f.eval(k, x)) - pen(k, x);
            if (v > s.log_sup) { s.log_sup = v; s.arg_x = x; s.arg_k = k; }
        }
    }
    return s;
}

// grid scan plus a local golden refinement of the winning cell, so that
// ranges with different grid spacing agree on sharply peaked objectives
template <class Penalty>
Scan scan_sup_refined(const SampledFunction& f, double range, int k_top,
                      const Penalty& pen) {
    Scan s = scan_sup(f, range, k_top, pen);
    if (std::isfinite(s.log_sup)) {
        const double step = range / 1000.0;
        const int k = s.arg_k;
        const double x = golden_max(
            [&](double t) { return log_abs(f.eval(k, t)) - pen(k, t); }, s.arg_x - step,
            s.arg_x + step, 1e-12);
        const double v = log_abs(f.eval(k, x)) - pen(k, x);
        if (v > s.log_sup) { s.log_sup = v; s.arg_x = x; }
    }
    return s;
}

template <class Penalty>
NormReport extend_until_stable(const SampledFunction& f, double range0, double range_cap,
                               int k0, int k_cap, const Penalty& pen, const char* what) {
    double range = std::min(range0, range_cap);
    int k_top = std::min(k0, f.max_order());
    k_cap = std::min(k_cap, f.max_order());
    Scan prev = scan_sup_refined(f, range, k_top, pen);
    NormReport report;
    for (int round = 0; round < 16; ++round) {
        const double range2 = std::min(2.0 * range, range_cap);
        const int k2 = std::min(2 * k_top, k_cap);
        const Scan cur = scan_sup_refined(f, range2, k2, pen);
        if (cur.log_sup == std::numeric_limits<double>::infinity())
            throw NormDiverged(std::string(what) + " overflows on the scan grid");
        const bool both_zero = cur.log_sup == kNegInf && prev.log_sup == kNegInf;
        if (both_zero || std::abs(cur.log_sup - prev.log_sup) <= 1e-3) {
            report.log_value = cur.log_sup;
            report.value = std::isfinite(cur.log_sup) ? std::exp(cur.log_sup) : 0.0;
            report.arg_x = cur.arg_x;
            report.arg_k = cur.arg_k;
            report.stabilized = true;
            return report;
        }
        prev = cur;
        const bool exhausted = range2 >= range_cap && k2 >= k_cap;
        range = range2;
        k_top = k2;
        if (exhausted)
            throw NormDiverged(std::string(what) +
                               " keeps growing at the extension limits (log sup " +
                               std::to_string(cur.log_sup) + ")");
    }
    throw NormDiverged(std::string(what) + " did not stabilize");
}

} // namespace

NormReport norm_G(const SampledFunction& f, int m, const ScaledWeightFamily& family,
                  const ThetaFamily& theta, int k_start, int k_cap) {
    const auto& seq = family.base().sequence();
    const double log_scale = std::log(family.scale(m));
    const auto pen = [&](int k, double x) {
        return k * log_scale + seq.log_m(k) + theta.log_theta(m, x);
    };
    const double cap = theta.weight().extent();
    return extend_until_stable(f, 4.0, cap, k_start, k_cap, pen, "norm_G sup");
}

NormReport norm_EPhi(const SampledFunction& f, int n, int m, const ThetaFamily& theta) {
    if (n > f.max_order())
        throw InsufficientDerivatives("norm needs derivatives up to " + std::to_string(n));
    const auto pen = [&](int, double x) { return theta.log_theta(m, x); };
    const double cap = theta.weight().extent();
    return extend_until_stable(f, 4.0, cap, n, n, pen, "norm_EPhi sup");
}

NormReport norm_P(const EntireFunctionModel& F, int m, const ConvexWeight& weight,
                  const ScaledWeightFamily& family, cplx lo, cplx hi,
                  std::size_t resolution) {
    if (!(lo.real() < hi.real()) || !(lo.imag() < hi.imag()))
        throw InvariantViolated("norm_P box is empty");
    const auto objective = [&](cplx z) {
        return log_abs(F.eval(z)) - weight.psi(z.imag()) - family.w_m(m, std::abs(z));
    };
    const auto res = linear_grid(lo.real(), hi.real(), resolution);
    const auto ims = linear_grid(lo.imag(), hi.imag(), resolution);
    NormReport report;
    double best = kNegInf;
    cplx arg{};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        for (std::size_t j = 0; j < ims.size(); ++j) {
            const cplx z{res[i], ims[j]};
            const double v = objective(z);
            if (v > best) { best = v; arg = z; bi = i; bj = j; }
        }
    }
    // one bisection level around the winning cell
    if (std::isfinite(best)) {
        const double dx = (hi.real() - lo.real()) / static_cast<double>(resolution - 1);
        const double dy = (hi.imag() - lo.imag()) / static_cast<double>(resolution - 1);
        for (double u = -1.0; u <= 1.0; u += 0.25) {
            for (double v = -1.0; v <= 1.0; v += 0.25) {
                const cplx z{arg.real() + u * dx, arg.imag() + v * dy};
                if (z.real() < lo.real() || z.real() > hi.real() || z.imag() < lo.imag() ||
                    z.imag() > hi.imag())
                    continue;
                const double val = objective(z);
                if (val > best) { best = val; arg = z; }
            }
        }
    }
    report.log_value = best;
    report.value = std::isfinite(best) ? std::exp(best) : 0.0;
    report.arg_z = arg;
    report.stabilized = bi > 0 && bi + 1 < res.size() && bj > 0 && bj + 1 < ims.size();
    if (!report.stabilized) report.note = "arg-sup on box boundary";
    return report;
}

BoundReport certify_exponential_membership(const std::vector<cplx>& probes, int m,
                                           const ScaledWeightFamily& family,
                                           const ThetaFamily& theta) {
    const double alpha = theta.weight().alpha();
    const double A = m * (alpha - 1.0);
    const auto gap = certify_weight_gap(family, m, A, log_grid(1e-3, 1e3, 400));
    double y_max = 1.0;
    for (const auto& z : probes) y_max = std::max(y_max, std::abs(z.imag()) + 1.0);
    const auto tilt =
        certify_tilt_duality(theta, m, linear_grid(-2.0 * y_max, 2.0 * y_max, 201));
    const double q_m = gap.constants.at("Q") + tilt.constants.at("b");

    BoundReport report;
    report.check_id = "exponential-membership";
    report.constants["Q"] = gap.constants.at("Q");
    report.constants["b"] = tilt.constants.at("b");
    report.constants["q_m"] = q_m;
    report.constants["m"] = m;
    double worst = 0.0;
    for (const auto& z : probes) {
        const auto nr = norm_G(exponential_element(z), m, family, theta);
        const double rhs_log =
            theta.weight().psi(z.imag()) + family.w_m(m + 1, std::abs(z)) + q_m;
        const double ratio = std::exp(nr.log_value - rhs_log);
        if (ratio > worst) {
            worst = ratio;
            report.witness["z_re"] = z.real();
            report.witness["z_im"] = z.imag();
        }
    }
    report.worst_ratio = worst;
    report.grid_spec = std::to_string(probes.size()) + " probes";
    report.passed = worst <= 1.0 + 1e-9;
    return report;
}

} // namespace wfl
