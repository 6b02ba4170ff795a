#include "wfl/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wfl {

namespace {
constexpr double kTol = 1e-9;

// Sample orders for certificate checks: dense low range, log-spaced beyond.
std::vector<long> sample_orders(long k_limit) {
    std::vector<long> ks;
    const long dense = std::min<long>(k_limit, 2048);
    for (long k = 0; k <= dense; ++k) ks.push_back(k);
    double k = static_cast<double>(dense);
    while (static_cast<long>(k * 1.1) < k_limit) {
        k *= 1.1;
        ks.push_back(static_cast<long>(k));
    }
    if (ks.back() != k_limit) ks.push_back(k_limit);
    return ks;
}
} // namespace

CarlemanSequence CarlemanSequence::gevrey(double s, long k_max) {
    if (s < 1.0) throw InvariantViolated("Gevrey exponent must satisfy s >= 1, got " +
                                         std::to_string(s));
    CarlemanSequence seq;
    seq.generator_ = s;
    seq.k_max_ = k_max;
    seq.validate();
    return seq;
}

CarlemanSequence CarlemanSequence::from_values(std::vector<double> values, long k_max) {
    if (values.empty()) throw InvariantViolated("empty Carleman sequence");
    CarlemanSequence seq;
    seq.log_values_.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0)) throw InvariantViolated("Carleman sequence values must be positive");
        seq.log_values_.push_back(std::log(v));
    }
    const long stored = static_cast<long>(values.size()) - 1;
    seq.k_max_ = (k_max < 0) ? stored : std::min(k_max, stored);
    seq.validate();
    return seq;
}

double CarlemanSequence::log_m(long k) const {
    if (generator_) return *generator_ * std::lgamma(static_cast<double>(k) + 1.0);
    return log_values_.at(static_cast<std::size_t>(k));
}

long CarlemanSequence::k_limit() const {
    if (generator_) return std::numeric_limits<long>::max() / 4;
    return static_cast<long>(log_values_.size()) - 1;
}

void CarlemanSequence::validate() {
    if (std::abs(log_m(0)) > kTol)
        throw InvariantViolated("M_0 must equal 1");
    const long top = std::min(k_max_, k_limit());
    if (top < 2) throw InvariantViolated("need at least M_0..M_2");

    const auto ks = sample_orders(top);
    // Monotonicity: nondecreasing throughout, strictly increasing from k = 1
    // (M_1 = M_0 is admitted so that M_k = k! qualifies).
    for (std::size_t i = 1; i < ks.size(); ++i) {
        const double lo = log_m(ks[i - 1]), hi = log_m(ks[i]);
        if (hi < lo - kTol)
            throw InvariantViolated("sequence not increasing at k=" + std::to_string(ks[i]));
        if (ks[i - 1] >= 1 && hi <= lo + kTol && ks[i] > ks[i - 1])
            throw InvariantViolated("sequence not strictly increasing at k=" +
                                    std::to_string(ks[i]));
    }
    // Log-convexity via nondecreasing ratios.
    certs_.log_convex = true;
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        const long k = ks[i];
        if (log_ratio(k + 1) < log_ratio(k) - kTol)
            throw InvariantViolated("log-convexity fails at k=" + std::to_string(k));
    }
    // Ratio-root decay toward 1: (M_{k+1}/M_k)^{1/k} nonincreasing, >= 1.
    certs_.ratio_root_decay = true;
    double prev = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= std::min<long>(top - 1, 4096); ++k) {
        const double v = log_ratio(k + 1) / static_cast<double>(k);
        if (v < -kTol || v > prev + kTol) {
            certs_.ratio_root_decay = false;
            throw InvariantViolated("ratio-root sequence not decreasing toward 1 at k=" +
                                    std::to_string(k));
        }
        prev = v;
    }
    // Factorial minorant: ln M_k - ln k! >= ln Q1 + k ln Q2.
    double ln_q2 = std::numeric_limits<double>::infinity();
    for (auto k : ks) {
        if (k < 1) continue;
        const double d = log_m(k) - std::lgamma(static_cast<double>(k) + 1.0);
        ln_q2 = std::min(ln_q2, d / static_cast<double>(k));
    }
    double ln_q1 = 0.0;
    for (auto k : ks) {
        const double d = log_m(k) - std::lgamma(static_cast<double>(k) + 1.0);
        ln_q1 = std::min(ln_q1, d - static_cast<double>(k) * ln_q2);
    }
    for (auto k : ks) {
        const double d = log_m(k) - std::lgamma(static_cast<double>(k) + 1.0);
        if (d < ln_q1 + static_cast<double>(k) * ln_q2 - 1e-6)
            throw InvariantViolated("factorial minorant fails at k=" + std::to_string(k));
    }
    certs_.Q1 = std::exp(ln_q1);
    certs_.Q2 = std::exp(ln_q2);
}

std::string CarlemanSequence::describe() const {
    std::ostringstream os;
    if (generator_) os << "gevrey(s=" << *generator_ << ", K=" << k_max_ << ")";
    else os << "explicit(" << log_values_.size() << " values)";
    return os.str();
}

namespace {

// Minimal maximizer of k ln r - ln M_k over 0 <= k <= k_eff.  The increments
// are ln r - log_ratio(k) with log_ratio nondecreasing, so the minimal argmax
// is the count of k >= 1 with log_ratio(k) < ln r (binary search).
long argmax_order(const CarlemanSequence& seq, double log_r, long k_eff) {
    // Ties (log_ratio == log_r up to rounding) go to the smaller index.
    const double tie_tol = 1e-12 * (std::abs(log_r) + 1.0);
    long lo = 1, hi = k_eff + 1; // first k in [1, k_eff+1] with log_ratio(k) >= log_r
    while (lo < hi) {
        const long mid = lo + (hi - lo) / 2;
        if (seq.log_ratio(mid) >= log_r - tie_tol) hi = mid;
        else lo = mid + 1;
    }
    return lo - 1;
}

long resolved_argmax(const CarlemanSequence& seq, double r) {
    const double log_r = std::log(r);
    long k_eff = std::min(seq.k_max(), seq.k_limit());
    long k = argmax_order(seq, log_r, k_eff);
    if (k == k_eff) {
        // One automatic doubling of the truncation order.
        const long doubled = std::min(2 * k_eff, seq.k_limit());
        if (doubled > k_eff) {
            k_eff = doubled;
            k = argmax_order(seq, log_r, k_eff);
        }
        if (k == k_eff)
            throw TruncationNotConverged("argmax of ln(r^k/M_k) pinned at truncation order " +
                                         std::to_string(k_eff) + " for r=" + std::to_string(r));
    }
    return k;
}

} // namespace

double weight_eval(const CarlemanSequence& seq, double r) {
    if (r < 0.0) throw InvariantViolated("weight_eval needs r >= 0");
    if (r == 0.0) return 0.0;
    const long k = resolved_argmax(seq, r);
    const double v = static_cast<double>(k) * std::log(r) - seq.log_m(k);
    return std::max(v, 0.0);
}

long counting_function(const CarlemanSequence& seq, double r) {
    if (!(r > 0.0)) throw InvariantViolated("counting_function needs r > 0");
    return resolved_argmax(seq, r);
}

double weight_dual_log_inf(const CarlemanSequence& seq, long k) {
    const auto objective = [&](double rho) {
        return weight_eval(seq, std::exp(rho)) - static_cast<double>(k) * rho;
    };
    // Coarse bracket on the log grid, then golden-section refinement; the
    // objective is convex piecewise-linear in rho for log-convex sequences.
    const auto grid = log_grid(1e-3, 1e6, 240);
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = objective(std::log(grid[i]));
        if (v < best_v) { best_v = v; best = i; }
    }
    const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
    const double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    const double rho = golden_min(objective, lo, hi, 1e-12);
    return objective(rho);
}

AssociatedWeight::AssociatedWeight(CarlemanSequence seq, double cert_r_max,
                                   std::size_t cert_points)
    : seq_(std::move(seq)) {
    double worst = 0.0;
    for (double r : log_grid(1e-3, cert_r_max, cert_points))
        worst = std::max(worst, weight_eval(seq_, r) / r);
    a_w_ = 1.05 * worst;
    if (a_w_ <= 0.0) a_w_ = 1e-12; // w == 0 on the certification range
}

double AssociatedWeight::eval(double r) const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(r);
        if (it != cache_.end()) return it->second;
    }
    const double v = weight_eval(seq_, r);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(r, v);
    return v;
}

ScaledWeightFamily::ScaledWeightFamily(std::shared_ptr<const AssociatedWeight> base,
                                       double sigma, std::function<double(int)> epsilon)
    : base_(std::move(base)), sigma_(sigma),
      epsilon_(epsilon ? std::move(epsilon)
                       : [](int m) { return 1.0 / static_cast<double>(m); }) {
    if (!(sigma_ > 0.0)) throw InvariantViolated("sigma must be positive");
    for (int m = 1; m < 12; ++m)
        if (!(epsilon_(m) > epsilon_(m + 1)) || !(epsilon_(m + 1) > 0.0))
            throw InvariantViolated("epsilon sequence must decrease to zero");
}

BoundReport certify_lipschitz(const AssociatedWeight& weight,
                              const std::vector<double>& radius_grid) {
    BoundReport report;
    report.check_id = "weight-lipschitz";
    report.constants["A_w"] = weight.a_w();
    report.grid_spec = std::to_string(radius_grid.size()) + " radii";
    const double slope = weight.a_w() * std::exp(1.0);

    std::vector<double> w(radius_grid.size());
    for (std::size_t i = 0; i < radius_grid.size(); ++i) {
        if (radius_grid[i] < 0.0) throw InvariantViolated("negative radius in grid");
        w[i] = weight.eval(radius_grid[i]);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < radius_grid.size(); ++i) {
        for (std::size_t j = i + 1; j < radius_grid.size(); ++j) {
            const double dr = std::abs(radius_grid[j] - radius_grid[i]);
            const double dw = std::abs(w[j] - w[i]);
            if (dr == 0.0) {
                if (dw > 1e-12)
                    throw InvariantViolated("w not single-valued at r=" +
                                            std::to_string(radius_grid[i]));
                continue;
            }
            const double ratio = dw / (slope * dr);
            if (ratio > worst) {
                worst = ratio;
                report.witness["r1"] = radius_grid[i];
                report.witness["r2"] = radius_grid[j];
            }
            if (ratio > 1.0 + 1e-9)
                throw InvariantViolated("Lipschitz bound fails on pair (" +
                                        std::to_string(radius_grid[i]) + ", " +
                                        std::to_string(radius_grid[j]) + ")");
        }
    }
    // Counting-function growth: N(r) <= A_w e r above 1/e.
    for (double r : radius_grid) {
        if (r <= std::exp(-1.0) || r <= 0.0) continue;
        const double n = static_cast<double>(weight.counting(r));
        if (n > slope * r + 1e-9)
            throw InvariantViolated("counting bound fails at r=" + std::to_string(r));
    }
    report.worst_ratio = worst;
    report.passed = true;
    return report;
}

BoundReport certify_weight_gap(const ScaledWeightFamily& family, int m, double A,
                               const std::vector<double>& radius_grid) {
    if (m < 1 || !(A > 0.0)) throw InvariantViolated("need m >= 1 and A > 0");
    BoundReport report;
    report.check_id = "weight-gap";
    report.grid_spec = std::to_string(radius_grid.size()) + " radii";

    const auto gap_at = [&](double r) {
        return family.w_m(m, r) + A * std::log1p(r) - family.w_m(m + 1, r);
    };
    double q = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (double r : radius_grid) {
        const double g = gap_at(r);
        if (g > q) { q = g; arg = r; }
    }
    // Stabilization under doubling of the radius range.
    double r_hi = *std::max_element(radius_grid.begin(), radius_grid.end());
    if (r_hi > 0.0) {
        bool stable = false;
        for (int round = 0; round < 3 && !stable; ++round) {
            const double prev_q = q;
            for (double r : log_grid(std::max(r_hi, 1e-3), 2.0 * std::max(r_hi, 1e-3), 160)) {
                const double g = gap_at(r);
                if (g > q) { q = g; arg = r; }
            }
            r_hi *= 2.0;
            stable = std::abs(q - prev_q) < std::max(0.01 * std::abs(prev_q), 1e-6);
        }
        if (!stable)
            throw GapUnbounded("gap constant Q keeps growing under range extension (m=" +
                               std::to_string(m) + ", A=" + std::to_string(A) + ")");
    }
    report.constants["Q"] = q;
    report.constants["A"] = A;
    report.constants["m"] = m;
    report.witness["r"] = arg;
    report.worst_ratio = q;
    report.passed = std::isfinite(q);
    return report;
}

} // namespace wfl
