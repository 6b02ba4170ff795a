#ifndef WFL_CARLEMAN_HPP
#define WFL_CARLEMAN_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wfl/numeric.hpp"
#include "wfl/report.hpp"

namespace wfl {

// Increasing log-convex sequence M_0 = 1, M_1, ... normalizing derivative
// growth.  Stored in log space; a Gevrey generator extends evaluation to any
// truncation order.  Construction certifies:
//   - log-convexity M_k^2 <= M_{k-1} M_{k+1},
//   - finite-range decay of (M_{k+1}/M_k)^{1/k} toward 1,
//   - a factorial minorant M_k >= Q1 * Q2^k * k! with the maximizing (Q1, Q2).
class CarlemanSequence {
public:
    struct Certificates {
        bool log_convex = false;
        bool ratio_root_decay = false;
        double Q1 = 0.0;
        double Q2 = 0.0;
    };

    static CarlemanSequence gevrey(double s, long k_max = 512);
    static CarlemanSequence from_values(std::vector<double> values, long k_max = -1);

    double log_m(long k) const;          // ln M_k
    double m(long k) const { return std::exp(log_m(k)); }
    // ln(M_k / M_{k-1}), k >= 1; nondecreasing by log-convexity.
    double log_ratio(long k) const { return log_m(k) - log_m(k - 1); }
    long k_max() const { return k_max_; }
    // Largest order evaluable at all (stored size or unbounded for generators).
    long k_limit() const;
    bool has_generator() const { return generator_.has_value(); }
    const Certificates& certificates() const { return certs_; }
    std::string describe() const;

private:
    CarlemanSequence() = default;
    void validate();

    std::vector<double> log_values_;       // explicit mode
    std::optional<double> generator_;      // Gevrey exponent s
    long k_max_ = 512;
    Certificates certs_;
};

// w(r) = sup_k ln(r^k / M_k), w(0) = 0.  The sup is located by binary search
// on the nondecreasing ratio sequence; if the maximizer hits the truncation
// order the order is doubled once, after which TruncationNotConverged is
// raised.
double weight_eval(const CarlemanSequence& seq, double r);

// Minimal index attaining the sup in weight_eval (ties to the smallest k).
long counting_function(const CarlemanSequence& seq, double r);

// min over r > 0 of (w(r) - k ln r), bracketed on a log grid [1e-3, 1e6] and
// refined by golden section.  Equals -ln M_k for valid sequences.
double weight_dual_log_inf(const CarlemanSequence& seq, long k);

// w with its certified linear-growth constant A_w (grid max of w(r)/r plus a
// 5% margin) and a synchronized radius->value cache.
class AssociatedWeight {
public:
    explicit AssociatedWeight(CarlemanSequence seq, double cert_r_max = 1e3,
                              std::size_t cert_points = 400);

    double eval(double r) const;
    long counting(double r) const { return counting_function(seq_, r); }
    double a_w() const { return a_w_; }
    const CarlemanSequence& sequence() const { return seq_; }

private:
    CarlemanSequence seq_;
    double a_w_ = 0.0;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, double> cache_;
};

// w_m(|z|) = w((sigma + eps_m)^{-1} |z|) for a decreasing-to-zero eps
// sequence (default eps_m = 1/m).
class ScaledWeightFamily {
public:
    ScaledWeightFamily(std::shared_ptr<const AssociatedWeight> base, double sigma,
                       std::function<double(int)> epsilon = nullptr);

    double epsilon(int m) const { return epsilon_(m); }
    double scale(int m) const { return sigma_ + epsilon_(m); }
    double sigma() const { return sigma_; }
    double w_m(int m, double r) const { return base_->eval(r / scale(m)); }
    const AssociatedWeight& base() const { return *base_; }

private:
    std::shared_ptr<const AssociatedWeight> base_;
    double sigma_;
    std::function<double(int)> epsilon_;
};

// |w(r2) - w(r1)| <= A_w e |r2 - r1| on all grid pairs, and
// N(r) <= A_w e r for grid radii above 1/e.  Throws InvariantViolated with
// the witness pair on failure.
BoundReport certify_lipschitz(const AssociatedWeight& weight,
                              const std::vector<double>& radius_grid);

// Smallest Q with w_m + A ln(1+r) <= w_{m+1} + Q over the grid, required to
// stabilize (<1% change) under doubling of the radius range.
BoundReport certify_weight_gap(const ScaledWeightFamily& family, int m, double A,
                               const std::vector<double>& radius_grid);

} // namespace wfl

#endif
