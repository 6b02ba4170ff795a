#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfl/carleman.hpp"

using namespace wfl;

namespace {

// Independent oracle: brute-force max of k ln r - ln k! over k <= 100.
double brute_weight_factorial(double r) {
    double best = 0.0;
    double log_fact = 0.0;
    for (int k = 1; k <= 100; ++k) {
        log_fact += std::log(static_cast<double>(k));
        best = std::max(best, k * std::log(r) - log_fact);
    }
    return best;
}

long brute_argmax_factorial(double r) {
    long best_k = 0;
    double best = 0.0;
    double log_fact = 0.0;
    for (int k = 1; k <= 100; ++k) {
        log_fact += std::log(static_cast<double>(k));
        const double v = k * std::log(r) - log_fact;
        if (v > best + 1e-12) { best = v; best_k = k; }
    }
    return best_k;
}

std::vector<double> factorial_values(int top) {
    std::vector<double> v{1.0};
    for (int k = 1; k <= top; ++k) v.push_back(v.back() * k);
    return v;
}

} // namespace

TEST_CASE("weight evaluation against brute-force oracle") {
    auto seq = CarlemanSequence::gevrey(1.0, 512);
    CHECK(weight_eval(seq, 0.5) == doctest::Approx(0.0));
    CHECK(weight_eval(seq, 0.0) == doctest::Approx(0.0));
    const double e = std::exp(1.0);
    CHECK(weight_eval(seq, e) == doctest::Approx(brute_weight_factorial(e)).epsilon(1e-12));
    CHECK(weight_eval(seq, e) == doctest::Approx(2.0 - std::log(2.0)).epsilon(1e-12));
    for (double r : {0.1, 0.9, 1.0, 2.0, 5.0, 17.3, 80.0})
        CHECK(weight_eval(seq, r) == doctest::Approx(brute_weight_factorial(r)).epsilon(1e-12));
}

TEST_CASE("minimal maximizer index") {
    auto seq = CarlemanSequence::gevrey(1.0, 512);
    CHECK(counting_function(seq, 1.0) == 0);
    CHECK(counting_function(seq, 0.5) == 0);
    CHECK(counting_function(seq, std::exp(1.0)) == 2);
    CHECK(counting_function(seq, std::exp(1.0)) == brute_argmax_factorial(std::exp(1.0)));
    for (double r : {1.5, 3.0, 10.0, 42.0})
        CHECK(counting_function(seq, r) == brute_argmax_factorial(r));
}

TEST_CASE("explicit values match the generator") {
    auto gen = CarlemanSequence::gevrey(1.0, 64);
    auto exp = CarlemanSequence::from_values(factorial_values(64));
    for (double r : {0.5, 1.0, 2.0, 8.0, 30.0}) {
        CHECK(weight_eval(exp, r) == doctest::Approx(weight_eval(gen, r)).epsilon(1e-12));
        CHECK(counting_function(exp, r) == counting_function(gen, r));
    }
}

TEST_CASE("construction rejects invalid sequences") {
    CHECK_THROWS_AS(CarlemanSequence::gevrey(0.5), InvariantViolated);
    CHECK_THROWS_AS(CarlemanSequence::from_values({2.0, 2.0, 4.0}), InvariantViolated);
    // not log-convex: M_1^2 > M_0 M_2
    CHECK_THROWS_AS(CarlemanSequence::from_values({1.0, 10.0, 20.0, 5000.0}), InvariantViolated);
    CHECK_THROWS_AS(CarlemanSequence::from_values({1.0, 1.0, -2.0}), InvariantViolated);
}

TEST_CASE("regularity certificates for the Gevrey family") {
    for (double s : {1.0, 1.5, 2.0}) {
        auto seq = CarlemanSequence::gevrey(s, 256);
        const auto& c = seq.certificates();
        CHECK(c.log_convex);
        CHECK(c.ratio_root_decay);
        CHECK(c.Q1 > 0.0);
        CHECK(c.Q2 > 0.0);
    }
}

TEST_CASE("truncation behavior") {
    const double e = std::exp(1.0);
    // K_eff beyond the argmax leaves the value unchanged.
    const double ref = weight_eval(CarlemanSequence::gevrey(1.0, 8), e);
    CHECK(weight_eval(CarlemanSequence::gevrey(1.0, 16), e) == doctest::Approx(ref));
    CHECK(weight_eval(CarlemanSequence::gevrey(1.0, 512), e) == doctest::Approx(ref));
    // Maximizer pinned at the truncation order even after one doubling.
    auto tiny = CarlemanSequence::gevrey(1.0, 2);
    CHECK_THROWS_AS(weight_eval(tiny, 100.0), TruncationNotConverged);
}

TEST_CASE("duality identity between weight and sequence") {
    // inf_r exp(w(r))/r^k * M_k == 1 for every k <= 20.
    for (double s : {1.0, 1.5, 2.0}) {
        auto seq = CarlemanSequence::gevrey(s, 1L << 21);
        for (long k = 0; k <= 20; ++k) {
            const double log_inf = weight_dual_log_inf(seq, k);
            CHECK(std::abs(std::exp(log_inf + seq.log_m(k)) - 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("integral representation via the counting function") {
    // w(r) - w(1) equals the integral of N(x)/x, computed exactly from the
    // jump radii x_k = M_k/M_{k-1} of the step function N.
    auto seq = CarlemanSequence::gevrey(1.0, 1024);
    for (double r : {2.0, 10.0, 57.0, 100.0}) {
        double integral = 0.0;
        long k = 1;
        double lo = 1.0;
        while (lo < r) {
            while (seq.log_ratio(k) <= std::log(lo) + 1e-15) ++k;
            const double hi = std::min(r, std::exp(seq.log_ratio(k)));
            integral += static_cast<double>(k - 1) * (std::log(hi) - std::log(lo));
            lo = hi;
        }
        CHECK(weight_eval(seq, r) - weight_eval(seq, 1.0) ==
              doctest::Approx(integral).epsilon(1e-4));
    }
}

TEST_CASE("Lipschitz and counting growth certificate") {
    auto weight = std::make_shared<AssociatedWeight>(CarlemanSequence::gevrey(1.0, 2048));
    CHECK(weight->a_w() > 0.0);

    auto flat = certify_lipschitz(*weight, {0.0, 0.5, 1.0});
    CHECK(flat.passed);
    CHECK(flat.worst_ratio == doctest::Approx(0.0));

    auto grid = log_grid(0.1, 1e3, 400);
    auto rep = certify_lipschitz(*weight, grid);
    CHECK(rep.passed);
    CHECK(rep.worst_ratio <= 1.0);

    const double e = std::exp(1.0);
    auto same = certify_lipschitz(*weight, {e, e});
    CHECK(same.passed);
    CHECK(same.worst_ratio == doctest::Approx(0.0));
}

TEST_CASE("scaled family ordering and gap constant") {
    auto weight = std::make_shared<AssociatedWeight>(CarlemanSequence::gevrey(1.0, 1L << 16));
    ScaledWeightFamily family(weight, 1.0);
    CHECK(family.epsilon(1) == doctest::Approx(1.0));
    CHECK(family.scale(3) == doctest::Approx(1.0 + 1.0 / 3.0));
    for (double r : log_grid(0.1, 1e3, 50))
        CHECK(family.w_m(1, r) <= family.w_m(2, r) + 1e-12);

    auto grid = log_grid(1e-3, 1e3, 400);
    auto rep = certify_weight_gap(family, 1, 1.0, grid);
    CHECK(rep.passed);
    CHECK(std::isfinite(rep.constants.at("Q")));
    CHECK(rep.constants.at("Q") > 0.0);

    auto tiny = certify_weight_gap(family, 1, 1e-9, grid);
    CHECK(tiny.passed);
    CHECK(tiny.constants.at("Q") <= 1e-6);

    auto origin = certify_weight_gap(family, 1, 1.0, {0.0});
    CHECK(origin.passed);
    CHECK(origin.constants.at("Q") == doctest::Approx(0.0));
}
