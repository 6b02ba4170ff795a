#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "wfl/lagrange.hpp"

using namespace wfl;

namespace {

const double kPi = std::acos(-1.0);

std::shared_ptr<const WeightContext> ctx() {
    static auto c = WeightContext::standard();
    return c;
}

cplx sinc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

// sin(pi z) / (pi z (1 - z^2)), entire: the poles at 0, +-1 are cancelled
cplx band_limited_rational(cplx z) {
    if (std::abs(z - 1.0) < 0.1) return sinc(kPi * (z - 1.0)) / (z * (1.0 + z));
    if (std::abs(z + 1.0) < 0.1) return -sinc(kPi * (z + 1.0)) / (z * (1.0 - z));
    return sinc(kPi * z) / ((1.0 - z) * (1.0 + z));
}

cplx quartic_fejer(cplx z) {
    const cplx s = sinc(kPi * z / 4.0);
    return s * s * s * s;
}

std::vector<cplx> sample(const std::function<cplx(cplx)>& f, const LagrangeGenerator& g) {
    std::vector<cplx> s;
    for (const auto& a : g.zeros()) s.push_back(f(a));
    return s;
}

std::vector<cplx> rect_probes(double xr, double yr, std::size_t nx, std::size_t ny) {
    std::vector<cplx> z;
    for (double x : linear_grid(-xr, xr, nx))
        for (double y : linear_grid(-yr, yr, ny)) z.push_back({x, y});
    return z;
}

} // namespace

TEST_CASE("cardinal generator layout") {
    auto g1 = build_cardinal_generator(1.0, 10, ctx());
    CHECK(g1.zeros().size() == 21);
    CHECK(g1.zeros()[0] == cplx{0.0, 0.0});
    CHECK(g1.derivs()[0].real() == doctest::Approx(kPi));
    // zero at 1 has derivative -pi
    std::size_t i1 = g1.nearest_zero({1.0, 0.0});
    CHECK(g1.zeros()[i1].real() == doctest::Approx(1.0));
    CHECK(g1.derivs()[i1].real() == doctest::Approx(-kPi));
    CHECK(g1.c_n() > 0.0);
    CHECK(g1.disk_law().b == doctest::Approx(0.25));

    auto g2 = build_cardinal_generator(2.0, 10, ctx());
    std::size_t i3 = g2.nearest_zero({1.5, 0.0});
    CHECK(g2.zeros()[i3].real() == doctest::Approx(1.5));
    CHECK(g2.derivs()[i3].real() == doctest::Approx(-2.0 * kPi));

    // non-simple zero and overlapping disks are rejected
    auto m = EntireFunctionModel::closure([](cplx z) { return z * z; });
    CHECK_THROWS_AS(LagrangeGenerator(m, {{0.0, 0.0}}, {{0.0, 0.0}}, DiskLaw{0.1, 0.0},
                                      1.0, ctx(), 1),
                    InvariantViolated);
    CHECK_THROWS_AS(LagrangeGenerator(m, {{0.0, 0.0}, {0.1, 0.0}},
                                      {{1.0, 0.0}, {1.0, 0.0}}, DiskLaw{0.25, 0.0}, 1.0,
                                      ctx(), 1),
                    InvariantViolated);
}

TEST_CASE("series reconstruction basics") {
    auto gen = build_cardinal_generator(1.0, 50, ctx());
    const std::size_t count = gen.zeros().size();

    // single sample at the origin reproduces sinc
    std::vector<cplx> delta0(count, cplx{});
    delta0[0] = {1.0, 0.0};
    const DecayCert c1{1.0, 2.0, 0.0};
    CHECK(reconstruct(delta0, gen, {0.25, 0.0}, c1, 1e-4).real() ==
          doctest::Approx(std::sin(0.25 * kPi) / (0.25 * kPi)));

    // two unit samples at 0 and 1 give 4/pi at the midpoint
    std::vector<cplx> two(count, cplx{});
    two[0] = {1.0, 0.0};
    two[gen.nearest_zero({1.0, 0.0})] = {1.0, 0.0};
    const DecayCert c2{3.0, 2.0, 0.0};
    CHECK(reconstruct(two, gen, {0.5, 0.0}, c2, 1e-4).real() == doctest::Approx(4.0 / kPi));

    // interpolation exactness at every stored zero
    std::vector<cplx> decayed(count);
    for (std::size_t n = 0; n < count; ++n)
        decayed[n] = 0.5 * gen.derivs()[n] * std::pow(1.0 + std::abs(gen.zeros()[n]), -3.0);
    const DecayCert c3{0.51, 2.0, 0.0};
    for (std::size_t n : {std::size_t{0}, std::size_t{9}, std::size_t{40}})
        CHECK(reconstruct(decayed, gen, gen.zeros()[n], c3) == decayed[n]);

    // linearity in the samples
    const cplx z{0.3, 0.2};
    std::vector<cplx> mix(count);
    for (std::size_t n = 0; n < count; ++n) mix[n] = delta0[n] + 2.0 * decayed[n];
    const DecayCert cmix{3.0, 2.0, 0.0};
    const cplx lhs = reconstruct(mix, gen, z, cmix, 1e-4);
    const cplx rhs = reconstruct(delta0, gen, z, c1, 1e-4) + 2.0 * reconstruct(decayed, gen, z, c3, 1e-4);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));

    // certificate and tail failures
    CHECK_THROWS_AS(reconstruct(two, gen, {0.5, 0.0}, DecayCert{0.1, 2.0, 0.0}),
                    DecayCertificateViolated);
    CHECK_THROWS_AS(reconstruct(decayed, gen, {49.8, 0.0}, c3), TailNotConverged);
    CHECK_THROWS_AS(reconstruct(decayed, gen, {0.5, 0.0}, c3, 1e-30), TailNotConverged);
}

TEST_CASE("cardinal round trip at band-limited fixtures") {
    auto gen = build_cardinal_generator(1.0, 200, ctx());
    const auto probes = rect_probes(2.0, 1.0, 21, 11);

    SUBCASE("rational decay factor") {
        auto samples = sample(band_limited_rational, gen);
        double a13 = 0.0;
        for (std::size_t n = 0; n < samples.size(); ++n)
            a13 = std::max(a13, std::abs(samples[n] / gen.derivs()[n]) *
                                    std::pow(1.0 + std::abs(gen.zeros()[n]), 3.0));
        const DecayCert cert{1.05 * a13, 2.0, 0.0};
        double worst = 0.0;
        for (const auto& z : probes)
            worst = std::max(worst,
                             std::abs(reconstruct(samples, gen, z, cert, 1e-5) -
                                      band_limited_rational(z)));
        CHECK(worst <= 1e-6);
    }

    SUBCASE("fourth-power kernel") {
        auto samples = sample(quartic_fejer, gen);
        double a13 = 0.0;
        for (std::size_t n = 0; n < samples.size(); ++n)
            a13 = std::max(a13, std::abs(samples[n] / gen.derivs()[n]) *
                                    std::pow(1.0 + std::abs(gen.zeros()[n]), 3.0));
        const DecayCert cert{1.05 * a13, 2.0, 0.0};
        double worst = 0.0;
        for (const auto& z : probes)
            worst = std::max(worst, std::abs(reconstruct(samples, gen, z, cert, 1e-5) -
                                             quartic_fejer(z)));
        CHECK(worst <= 1e-6);

        // doubling the stored range moves values by less than the tail budget
        auto gen2 = build_cardinal_generator(1.0, 400, ctx());
        auto samples2 = sample(quartic_fejer, gen2);
        double drift = 0.0;
        for (const auto& z : probes)
            drift = std::max(drift, std::abs(reconstruct(samples2, gen2, z, cert, 1e-5) -
                                             reconstruct(samples, gen, z, cert, 1e-5)));
        CHECK(drift <= 1e-6);
    }
}

TEST_CASE("per-term series bound") {
    auto gen = build_cardinal_generator(1.0, 100, ctx());
    std::vector<cplx> probes{{0.0, 1.0}, {2.3, 0.5}, {0.3, 0.0}, {-4.1, -2.0},
                             {7.0, 0.0}};
    probes.push_back(gen.zeros()[14]); // removable-singularity branch

    auto F = EntireFunctionModel::closure([](cplx z) { return sinc(kPi * z); });
    auto rep = certify_series_bound(F, gen, probes);
    CHECK(rep.passed);
    CHECK(rep.constants.at("A11") > 0.0);
    CHECK(rep.worst_ratio <= 1.0);
    // classical value at z = i, n = 0: |sin(pi i)/i| = sinh(pi)
    CHECK(std::abs(gen.eval({0.0, 1.0})) == doctest::Approx(std::sinh(kPi)));
    // p-series tail for alpha = 2 stays small and the proxy converges
    CHECK(rep.constants.at("summability") < 3.0);
    CHECK(rep.constants.at("cauchy_tail") < 2e-4);
    // sinc only hits the origin sample
    CHECK(rep.constants.at("sample_decay_A13") == doctest::Approx(1.0 / kPi));

    CHECK_THROWS_AS(certify_series_bound(F, gen, probes, 2.0, 1e-6), TermBoundViolated);
}

TEST_CASE("zero shift perturbation") {
    auto base = EntireFunctionModel::zero_product({1.0, 0.0}, {{{1.0, 0.0}, 1}});

    SUBCASE("null shift") {
        ZeroShiftSpec spec{{{1.0, 0.0}}, {1}, {{0.0, 0.0}}, {0.5}};
        auto [ft, rep] = zero_shift(spec, base, {{0.0, 0.0}, {2.0, 0.0}, {3.0, 1.0}});
        CHECK(rep.constants.at("C_star") == doctest::Approx(0.0));
        CHECK(std::abs(ft.eval({2.0, 0.0}) - base.eval({2.0, 0.0})) <= 1e-15);
    }

    SUBCASE("small real shift") {
        ZeroShiftSpec spec{{{1.0, 0.0}}, {1}, {{0.1, 0.0}}, {0.5}};
        // at the origin both factors normalize to 1
        auto [ft0, rep0] = zero_shift(spec, base, {{0.0, 0.0}});
        CHECK(rep0.constants.at("C_star") == doctest::Approx(0.0));
        (void)ft0;
        // at 2: | ln|1 - 2/1.1| - ln|1 - 2| | = |ln 0.81818...|
        auto [ft2, rep2] = zero_shift(spec, base, {{2.0, 0.0}});
        CHECK(rep2.constants.at("C_star") == doctest::Approx(0.2006707).epsilon(1e-5));
        (void)ft2;
    }

    SUBCASE("guards") {
        ZeroShiftSpec leaves{{{1.0, 0.0}}, {1}, {{0.6, 0.0}}, {0.5}};
        CHECK_THROWS_AS(zero_shift(leaves, base, {{2.0, 0.0}}), ShiftLeavesDisk);
        ZeroShiftSpec ok{{{1.0, 0.0}}, {1}, {{0.1, 0.0}}, {0.5}};
        CHECK_THROWS_AS(zero_shift(ok, base, {{1.2, 0.0}}), ProbeInsideDisk);
        auto closure_base = EntireFunctionModel::closure([](cplx z) { return 1.0 - z; });
        CHECK_THROWS_AS(zero_shift(ok, closure_base, {{2.0, 0.0}}), InvariantViolated);
    }

    SUBCASE("nested families shrink the bound") {
        const std::vector<cplx> lams{{4.0, 0.0}, {-6.0, 0.0}, {10.0, 0.0}};
        auto big = EntireFunctionModel::zero_product(
            {1.0, 0.0}, {{lams[0], 1}, {lams[1], 2}, {lams[2], 1}});
        const std::vector<cplx> probes{{0.0, 0.0},  {0.0, 2.0},  {15.0, 0.0},
                                       {-12.0, 3.0}, {0.0, -7.0}, {7.0, 5.0},
                                       {-2.0, -4.0}, {20.0, 2.0}};
        double prev = std::numeric_limits<double>::infinity();
        double prev_mass = std::numeric_limits<double>::infinity();
        for (double s : {1.0, 0.5, 0.25, 0.125}) {
            ZeroShiftSpec spec{lams,
                               {1, 2, 1},
                               {{0.04 * s, 0.0}, {0.02 * s, 0.0}, {0.02 * s, 0.0}},
                               {1.0, 1.0, 1.0}};
            auto [ft, rep] = zero_shift(spec, big, probes);
            (void)ft;
            const double c = rep.constants.at("C_star");
            CHECK(std::isfinite(c));
            CHECK(c <= prev + 1e-12);
            CHECK(spec.shift_mass() < prev_mass);
            prev = c;
            prev_mass = spec.shift_mass();
        }
    }
}

TEST_CASE("shift schedule selection") {
    SUBCASE("free first interval") {
        auto spec = shift_schedule({{2.5, 0.0}}, {{10.0, 0.0}}, 2.0, 0.5, 0.5, 2.0);
        REQUIRE(spec.lambda.size() == 1);
        const int nu = 6;
        const double b = 0.9 * std::min(0.5, 0.5 * std::pow(2.0, -12.0) / 4.0);
        const double sigma = std::pow(2.0, nu + 2) * b * 2.0 * std::pow(10.0, 1.0 - nu);
        CHECK(std::abs(spec.shift[0]) == doctest::Approx(0.5 * sigma));
        CHECK(spec.shift[0].imag() == doctest::Approx(0.0));
        // the closed-form cap on the shift size
        CHECK(std::abs(spec.shift[0]) <=
              std::pow(2.0, nu + 5) * b * 4.0 * std::pow(10.0, 2.0 - nu));
        // usable downstream: the perturbed product stays log-close
        auto base = EntireFunctionModel::zero_product({1.0, 0.0}, {{{10.0, 0.0}, 1}});
        auto [ft, rep] = zero_shift(spec, base, {{0.0, 0.0}, {3.0, 1.0}, {20.0, 0.0}});
        (void)ft;
        CHECK(rep.constants.at("C_star") <= 1e-5);
    }

    SUBCASE("blocked first interval moves to the next") {
        const int nu = 6;
        const double b = 0.9 * std::min(0.5, 0.5 * std::pow(2.0, -12.0) / 4.0);
        const double sigma = std::pow(2.0, nu + 2) * b * 2.0 * std::pow(10.0, 1.0 - nu);
        auto spec = shift_schedule({{2.5, 0.0}, {10.0 + 0.5 * sigma, 0.0}},
                                   {{10.0, 0.0}}, 2.0, 0.5, 0.5, 2.0);
        CHECK(std::abs(spec.shift[0]) == doctest::Approx(1.5 * sigma));
    }

    SUBCASE("standing assumptions enforced") {
        CHECK_THROWS_AS(shift_schedule({{2.5, 0.0}}, {{1.5, 0.0}}, 2.0, 1.0, 1.0, 2.0),
                        InvariantViolated);
        CHECK_THROWS_AS(shift_schedule({{1.5, 0.0}}, {{10.0, 0.0}}, 2.0, 0.5, 0.5, 2.0),
                        InvariantViolated);
        // counting certificate failure
        CHECK_THROWS_AS(shift_schedule({{2.5, 0.0}, {2.6, 0.0}, {2.7, 0.0}},
                                       {{10.0, 0.0}}, 0.5, 0.5, 0.5, 2.0),
                        InvariantViolated);
    }
}
