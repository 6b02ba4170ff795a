#include "wfl/lagrange.hpp"

#include <algorithm>
#include <cmath>

namespace wfl {

double DiskLaw::radius(cplx a) const {
    return b * std::pow(std::max(1.0, std::abs(a)), -nu);
}

LagrangeGenerator::LagrangeGenerator(EntireFunctionModel model, std::vector<cplx> zeros,
                                     std::vector<cplx> derivs, DiskLaw law, double C_N,
                                     std::shared_ptr<const WeightContext> ctx, int m)
    : model_(std::move(model)), zeros_(std::move(zeros)), derivs_(std::move(derivs)),
      law_(law), c_n_(C_N), ctx_(std::move(ctx)), m_(m) {
    if (zeros_.size() != derivs_.size())
        throw InvariantViolated("zeros/derivatives size mismatch");
    if (!ctx_) throw InvariantViolated("generator needs a weight context");
    for (std::size_t n = 0; n < zeros_.size(); ++n)
        if (!(std::abs(derivs_[n]) > 0.0))
            throw InvariantViolated("zero " + std::to_string(n) + " is not simple");
    for (std::size_t i = 0; i < zeros_.size(); ++i)
        for (std::size_t j = i + 1; j < zeros_.size(); ++j)
            if (std::abs(zeros_[i] - zeros_[j]) <=
                law_.radius(zeros_[i]) + law_.radius(zeros_[j]))
                throw InvariantViolated("exceptional disks overlap at zeros " +
                                        std::to_string(i) + ", " + std::to_string(j));
    if (!(c_n_ > 0.0)) throw InvariantViolated("lower-bound constant must be positive");
}

std::size_t LagrangeGenerator::nearest_zero(cplx z) const {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < zeros_.size(); ++n) {
        const double d = std::abs(z - zeros_[n]);
        if (d < bd) {
            bd = d;
            best = n;
        }
    }
    return best;
}

bool LagrangeGenerator::at_zero(cplx z, std::size_t& index, double tol) const {
    if (zeros_.empty()) return false;
    index = nearest_zero(z);
    return std::abs(z - zeros_[index]) <= tol * (1.0 + std::abs(z));
}

LagrangeGenerator build_cardinal_generator(double scale, int n_range,
                                           std::shared_ptr<const WeightContext> ctx,
                                           int m) {
    if (!(scale > 0.0)) throw InvariantViolated("scale must be positive");
    if (!ctx) throw InvariantViolated("generator needs a weight context");
    const double pi = std::acos(-1.0);
    auto model = EntireFunctionModel::closure(
        [scale, pi](cplx z) { return std::sin(scale * pi * z); }, "cardinal");

    std::vector<cplx> zeros, derivs;
    zeros.push_back({0.0, 0.0});
    derivs.push_back({scale * pi, 0.0});
    for (int n = 1; n <= n_range; ++n) {
        const double d = scale * pi * ((n % 2 == 0) ? 1.0 : -1.0);
        zeros.push_back({n / scale, 0.0});
        derivs.push_back({d, 0.0});
        zeros.push_back({-n / scale, 0.0});
        derivs.push_back({d, 0.0});
    }
    const DiskLaw law{1.0 / (4.0 * scale), 0.0};

    // off-disk grid minimum of |N| against the growth envelope
    double c_n = std::numeric_limits<double>::infinity();
    for (double x : linear_grid(-5.0, 5.0, 201)) {
        for (double y : linear_grid(-5.0, 5.0, 81)) {
            const cplx z{x, y};
            const long n0 = std::lround(x * scale);
            bool inside = false;
            for (long n : {n0 - 1, n0, n0 + 1})
                if (std::abs(z - cplx{n / scale, 0.0}) <= law.b) inside = true;
            if (inside) continue;
            const double val = std::abs(model.eval(z)) *
                               std::exp(-ctx->convex->psi(y) -
                                        ctx->family.w_m(m + 1, std::abs(z)));
            c_n = std::min(c_n, val);
        }
    }
    return LagrangeGenerator(std::move(model), std::move(zeros), std::move(derivs), law,
                             c_n, std::move(ctx), m);
}

cplx reconstruct(const std::vector<cplx>& samples, const LagrangeGenerator& gen, cplx z,
                 const DecayCert& cert, double tail_tol) {
    const auto& zeros = gen.zeros();
    const auto& derivs = gen.derivs();
    if (samples.size() != zeros.size())
        throw InvariantViolated("sample vector does not match the zero set");

    const double p = cert.alpha + cert.nu + 1.0;
    for (std::size_t n = 0; n < zeros.size(); ++n) {
        const double lhs = std::abs(samples[n] / derivs[n]);
        const double rhs = cert.A13 * std::pow(1.0 + std::abs(zeros[n]), -p);
        if (lhs > rhs * (1.0 + 1e-9))
            throw DecayCertificateViolated("sample " + std::to_string(n) +
                                           " breaks the decay certificate: " +
                                           format_double(lhs) + " > " +
                                           format_double(rhs));
    }

    std::size_t hit = 0;
    if (gen.at_zero(z, hit)) return samples[hit];

    const cplx Nz = gen.eval(z);
    KahanSumC acc;
    for (std::size_t n = 0; n < zeros.size(); ++n)
        acc.add(samples[n] / derivs[n] * Nz / (z - zeros[n]));

    // beyond-range tail majorant from the certified decay, assuming the zero
    // moduli keep their trailing spacing
    if (!zeros.empty()) {
        double R = 0.0, R2 = 0.0;
        for (const auto& a : zeros) {
            const double r = std::abs(a);
            if (r > R) {
                R2 = R;
                R = r;
            } else if (r > R2 && r < R) {
                R2 = r;
            }
        }
        const double spacing = std::max(R - R2, 1e-12);
        if (R <= std::abs(z) + 1.0)
            throw TailNotConverged("stored zero range does not reach past |z|");
        const double majorant = std::abs(Nz) * cert.A13 * 2.0 / spacing *
                                std::pow(1.0 + R, 1.0 - p) / (p - 1.0) /
                                (R - std::abs(z));
        if (majorant > tail_tol)
            throw TailNotConverged("tail majorant " + format_double(majorant) +
                                   " above tolerance " + format_double(tail_tol));
    }
    return acc.value();
}

BoundReport certify_series_bound(const EntireFunctionModel& F,
                                 const LagrangeGenerator& gen,
                                 const std::vector<cplx>& probes, double alpha,
                                 double A11) {
    const auto& zeros = gen.zeros();
    const auto& derivs = gen.derivs();
    const auto& ctx = *gen.context();
    const double nu = gen.disk_law().nu;
    const int m = gen.m();

    const auto term_ratio = [&](std::size_t n, cplx z) {
        const double dist = std::abs(z - zeros[n]);
        const double term = dist <= 1e-9 * (1.0 + std::abs(z))
                                ? std::abs(derivs[n])
                                : std::abs(gen.eval(z)) / dist;
        const double env = std::pow(std::max(1.0, std::abs(zeros[n])), nu) *
                           std::exp(ctx.convex->psi(z.imag()) +
                                    ctx.family.w_m(m + 4, std::abs(z)));
        return term / env;
    };

    BoundReport report;
    report.check_id = "series-term-bound";
    bool measured = false;
    if (A11 <= 0.0) {
        measured = true;
        for (std::size_t n = 0; n < zeros.size(); n += 10)
            for (const auto& z : probes) A11 = std::max(A11, term_ratio(n, z));
    }
    const double margin = measured ? 2.0 : 1.0 + 1e-9;
    double worst = 0.0;
    for (std::size_t n = 0; n < zeros.size(); ++n) {
        for (const auto& z : probes) {
            const double r = term_ratio(n, z) / (A11 * margin);
            if (r > worst) {
                worst = r;
                report.witness["n"] = static_cast<double>(n);
                report.witness["z_re"] = z.real();
                report.witness["z_im"] = z.imag();
            }
            if (r > 1.0)
                throw TermBoundViolated(
                    "term bound fails at n=" + std::to_string(n) + ", z=(" +
                    format_double(z.real()) + "," + format_double(z.imag()) + ")");
        }
    }

    // summability proxy over the stored (modulus-ordered) zeros
    KahanSum series;
    std::vector<double> partial;
    for (const auto& a : zeros) {
        series.add(std::pow(1.0 + std::abs(a), -(alpha + 1.0)));
        partial.push_back(series.value());
    }
    const double total = series.value();
    const double tail = partial.empty()
                            ? 0.0
                            : total - partial[partial.size() - partial.size() / 4 - 1];

    double a13 = 0.0;
    for (std::size_t n = 0; n < zeros.size(); ++n)
        a13 = std::max(a13, std::abs(F.eval(zeros[n]) / derivs[n]) *
                                std::pow(1.0 + std::abs(zeros[n]), alpha + nu + 1.0));

    report.passed = true;
    report.worst_ratio = worst;
    report.constants["A11"] = A11;
    report.constants["summability"] = total;
    report.constants["cauchy_tail"] = tail;
    report.constants["sample_decay_A13"] = a13;
    report.grid_spec = std::to_string(zeros.size()) + " zeros x " +
                       std::to_string(probes.size()) + " probes";
    return report;
}

double ZeroShiftSpec::shift_mass() const {
    KahanSum s;
    for (std::size_t j = 0; j < lambda.size(); ++j)
        s.add(mult[j] * std::abs(shift[j]) / radius[j]);
    return s.value();
}

void ZeroShiftSpec::validate() const {
    if (lambda.size() != mult.size() || lambda.size() != shift.size() ||
        lambda.size() != radius.size())
        throw InvariantViolated("shift spec field sizes differ");
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        if (mult[j] < 1) throw InvariantViolated("multiplicity must be >= 1");
        if (!(radius[j] > 0.0)) throw InvariantViolated("disk radius must be positive");
        if (std::abs(shift[j]) > radius[j])
            throw ShiftLeavesDisk("shift " + std::to_string(j) +
                                  " leaves its disk: |t| = " +
                                  format_double(std::abs(shift[j])) + " > r = " +
                                  format_double(radius[j]));
        if (!(std::abs(lambda[j] + shift[j]) > 0.0))
            throw InvariantViolated("shifted zero lands at the origin");
        for (std::size_t i = 0; i < j; ++i)
            if (std::abs(lambda[i] - lambda[j]) <= radius[i] + radius[j])
                throw InvariantViolated("shift disks overlap at zeros " +
                                        std::to_string(i) + ", " + std::to_string(j));
    }
}

std::pair<EntireFunctionModel, BoundReport> zero_shift(const ZeroShiftSpec& spec,
                                                       const EntireFunctionModel& base,
                                                       const std::vector<cplx>& probes) {
    spec.validate();
    if (!base.zeros())
        throw InvariantViolated("zero shift needs a finite zero-product base");
    for (const auto& p : probes)
        for (std::size_t j = 0; j < spec.lambda.size(); ++j)
            if (std::abs(p - spec.lambda[j]) < spec.radius[j])
                throw ProbeInsideDisk("probe (" + format_double(p.real()) + "," +
                                      format_double(p.imag()) + ") inside disk " +
                                      std::to_string(j));

    const cplx prefactor = base.eval({0.0, 0.0});
    std::vector<std::pair<cplx, int>> shifted;
    for (std::size_t j = 0; j < spec.lambda.size(); ++j)
        shifted.push_back({spec.lambda[j] + spec.shift[j], spec.mult[j]});
    auto ft = EntireFunctionModel::zero_product(prefactor, std::move(shifted));

    const auto c_on = [&](std::size_t stride) {
        double c = 0.0;
        for (std::size_t i = 0; i < probes.size(); i += stride) {
            const double lf = std::log(std::abs(base.eval(probes[i])));
            const double lt = std::log(std::abs(ft.eval(probes[i])));
            c = std::max(c, std::abs(lt - lf));
        }
        return c;
    };
    const double c_star = c_on(1);
    const double c_coarse = c_on(2);

    BoundReport report;
    report.check_id = "zero-shift-bound";
    report.passed = std::isfinite(c_star);
    report.worst_ratio = c_star;
    report.constants["C_star"] = c_star;
    report.constants["shift_mass"] = spec.shift_mass();
    report.constants["refinement_drift"] =
        std::abs(c_star - c_coarse) / std::max(c_star, 1e-300);
    report.grid_spec = std::to_string(probes.size()) + " probes";
    return {std::move(ft), std::move(report)};
}

ZeroShiftSpec shift_schedule(const std::vector<cplx>& mu_zeros,
                             const std::vector<cplx>& lambda_zeros, double A_mu,
                             double d1, double d2, double alpha) {
    const double lambda_floor = std::max(2.0 * (d1 + d2), 1.0);
    const double mu_floor = std::max(1.0, 4.0 * d2);
    for (const auto& l : lambda_zeros)
        if (!(std::abs(l) > lambda_floor))
            throw InvariantViolated("lambda zero below the standing floor " +
                                    format_double(lambda_floor));
    for (const auto& u : mu_zeros)
        if (!(std::abs(u) > mu_floor))
            throw InvariantViolated("mu zero below the standing floor " +
                                    format_double(mu_floor));

    // counting certificate n_mu(r) < A_mu r on the stored moduli
    std::vector<double> mu_r;
    for (const auto& u : mu_zeros) mu_r.push_back(std::abs(u));
    std::sort(mu_r.begin(), mu_r.end());
    for (std::size_t k = 0; k < mu_r.size(); ++k)
        if (!(static_cast<double>(k + 1) < A_mu * mu_r[k]))
            throw InvariantViolated("mu counting certificate fails at r = " +
                                    format_double(mu_r[k]));

    const int nu = static_cast<int>(std::floor(2.0 * alpha + 1.0)) + 1;
    const double b =
        0.9 * std::min(d2, d1 * std::pow(2.0, -(nu + 6)) / (A_mu * A_mu));

    ZeroShiftSpec spec;
    for (const auto& l : lambda_zeros) {
        const double r = std::abs(l);
        const double sigma = std::pow(2.0, nu + 2) * b * A_mu * std::pow(r, 1.0 - nu);
        long k0 = 0;
        while (true) {
            const double lo = r + k0 * sigma;
            const double hi = lo + sigma;
            bool blocked = false;
            for (double u : mu_r) {
                const double rad = b * std::pow(u, -static_cast<double>(nu));
                if (u + rad > lo && u - rad < hi) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked) break;
            long n_reach = 0;
            for (double u : mu_r)
                if (u <= hi) ++n_reach;
            if (k0 + 1 > 4 * n_reach + 8)
                throw NoAvoidingInterval("no shadow-free interval past |lambda| = " +
                                         format_double(r));
            ++k0;
        }
        const double t_mod = (k0 + 0.5) * sigma;
        const cplx dir = l / std::abs(l);
        spec.lambda.push_back(l);
        spec.mult.push_back(1);
        spec.shift.push_back(t_mod * dir);
        spec.radius.push_back(d1);
    }
    spec.validate();
    return spec;
}

} // namespace wfl
