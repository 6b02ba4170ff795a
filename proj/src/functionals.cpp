#include "wfl/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace wfl {

namespace {

const cplx kI{0.0, 1.0};

double trapz_abs(const std::vector<double>& x, const std::vector<cplx>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (std::abs(y[i]) + std::abs(y[i + 1]));
    return s;
}

// Trapezoid with a coarse-grid consistency check.
cplx trapz_checked(const std::vector<double>& x, const std::vector<cplx>& y) {
    cplx full{};
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        full += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    cplx coarse{};
    for (std::size_t i = 0; i + 2 < x.size(); i += 2)
        coarse += 0.5 * (x[i + 2] - x[i]) * (y[i] + y[i + 2]);
    if (x.size() % 2 == 0 && x.size() >= 2)
        coarse += 0.5 * (x[x.size() - 1] - x[x.size() - 2]) *
                  (y[x.size() - 2] + y[x.size() - 1]);
    const double scale = std::max(1.0, std::abs(full));
    if (std::abs(full - coarse) > 1e-5 * scale)
        throw QuadratureNotConverged("density quadrature unresolved (delta " +
                                     std::to_string(std::abs(full - coarse)) + ")");
    return full;
}

// Integral of the linear interpolant of (grid, density) against exp(-i z t),
// each cell in closed form, so the accuracy is independent of |z|.
cplx filon_linear(const std::vector<double>& grid, const std::vector<cplx>& density,
                  cplx z) {
    if (grid.size() < 2) return {};
    const double h0 = grid[1] - grid[0];
    bool uniform = true;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (std::abs((grid[i + 1] - grid[i]) - h0) > 1e-9 * std::abs(h0)) {
            uniform = false;
            break;
        }
    const auto cell_weights = [&](cplx u, cplx& w0, cplx& w1) {
        // w0 = int_0^1 (1-s) e^{us} ds, w1 = int_0^1 s e^{us} ds
        if (std::abs(u) < 1e-4) {
            const cplx u2 = u * u;
            const cplx i1 = 0.5 + u / 3.0 + u2 / 8.0 + u2 * u / 30.0;
            w1 = i1;
            w0 = (1.0 + u / 2.0 + u2 / 6.0 + u2 * u / 24.0) - i1;
        } else {
            const cplx eu = std::exp(u);
            const cplx i0 = (eu - 1.0) / u;
            const cplx i1 = (eu * (u - 1.0) + 1.0) / (u * u);
            w0 = i0 - i1;
            w1 = i1;
        }
    };
    KahanSumC acc;
    if (uniform) {
        const cplx u = cplx{0.0, -1.0} * z * h0;
        cplx w0, w1;
        cell_weights(u, w0, w1);
        const cplx step = std::exp(u);
        cplx rot = std::exp(cplx{0.0, -1.0} * z * grid.front());
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            acc.add(h0 * rot * (w0 * density[i] + w1 * density[i + 1]));
            rot *= step;
        }
    } else {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double h = grid[i + 1] - grid[i];
            cplx w0, w1;
            cell_weights(cplx{0.0, -1.0} * z * h, w0, w1);
            acc.add(h * std::exp(cplx{0.0, -1.0} * z * grid[i]) *
                    (w0 * density[i] + w1 * density[i + 1]));
        }
    }
    return acc.value();
}

void validate_density(const std::vector<double>& grid, const std::vector<cplx>& density) {
    if (grid.size() != density.size())
        throw InvariantViolated("density and grid size mismatch");
    if (!grid.empty() && grid.size() < 3)
        throw InvariantViolated("density grid too small");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw InvariantViolated("density grid must be sorted");
}

} // namespace

std::shared_ptr<const WeightContext> WeightContext::standard(double gevrey_s, long k_max,
                                                             double sigma, double power_p) {
    auto weight = std::make_shared<const AssociatedWeight>(
        CarlemanSequence::gevrey(gevrey_s, k_max));
    auto convex = std::make_shared<const ConvexWeight>(ConvexWeight::power(power_p));
    return std::shared_ptr<const WeightContext>(new WeightContext{
        weight, convex, ScaledWeightFamily(weight, sigma), ThetaFamily(convex), sigma});
}

double WeightContext::growth_allowance(int m, double extra_log_coeff) const {
    const double A = m * (convex->alpha() - 1.0) + extra_log_coeff;
    const auto gap = certify_weight_gap(family, m, A, log_grid(1e-3, 1e3, 400));
    const auto tilt = certify_tilt_duality(theta, m, linear_grid(-40.0, 40.0, 201));
    return gap.constants.at("Q") + tilt.constants.at("b");
}

double MeasureTerm::total_variation() const {
    double tv = 0.0;
    for (const auto& [x, c] : points) { (void)x; tv += std::abs(c); }
    if (!grid.empty()) tv += trapz_abs(grid, density);
    return tv;
}

MeasureFunctional::MeasureFunctional(std::vector<MeasureTerm> terms,
                                     std::vector<PointTerm> point_terms,
                                     std::optional<DerivTail> tail, int m,
                                     std::shared_ptr<const WeightContext> ctx)
    : terms_(std::move(terms)), point_terms_(std::move(point_terms)),
      tail_(std::move(tail)), m_(m), ctx_(std::move(ctx)) {
    if (m_ < 1) throw InvariantViolated("functional index m must be >= 1");
    for (const auto& t : terms_) {
        if (t.k < 0) throw InvariantViolated("negative derivative order");
        validate_density(t.grid, t.density);
        if ((t.theta_scaled || t.seq_scaled) && !ctx_)
            throw InvariantViolated("scaled terms need a weight context");
        if (!std::isfinite(t.total_variation()))
            throw InvariantViolated("measure with unbounded variation");
    }
    if (tail_) {
        if (tail_->order < 1) throw InvariantViolated("tail order must be >= 1");
        validate_density(tail_->grid, tail_->density);
    }
}

int MeasureFunctional::max_order() const {
    int top = 0;
    for (const auto& t : terms_) top = std::max(top, t.k);
    if (tail_) top = std::max(top, tail_->order);
    return top;
}

double MeasureFunctional::variation_bound() const {
    double c = 0.0;
    for (const auto& t : terms_) c = std::max(c, t.total_variation());
    double pts = 0.0;
    for (const auto& p : point_terms_) pts += std::abs(p.a);
    c = std::max(c, pts);
    if (tail_) c = std::max(c, trapz_abs(tail_->grid, tail_->density));
    return c;
}

cplx MeasureFunctional::apply(const SampledFunction& f) const {
    if (f.max_order() < max_order())
        throw InsufficientDerivatives("functional needs order " +
                                      std::to_string(max_order()));
    KahanSumC acc;
    for (const auto& t : terms_) {
        const auto weight_at = [&](double x) {
            return t.theta_scaled ? std::exp(-ctx_->theta.log_theta(m_, x)) : 1.0;
        };
        cplx term{};
        for (const auto& [x, c] : t.points) term += c * f.eval(t.k, x) * weight_at(x);
        if (!t.grid.empty()) {
            std::vector<cplx> integrand(t.grid.size());
            for (std::size_t i = 0; i < t.grid.size(); ++i)
                integrand[i] = t.density[i] * f.eval(t.k, t.grid[i]) * weight_at(t.grid[i]);
            term += trapz_checked(t.grid, integrand);
        }
        if (t.seq_scaled) {
            const auto& seq = ctx_->family.base().sequence();
            term *= std::exp(-t.k * std::log(ctx_->family.scale(m_)) - seq.log_m(t.k));
        }
        acc.add(term);
    }
    for (const auto& p : point_terms_) acc.add(p.a * f.eval(0, p.lambda));
    if (tail_) {
        std::vector<cplx> integrand(tail_->grid.size());
        for (std::size_t i = 0; i < tail_->grid.size(); ++i)
            integrand[i] = tail_->density[i] * f.eval(tail_->order, tail_->grid[i]);
        acc.add(trapz_checked(tail_->grid, integrand));
    }
    return acc.value();
}

namespace {

// Transform of one measure term with the z^k factor removed:
//   (-i)^k * prefactor_k * [ sum_j c_j e^{-i z x_j} / theta? + int rho e^{-izx} / theta? ].
cplx term_transform_reduced(const MeasureTerm& t, int m, const WeightContext* ctx,
                            cplx z) {
    cplx mi_k{1.0, 0.0};
    for (int j = 0; j < t.k; ++j) mi_k *= cplx{0.0, -1.0};
    const auto weight_at = [&](double x) {
        return t.theta_scaled ? std::exp(-ctx->theta.log_theta(m, x)) : 1.0;
    };
    cplx sum{};
    for (const auto& [x, c] : t.points)
        sum += c * std::exp(cplx{0.0, -1.0} * z * x) * weight_at(x);
    if (!t.grid.empty()) {
        std::vector<cplx> eff(t.density);
        if (t.theta_scaled)
            for (std::size_t i = 0; i < eff.size(); ++i) eff[i] *= weight_at(t.grid[i]);
        sum += filon_linear(t.grid, eff, z);
    }
    if (t.seq_scaled) {
        const auto& seq = ctx->family.base().sequence();
        sum *= std::exp(-t.k * std::log(ctx->family.scale(m)) - seq.log_m(t.k));
    }
    return mi_k * sum;
}

cplx tail_transform_reduced(const DerivTail& tail, cplx z) {
    cplx mi_k{1.0, 0.0};
    for (int j = 0; j < tail.order; ++j) mi_k *= cplx{0.0, -1.0};
    return mi_k * filon_linear(tail.grid, tail.density, z);
}

} // namespace

cplx MeasureFunctional::fourier_laplace(cplx z) const {
    KahanSumC acc;
    for (const auto& t : terms_) {
        cplx zk{1.0, 0.0};
        for (int j = 0; j < t.k; ++j) zk *= z;
        acc.add(term_transform_reduced(t, m_, ctx_.get(), z) * zk);
    }
    for (const auto& p : point_terms_)
        acc.add(p.a * std::exp(cplx{0.0, -1.0} * z * p.lambda));
    if (tail_) {
        cplx zk{1.0, 0.0};
        for (int j = 0; j < tail_->order; ++j) zk *= z;
        acc.add(tail_transform_reduced(*tail_, z) * zk);
    }
    return acc.value();
}

TransformResult transform_expansion(const MeasureFunctional& T) {
    const int orders = T.max_order() + 1;
    TransformResult result;
    result.order_count = orders;
    // V_k(z): the k-th contribution with the z^k factor removed; point terms
    // ride along at order zero.
    for (int k = 0; k < orders; ++k) {
        // copy the slices needed by the closure
        std::vector<MeasureTerm> slice;
        for (const auto& t : T.terms())
            if (t.k == k) slice.push_back(t);
        std::vector<PointTerm> pts;
        if (k == 0) pts = T.point_terms();
        std::optional<DerivTail> tail;
        if (T.tail() && T.tail()->order == k) tail = T.tail();
        const int m = T.m();
        auto ctx = T.context();
        auto vk = [slice = std::move(slice), pts = std::move(pts), tail = std::move(tail),
                   m, ctx](cplx z) {
            KahanSumC acc;
            for (const auto& t : slice)
                acc.add(term_transform_reduced(t, m, ctx.get(), z));
            for (const auto& p : pts)
                acc.add(p.a * std::exp(cplx{0.0, -1.0} * z * p.lambda));
            if (tail) acc.add(tail_transform_reduced(*tail, z));
            return acc.value();
        };
        result.contributions.push_back(
            EntireFunctionModel::closure(vk, "V_" + std::to_string(k)));
    }
    auto copy = T;
    result.that = EntireFunctionModel::closure(
        [copy = std::move(copy)](cplx z) { return copy.fourier_laplace(z); },
        "transform");
    return result;
}

BoundReport certify_transform_growth(const MeasureFunctional& T, cplx lo, cplx hi,
                                     std::size_t resolution) {
    if (!T.context())
        throw InvariantViolated("growth certification needs a weight context");
    const auto& ctx = *T.context();
    const double c = T.variation_bound();
    const int m = T.m();
    // allowance covers both the tilted sup and the per-order sum (the extra
    // ln(1+r) coefficient plus the counting-function prefactor)
    const double q = ctx.growth_allowance(m, 1.0) +
                     std::log(2.0 + ctx.weight->a_w() * std::exp(1.0));

    BoundReport report;
    report.check_id = "transform-growth";
    report.constants["c"] = c;
    report.constants["q"] = q;
    report.constants["m"] = m;
    const auto res = linear_grid(lo.real(), hi.real(), resolution);
    const auto ims = linear_grid(lo.imag(), hi.imag(), resolution);
    double worst = 0.0;
    for (double x : res) {
        for (double y : ims) {
            const cplx z{x, y};
            const double lhs = std::abs(T.fourier_laplace(z));
            if (c == 0.0) {
                if (lhs > 1e-12)
                    throw GrowthViolated("null variation but nonzero transform at z=(" +
                                         std::to_string(x) + "," + std::to_string(y) + ")");
                continue;
            }
            const double rhs_log = std::log(c) + ctx.convex->psi(y) +
                                   ctx.family.w_m(m + 1, std::abs(z)) + q;
            const double ratio = lhs > 0.0 ? std::exp(std::log(lhs) - rhs_log) : 0.0;
            if (ratio > worst) {
                worst = ratio;
                report.witness["z_re"] = x;
                report.witness["z_im"] = y;
            }
            if (ratio > 1.0 + 1e-9)
                throw GrowthViolated("transform exceeds its growth envelope at z=(" +
                                     std::to_string(x) + "," + std::to_string(y) +
                                     "), ratio " + std::to_string(ratio));
        }
    }
    report.worst_ratio = worst;
    report.grid_spec = std::to_string(resolution) + "x" + std::to_string(resolution);
    report.passed = true;
    return report;
}

namespace {

// Truncated sampling-series recovery of the band-limited density of U:
//   p(t) = (step/2pi) * sum_{|k| <= K} U(k step) exp(i k step t),
// step = pi / (2 support_radius), doubling K until the grid values settle.
std::vector<cplx> recover_density(const EntireFunctionModel& U,
                                  const std::vector<double>& t_grid,
                                  double support_radius, double tol) {
    const double step = std::acos(-1.0) / (2.0 * support_radius);
    const double norm = step / (2.0 * std::acos(-1.0));
    std::vector<cplx> p(t_grid.size(), cplx{});
    // running phase rotators exp(i k step t) per grid point
    std::vector<cplx> rot_pos(t_grid.size()), rot_neg(t_grid.size()), unit(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        unit[i] = std::polar(1.0, step * t_grid[i]);
        rot_pos[i] = {1.0, 0.0};
        rot_neg[i] = {1.0, 0.0};
    }
    const cplx u0 = U.eval({0.0, 0.0});
    for (std::size_t i = 0; i < t_grid.size(); ++i) p[i] = norm * u0;

    // Convergence is judged on smoothed observables (the transform of the
    // partial density at fixed probes), not on the density sup norm: the
    // residual is high-frequency and integrates away.
    const std::vector<cplx> settle_probes{{0.0, 0.0}, {1.3, 0.0}, {2.7, 0.0}, {0.5, 0.4}};
    long k = 0;
    long next_check = 512;
    std::vector<cplx> snapshot;
    const long cap = 1L << 15;
    while (true) {
        ++k;
        const cplx up = U.eval({k * step, 0.0});
        const cplx um = U.eval({-k * step, 0.0});
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            rot_pos[i] *= unit[i];
            rot_neg[i] *= std::conj(unit[i]);
            p[i] += norm * (up * rot_pos[i] + um * rot_neg[i]);
        }
        if (k == next_check) {
            std::vector<cplx> observed(settle_probes.size());
            double scale = 0.0;
            for (std::size_t j = 0; j < settle_probes.size(); ++j) {
                observed[j] = filon_linear(t_grid, p, settle_probes[j]);
                scale = std::max(scale, std::abs(observed[j]));
            }
            if (!snapshot.empty()) {
                double diff = 0.0;
                for (std::size_t j = 0; j < observed.size(); ++j)
                    diff = std::max(diff, std::abs(observed[j] - snapshot[j]));
                if (diff <= tol * std::max(scale, 1e-30)) return p;
            }
            snapshot = observed;
            next_check *= 2;
            if (next_check > cap)
                throw DensityRecoveryFailed(
                    "sampling series for the density did not settle by K=" +
                    std::to_string(cap));
        }
    }
}

std::vector<cplx> solve_complex(std::vector<std::vector<cplx>> A, std::vector<cplx> b) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-12)
            throw SingularNodeSystem("node matrix is numerically singular");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cplx f = A[r][col] / A[col][col];
            for (std::size_t cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t r = n; r-- > 0;) {
        cplx s = b[r];
        for (std::size_t cc = r + 1; cc < n; ++cc) s -= A[r][cc] * x[cc];
        x[r] = s / A[r][r];
    }
    return x;
}

} // namespace

MeasureFunctional synthesize_factorized(const EntireFunctionModel& U,
                                        const EntireFunctionModel& V, int m, double C_U,
                                        double C_V, double support_radius,
                                        std::shared_ptr<const WeightContext> ctx) {
    if (!ctx) throw InvariantViolated("factorized synthesis needs a weight context");
    if (!(support_radius > 0.0)) throw InvariantViolated("support radius must be positive");

    // premise certificates on a probe set
    double u_peak = 0.0;
    for (double x : linear_grid(-30.0, 30.0, 61)) {
        for (double y : linear_grid(-6.0, 6.0, 13)) {
            const cplx z{x, y};
            const double lhs_u = std::abs(U.eval(z)) * (1.0 + std::norm(z));
            if (lhs_u > C_U * std::exp(ctx->convex->psi(y)) * (1.0 + 1e-9))
                throw FactorizationBoundViolated("U exceeds its certified bound at z=(" +
                                                 std::to_string(x) + "," +
                                                 std::to_string(y) + ")");
            const double lhs_v = std::abs(V.eval(z));
            if (lhs_v > C_V * std::exp(ctx->family.w_m(m, std::abs(z))) * (1.0 + 1e-9))
                throw FactorizationBoundViolated("V exceeds its certified bound at z=(" +
                                                 std::to_string(x) + "," +
                                                 std::to_string(y) + ")");
            u_peak = std::max(u_peak, std::abs(U.eval(z)));
        }
    }

    const double sigma = ctx->sigma;
    const double eps_m = ctx->family.epsilon(m);
    const double eps_m1 = ctx->family.epsilon(m + 1);
    const double beta_m = (sigma + eps_m) / (eps_m - eps_m1);

    MeasureFunctional zero({}, {}, std::nullopt, m, ctx);
    if (u_peak < 1e-14) {
        zero.norm_certificate = 0.0;
        zero.note = "null factor";
        return zero;
    }

    const auto t_grid = linear_grid(-support_radius, support_radius, 16001);
    auto p = recover_density(U, t_grid, support_radius, 1e-7);

    // Lemma-style admissibility: sup |p(t)| exp(phi(t)) below C_U / 2.
    double cond = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        cond = std::max(cond, std::abs(p[i]) * std::exp(ctx->convex->phi(t_grid[i])));
    if (!(cond < C_U / 2.0))
        throw DensityRecoveryFailed("recovered density violates sup |p| e^phi < C_U/2 (" +
                                    std::to_string(cond) + " vs " +
                                    std::to_string(C_U / 2.0) + ")");

    // Taylor coefficients of V with the Cauchy bound enforced.
    const auto& seq = ctx->family.base().sequence();
    const double log_scale = std::log(sigma + eps_m);
    const int count = 40;
    auto v = V.taylor(count, 4.0, 2048);
    std::vector<MeasureTerm> terms;
    double vmax = 0.0;
    for (const auto& c : v) vmax = std::max(vmax, std::abs(c));
    for (int k = 0; k < count; ++k) {
        const double cauchy = C_V * std::exp(-k * log_scale - seq.log_m(k));
        if (std::abs(v[k]) > cauchy * (1.0 + 1e-6) + 1e-13)
            throw FactorizationBoundViolated(
                "Taylor coefficient " + std::to_string(k) +
                " breaks the Cauchy bound: |v_k|=" + std::to_string(std::abs(v[k])) +
                " > " + std::to_string(cauchy));
        if (std::abs(v[k]) < 1e-14 * std::max(vmax, 1.0)) continue;
        cplx ik{1.0, 0.0};
        for (int j = 0; j < k; ++j) ik *= kI;
        MeasureTerm term;
        term.k = k;
        term.grid = t_grid;
        term.density.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) term.density[i] = v[k] * ik * p[i];
        terms.push_back(std::move(term));
    }

    MeasureFunctional T(std::move(terms), {}, std::nullopt, m, ctx);
    T.norm_certificate = beta_m * C_U * C_V;
    T.note = "factorized synthesis";
    return T;
}

MeasureFunctional synthesize_polygrowth(const EntireFunctionModel& U, double C, int N,
                                        const std::vector<double>& lambda_nodes,
                                        std::shared_ptr<const WeightContext> ctx) {
    if (!ctx) throw InvariantViolated("synthesis needs a weight context");
    if (static_cast<int>(lambda_nodes.size()) != N + 2)
        throw SingularNodeSystem("need exactly N+2 nodes");
    for (std::size_t i = 0; i < lambda_nodes.size(); ++i) {
        if (lambda_nodes[i] == 0.0) throw SingularNodeSystem("zero node");
        for (std::size_t j = i + 1; j < lambda_nodes.size(); ++j)
            if (lambda_nodes[i] == lambda_nodes[j])
                throw SingularNodeSystem("repeated node");
    }
    for (double x : linear_grid(-20.0, 20.0, 41)) {
        for (double y : linear_grid(-5.0, 5.0, 11)) {
            const cplx z{x, y};
            if (std::abs(U.eval(z)) >
                C * std::pow(1.0 + std::abs(z), N) * std::exp(ctx->convex->psi(y)) *
                    (1.0 + 1e-9))
                throw GrowthViolated("U exceeds C (1+|z|)^N e^psi at z=(" +
                                     std::to_string(x) + "," + std::to_string(y) + ")");
        }
    }

    const int n_sys = N + 2;
    std::vector<std::vector<cplx>> A(n_sys, std::vector<cplx>(n_sys));
    std::vector<cplx> rhs(n_sys);
    for (int n = 0; n < n_sys; ++n) {
        for (int k = 0; k < n_sys; ++k) {
            cplx v{1.0, 0.0};
            for (int j = 0; j < n; ++j) v *= cplx{0.0, -lambda_nodes[k]};
            A[n][k] = v;
        }
        rhs[n] = U.derivative({0.0, 0.0}, n, 1.0);
    }
    const auto a = solve_complex(A, rhs);

    std::vector<PointTerm> points;
    for (int k = 0; k < n_sys; ++k) points.push_back({a[k], lambda_nodes[k]});

    // g = U - sum a_k exp(-i lambda_k z); with U an exponential sum the
    // density of g / (-iz)^{N+2} is an explicit piecewise polynomial
    // (iterated antiderivative of the node measure).
    std::optional<DerivTail> tail;
    if (const auto* terms = U.exp_terms()) {
        std::vector<std::pair<double, cplx>> nodes; // (mu_j, b_j)
        const auto add_node = [&](double mu, cplx b) {
            for (auto& [m0, b0] : nodes)
                if (std::abs(m0 - mu) < 1e-12) { b0 += b; return; }
            nodes.push_back({mu, b});
        };
        for (const auto& t : *terms) add_node(t.lambda, t.a);
        for (int k = 0; k < n_sys; ++k) add_node(lambda_nodes[k], -a[k]);

        double bmax = 0.0, mu_lo = 0.0, mu_hi = 0.0;
        for (const auto& [mu, b] : nodes) {
            bmax = std::max(bmax, std::abs(b));
            mu_lo = std::min(mu_lo, mu);
            mu_hi = std::max(mu_hi, mu);
        }
        if (bmax > 1e-12) {
            const int M = N + 1;
            double mfact = 1.0;
            for (int j = 2; j <= M; ++j) mfact *= j;
            const double sign = (n_sys % 2 == 0) ? 1.0 : -1.0; // (-1)^{N+2}
            const auto grid = linear_grid(mu_lo, mu_hi, 8001);
            std::vector<cplx> p(grid.size(), cplx{});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                for (const auto& [mu, b] : nodes) {
                    const double d = grid[i] - mu;
                    const double sg = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
                    p[i] += sign * b * 0.5 * sg * std::pow(d, M) / mfact;
                }
            }
            tail = DerivTail{n_sys, grid, std::move(p)};
        }
    } else {
        // generic representation: recover the density of g/(-iz)^{N+2} by the
        // sampling series
        double reach = 1.0;
        for (double l : lambda_nodes) reach = std::max(reach, std::abs(l));
        const double tau = reach + 1.0;
        auto a_copy = a;
        auto nodes_copy = lambda_nodes;
        std::vector<cplx> g_taylor;
        {
            auto g_fn = [&](cplx z) {
                cplx g = U.eval(z);
                for (int k = 0; k < n_sys; ++k)
                    g -= a_copy[k] * std::exp(cplx{0.0, -nodes_copy[k]} * z);
                return g;
            };
            auto g_model = EntireFunctionModel::closure(g_fn);
            g_taylor = g_model.taylor(n_sys + 24, 2.0);
            auto h_fn = [g_fn, g_taylor, n_sys](cplx z) {
                cplx denom{1.0, 0.0};
                for (int j = 0; j < n_sys; ++j) denom *= cplx{0.0, -1.0} * z;
                if (std::abs(z) > 0.5) return g_fn(z) / denom;
                cplx acc{};
                cplx zp{1.0, 0.0};
                for (std::size_t j = n_sys; j < g_taylor.size(); ++j) {
                    acc += g_taylor[j] * zp;
                    zp *= z;
                }
                cplx mi{1.0, 0.0};
                for (int j = 0; j < n_sys; ++j) mi *= cplx{0.0, -1.0};
                return acc / mi;
            };
            auto h_model = EntireFunctionModel::closure(h_fn);
            const auto grid = linear_grid(-tau, tau, 4001);
            auto p = recover_density(h_model, grid, tau, 1e-8);
            double pmax = 0.0;
            for (const auto& v : p) pmax = std::max(pmax, std::abs(v));
            if (pmax > 1e-12) tail = DerivTail{n_sys, grid, std::move(p)};
        }
    }

    MeasureFunctional T({}, std::move(points), std::move(tail), 2, ctx);
    double cert = 0.0;
    for (const auto& pt : T.point_terms()) cert += std::abs(pt.a);
    if (T.tail()) cert += trapz_abs(T.tail()->grid, T.tail()->density);
    T.norm_certificate = cert;
    T.note = "polynomial-growth synthesis (C=" + format_double(C) + ")";
    return T;
}

BoundReport uniqueness_probe(const MeasureFunctional& T, const std::vector<cplx>& z_grid,
                             const std::vector<int>& monomial_orders) {
    BoundReport report;
    report.check_id = "uniqueness-probe";
    double that_max = 0.0;
    for (const auto& z : z_grid)
        that_max = std::max(that_max, std::abs(T.fourier_laplace(z)));
    report.constants["transform_max"] = that_max;
    double moment_max = 0.0;
    for (int nu : monomial_orders) {
        const double v = std::abs(T.apply(SampledFunction::monomial(nu)));
        report.witness["moment@" + std::to_string(nu)] = v;
        moment_max = std::max(moment_max, v);
    }
    report.constants["moment_max"] = moment_max;
    report.worst_ratio = moment_max;
    report.grid_spec = std::to_string(z_grid.size()) + " transform probes";
    report.passed = true;
    return report;
}

} // namespace wfl
