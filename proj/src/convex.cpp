#include "wfl/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wfl {

GridFunction::GridFunction(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2)
        throw InvariantViolated("grid function needs matching x/y of size >= 2");
    if (!std::is_sorted(x_.begin(), x_.end()))
        throw InvariantViolated("grid function abscissae must be sorted");
}

double GridFunction::eval(double x) const {
    const double pad = 1e-9 * (x_.back() - x_.front() + 1.0);
    if (x < x_.front() - pad || x > x_.back() + pad)
        throw DomainTooSmall("query " + std::to_string(x) + " outside cached domain [" +
                             std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
    x = std::clamp(x, x_.front(), x_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = std::min<std::size_t>(
        x_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                           0, std::distance(x_.begin(), it) - 1)));
    const double t = (x_[i + 1] == x_[i]) ? 0.0 : (x - x_[i]) / (x_[i + 1] - x_[i]);
    return y_[i] + t * (y_[i + 1] - y_[i]);
}

double GridFunction::min_value() const {
    return *std::min_element(y_.begin(), y_.end());
}

bool GridFunction::is_convex(double tol) const {
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        const double sl = (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        const double sr = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        if (sr < sl - tol) return false;
    }
    return true;
}

GridFunction young_conjugate(const std::function<double(double)>& g,
                             const std::vector<double>& x_grid,
                             const std::vector<double>& y_grid,
                             bool allow_boundary) {
    if (x_grid.size() < 2 || y_grid.size() < 3)
        throw InvariantViolated("conjugation needs an x-grid and a y-grid of size >= 3");
    if (!std::is_sorted(y_grid.begin(), y_grid.end()))
        throw InvariantViolated("y-grid must be sorted");

    std::vector<double> gy(y_grid.size());
    for (std::size_t i = 0; i < y_grid.size(); ++i) gy[i] = g(y_grid[i]);

    std::vector<std::size_t> order(x_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x_grid[a] < x_grid[b]; });

    std::vector<double> xs(x_grid.size()), vals(x_grid.size());
    std::size_t j = 0;
    const std::size_t n = y_grid.size();
    for (std::size_t idx : order) {
        const double x = x_grid[idx];
        const auto val = [&](std::size_t i) { return x * y_grid[i] - gy[i]; };
        while (j + 1 < n && val(j + 1) >= val(j)) ++j;
        if (!allow_boundary && (j == 0 || j == n - 1))
            throw DomainTooSmall("conjugate maximizer at y-grid boundary for x=" +
                                 std::to_string(x));
        vals[idx] = val(j);
    }
    for (std::size_t i = 0; i < x_grid.size(); ++i) xs[i] = x_grid[i];
    std::vector<double> sorted_x(xs.size()), sorted_v(xs.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        sorted_x[r] = x_grid[order[r]];
        sorted_v[r] = vals[order[r]];
    }
    return GridFunction(std::move(sorted_x), std::move(sorted_v));
}

BoundReport certify_biconjugate(const std::function<double(double)>& g,
                                const std::vector<double>& grid) {
    if (grid.size() < 5) throw InvariantViolated("biconjugacy check needs >= 5 grid points");
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ys[i] = g(grid[i]);
    GridFunction sampled(std::vector<double>(grid), std::move(ys));
    if (!sampled.is_convex(1e-9))
        throw NotConvex("second differences negative on the grid");

    // Slope range attainable with interior maximizers.
    const auto& gx = sampled.xs();
    const auto& gy = sampled.ys();
    double max_slope = 0.0;
    for (std::size_t i = 1; i < gx.size(); ++i)
        max_slope = std::max(max_slope, std::abs((gy[i] - gy[i - 1]) / (gx[i] - gx[i - 1])));
    const double s_lo = (gy[1] - gy[0]) / (gx[1] - gx[0]);
    const double s_hi = (gy.back() - gy[gy.size() - 2]) / (gx.back() - gx[gx.size() - 2]);
    const auto mid_grid =
        linear_grid(s_lo, s_hi, std::max<std::size_t>(8 * grid.size(), 1u << 17));

    const auto conj = young_conjugate(g, mid_grid, grid, /*allow_boundary=*/true);
    const auto conj_fn = [&](double s) { return conj.eval(s); };
    std::vector<double> interior(grid.begin() + 2, grid.end() - 2);
    const auto back = young_conjugate(conj_fn, interior, mid_grid, /*allow_boundary=*/true);

    double worst = 0.0, at = interior.front();
    for (std::size_t i = 0; i < interior.size(); ++i) {
        const double d = std::abs(back.ys()[i] - g(interior[i]));
        if (d > worst) { worst = d; at = interior[i]; }
    }
    double spacing = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        spacing = std::max(spacing, grid[i] - grid[i - 1]);
    const double tolerance = 10.0 * spacing * std::max(max_slope, 1.0);

    BoundReport report;
    report.check_id = "biconjugacy";
    report.worst_ratio = worst;
    report.constants["tolerance"] = tolerance;
    report.constants["max_slope"] = max_slope;
    report.constants["spacing"] = spacing;
    report.witness["x"] = at;
    report.grid_spec = std::to_string(grid.size()) + " pts on [" +
                       std::to_string(grid.front()) + ", " + std::to_string(grid.back()) + "]";
    report.passed = worst <= tolerance;
    return report;
}

ConvexWeight ConvexWeight::power(double p, double extent, std::size_t points) {
    if (!(p > 1.0) || p > 2.0)
        throw InvariantViolated("power weight exponent must lie in (1, 2]");
    ConvexWeight w;
    w.name_ = "power(p=" + std::to_string(p) + ")";
    w.alpha_ = p;
    w.extent_ = extent;
    w.psi_ = [p](double y) { return std::pow(std::abs(y), p) / p; };
    if (p == 2.0) w.psi_second_ = [](double) { return 1.0; };

    // y-range covering slopes up to `extent` with margin; signed log spacing
    // keeps the conjugate accurate both near zero and at the far maximizers.
    const double y_ext = 1.5 * std::pow(extent, 1.0 / (p - 1.0)) + 1.0;
    const std::size_t half = points;
    std::vector<double> y_grid;
    y_grid.reserve(2 * half + 1);
    const auto pos = log_grid(1e-9, y_ext, half);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) y_grid.push_back(-*it);
    y_grid.push_back(0.0);
    y_grid.insert(y_grid.end(), pos.begin(), pos.end());

    w.phi_ = young_conjugate(w.psi_, linear_grid(-extent, extent, points), y_grid);
    w.certify();
    return w;
}

double ConvexWeight::psi_second(double y) const {
    if (!psi_second_)
        throw NonSmoothWeight("second derivative unavailable for " + name_);
    return psi_second_(y);
}

void ConvexWeight::certify() {
    // Superlinearity: the slope at the conjugation edge must reach the
    // largest slope queried (= extent), otherwise conjugation already threw.
    const auto sample = linear_grid(-extent_, extent_, 151);
    std::vector<double> psv(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) psv[i] = psi_(sample[i]);

    double a_psi = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const double den = std::pow(1.0 + std::abs(sample[i]) + std::abs(sample[j]),
                                        alpha_ - 1.0) *
                               std::abs(sample[j] - sample[i]);
            a_psi = std::max(a_psi, std::abs(psv[j] - psv[i]) / den);
        }
    }
    a_psi_ = 1.05 * a_psi;

    // Coercivity constants for phi(x) >= A_phi |x|^beta - B_phi.
    const double beta = alpha_ / (alpha_ - 1.0);
    double a_phi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi_.xs().size(); ++i) {
        const double ax = std::abs(phi_.xs()[i]);
        if (ax < 1.0) continue;
        a_phi = std::min(a_phi, phi_.ys()[i] / std::pow(ax, beta));
    }
    if (!(a_phi > 0.0))
        throw InvariantViolated("conjugate not coercive on the working grid");
    double b_phi = 0.0;
    for (std::size_t i = 0; i < phi_.xs().size(); ++i) {
        const double ax = std::abs(phi_.xs()[i]);
        b_phi = std::max(b_phi, a_phi * std::pow(ax, beta) - phi_.ys()[i]);
    }
    a_phi_ = a_phi;
    b_phi_ = b_phi;

    // Inversion spot check: conjugating phi back recovers psi near the origin.
    const auto probe = linear_grid(-5.0, 5.0, 41);
    const auto phi_fn = [this](double x) { return phi_.eval(x); };
    const auto back = young_conjugate(phi_fn, probe, phi_.xs());
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double want = psi_(probe[i]);
        if (std::abs(back.ys()[i] - want) > 1e-4 * (1.0 + std::abs(want)))
            throw InvariantViolated("biconjugacy spot check failed at y=" +
                                    std::to_string(probe[i]));
    }
}

ThetaFamily::ThetaFamily(std::shared_ptr<const ConvexWeight> weight)
    : weight_(std::move(weight)) {
    if (!weight_) throw InvariantViolated("null weight");
}

double ThetaFamily::log_theta(int m, double x) const {
    return weight_->phi(x) - static_cast<double>(m) * std::log1p(std::abs(x));
}

double ThetaFamily::log_theta_inf(int m) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = inf_cache_.find(m);
        if (it != inf_cache_.end()) return it->second;
    }
    double best = std::numeric_limits<double>::infinity();
    for (double x : weight_->grid()) best = std::min(best, log_theta(m, x));
    if (!std::isfinite(best))
        throw InvariantViolated("theta infimum not finite for m=" + std::to_string(m));
    std::lock_guard<std::mutex> lock(mutex_);
    inf_cache_.emplace(m, best);
    return best;
}

BoundReport certify_riesz_mass(const ConvexWeight& weight,
                               const std::vector<cplx>& z_samples,
                               const std::vector<double>& t_fractions) {
    if (!weight.smooth())
        throw NonSmoothWeight("Riesz mass certification needs psi''");
    BoundReport report;
    report.check_id = "riesz-mass";
    double c_max = 0.0, c_min = std::numeric_limits<double>::infinity();
    for (const cplx& z : z_samples) {
        if (!(std::abs(z) > 1.0))
            throw InvariantViolated("Riesz-mass samples must satisfy |z| > 1");
        for (double frac : t_fractions) {
            if (!(frac > 0.0 && frac < 1.0))
                throw InvariantViolated("t fractions must lie in (0, 1)");
            const double t = frac * std::abs(z);
            const double y0 = z.imag();
            const auto ring = [&](double rho) {
                const auto ang = [&](double th) {
                    return weight.psi_second(y0 + rho * std::sin(th));
                };
                return rho * adaptive_simpson(ang, 0.0, 2.0 * std::acos(-1.0), 1e-10);
            };
            const double mass = adaptive_simpson(ring, 0.0, t, 1e-10) /
                                (2.0 * std::acos(-1.0));
            const double c = mass / (std::pow(std::abs(z), weight.alpha() - 1.0) * t);
            if (c > c_max) {
                c_max = c;
                report.witness["z_re"] = z.real();
                report.witness["z_im"] = z.imag();
                report.witness["t"] = t;
            }
            c_min = std::min(c_min, c);
        }
    }
    report.constants["c_psi"] = c_max;
    report.constants["c_min"] = c_min;
    report.worst_ratio = c_max;
    report.grid_spec = std::to_string(z_samples.size()) + " centers x " +
                       std::to_string(t_fractions.size()) + " radii";
    report.passed = std::isfinite(c_max);
    return report;
}

BoundReport certify_log_moment_growth(double A, double B, double alpha,
                                      const std::vector<int>& m_list) {
    if (!(A > 0.0) || !(alpha > 1.0))
        throw InvariantViolated("need A > 0 and alpha > 1");
    const double beta = alpha / (alpha - 1.0);
    BoundReport report;
    report.check_id = "log-moment-growth";
    double c_needed = -std::numeric_limits<double>::infinity();
    for (int m : m_list) {
        const auto u = [&](double x) {
            return m * std::log1p(x) - A * std::pow(x, beta) + B;
        };
        double hi = 1.0;
        double arg = 0.0;
        for (;;) {
            arg = golden_max(u, 0.0, hi, 1e-12);
            if (arg < 0.95 * hi) break;
            hi *= 2.0;
            if (hi > 1e12)
                throw MaximizerUnbounded("log-moment maximizer escapes for m=" +
                                         std::to_string(m));
        }
        const double s = std::max(u(arg), u(0.0));
        report.witness["S@m=" + std::to_string(m)] = s;
        const double envelope = (1.0 - 1.0 / alpha) * m * std::log(static_cast<double>(m));
        c_needed = std::max(c_needed, (s - envelope) / m);
    }
    report.constants["C"] = c_needed;
    report.constants["A"] = A;
    report.constants["B"] = B;
    report.worst_ratio = c_needed;
    report.grid_spec = std::to_string(m_list.size()) + " orders";
    report.passed = std::isfinite(c_needed);
    return report;
}

BoundReport certify_tilt_duality(const ThetaFamily& theta, int m,
                                 const std::vector<double>& y_grid) {
    const auto& xs = theta.weight().grid();
    std::vector<double> log_th(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) log_th[i] = theta.log_theta(m, xs[i]);

    BoundReport report;
    report.check_id = "tilted-duality";
    const double am1 = theta.weight().alpha() - 1.0;
    double b = -std::numeric_limits<double>::infinity();
    for (double y : y_grid) {
        double sup = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double v = xs[i] * y - log_th[i];
            if (v > sup) { sup = v; arg = i; }
        }
        if (arg == 0 || arg + 1 == xs.size())
            throw DomainTooSmall("tilt maximizer at working-grid edge for y=" +
                                 std::to_string(y));
        const double v = sup - theta.weight().psi(y) - m * am1 * std::log1p(std::abs(y));
        if (v > b) {
            b = v;
            report.witness["y"] = y;
            report.witness["x"] = xs[arg];
        }
    }
    report.constants["b"] = b;
    report.constants["m"] = m;
    report.worst_ratio = b;
    report.grid_spec = std::to_string(y_grid.size()) + " ordinates";
    report.passed = std::isfinite(b);
    return report;
}

} // namespace wfl
