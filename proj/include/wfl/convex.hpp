#ifndef WFL_CONVEX_HPP
#define WFL_CONVEX_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wfl/numeric.hpp"
#include "wfl/report.hpp"

namespace wfl {

// Piecewise-linear function sampled on a sorted grid.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(std::vector<double> x, std::vector<double> y);

    double eval(double x) const; // linear interpolation; DomainTooSmall outside
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }
    double min_value() const;
    bool is_convex(double tol = 1e-9) const; // second differences >= -tol

private:
    std::vector<double> x_, y_;
};

// Young (Legendre-Fenchel) conjugate g*(x) = sup_y (x y - g(y)) over the
// y-grid, evaluated at every x-grid point by the monotone-maximizer sweep
// (the maximizer is nondecreasing in x for convex g, so total cost is linear).
// Throws DomainTooSmall if the maximizer hits the y-grid boundary, unless
// allow_boundary is set (used internally where edge clamping is intended).
GridFunction young_conjugate(const std::function<double(double)>& g,
                             const std::vector<double>& x_grid,
                             const std::vector<double>& y_grid,
                             bool allow_boundary = false);

// Checks convexity of g on the grid (NotConvex otherwise), conjugates twice
// through an intermediate slope-range grid, and reports the max deviation of
// the double conjugate from g at interior grid points.  The pass tolerance
// 10 * (grid spacing) * (max slope) is recorded in the report constants.
BoundReport certify_biconjugate(const std::function<double(double)>& g,
                                const std::vector<double>& grid);

// Convex weight pair: psi on the real line together with its conjugate
// phi = psi*, cached on a working grid.  Construction certifies
//   - superlinearity of psi on the working grid,
//   - the Lipschitz-growth bound |psi(x1)-psi(x2)| <=
//       A_psi (1+|x1|+|x2|)^{alpha-1} |x1-x2| on sampled pairs,
//   - coercivity phi(x) >= A_phi |x|^{alpha/(alpha-1)} - B_phi,
//   - a biconjugacy spot check (psi recovered from phi).
class ConvexWeight {
public:
    static ConvexWeight power(double p, double extent = 400.0,
                              std::size_t points = (1u << 16) + 1);
    static ConvexWeight quadratic() { return power(2.0); }

    double psi(double y) const { return psi_(y); }
    double phi(double x) const { return phi_.eval(x); }
    double alpha() const { return alpha_; }
    double a_psi() const { return a_psi_; }
    double a_phi() const { return a_phi_; }
    double b_phi() const { return b_phi_; }
    double extent() const { return extent_; }
    const std::vector<double>& grid() const { return phi_.xs(); }

    bool smooth() const { return static_cast<bool>(psi_second_); }
    double psi_second(double y) const; // NonSmoothWeight when unavailable
    std::string describe() const { return name_; }

private:
    ConvexWeight() = default;
    void certify();

    std::function<double(double)> psi_;
    std::function<double(double)> psi_second_; // empty when psi'' unbounded
    GridFunction phi_;
    double alpha_ = 2.0;
    double a_psi_ = 0.0, a_phi_ = 0.0, b_phi_ = 0.0;
    double extent_ = 0.0;
    std::string name_;
};

// theta_m(x) = exp(phi(x) - m ln(1+|x|)) and its infimum Theta_m over the
// working grid.  Everything is exposed in log space; theta itself overflows
// double for coercive phi at moderate |x|.
class ThetaFamily {
public:
    explicit ThetaFamily(std::shared_ptr<const ConvexWeight> weight);

    double log_theta(int m, double x) const;
    double theta(int m, double x) const { return std::exp(log_theta(m, x)); }
    double log_theta_inf(int m) const; // ln Theta_m, cached
    const ConvexWeight& weight() const { return *weight_; }
    std::shared_ptr<const ConvexWeight> weight_ptr() const { return weight_; }

private:
    std::shared_ptr<const ConvexWeight> weight_;
    mutable std::mutex mutex_;
    mutable std::map<int, double> inf_cache_;
};

// Riesz mass of the subharmonic weight psi(Im z): for each sample z and each
// t = fraction * |z|, estimates (1/2pi) * integral of psi''(Im zeta) over the
// disk D(z, t) and returns the smallest c with mass <= c |z|^{alpha-1} t.
// Requires a smooth psi (NonSmoothWeight otherwise); |z| > 1 for all samples.
BoundReport certify_riesz_mass(const ConvexWeight& weight,
                               const std::vector<cplx>& z_samples,
                               const std::vector<double>& t_fractions);

// Log-moment growth of the coercive minorant g(x) = A|x|^{alpha/(alpha-1)} - B:
// computes S(m) = sup_x (m ln(1+|x|) - g(x)) for each m and returns the
// smallest m-uniform C with S(m) < (1 - 1/alpha) m ln m + C m.
BoundReport certify_log_moment_growth(double A, double B, double alpha,
                                      const std::vector<int>& m_list);

// Tilted-duality constant: the smallest b with
//   sup_x (x y - ln theta_m(x)) <= psi(y) + m (alpha-1) ln(1+|y|) + b
// over the y-grid (sup_x taken on the weight's working grid).
BoundReport certify_tilt_duality(const ThetaFamily& theta, int m,
                                 const std::vector<double>& y_grid);

} // namespace wfl

#endif
