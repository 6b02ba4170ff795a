#ifndef WFL_SPACES_HPP
#define WFL_SPACES_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfl/carleman.hpp"
#include "wfl/convex.hpp"
#include "wfl/numeric.hpp"

namespace wfl {

// Real-line function with evaluable derivatives up to a declared order.
class SampledFunction {
public:
    using Interval = std::pair<double, double>;

    SampledFunction(std::function<cplx(int, double)> deriv, int max_order,
                    std::optional<Interval> support = std::nullopt);

    cplx eval(int k, double x) const; // InsufficientDerivatives beyond max_order
    cplx operator()(double x) const { return eval(0, x); }
    int max_order() const { return max_order_; }
    const std::optional<Interval>& support() const { return support_; }

    static SampledFunction constant(cplx c);
    static SampledFunction monomial(int n);
    static SampledFunction gaussian(); // exp(-x^2), Hermite-recurrence derivatives
    // f_z(x) = exp(-i z x) with exact derivative closures (-i z)^k f_z.
    static SampledFunction exponential(cplx z);
    static SampledFunction combine(cplx a, SampledFunction f, cplx b, SampledFunction g);

private:
    std::function<cplx(int, double)> deriv_;
    int max_order_ = 0;
    std::optional<Interval> support_;
};

SampledFunction exponential_element(cplx z);

// Consistency of the derivative tower: centered finite differences of f^(k)
// match f^(k+1) at the probes.  Throws InvariantViolated on failure.
void check_derivative_consistency(const SampledFunction& f,
                                  const std::vector<double>& probes,
                                  double tol = 1e-6);

// Entire function in one of four representations.
class EntireFunctionModel {
public:
    static EntireFunctionModel closure(std::function<cplx(cplx)> f, std::string name = "");
    static EntireFunctionModel polynomial(std::vector<cplx> coeffs);
    // prefactor * prod_j (1 - z/zero_j)^{mult_j}
    static EntireFunctionModel zero_product(cplx prefactor,
                                            std::vector<std::pair<cplx, int>> zeros);
    struct ExpTerm { cplx a; double lambda; };        // a * exp(-i lambda z)
    static EntireFunctionModel exp_sum(std::vector<ExpTerm> terms);

    cplx eval(cplx z) const;
    cplx operator()(cplx z) const { return eval(z); }
    // k-th derivative: analytic for polynomial/exp_sum, contour integral else.
    cplx derivative(cplx z, int k, double radius = 0.5) const;
    // Taylor coefficients at 0 by trapezoid on a circle of the given radius.
    std::vector<cplx> taylor(int count, double radius, std::size_t nodes = 1024) const;

    const std::string& name() const { return name_; }
    const std::vector<cplx>* poly_coeffs() const;
    const std::vector<ExpTerm>* exp_terms() const;
    const std::vector<std::pair<cplx, int>>* zeros() const;

private:
    enum class Kind { Closure, Polynomial, ZeroProduct, ExpSum };
    Kind kind_ = Kind::Closure;
    std::function<cplx(cplx)> fn_;
    std::vector<cplx> coeffs_;
    std::vector<std::pair<cplx, int>> zeros_;
    cplx prefactor_{1.0, 0.0};
    std::vector<ExpTerm> terms_;
    std::string name_;
};

// Outcome of a sup-norm evaluation with the arg-sup witness and whether the
// sup stabilized under range/order extension.
struct NormReport {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    double arg_x = 0.0;
    int arg_k = 0;
    cplx arg_z{0.0, 0.0};
    bool stabilized = false;
    std::string note;
};

// sup over x and 0 <= k <= K of |f^(k)(x)| / ((sigma+eps_m)^k M_k theta_m(x)),
// K and the x-range doubled until the sup moves by < 0.1%.
NormReport norm_G(const SampledFunction& f, int m, const ScaledWeightFamily& family,
                  const ThetaFamily& theta, int k_start = 16, int k_cap = 256);

// sup over x and 0 <= k <= n of |f^(k)(x)| / theta_m(x).
NormReport norm_EPhi(const SampledFunction& f, int n, int m, const ThetaFamily& theta);

// sup over the box [lo, hi] of |F(z)| exp(-psi(Im z) - w_m(|z|)), with one
// local bisection refinement around the grid arg-sup.
NormReport norm_P(const EntireFunctionModel& F, int m, const ConvexWeight& weight,
                  const ScaledWeightFamily& family, cplx lo, cplx hi,
                  std::size_t resolution = 101);

// Membership bound for exponential elements: checks for every probe z that
//   norm_G(f_z, m) <= exp(psi(Im z) + w_{m+1}(|z|) + q_m),
// with q_m = Q (weight-gap constant at A = m(alpha-1)) + b_m (tilted duality).
BoundReport certify_exponential_membership(const std::vector<cplx>& probes, int m,
                                           const ScaledWeightFamily& family,
                                           const ThetaFamily& theta);

} // namespace wfl

#endif
