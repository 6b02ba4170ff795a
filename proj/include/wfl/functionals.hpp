#ifndef WFL_FUNCTIONALS_HPP
#define WFL_FUNCTIONALS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wfl/carleman.hpp"
#include "wfl/convex.hpp"
#include "wfl/spaces.hpp"

namespace wfl {

// Bundle of the Carleman weight, the convex weight pair, and the derived
// scaled/tilted families most operations share.
struct WeightContext {
    std::shared_ptr<const AssociatedWeight> weight;
    std::shared_ptr<const ConvexWeight> convex;
    ScaledWeightFamily family;
    ThetaFamily theta;
    double sigma = 1.0;

    static std::shared_ptr<const WeightContext> standard(double gevrey_s = 1.0,
                                                         long k_max = 1L << 13,
                                                         double sigma = 1.0,
                                                         double power_p = 2.0);
    // q-style growth allowance: gap constant at the given ln(1+r) coefficient
    // plus the tilted-duality constant (cached per (m, A)).
    double growth_allowance(int m, double extra_log_coeff = 0.0) const;
};

// One derivative-order term of the normal form: either a weighted point set
// or a density sampled on a uniform grid.  When theta_scaled is set the
// integrand is divided by theta_m; when seq_scaled is set the whole term is
// multiplied by 1/((sigma+eps_m)^k M_k).
struct MeasureTerm {
    int k = 0;
    std::vector<std::pair<double, cplx>> points; // (x_j, c_j)
    std::vector<double> grid;                    // density abscissae (uniform)
    std::vector<cplx> density;
    bool theta_scaled = false;
    bool seq_scaled = false;

    double total_variation() const;
};

struct PointTerm { cplx a; double lambda; };

// Optional single high-order tail term: integral of p * f^{(order)}.
struct DerivTail {
    int order = 0;
    std::vector<double> grid;
    std::vector<cplx> density;
};

// Functional in normal form: sum of derivative-order measure terms, plus
// point evaluations, plus an optional high-order density tail.
class MeasureFunctional {
public:
    MeasureFunctional(std::vector<MeasureTerm> terms, std::vector<PointTerm> point_terms,
                      std::optional<DerivTail> tail, int m,
                      std::shared_ptr<const WeightContext> ctx);

    cplx apply(const SampledFunction& f) const;
    cplx fourier_laplace(cplx z) const; // apply to the exponential element

    int m() const { return m_; }
    int max_order() const;
    // sup_k of the total variation of the k-th measure
    double variation_bound() const;
    const std::vector<MeasureTerm>& terms() const { return terms_; }
    const std::vector<PointTerm>& point_terms() const { return point_terms_; }
    const std::optional<DerivTail>& tail() const { return tail_; }
    const std::shared_ptr<const WeightContext>& context() const { return ctx_; }

    // Certified norm bound attached by the synthesis constructions.
    std::optional<double> norm_certificate;
    std::string note;

private:
    std::vector<MeasureTerm> terms_;
    std::vector<PointTerm> point_terms_;
    std::optional<DerivTail> tail_;
    int m_ = 1;
    std::shared_ptr<const WeightContext> ctx_;
};

// Transform split by derivative order: that(z) = sum_k contributions[k](z) z^k.
struct TransformResult {
    EntireFunctionModel that;
    std::vector<EntireFunctionModel> contributions;
    int order_count = 0;
};

TransformResult transform_expansion(const MeasureFunctional& T);

// Growth envelope |T_hat(z)| <= c exp(psi(Im z) + w_{m+1}(|z|) + q) on the
// box grid, with c the variation bound and q the certified allowance for the
// per-order sum.  Throws GrowthViolated with the witness on failure.
BoundReport certify_transform_growth(const MeasureFunctional& T, cplx lo, cplx hi,
                                     std::size_t resolution = 41);

// Factorized synthesis: given entire U, V with certified bounds
//   |U(z)| (1+|z|^2) <= C_U exp(psi(Im z)),   |V(z)| <= C_V exp(w_m(|z|)),
// builds T(f) = integral of p(t) * sum_k v_k i^k f^{(k)}(t) dt where p is the
// band-limited density recovered from U by a truncated sampling series on
// [-support_radius, support_radius] and v_k are Taylor coefficients of V.
// The Cauchy bound |v_k| (sigma+eps_m)^k M_k <= C_V is enforced.
MeasureFunctional synthesize_factorized(const EntireFunctionModel& U,
                                        const EntireFunctionModel& V, int m, double C_U,
                                        double C_V, double support_radius,
                                        std::shared_ptr<const WeightContext> ctx);

// Polynomial-growth synthesis: given |U(z)| <= C (1+|z|)^N exp(psi(Im z)) and
// N+2 distinct nonzero real nodes, solves for a_k with
// g = U - sum a_k exp(-i lambda_k z) vanishing to order N+2 at 0, forms
// h = g / (-iz)^{N+2}, recovers its density p, and returns
// T(f) = sum a_k f(lambda_k) + integral of p f^{(N+2)}.
MeasureFunctional synthesize_polygrowth(const EntireFunctionModel& U, double C, int N,
                                        const std::vector<double>& lambda_nodes,
                                        std::shared_ptr<const WeightContext> ctx);

// Diagnostic: with T_hat vanishing on the z-grid, tabulates |T(x^nu)| for the
// requested monomial orders (all moments of a null functional must vanish).
BoundReport uniqueness_probe(const MeasureFunctional& T, const std::vector<cplx>& z_grid,
                             const std::vector<int>& monomial_orders);

} // namespace wfl

#endif
