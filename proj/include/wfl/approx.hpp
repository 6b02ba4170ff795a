#ifndef WFL_APPROX_HPP
#define WFL_APPROX_HPP

#include <memory>
#include <string>
#include <vector>

#include "wfl/functionals.hpp"
#include "wfl/spaces.hpp"

namespace wfl {

// Smoothing kernel h(z) = sin^2(z/2)/z^2 (or a compatible replacement) with
// its certified constants: A = integral of h over R, C_g = uniform bound on
// |h^(k)| for probed k, and the even Taylor coefficients a_k of
// h(x) = sum a_k x^{2k}.
struct MollifierKernel {
    EntireFunctionModel h;
    double A = 0.0;
    double C_g = 0.0;
    std::vector<double> taylor; // a_k, coefficient of x^{2k}

    static MollifierKernel standard(int taylor_count = 32);
    double eval(double x) const;
    // P_{2N}(x) = sum_{k<=N} a_k x^{2k}
    double taylor_partial(int N, double x) const;
};

// Smooth plateau cutoff: 1 on [-1,1], 0 outside [-2,2], derivatives up to
// order 6 tabulated once on a fine grid.
SampledFunction default_cutoff();

// f_nu(x) = f(x) gamma(x/nu) with product-rule derivatives and support
// [-2 nu, 2 nu].  Throws BadCutoff if gamma fails its plateau/support/range
// checks on probes.
SampledFunction cutoff(const SampledFunction& f, int nu, const SampledFunction& gamma);

// f_{nu,lambda}(x) = (lambda/A) integral of f_nu(y) h(lambda(x-y)) dy by
// adaptive quadrature over the support, derivatives passed onto f_nu.
// Evaluations are memoized per (order, point).
SampledFunction mollify(const SampledFunction& f_nu, double lambda,
                        const MollifierKernel& kernel);

// Error budget for the mollification gap in the (n, m) seminorm:
//   [K_n lambda^{-2/3} + (2 K_n / A) * tail(lambda^{1/3})] / Theta_m
// with K_n the measured derivative bound of f_nu up to order n+1.
double mollify_budget(const SampledFunction& f_nu, double lambda,
                      const MollifierKernel& kernel, int n, int m,
                      const ThetaFamily& theta);

struct Polynomial {
    std::vector<cplx> coeffs; // coeffs[j] multiplies x^j
    cplx eval(double x) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    SampledFunction as_function() const;
};

// Q_{2N}(x) = (lambda/A) integral of f_nu(y) P_{2N}(lambda(x-y)) dy expanded
// into monomials through the moments of f_nu on [-L, L].  Compensated
// accumulation throughout; CoefficientOverflow if a coefficient loses more
// than 6 digits to cancellation anyway.
Polynomial polynomialize(const SampledFunction& f_nu, double lambda, int N,
                         const MollifierKernel& kernel, double L);

// Taylor polynomial of e^{xi x} to degree N and the measured (n, m) seminorm
// gap.
std::pair<Polynomial, double> exp_taylor_approx(double xi, int N, const ThetaFamily& theta,
                                                int n, int m);

struct PipelineRow {
    std::string stage; // cutoff | mollify | polynomial | total
    int nu = 0;
    double lambda = 0.0;
    int N = 0;
    int n = 0;
    int m = 0;
    double gap = 0.0;
};

struct PipelineSchedules {
    std::vector<int> nu{1, 2, 4, 8};
    std::vector<double> lambda{10.0, 100.0, 1000.0};
    std::vector<int> N{2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24};
};

// Three-stage polynomial approximation sweep: cutoff gaps per nu, mollify
// gaps per lambda at the best nu, polynomial gaps per N at the best
// (nu, lambda), plus end-to-end rows against f itself.
std::vector<PipelineRow> run_pipeline(const SampledFunction& f,
                                      const SampledFunction& gamma,
                                      const MollifierKernel& kernel,
                                      const PipelineSchedules& sched, int n, int m,
                                      const ThetaFamily& theta);

// Least-squares fit of ln gap_N = c0 + c1 (2N+1) - e (2N+1) ln(2N+1); the
// returned e is the super-factorial decay exponent (1/alpha for power
// weights).
double fit_decay_exponent(const std::vector<int>& Ns, const std::vector<double>& gaps);

} // namespace wfl

#endif
