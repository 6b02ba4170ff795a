#ifndef WFL_LAGRANGE_HPP
#define WFL_LAGRANGE_HPP

#include <memory>
#include <string>
#include <vector>

#include "wfl/functionals.hpp"
#include "wfl/spaces.hpp"

namespace wfl {

// Exceptional-disk radii around the generator zeros: b * |a_n|^{-nu}
// (nu = 0 gives constant radii).
struct DiskLaw {
    double b = 0.25;
    double nu = 0.0;
    double radius(cplx a) const;
};

// Decay certificate for sample sequences: |F(a_n)/N'(a_n)| <=
// A13 (1+|a_n|)^{-(alpha+nu+1)}.
struct DecayCert {
    double A13 = 1.0;
    double alpha = 2.0;
    double nu = 0.0;
};

// Interpolation generator: entire N with simple zeros a_n, the derivative
// values N'(a_n), an exceptional-disk law, and a lower-bound constant C_N
// certified off the disks on a probe grid.
class LagrangeGenerator {
public:
    LagrangeGenerator(EntireFunctionModel model, std::vector<cplx> zeros,
                      std::vector<cplx> derivs, DiskLaw law, double C_N,
                      std::shared_ptr<const WeightContext> ctx, int m);

    cplx eval(cplx z) const { return model_.eval(z); }
    const std::vector<cplx>& zeros() const { return zeros_; }
    const std::vector<cplx>& derivs() const { return derivs_; }
    const DiskLaw& disk_law() const { return law_; }
    double c_n() const { return c_n_; }
    int m() const { return m_; }
    const std::shared_ptr<const WeightContext>& context() const { return ctx_; }
    // index of the zero nearest to z, and whether z is within matching
    // tolerance of it
    std::size_t nearest_zero(cplx z) const;
    bool at_zero(cplx z, std::size_t& index, double tol = 1e-9) const;

private:
    EntireFunctionModel model_;
    std::vector<cplx> zeros_;
    std::vector<cplx> derivs_;
    DiskLaw law_;
    double c_n_ = 0.0;
    std::shared_ptr<const WeightContext> ctx_;
    int m_ = 1;
};

// N(z) = sin(scale pi z), zeros n/scale for |n| <= n_range ordered by modulus,
// N'(a_n) = scale pi (-1)^n, disk radii 1/(4 scale).  C_N is the grid minimum
// of |N(z)| exp(-psi(Im z) - w_{m+1}(|z|)) over off-disk probes with
// |Re z|, |Im z| <= 5.
LagrangeGenerator build_cardinal_generator(double scale, int n_range,
                                           std::shared_ptr<const WeightContext> ctx,
                                           int m = 1);

// Lagrange series sum_n F(a_n)/N'(a_n) * N(z)/(z - a_n) over the stored
// zeros, summed in symmetric pairs with compensated accumulation.  At z equal
// to a stored zero returns the sample exactly.  Throws
// DecayCertificateViolated if a sample breaks the certificate and
// TailNotConverged if the beyond-range tail majorant exceeds tail_tol.
cplx reconstruct(const std::vector<cplx>& samples, const LagrangeGenerator& gen, cplx z,
                 const DecayCert& cert, double tail_tol = 1e-6);

// Per-term envelope |N(z)/(z - a_n)| <= A11 |a_n|^nu exp(psi(Im z) +
// w_{m+4}(|z|)) at the probes, plus the summability proxy
// sum (1+|a_n|)^{-(alpha+1)} with its Cauchy tail.  A11 <= 0 means "measure
// the smallest constant on a coarse subset, then verify everywhere with a 2x
// margin"; a positive A11 is verified as given.  Also records the measured
// sample-decay constant of F.  Throws TermBoundViolated with witness (n, z).
BoundReport certify_series_bound(const EntireFunctionModel& F,
                                 const LagrangeGenerator& gen,
                                 const std::vector<cplx>& probes, double alpha = 2.0,
                                 double A11 = 0.0);

// Finite zero set with multiplicities, shifts, and disk radii.
struct ZeroShiftSpec {
    std::vector<cplx> lambda;
    std::vector<int> mult;
    std::vector<cplx> shift;
    std::vector<double> radius;

    double shift_mass() const; // sum m_j |t_j| / r_j
    void validate() const;     // disjoint disks, shifts inside, nonzero images
};

// Replaces each factor (1 - z/lambda_j)^{m_j} of the base product by
// (1 - z/(lambda_j+t_j))^{m_j} and reports C* = max over probes of
// | ln|f_t| - ln|f| |, with a coarse-subset stability figure.  Probes must
// stay outside every disk (ProbeInsideDisk).
std::pair<EntireFunctionModel, BoundReport> zero_shift(const ZeroShiftSpec& spec,
                                                       const EntireFunctionModel& base,
                                                       const std::vector<cplx>& probes);

// Shift selection: nu > 2 alpha + 1, b below its cap, sigma_j = 2^{nu+2} b
// A_mu |lambda_j|^{1-nu}; the first radial interval of width sigma_j past
// |lambda_j| avoiding every mu-disk shadow fixes t_j = (k0 + 1/2) sigma_j
// e^{i arg lambda_j}.  Throws NoAvoidingInterval when the scan budget
// 4 n_mu(reach) is exhausted (possible only if the counting certificate for
// the mu-zeros is wrong).
ZeroShiftSpec shift_schedule(const std::vector<cplx>& mu_zeros,
                             const std::vector<cplx>& lambda_zeros, double A_mu,
                             double d1, double d2, double alpha);

} // namespace wfl

#endif
