#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace nwinterp {

enum class KernelVariant {
    SingularIndicator,  // ||u||^{-a} on the unit ball
    SingularTruncPoly,  // ||u||^{-a} (1-||u||)_+^2
    SingularCosSq,      // ||u||^{-a} cos^2(pi ||u||/2) on the unit ball
    Epanechnikov,       // (3/4)(1-||u||^2) on the unit ball
    Gaussian,           // (1/sqrt(2 pi)) exp(-||u||^2)
};

// A radial kernel variant. The exponent is only meaningful for the three
// singular variants and must be > 0 there.
struct KernelSpec {
    KernelVariant variant;
    double exponent = 0.0;

    bool is_singular() const {
        return variant == KernelVariant::SingularIndicator ||
               variant == KernelVariant::SingularTruncPoly ||
               variant == KernelVariant::SingularCosSq;
    }

    static KernelSpec singular_indicator(double a);
    static KernelSpec singular_trunc_poly(double a);
    static KernelSpec singular_cos_sq(double a);
    static KernelSpec epanechnikov();
    static KernelSpec gaussian();
};

// CLI/config names: singular-indicator, singular-truncpoly, singular-cossq,
// epanechnikov, gaussian. Singular variants require the exponent.
KernelSpec kernel_from_name(std::string_view name, std::optional<double> a = {});
std::string kernel_name(const KernelSpec& kernel);

// K evaluated at any point with ||u|| = r. Singular variants return +inf
// at r = 0 (never NaN); the estimator intercepts exact matches before it
// ever divides by these values.
double eval_radial(const KernelSpec& kernel, double r);

// 1 for compactly supported variants, +inf for Gaussian.
double support_radius(const KernelSpec& kernel);

// Integral of K(u)^2 over R^d, via the radial form
// S_{d-1} * int_0^inf K(r)^2 r^{d-1} dr. Returns +inf when divergent
// (singular variants with a >= d/2).
double squared_norm_integral(const KernelSpec& kernel, int d);

// True iff the kernel is square-integrable in dimension d (singular
// variants need 0 < a < d/2; non-singular variants always qualify).
bool valid_for_dimension(const KernelSpec& kernel, int d);

// Throws ExponentTooLarge when valid_for_dimension fails.
void validate_for_dimension(const KernelSpec& kernel, int d);

// Surface measure of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_surface(int d);

}  // namespace nwinterp
