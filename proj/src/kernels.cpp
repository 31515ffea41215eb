#include "nwinterp/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nwinterp/errors.hpp"

namespace nwinterp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_exponent(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InvalidParams("singular kernel exponent must be positive and finite");
    }
}

// Adaptive Simpson with absolute tolerance.
template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(f, a, m, fa, flm, fm);
    const double right = simpson_step(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson_step(f, a, b, fa, fm, fb),
                            tol, 40);
}

}  // namespace

KernelSpec KernelSpec::singular_indicator(double a) {
    require_positive_exponent(a);
    return {KernelVariant::SingularIndicator, a};
}

KernelSpec KernelSpec::singular_trunc_poly(double a) {
    require_positive_exponent(a);
    return {KernelVariant::SingularTruncPoly, a};
}

KernelSpec KernelSpec::singular_cos_sq(double a) {
    require_positive_exponent(a);
    return {KernelVariant::SingularCosSq, a};
}

KernelSpec KernelSpec::epanechnikov() { return {KernelVariant::Epanechnikov, 0.0}; }

KernelSpec KernelSpec::gaussian() { return {KernelVariant::Gaussian, 0.0}; }

KernelSpec kernel_from_name(std::string_view name, std::optional<double> a) {
    auto need_a = [&](std::string_view n) {
        if (!a) throw InvalidParams(std::string("kernel '") + std::string(n) + "' requires exponent a");
        return *a;
    };
    if (name == "singular-indicator") return KernelSpec::singular_indicator(need_a(name));
    if (name == "singular-truncpoly") return KernelSpec::singular_trunc_poly(need_a(name));
    if (name == "singular-cossq") return KernelSpec::singular_cos_sq(need_a(name));
    if (name == "epanechnikov") return KernelSpec::epanechnikov();
    if (name == "gaussian") return KernelSpec::gaussian();
    throw InvalidParams(std::string("unknown kernel name: ") + std::string(name));
}

std::string kernel_name(const KernelSpec& kernel) {
    switch (kernel.variant) {
        case KernelVariant::SingularIndicator: return "singular-indicator";
        case KernelVariant::SingularTruncPoly: return "singular-truncpoly";
        case KernelVariant::SingularCosSq: return "singular-cossq";
        case KernelVariant::Epanechnikov: return "epanechnikov";
        case KernelVariant::Gaussian: return "gaussian";
    }
    return "?";
}

double eval_radial(const KernelSpec& kernel, double r) {
    const double a = kernel.exponent;
    switch (kernel.variant) {
        case KernelVariant::SingularIndicator:
            if (r > 1.0) return 0.0;
            if (r == 0.0) return kInf;
            return std::pow(r, -a);
        case KernelVariant::SingularTruncPoly: {
            if (r >= 1.0) return 0.0;
            if (r == 0.0) return kInf;
            const double t = 1.0 - r;
            return std::pow(r, -a) * t * t;
        }
        case KernelVariant::SingularCosSq: {
            if (r >= 1.0) return 0.0;
            if (r == 0.0) return kInf;
            const double c = std::cos(std::numbers::pi * r * 0.5);
            return std::pow(r, -a) * c * c;
        }
        case KernelVariant::Epanechnikov:
            return r <= 1.0 ? 0.75 * (1.0 - r * r) : 0.0;
        case KernelVariant::Gaussian:
            return std::exp(-r * r) / std::sqrt(2.0 * std::numbers::pi);
    }
    return 0.0;
}

double support_radius(const KernelSpec& kernel) {
    return kernel.variant == KernelVariant::Gaussian ? kInf : 1.0;
}

double unit_sphere_surface(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double squared_norm_integral(const KernelSpec& kernel, int d) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    const double S = unit_sphere_surface(d);
    const double a = kernel.exponent;
    const double q = d - 2.0 * a;  // radial exponent + 1 for singular variants
    switch (kernel.variant) {
        case KernelVariant::SingularIndicator:
            // S * int_0^1 r^{d-1-2a} dr
            return q > 0.0 ? S / q : kInf;
        case KernelVariant::SingularTruncPoly:
            // S * B(d-2a, 5); the quartic (1-r)^4 contributes Gamma(5) = 24
            if (q <= 0.0) return kInf;
            return S * 24.0 * std::exp(std::lgamma(q) - std::lgamma(q + 5.0));
        case KernelVariant::SingularCosSq: {
            if (q <= 0.0) return kInf;
            // Substitute u = r^q so the singular endpoint flattens:
            // int_0^1 r^{q-1} cos^4(pi r/2) dr = (1/q) int_0^1 cos^4(pi u^{1/q}/2) du
            const double inv_q = 1.0 / q;
            auto g = [&](double u) {
                const double r = std::pow(u, inv_q);
                const double c = std::cos(std::numbers::pi * r * 0.5);
                return c * c * c * c;
            };
            return S * inv_q * integrate(g, 0.0, 1.0, 1e-12);
        }
        case KernelVariant::Epanechnikov:
            // S * (9/16) int_0^1 (1-r^2)^2 r^{d-1} dr
            return S * (9.0 / 16.0) *
                   (1.0 / d - 2.0 / (d + 2.0) + 1.0 / (d + 4.0));
        case KernelVariant::Gaussian:
            // S * (1/2pi) int_0^inf e^{-2r^2} r^{d-1} dr = (pi/2)^{d/2} / (2 pi)
            return std::pow(0.5 * std::numbers::pi, 0.5 * d) /
                   (2.0 * std::numbers::pi);
    }
    return kInf;
}

bool valid_for_dimension(const KernelSpec& kernel, int d) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!kernel.is_singular()) return true;
    return kernel.exponent > 0.0 && kernel.exponent < 0.5 * d;
}

void validate_for_dimension(const KernelSpec& kernel, int d) {
    if (!valid_for_dimension(kernel, d)) {
        throw ExponentTooLarge("singular exponent a=" + std::to_string(kernel.exponent) +
                               " must satisfy 0 < a < d/2 for d=" + std::to_string(d));
    }
}

}  // namespace nwinterp
