#include "modalmatrix/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace modalmatrix {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_spec(const KernelSpec& spec) {
    if (spec.dim < 1) throw ParameterError("kernel dimension must be positive");
}

}  // namespace

double log_unit_ball_volume(int dim) {
    if (dim < 1) throw ParameterError("dimension must be positive");
    return 0.5 * dim * std::log(std::numbers::pi) -
           std::lgamma(0.5 * dim + 1.0);
}

double unit_ball_volume(int dim) { return std::exp(log_unit_ball_volume(dim)); }

ProfileValue profile(const KernelSpec& spec, double u) {
    check_spec(spec);
    if (u < 0.0) throw ParameterError("profile argument must be nonnegative");
    switch (spec.family) {
        case KernelFamily::GaussianMatrixNormal: {
            // kappa(u) = 2 (2 pi)^(-d/2) exp(-u/2), so K(X) = kappa(tr X'X)/2
            // is the standard matrix normal density.
            const double g = std::exp(-0.5 * spec.dim * kLog2Pi - 0.5 * u);
            return ProfileValue{2.0 * g, -g};
        }
        case KernelFamily::UniformBall: {
            // flat at 2/nu0 inside the unit ball; the derivative is only a
            // boundary distribution and is reported as 0 off the boundary
            const double k =
                u <= 1.0 ? 2.0 * std::exp(-log_unit_ball_volume(spec.dim)) : 0.0;
            return ProfileValue{k, 0.0};
        }
    }
    throw ParameterError("unknown kernel family");
}

double log_kernel_at_u(KernelFamily family, int dim, double u) {
    switch (family) {
        case KernelFamily::GaussianMatrixNormal:
            return -0.5 * dim * kLog2Pi - 0.5 * u;
        case KernelFamily::UniformBall:
            return u <= 1.0 ? -log_unit_ball_volume(dim) : -kInf;
    }
    throw ParameterError("unknown kernel family");
}

double kernel_eval(const KernelSpec& spec, const Matrix& x) {
    check_spec(spec);
    if (x.size() != spec.dim)
        throw DimensionError("kernel argument has the wrong dimension");
    return 0.5 * profile(spec, squared_frobenius_norm(x)).kappa;
}

double kernel_log_eval(const KernelSpec& spec, const Matrix& x) {
    check_spec(spec);
    if (x.size() != spec.dim)
        throw DimensionError("kernel argument has the wrong dimension");
    return log_kernel_at_u(spec.family, spec.dim, squared_frobenius_norm(x));
}

KernelConstants kernel_constants(const KernelSpec& spec) {
    check_spec(spec);
    if (spec.family != KernelFamily::GaussianMatrixNormal)
        throw ParameterError("kernel constants only defined for the Gaussian family");
    // R(K) = integral of (2 pi)^(-d) exp(-||x||^2) = (4 pi)^(-d/2)
    const double r_k = std::exp(-0.5 * spec.dim * std::log(4.0 * std::numbers::pi));
    return KernelConstants{r_k, 1.0};
}

}  // namespace modalmatrix
