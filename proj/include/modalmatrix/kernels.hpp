#pragma once

#include "modalmatrix/matrix.hpp"

namespace modalmatrix {

enum class KernelFamily {
    GaussianMatrixNormal, // K(X) = (2*pi)^(-d/2) exp(-tr(X'X)/2)
    UniformBall,          // K(X) = 1/nu0 on the unit Frobenius ball
};

struct KernelSpec {
    KernelFamily family = KernelFamily::GaussianMatrixNormal;
    int dim = 1; // d = P * T
};

// kappa and its derivative at u >= 0, where K(X) = kappa(tr(X'X)) / 2.
struct ProfileValue {
    double kappa = 0.0;
    double kappa_prime = 0.0;
};

ProfileValue profile(const KernelSpec& spec, double u);

// K(X) = kappa(tr(X'X)) / 2. May underflow to 0 for large dim; the log
// variant is the one meant for high-dimensional work.
double kernel_eval(const KernelSpec& spec, const Matrix& x);

// log K(X), computed without forming the underflowing exponential;
// -inf where the kernel vanishes.
double kernel_log_eval(const KernelSpec& spec, const Matrix& x);

struct KernelConstants {
    double r_k;  // R(K) = integral of K^2
    double m2_k; // second moment per coordinate
};

// Gaussian family only: R(K) = (4*pi)^(-d/2), m2 = 1.
KernelConstants kernel_constants(const KernelSpec& spec);

// Volume of the unit ball in R^d; log variant uses log-gamma so it stays
// finite for large d.
double unit_ball_volume(int dim);
double log_unit_ball_volume(int dim);

// log(kappa(u)/2) as a function of the squared Frobenius radius u. Hot-path
// helper shared by the density and mean-shift code.
double log_kernel_at_u(KernelFamily family, int dim, double u);

}  // namespace modalmatrix
