#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modalmatrix/kernels.hpp"
#include "support.hpp"

using namespace modalmatrix;
using testsupport::random_matrix;
using testsupport::simpson;
using testsupport::simpson2d;

TEST_CASE("profile values") {
    SUBCASE("gaussian at the origin, d = 1") {
        const ProfileValue v = profile({KernelFamily::GaussianMatrixNormal, 1}, 0.0);
        CHECK(v.kappa == doctest::Approx(0.7978845608028654).epsilon(1e-14));
        CHECK(v.kappa_prime == doctest::Approx(-0.3989422804014327).epsilon(1e-14));
    }
    SUBCASE("gaussian decays monotonically to zero") {
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 3};
        double prev = profile(spec, 0.0).kappa;
        for (double u = 1.0; u <= 512.0; u *= 2.0) {
            const double k = profile(spec, u).kappa;
            CHECK(k < prev);
            prev = k;
        }
        CHECK(prev < 1e-100);
    }
    SUBCASE("uniform ball d = 2: unit disc area") {
        const ProfileValue v = profile({KernelFamily::UniformBall, 2}, 0.5);
        CHECK(v.kappa == doctest::Approx(0.6366197723675814).epsilon(1e-14));
        CHECK(profile({KernelFamily::UniformBall, 2}, 1.5).kappa == 0.0);
    }
    SUBCASE("negative argument rejected") {
        CHECK_THROWS_AS(profile({KernelFamily::GaussianMatrixNormal, 1}, -0.1),
                        ParameterError);
    }
}

TEST_CASE("kappa_prime nonpositive on a log-spaced grid") {
    for (int d : {1, 4, 25, 200}) {
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, d};
        for (double u = 1e-8; u <= 1e4; u *= 10.0)
            CHECK(profile(spec, u).kappa_prime <= 0.0);
    }
}

TEST_CASE("kernel_eval") {
    SUBCASE("standard normal at zero") {
        const Matrix zero(1, 1);
        CHECK(kernel_eval({KernelFamily::GaussianMatrixNormal, 1}, zero) ==
              doctest::Approx(0.3989422804014327).epsilon(1e-14));
    }
    SUBCASE("sign symmetry") {
        SplitMix64 rng(5);
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 6};
        for (int rep = 0; rep < 20; ++rep) {
            const Matrix x = random_matrix(2, 3, rng);
            CHECK(kernel_eval(spec, x) == kernel_eval(spec, -1.0 * x));
        }
    }
    SUBCASE("permutation symmetry") {
        SplitMix64 rng(6);
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 6};
        const Matrix x = random_matrix(2, 3, rng);
        Matrix perm(2, 3);
        // reverse the flattened entries; still the same multiset
        for (int i = 0; i < 6; ++i) perm.data()[i] = x.data()[5 - i];
        CHECK(kernel_eval(spec, perm) == doctest::Approx(kernel_eval(spec, x)).epsilon(1e-15));
    }
    SUBCASE("unit mass by quadrature, d = 1") {
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 1};
        const double mass = simpson(
            [&](double x) { return kernel_eval(spec, Matrix(1, 1, {x})); }, -8.0,
            8.0, 4000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(kernel_eval({KernelFamily::GaussianMatrixNormal, 2}, Matrix(1, 1)),
                        DimensionError);
    }
}

TEST_CASE("kernel_log_eval") {
    SUBCASE("high dimension stays finite in log domain") {
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 750};
        const Matrix zero(15, 50);
        const double lv = kernel_log_eval(spec, zero);
        CHECK(lv == doctest::Approx(-689.2038999035045).epsilon(1e-12));
        // linear value barely representable at the origin, gone a bit away
        const Matrix off = Matrix::constant(15, 50, std::sqrt(400.0 / 750.0));
        CHECK(kernel_eval(spec, off) == 0.0);
        CHECK(kernel_log_eval(spec, off) ==
              doctest::Approx(-689.2038999035045 - 200.0).epsilon(1e-12));
    }
    SUBCASE("consistent with kernel_eval when representable") {
        SplitMix64 rng(8);
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 4};
        for (int rep = 0; rep < 30; ++rep) {
            const Matrix x = random_matrix(2, 2, rng);
            CHECK(std::exp(kernel_log_eval(spec, x)) ==
                  doctest::Approx(kernel_eval(spec, x)).epsilon(1e-12));
        }
    }
    SUBCASE("uniform ball outside support") {
        const Matrix far(1, 2, {3.0, 4.0});
        CHECK(kernel_log_eval({KernelFamily::UniformBall, 2}, far) ==
              -std::numeric_limits<double>::infinity());
    }
}

TEST_CASE("kernel_constants against quadrature oracles") {
    SUBCASE("d = 1") {
        const KernelConstants kc = kernel_constants({KernelFamily::GaussianMatrixNormal, 1});
        CHECK(kc.r_k == doctest::Approx(0.28209479177387814).epsilon(1e-14));
        CHECK(kc.m2_k == 1.0);

        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 1};
        const double r_quad = simpson(
            [&](double x) {
                const double k = kernel_eval(spec, Matrix(1, 1, {x}));
                return k * k;
            },
            -8.0, 8.0, 4000);
        CHECK(r_quad == doctest::Approx(kc.r_k).epsilon(1e-6));
        const double m2_quad = simpson(
            [&](double x) { return x * x * kernel_eval(spec, Matrix(1, 1, {x})); },
            -10.0, 10.0, 4000);
        CHECK(m2_quad == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("d = 2") {
        const KernelConstants kc = kernel_constants({KernelFamily::GaussianMatrixNormal, 2});
        CHECK(kc.r_k == doctest::Approx(0.07957747154594767).epsilon(1e-14));
        const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 2};
        const double r_quad = simpson2d(
            [&](double x, double y) {
                const double k = kernel_eval(spec, Matrix(1, 2, {x, y}));
                return k * k;
            },
            -7.0, 7.0, 300);
        CHECK(r_quad == doctest::Approx(kc.r_k).epsilon(1e-6));
    }
    SUBCASE("uniform ball unsupported") {
        CHECK_THROWS_AS(kernel_constants({KernelFamily::UniformBall, 2}), ParameterError);
    }
}

TEST_CASE("gradient of kernel_eval matches kappa_prime") {
    // grad K(X) = kappa'(tr X'X) X entrywise (the factor 2 from tr X'X and
    // the 1/2 in K cancel); compare against central finite differences
    SplitMix64 rng(12);
    const KernelSpec spec{KernelFamily::GaussianMatrixNormal, 25};
    for (int rep = 0; rep < 5; ++rep) {
        Matrix x = random_matrix(5, 5, rng, 0.4);
        const double u = squared_frobenius_norm(x);
        const double kp = profile(spec, u).kappa_prime;
        for (int e = 0; e < x.size(); ++e) {
            const double analytic = kp * x.data()[e];
            const double numeric = testsupport::finite_difference(
                [&](double v) {
                    Matrix probe = x;
                    probe.data()[e] = v;
                    return kernel_eval(spec, probe);
                },
                x.data()[e], 1e-4);
            CHECK(numeric == doctest::Approx(analytic).epsilon(1e-5));
        }
    }
}

TEST_CASE("unit ball volume") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
    // log form stays finite where the linear volume underflows
    CHECK(std::isfinite(log_unit_ball_volume(750)));
}
