#include <doctest.h>

#include <cmath>

#include "magchain/constants.hpp"
#include "magchain/errors.hpp"
#include "magchain/ring.hpp"

using namespace magchain;

namespace {

double quadratic_part(double (*f)(const RingPerturbation&), const RingPerturbation& p) {
    RingPerturbation zero = p;
    zero.epsilon = 0.0;
    return (f(p) - f(zero)) / (p.epsilon * p.epsilon);
}

double nonloc_quadratic(const RingPerturbation& p, NonlocalMethod method, const NonlocalOptions& opt = {}) {
    return (e_nonloc(p, method, opt) - kPi * kPi / 3.0) / (p.epsilon * p.epsilon);
}

// Closed forms of the six kernels, used by the finite-difference oracle.
double kbar(Kernel k, double t) {
    const double s = std::sin(0.5 * t);
    switch (k) {
        case Kernel::K00: return (115.0 + 76.0 * std::cos(t) + std::cos(2.0 * t)) / (128.0 * std::pow(s, 5));
        case Kernel::K01: return 3.0 * (22.0 * std::sin(t) + std::sin(2.0 * t)) / (64.0 * std::pow(s, 5));
        case Kernel::K11: return 3.0 * (-35.0 + 3.0 * std::cos(2.0 * t)) / (128.0 * std::pow(s, 5));
        case Kernel::K02: return (3.0 + std::cos(t)) / (8.0 * std::pow(s, 3));
        case Kernel::K12: return 3.0 * (-6.0 * std::sin(t) + std::sin(2.0 * t)) / (32.0 * std::pow(s, 5));
        case Kernel::K22: return (3.0 - std::cos(t)) / (8.0 * std::pow(s, 3));
    }
    return 0.0;
}

// 8th-order central difference of the d-th derivative, built by nesting first derivatives.
double fd_derivative(Kernel k, double t, int d, double h) {
    if (d == 0) return kbar(k, t);
    static const double c[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    double acc = 0.0;
    for (int j = 1; j <= 4; ++j)
        acc += c[j - 1] * (fd_derivative(k, t + j * h, d - 1, h) - fd_derivative(k, t - j * h, d - 1, h));
    return acc / h;
}

}  // namespace

TEST_CASE("local functional") {
    CHECK(e_loc(RingPerturbation::mode(2, 0.0)) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-15));
    const double eps = 0.1;
    CHECK(e_loc(RingPerturbation::mode(2, eps)) == doctest::Approx(4.0 * kPi * kPi + 72.0 * kPi * kPi * eps * eps).epsilon(1e-14));
    CHECK(e_loc(RingPerturbation::mode(1, 0.3)) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-15));
    // Oracle: trapezoid quadrature of the bending integrand for a two-mode w.
    RingPerturbation p;
    p.epsilon = 0.2;
    p.cos_coeffs = {0.0, 0.0, 0.3, 0.0, -0.1};
    p.sin_coeffs = {0.0, 0.0, 0.0, 0.5};
    const int N = 512;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double t = 2.0 * kPi * i / N;
        acc += std::pow(p.w(t, 1), 2) - 2.0 * std::pow(p.w(t, 2), 2) + std::pow(p.w(t, 3), 2);
    }
    const double oracle = 4.0 * kPi * kPi + 2.0 * p.epsilon * p.epsilon * kPi * (2.0 * kPi / N) * acc;
    CHECK(e_loc(p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("kernel values at pi") {
    CHECK(kernel_eval({Kernel::K00, 0}, kPi) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
    CHECK(kernel_eval({Kernel::K22, 0}, kPi) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kernel_eval({Kernel::K11, 0}, kPi) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_eval({Kernel::K00, 0}, 1e-7), SingularEvaluation);
    CHECK_THROWS_AS(kernel_eval({Kernel::K00, 0}, 2.0 * kPi), SingularEvaluation);
    CHECK_THROWS_AS(kernel_eval({Kernel::K00, 9}, 1.0), InvalidParameter);
}

TEST_CASE("kernel derivatives match eighth-order differences") {
    for (Kernel k : kAllKernels) {
        for (double t : {0.9, 2.0, kPi, 4.4}) {
            for (int d = 1; d <= 4; ++d) {
                const double exact = kernel_eval({k, d}, t);
                const double fd = fd_derivative(k, t, d, 0.02);
                CHECK(std::fabs(exact - fd) <= 1e-6 * std::max(1.0, std::fabs(exact)));
            }
        }
    }
}

TEST_CASE("regular part of each kernel") {
    for (Kernel k : kAllKernels) {
        for (double t : {0.4, 1.0, 1.7}) {
            CHECK(kernel_regular(k, t) == doctest::Approx(std::pow(t, 5) * kernel_eval({k, 0}, t)).epsilon(1e-13));
            CHECK(kernel_regular_series(k, 30).eval(t) == doctest::Approx(kernel_regular(k, t)).epsilon(1e-9));
        }
    }
    // K01 ~ 36 / t^4 near 0.
    CHECK(kernel_regular_series(Kernel::K01, 4)[1] == doctest::Approx(36.0).epsilon(1e-14));
}

TEST_CASE("zero-kernel identity") {
    for (double t : {kPi, kPi / 2.0, 1.0}) CHECK(std::fabs(kernel_identity_residual(t)) <= 1e-6);
    for (int i = 0; i < 100; ++i) {
        const double t = 0.3 + (2.0 * kPi - 0.6) * i / 99.0;
        CHECK(std::fabs(kernel_identity_residual(t)) <= 1e-6);
    }
    CHECK_THROWS_AS(kernel_identity_residual(0.1), InvalidParameter);
    CHECK_THROWS_AS(kernel_identity_residual(2.0 * kPi - 0.2), InvalidParameter);
}

TEST_CASE("nonlocal functional at zero and rigid perturbations") {
    for (NonlocalMethod m : {NonlocalMethod::Direct, NonlocalMethod::Simplified}) {
        CHECK(e_nonloc(RingPerturbation::mode(2, 0.0), m) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-15));
        CHECK(std::fabs(nonloc_quadratic(RingPerturbation::mode(1, 1.0), m)) < 1e-9);
    }
}

TEST_CASE("direct and simplified nonlocal functionals agree for modes 2 to 5") {
    for (int k = 2; k <= 5; ++k) {
        const RingPerturbation p = RingPerturbation::mode(k, 1.0);
        const double direct = nonloc_quadratic(p, NonlocalMethod::Direct);
        const double simple = nonloc_quadratic(p, NonlocalMethod::Simplified);
        CHECK(std::fabs(direct - simple) <= 0.01 * std::fabs(simple));
        CHECK(simple == doctest::Approx(quadratic_part(e_loc, p) / 12.0).epsilon(1e-13));
    }
}

TEST_CASE("nonlocal and local functionals are invariant under phase shifts") {
    const RingPerturbation p = RingPerturbation::mode(3, 1.0, 1.0, 0.0);
    for (double c : {0.3, 1.9}) {
        const RingPerturbation q = p.shifted(c);
        CHECK(std::fabs(quadratic_part(e_loc, q) - quadratic_part(e_loc, p)) < 1e-10);
        CHECK(std::fabs(nonloc_quadratic(q, NonlocalMethod::Direct) - nonloc_quadratic(p, NonlocalMethod::Direct)) < 1e-8);
    }
}

TEST_CASE("order of integration can be swapped") {
    RingPerturbation p;
    p.epsilon = 1.0;
    p.cos_coeffs = {0.0, 0.2, 0.5, 0.0, 0.1};
    p.sin_coeffs = {0.0, 0.0, 0.3, -0.2};
    NonlocalOptions inner_y;
    NonlocalOptions inner_x;
    inner_x.order = IntegrationOrder::InnerX;
    const double a = nonlocal_double_integral(p, inner_y);
    const double b = nonlocal_double_integral(p, inner_x);
    CHECK(std::fabs(a - b) < 1e-9 * std::max(1.0, std::fabs(a)));
}

TEST_CASE("total ring functional") {
    CHECK(e_tot_functional(RingPerturbation::mode(2, 0.0)) ==
          doctest::Approx(kZeta3 * kPi * kPi + kPi * kPi / 6.0).epsilon(1e-15));
    const RingPerturbation p = RingPerturbation::mode(2, 0.1);
    const double q = quadratic_part([](const RingPerturbation& r) { return e_tot_functional(r); }, p);
    CHECK(q == doctest::Approx(kRingStiffness * 72.0 * kPi * kPi).epsilon(1e-12));
    const RingPerturbation p2 = RingPerturbation::mode(2, 0.2);
    const double base = e_tot_functional(RingPerturbation::mode(2, 0.0));
    CHECK((e_tot_functional(p2) - base) == doctest::Approx(4.0 * (e_tot_functional(p) - base)).epsilon(1e-12));
    CHECK(e_tot_reduced(p) - e_tot_reduced(RingPerturbation::mode(2, 0.0)) ==
          doctest::Approx(e_tot_functional(p) - base).epsilon(1e-12));
    CHECK(e_tot_functional(p, NonlocalMethod::Direct) == doctest::Approx(e_tot_functional(p)).epsilon(1e-6));
}

TEST_CASE("mode spectrum") {
    MagnetSpec spec;
    const ModeSpectrum m = mode_frequencies(spec, 50, 6);
    CHECK(m.at(1) == 0.0);
    CHECK(m.at(2) == doctest::Approx(m.omega2_closed).epsilon(1e-12));
    CHECK(m.at(2) == doctest::Approx(36.9).epsilon(2e-3));
    CHECK(m.at(3) / m.at(2) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
    for (int k = 3; k <= 6; ++k) {
        CHECK(m.at(k) > m.at(k - 1));
        const double kk = static_cast<double>(k) * k;
        const double ratio = (m.at(k) * m.at(k)) / (m.at(2) * m.at(2));
        CHECK(ratio == doctest::Approx((kk * (kk - 1.0) * (kk - 1.0) / (kk + 1.0)) / 7.2).epsilon(1e-14));
    }
    CHECK_THROWS_AS(mode_frequencies(spec, 50, 1), InvalidParameter);
    spec.a = 0.0;
    CHECK_THROWS_AS(mode_frequencies(spec, 50, 3), InvalidParameter);
}

TEST_CASE("discrete mode frequencies") {
    MagnetSpec spec;
    const ModeSpectrum m = mode_frequencies(spec, 40, 3);
    const double w2 = discrete_mode_frequency(40, 2, spec);
    const double w3 = discrete_mode_frequency(40, 3, spec);
    CHECK(std::fabs(w2 / m.at(2) - 1.0) <= 0.05);
    CHECK(std::fabs(w3 / m.at(3) - 1.0) <= 0.05);
    CHECK(std::fabs(w3 / w2 / std::sqrt(8.0) - 1.0) <= 0.05);
    CHECK(discrete_mode_frequency(40, 1, spec) < 1e-2 * w2);
    const ModeFit fit = discrete_mode_fit(40, 2, spec);
    CHECK(fit.stiffness == doctest::Approx(fit.predicted_stiffness).epsilon(0.02));
    CHECK(fit.modal_mass == doctest::Approx(std::pow(spec.a, 5) * 64000.0 * spec.rho * 5.0 / (3.0 * kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(discrete_mode_frequency(12, 2, spec), InvalidParameter);
    CHECK_THROWS_AS(discrete_mode_frequency(40, 11, spec), InvalidParameter);
}
