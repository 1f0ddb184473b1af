#include "magchain/continuum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "magchain/constants.hpp"
#include "magchain/errors.hpp"
#include "magchain/summation.hpp"

namespace magchain {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Finite part of the integral of tau^q over [0, L].
double power_finite_part(int q, double L) {
    if (q == -1) return std::log(L);
    return std::pow(L, q + 1) / (q + 1);
}

double far_integral(const std::function<double(double)>& f, double a, double b, const FinitePartOptions& opt) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(f, a, b, static_cast<unsigned>(opt.max_depth), opt.tol, &err);
    if (!std::isfinite(v) || err > opt.fail_above)
        throw NumericalFailure("finite-part quadrature did not reach tolerance on [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "]",
                               err);
    return v;
}

}  // namespace

double finite_part_integral(const FinitePartIntegrand& f, double s, double lo, double hi, const FinitePartOptions& opt) {
    if (f.exponent < 0 || f.exponent > 8) throw InvalidParameter("unresolved singular order " + std::to_string(f.exponent));
    if (!(lo < hi) || s < lo || s > hi) throw InvalidParameter("singular point must lie inside the integration interval");
    if (!f.regular || !f.regular_jet) throw InvalidParameter("finite-part integrand needs value and jet callbacks");
    const int p = f.exponent;
    const int sigma = f.signed_kernel ? 1 : 0;
    const double right = std::min(opt.near_window, hi - s);
    const double left = std::min(opt.near_window, s - lo);

    const Series g = f.regular_jet(std::max(opt.jet_order, p + 2));
    std::vector<double> near;
    near.reserve(static_cast<std::size_t>(g.order()) + 1);
    for (int j = 0; j <= g.order(); ++j) {
        double side = 0.0;
        if (right > 0.0) side += power_finite_part(j - p, right);
        if (left > 0.0) side += ((sigma + j) % 2 == 0 ? 1.0 : -1.0) * power_finite_part(j - p, left);
        near.push_back(g[j] * side);
    }

    auto integrand = [&](double eta) {
        const double tau = eta - s;
        const double a = std::fabs(tau);
        double v = f.regular(eta) / std::pow(a, p);
        if (sigma == 1 && tau < 0.0) v = -v;
        return v;
    };
    const double far = far_integral(integrand, lo, s - left, opt) + far_integral(integrand, s + right, hi, opt);
    return pairwise_sum(near) + far;
}

namespace {

// Euler-Maclaurin endpoint corrections for sum_{j >= 0} (d0 + j)^-p, without the integral term.
double euler_maclaurin_endpoint(int p, double d0) {
    const double pp = p;
    const double f = std::pow(d0, -pp);
    const double f1 = -pp * std::pow(d0, -pp - 1.0);
    const double f3 = -pp * (pp + 1.0) * (pp + 2.0) * std::pow(d0, -pp - 3.0);
    const double f5 = -pp * (pp + 1.0) * (pp + 2.0) * (pp + 3.0) * (pp + 4.0) * std::pow(d0, -pp - 5.0);
    return f / 2.0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0;
}

double tail(int p, double d0) {
    if (p == 1) return -std::log(d0) + euler_maclaurin_endpoint(1, d0);
    return std::pow(d0, 1.0 - p) / (p - 1.0) + euler_maclaurin_endpoint(p, d0);
}

}  // namespace

double lattice_sum(int k, double X, int K) {
    if (k < 1 || k > 3) throw InvalidParameter("lattice sum order must be 1, 2 or 3");
    if (K < 10) throw InvalidParameter("lattice sum truncation must be at least 10");
    if (!std::isfinite(X)) throw InvalidParameter("lattice sum argument must be finite");
    const double x = X - std::floor(X);
    if (x < 1e-9 || 1.0 - x < 1e-9)
        throw SingularEvaluation("lattice sum at an integer argument; use regularized_limit");
    // Right neighbours i = m >= 1 sit at distance m - x, left ones i = -m <= 0 at x + m.
    std::vector<double> terms;
    terms.reserve(2 * static_cast<std::size_t>(K) + 2);
    const double right_sign = k == 2 ? -1.0 : 1.0;
    for (int m = 1; m <= K; ++m) terms.push_back(right_sign * std::pow(m - x, -k));
    for (int m = 0; m < K; ++m) terms.push_back(std::pow(x + m, -k));
    terms.push_back(right_sign * tail(k, K + 1 - x));
    terms.push_back(tail(k, K + x));
    return pairwise_sum(terms);
}

double regularized_limit(int k) {
    switch (k) {
        case 3: return 2.0 * kZeta3;
        case 2: return 0.0;
        case 1: return 2.0 * kEulerGamma;
        default: throw InvalidParameter("lattice sum order must be 1, 2 or 3");
    }
}

namespace {

struct LocalFrame {
    Vec3 r1, r2, r3;
    Vec3 m0, m1, m2;
};

LocalFrame local_frame(const ContinuumCurve& curve, double s) {
    const SeriesVec3 r = curve.jet(s, 3);
    const SeriesVec3 m = curve.moment_jet(s, 2);
    return {vec_at(r, 1), 2.0 * vec_at(r, 2), 6.0 * vec_at(r, 3), vec_at(m, 0), vec_at(m, 1), 2.0 * vec_at(m, 2)};
}

void check_interior(const ContinuumCurve& curve, double s, int n) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    if (curve.closed()) return;
    const double margin = kInteriorGaps / n;
    if (s < margin || s > 1.0 - margin)
        throw BoundaryLayerDomain("s = " + std::to_string(s) + " lies within " + std::to_string(kInteriorGaps) +
                                  " gaps of an end of the open curve");
}

std::array<double, 2> eta_range(const ContinuumCurve& curve, double s) {
    if (curve.closed()) return {s - 0.5, s + 0.5};
    return {0.0, 1.0};
}

// r(s + tau) - r(s) = tau D(tau).
SeriesVec3 chord_factor(const ContinuumCurve& curve, double s, int order) {
    return shift_down(curve.jet(s, order + 1), 1);
}

}  // namespace

PhiAmplitudes phi_amplitudes(const ContinuumCurve& curve, double s, int n) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    const LocalFrame f = local_frame(curve, s);
    const double n2 = 1.0 / (static_cast<double>(n) * n);
    const double k2 = norm_sq(f.r2);
    const double r1m = dot(f.r1, f.m0);
    PhiAmplitudes a;
    a.phi3 = 3.0 * r1m * f.r1 - f.m0 + n2 * (-5.0 / 8.0 * k2 * r1m * f.r1 + k2 / 8.0 * f.m0);
    a.phi2 = -1.5 * dot(f.r2, f.m0) * f.r1 - 3.0 * dot(f.r1, f.m1) * f.r1 - 1.5 * r1m * f.r2 + f.m1;
    a.phi1 = 0.5 * dot(f.r3, f.m0) * f.r1 + 1.5 * dot(f.r1, f.m2) * f.r1 + 0.5 * r1m * f.r3 +
             1.5 * dot(f.r2, f.m1) * f.r1 + 0.75 * dot(f.r2, f.m0) * f.r2 + 1.5 * dot(f.r1, f.m1) * f.r2 +
             5.0 / 8.0 * k2 * r1m * f.r1 - 0.5 * f.m2 - k2 / 8.0 * f.m0;
    return a;
}

Vec3 field_integral(const ContinuumCurve& curve, double s, const FinitePartOptions& options) {
    const Vec3 r0 = curve.position(s);
    auto kernel = [&curve, r0](double eta) {
        const Vec3 d = r0 - curve.position(eta);
        const Vec3 m = curve.moment(eta);
        const double r2 = norm_sq(d);
        const double r = std::sqrt(r2);
        return (3.0 * dot(d, m) * d - r2 * m) / (r2 * r2 * r);
    };
    SeriesVec3 g;
    bool have_jet = false;
    auto jet = [&](int order) {
        if (!have_jet) {
            const SeriesVec3 D = chord_factor(curve, s, order);
            const SeriesVec3 m = curve.moment_jet(s, order);
            const Series d2 = dot(D, D);
            const SeriesVec3 num = 3.0 * dot(D, m) * D - d2 * m;
            g = pow(d2, -2.5) * num;
            have_jet = true;
        }
    };
    const auto [lo, hi] = eta_range(curve, s);
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) {
        FinitePartIntegrand f;
        f.exponent = 3;
        f.regular = [&, c](double eta) {
            const Vec3 k = kernel(eta);
            const double a = std::pow(std::fabs(eta - s), 3);
            return a * (c == 0 ? k.x : c == 1 ? k.y : k.z);
        };
        f.regular_jet = [&, c](int order) {
            jet(order);
            return g[static_cast<std::size_t>(c)];
        };
        out[static_cast<std::size_t>(c)] = finite_part_integral(f, s, lo, hi, options);
    }
    return {out[0], out[1], out[2]};
}

Vec3 continuum_field(const ContinuumCurve& curve, double s, int n, FieldMode mode, const FinitePartOptions& options) {
    check_interior(curve, s, n);
    const PhiAmplitudes phi = phi_amplitudes(curve, s, n);
    const double nn = n;
    const double n2 = 1.0 / (nn * nn);
    const Vec3 integral = field_integral(curve, s, options);
    if (mode == FieldMode::Regularized) {
        return 2.0 * kZeta3 * phi.phi3 + 2.0 * std::log(nn) * n2 * phi.phi1 + 2.0 * kEulerGamma * n2 * phi.phi1 +
               n2 * integral;
    }
    const double X = s * nn;
    return lattice_sum(3, X) * phi.phi3 + lattice_sum(2, X) / nn * phi.phi2 + 2.0 * n2 * std::log(nn) * phi.phi1 +
           n2 * lattice_sum(1, X) * phi.phi1 + n2 * integral;
}

double energy_integral(const ContinuumCurve& curve, double s, const FinitePartOptions& options) {
    const Vec3 r0 = curve.position(s);
    const Vec3 t0 = curve.derivative(s, 1);
    FinitePartIntegrand f;
    f.exponent = 3;
    f.regular = [&curve, r0, t0, s](double eta) {
        const Vec3 d = r0 - curve.position(eta);
        const Vec3 t = curve.derivative(eta, 1);
        const double r2 = norm_sq(d);
        const double r = std::sqrt(r2);
        const double a = std::pow(std::fabs(eta - s), 3);
        return a * (3.0 * dot(d, t) * dot(d, t0) - r2 * dot(t, t0)) / (r2 * r2 * r);
    };
    f.regular_jet = [&curve, s, t0](int order) {
        const SeriesVec3 D = chord_factor(curve, s, order);
        const SeriesVec3 t = magchain::derivative(curve.jet(s, order + 1));
        const Series d2 = dot(D, D);
        Series dt0(order);
        for (int c = 0; c < 3; ++c) dt0 += (c == 0 ? t0.x : c == 1 ? t0.y : t0.z) * D[static_cast<std::size_t>(c)];
        Series tt0(order);
        for (int c = 0; c < 3; ++c) tt0 += (c == 0 ? t0.x : c == 1 ? t0.y : t0.z) * t[static_cast<std::size_t>(c)];
        return pow(d2, -2.5) * (3.0 * dot(D, t) * dt0 - d2 * tt0);
    };
    const auto [lo, hi] = eta_range(curve, s);
    return finite_part_integral(f, s, lo, hi, options);
}

double energy_density(const ContinuumCurve& curve, double s, int n, const FinitePartOptions& options) {
    check_interior(curve, s, n);
    const double n2 = 1.0 / (static_cast<double>(n) * n);
    const double k2 = norm_sq(curve.derivative(s, 2));
    return -4.0 * kZeta3 + n2 * kZeta3 / 2.0 * k2 - n2 * energy_integral(curve, s, options);
}

EnergyBreakdown continuum_total_energy(const ContinuumCurve& curve, int n, const TotalEnergyOptions& options) {
    if (!curve.closed())
        throw DivergentFunctional("the nonlocal energy integral diverges at the ends of an open curve");
    if (n < 1) throw InvalidParameter("n must be >= 1");
    if (options.quadrature_points < 4) throw InvalidParameter("need at least 4 quadrature points");
    const int N = options.quadrature_points;
    std::vector<double> bend;
    std::vector<double> nonlocal;
    for (int i = 0; i < N; ++i) {
        const double s = static_cast<double>(i) / N;
        bend.push_back(norm_sq(curve.derivative(s, 2)));
        nonlocal.push_back(energy_integral(curve, s, options.finite_part));
    }
    const double inv_n = 1.0 / n;
    EnergyBreakdown e;
    e.ground = -2.0 * kZeta3 * n;
    e.local = inv_n * kZeta3 / 4.0 * pairwise_sum(bend) / N;
    e.nonlocal = -inv_n * 0.5 * pairwise_sum(nonlocal) / N;
    e.total = e.ground + e.local + e.nonlocal;
    return e;
}

double ring_energy_closed_form(int n) {
    if (n < 3) throw InvalidParameter("ring needs n >= 3");
    return -2.0 * kZeta3 * n + (kZeta3 + 1.0 / 6.0) * kPi * kPi / n;
}

}  // namespace magchain
