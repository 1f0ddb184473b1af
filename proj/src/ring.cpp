#include "magchain/ring.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "magchain/constants.hpp"
#include "magchain/discrete.hpp"
#include "magchain/errors.hpp"
#include "magchain/summation.hpp"

namespace magchain {

int kernel_row(Kernel k) {
    switch (k) {
        case Kernel::K00:
        case Kernel::K01:
        case Kernel::K02: return 0;
        case Kernel::K11:
        case Kernel::K12: return 1;
        case Kernel::K22: return 2;
    }
    return 0;
}

int kernel_col(Kernel k) {
    switch (k) {
        case Kernel::K00: return 0;
        case Kernel::K01:
        case Kernel::K11: return 1;
        case Kernel::K02:
        case Kernel::K12:
        case Kernel::K22: return 2;
    }
    return 0;
}

std::string kernel_name(Kernel k) { return "K" + std::to_string(kernel_row(k)) + std::to_string(kernel_col(k)); }

namespace {

bool cubic_kernel(Kernel k) { return k == Kernel::K02 || k == Kernel::K22; }

template <class T>
T numerator(Kernel k, const T& t) {
    using std::cos;
    using std::sin;
    switch (k) {
        case Kernel::K00: return (115.0 + 76.0 * cos(t) + cos(2.0 * t)) / 128.0;
        case Kernel::K01: return 3.0 * (22.0 * sin(t) + sin(2.0 * t)) / 64.0;
        case Kernel::K11: return 3.0 * (-35.0 + 3.0 * cos(2.0 * t)) / 128.0;
        case Kernel::K02: return (3.0 + cos(t)) / 8.0;
        case Kernel::K12: return 3.0 * (-6.0 * sin(t) + sin(2.0 * t)) / 32.0;
        case Kernel::K22: return (3.0 - cos(t)) / 8.0;
    }
    throw InvalidParameter("unknown kernel");
}

}  // namespace

Series kernel_series(Kernel k, const Series& t) {
    const Series half = sin(0.5 * t);
    return numerator(k, t) / pow(half, cubic_kernel(k) ? 3 : 5);
}

double kernel_eval(const KernelId& id, double t) {
    if (id.derivative < 0 || id.derivative > 8) throw InvalidParameter("kernel derivative order must be in 0..8");
    if (!(t >= 1e-6 && t <= 2.0 * kPi - 1e-6))
        throw SingularEvaluation("kernel evaluated within 1e-6 of its singularity at t = " + std::to_string(t));
    return kernel_series(id.kernel, Series::variable(t, id.derivative)).derivative_value(id.derivative);
}

double kernel_regular(Kernel k, double t) {
    if (t == 0.0) return kernel_regular_series(k, 0)[0];
    const double s = std::sin(0.5 * t);
    const double ratio = t / s;
    const double num = numerator(k, t);
    if (cubic_kernel(k)) return t * t * num * ratio * ratio * ratio;
    return num * std::pow(ratio, 5);
}

Series kernel_regular_series(Kernel k, int order) {
    const Series t = Series::variable(0.0, order + 1);
    const Series sinc_half = sin(0.5 * t).shift_down(1);  // sin(t/2) / t
    const Series num = numerator(k, t).truncated(order);
    if (!cubic_kernel(k)) return num * pow(sinc_half, -5);
    Series t2(order);
    if (order >= 2) t2[2] = 1.0;
    return t2 * num * pow(sinc_half, -3);
}

double kernel_identity_residual(double t) {
    if (!(t >= 0.3 && t <= 2.0 * kPi - 0.3)) throw InvalidParameter("identity residual is only evaluated on [0.3, 2 pi - 0.3]");
    auto d = [t](Kernel k, int order) { return kernel_eval({k, order}, t); };
    return d(Kernel::K00, 0) + d(Kernel::K01, 1) - d(Kernel::K11, 2) + d(Kernel::K02, 2) - d(Kernel::K12, 3) +
           d(Kernel::K22, 4);
}

double e_loc(const RingPerturbation& pert) {
    pert.validate();
    return 4.0 * kPi * kPi + 2.0 * pert.epsilon * pert.epsilon * kPi * pert.bending_integral();
}

double nonlocal_single_integrals(const RingPerturbation& pert, int outer_points) {
    if (outer_points < 4) throw InvalidParameter("need at least 4 outer quadrature points");
    std::vector<double> terms;
    for (int i = 0; i < outer_points; ++i) {
        const double th = 2.0 * kPi * i / outer_points;
        const double w0 = pert.w(th, 0);
        const double w1 = pert.w(th, 1);
        const double w2 = pert.w(th, 2);
        terms.push_back(7.0 / 240.0 * w0 * w0 - 37.0 / 480.0 * w1 * w1 + 1.0 / 12.0 * w2 * w2);
    }
    return 2.0 * kPi / outer_points * pairwise_sum(terms);
}

double nonlocal_double_integral(const RingPerturbation& pert, const NonlocalOptions& options) {
    if (options.outer_points < 4) throw InvalidParameter("need at least 4 outer quadrature points");
    const int order = options.finite_part.jet_order;
    std::array<Series, 6> H;
    for (std::size_t q = 0; q < 6; ++q) H[q] = kernel_regular_series(kAllKernels[q], order);

    const bool inner_y = options.order == IntegrationOrder::InnerY;
    std::vector<double> outer;
    outer.reserve(static_cast<std::size_t>(options.outer_points));
    for (int i = 0; i < options.outer_points; ++i) {
        const double v = 2.0 * kPi * i / options.outer_points;
        // InnerY: v = x, inner variable y = x - t. InnerX: v = y, inner variable x = y + t.
        std::array<double, 3> fixed{};
        for (int d = 0; d < 3; ++d) fixed[static_cast<std::size_t>(d)] = pert.w(v, d);
        const double sign = inner_y ? -1.0 : 1.0;

        FinitePartIntegrand f;
        f.exponent = 5;
        f.regular = [&](double t) {
            double acc = 0.0;
            for (Kernel k : kAllKernels) {
                const int a = inner_y ? kernel_row(k) : kernel_col(k);
                const int b = inner_y ? kernel_col(k) : kernel_row(k);
                acc += fixed[static_cast<std::size_t>(a)] * kernel_regular(k, t) * pert.w(v + sign * t, b);
            }
            return acc;
        };
        f.regular_jet = [&](int jet_order) {
            Series arg(jet_order, v);
            if (jet_order >= 1) arg[1] = sign;
            std::array<Series, 3> moving;
            for (int d = 0; d < 3; ++d) moving[static_cast<std::size_t>(d)] = pert.w_series(arg, d);
            Series acc(jet_order);
            for (std::size_t q = 0; q < 6; ++q) {
                const Kernel k = kAllKernels[q];
                const int a = inner_y ? kernel_row(k) : kernel_col(k);
                const int b = inner_y ? kernel_col(k) : kernel_row(k);
                acc += fixed[static_cast<std::size_t>(a)] * (H[q] * moving[static_cast<std::size_t>(b)]);
            }
            return acc;
        };
        outer.push_back(finite_part_integral(f, 0.0, -kPi, kPi, options.finite_part));
    }
    return 2.0 * kPi / options.outer_points * pairwise_sum(outer);
}

double e_nonloc(const RingPerturbation& pert, NonlocalMethod method, const NonlocalOptions& options) {
    pert.validate();
    const double eps2 = pert.epsilon * pert.epsilon;
    if (method == NonlocalMethod::Simplified) return kPi * kPi / 3.0 + eps2 * kPi / 6.0 * pert.bending_integral();
    if (eps2 == 0.0) return kPi * kPi / 3.0;
    const double quad = nonlocal_single_integrals(pert, options.outer_points) + nonlocal_double_integral(pert, options);
    return kPi * kPi / 3.0 + eps2 * kPi * quad;
}

double e_tot_functional(const RingPerturbation& pert, NonlocalMethod method, const NonlocalOptions& options) {
    return kZeta3 / 4.0 * e_loc(pert) + 0.5 * e_nonloc(pert, method, options);
}

double e_tot_reduced(const RingPerturbation& pert) { return kRingStiffness * e_loc(pert); }

double ModeSpectrum::at(int k) const {
    if (k < 1 || k > static_cast<int>(omega.size())) throw InvalidParameter("mode index out of range");
    return omega[static_cast<std::size_t>(k) - 1];
}

double mode_prefactor(const MagnetSpec& spec, int n) {
    spec.validate();
    if (n < 3) throw InvalidParameter("ring needs n >= 3");
    const double n4 = std::pow(static_cast<double>(n), 4);
    return std::pow(kPi, 4) * spec.B * spec.B / (3.0 * spec.mu0 * spec.a * spec.a * spec.rho * n4) * kRingStiffness;
}

ModeSpectrum mode_frequencies(const MagnetSpec& spec, int n, int k_max) {
    if (k_max < 2) throw InvalidParameter("k_max must be >= 2");
    const double pre = mode_prefactor(spec, n);
    ModeSpectrum m;
    m.n = n;
    for (int k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k) * k;
        m.omega.push_back(std::sqrt(pre * kk * (kk - 1.0) * (kk - 1.0) / (kk + 1.0)));
    }
    const double nn = n;
    m.omega2_closed = kPi * kPi * spec.B / (spec.a * nn * nn) * std::sqrt((6.0 * kZeta3 + 1.0) / (10.0 * spec.mu0 * spec.rho));
    return m;
}

ModeFit discrete_mode_fit(int n, int k, const MagnetSpec& spec, const ModeFitOptions& options) {
    spec.validate();
    if (n < 16) throw InvalidParameter("discrete mode fit needs n >= 16");
    if (k < 1 || 4 * k > n) throw InvalidParameter("mode number must satisfy 1 <= k <= n/4");
    if (!(options.epsilon > 0.0)) throw InvalidParameter("fit amplitude must be positive");
    const double h = options.epsilon;
    std::array<double, 5> E{};
    for (int m = -2; m <= 2; ++m) {
        const RingPerturbation p = RingPerturbation::mode(k, std::fabs(m) * h, m < 0 ? -1.0 : 1.0);
        E[static_cast<std::size_t>(m + 2)] = total_energy(build_perturbed_ring(n, p, options.projection));
    }
    ModeFit fit;
    fit.stiffness = (-E[4] + 16.0 * E[3] - 30.0 * E[2] + 16.0 * E[1] - E[0]) / (12.0 * h * h) / 2.0;
    fit.fit_residual = std::max(std::fabs(E[3] - E[1]) / (2.0 * h * h), std::fabs(E[4] - E[0]) / (8.0 * h * h));
    const double kk = static_cast<double>(k) * k;
    fit.predicted_stiffness = kRingStiffness * 2.0 * kPi * kPi * kk * (kk - 1.0) * (kk - 1.0) / n;
    if (fit.fit_residual > 1e-3 * std::fabs(fit.stiffness) + 1e-5)
        throw NumericalFailure("energy samples are not even in the amplitude", fit.fit_residual);
    const double nn = n;
    fit.modal_mass = std::pow(spec.a, 5) * nn * nn * nn * spec.rho * (kk + 1.0) / (3.0 * kPi);
    fit.omega = std::sqrt(std::max(fit.stiffness, 0.0) * energy_scale(spec) / fit.modal_mass);
    return fit;
}

double discrete_mode_frequency(int n, int k, const MagnetSpec& spec, const ModeFitOptions& options) {
    return discrete_mode_fit(n, k, spec, options).omega;
}

}  // namespace magchain
