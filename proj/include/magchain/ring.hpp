#pragma once

#include <string>
#include <vector>

#include "magchain/continuum.hpp"
#include "magchain/geometry.hpp"
#include "magchain/series.hpp"

namespace magchain {

enum class Kernel { K00, K01, K11, K02, K12, K22 };

inline constexpr Kernel kAllKernels[] = {Kernel::K00, Kernel::K01, Kernel::K11, Kernel::K02, Kernel::K12, Kernel::K22};

/// Derivative orders (i, j) multiplying w^(i)(x) w^(j)(y) for each kernel.
int kernel_row(Kernel k);
int kernel_col(Kernel k);
std::string kernel_name(Kernel k);

struct KernelId {
    Kernel kernel = Kernel::K00;
    int derivative = 0;
};

/// Closed form of Kbar composed with a series argument whose constant term is not a multiple of 2 pi.
Series kernel_series(Kernel k, const Series& t);

/// d-th derivative of Kbar at t in (0, 2 pi), at least 1e-6 from either end.
double kernel_eval(const KernelId& id, double t);

/// H(t) = t^5 Kbar(t), smooth on (-2 pi, 2 pi); K(t) = Kbar(t) sgn(t) = H(t) / |t|^5.
double kernel_regular(Kernel k, double t);
/// Taylor coefficients of H at t = 0.
Series kernel_regular_series(Kernel k, int order);

/// K00 + K01' - K11'' + K02'' - K12''' + K22'''' at t in [0.3, 2 pi - 0.3].
double kernel_identity_residual(double t);

double e_loc(const RingPerturbation& pert);

enum class NonlocalMethod { Direct, Simplified };
enum class IntegrationOrder { InnerY, InnerX };

struct NonlocalOptions {
    int outer_points = 64;
    IntegrationOrder order = IntegrationOrder::InnerY;
    FinitePartOptions finite_part{0.5, 32, 1e-13, 20, 1e-8};
};

/// Coefficient of eps^2 pi in E_nonloc coming from the single integrals.
double nonlocal_single_integrals(const RingPerturbation& pert, int outer_points = 64);
/// Sum of the six finite-part double integrals over [0, 2 pi]^2.
double nonlocal_double_integral(const RingPerturbation& pert, const NonlocalOptions& options = {});

double e_nonloc(const RingPerturbation& pert, NonlocalMethod method, const NonlocalOptions& options = {});

/// (zeta(3)/4) E_loc + E_nonloc / 2.
double e_tot_functional(const RingPerturbation& pert, NonlocalMethod method = NonlocalMethod::Simplified,
                        const NonlocalOptions& options = {});
/// (zeta(3)/4 + 1/24) E_loc.
double e_tot_reduced(const RingPerturbation& pert);

struct ModeSpectrum {
    int n = 0;
    /// omega[k - 1] is the frequency of mode k in rad/s.
    std::vector<double> omega;
    /// Lowest nontrivial frequency from its separate closed form.
    double omega2_closed = 0.0;

    double at(int k) const;
};

/// Coefficient multiplying k^2 (k^2 - 1)^2 / (k^2 + 1) in omega_k^2.
double mode_prefactor(const MagnetSpec& spec, int n);

ModeSpectrum mode_frequencies(const MagnetSpec& spec, int n, int k_max);

struct ModeFitOptions {
    double epsilon = 1e-3;
    ProjectionOptions projection{1e-14, 10000};
};

struct ModeFit {
    double omega = 0.0;
    /// Quadratic coefficient of the dimensionless discrete energy in the amplitude.
    double stiffness = 0.0;
    /// Largest odd part |E(mh) - E(-mh)| / (2 (mh)^2), m = 1, 2: what the even
    /// model c0 + c2 x^2 + c4 x^4 leaves unexplained.
    double fit_residual = 0.0;
    /// Same coefficient predicted by (zeta(3)/4 + 1/24) E_loc / n.
    double predicted_stiffness = 0.0;
    /// Modal mass a^5 n^3 rho (k^2 + 1) / (3 pi).
    double modal_mass = 0.0;
};

ModeFit discrete_mode_fit(int n, int k, const MagnetSpec& spec, const ModeFitOptions& options = {});
double discrete_mode_frequency(int n, int k, const MagnetSpec& spec, const ModeFitOptions& options = {});

}  // namespace magchain
