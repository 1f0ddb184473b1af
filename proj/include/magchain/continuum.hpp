#pragma once

#include <functional>

#include "magchain/geometry.hpp"
#include "magchain/series.hpp"
#include "magchain/vec3.hpp"

namespace magchain {

/// Integrand of the form sgn(eta - s)^signed * |eta - s|^-exponent * g(eta), with g smooth.
struct FinitePartIntegrand {
    int exponent = 0;
    bool signed_kernel = false;
    /// g(eta), only evaluated away from eta = s.
    std::function<double(double eta)> regular;
    /// Taylor coefficients of g(s + tau) in tau up to the requested order.
    std::function<Series(int order)> regular_jet;
};

struct FinitePartOptions {
    /// Half-width of the window around the singular point integrated term by term.
    double near_window = 0.1;
    int jet_order = 24;
    /// Relative tolerance of the adaptive Gauss-Kronrod rule outside the window.
    double tol = 1e-13;
    int max_depth = 20;
    /// Absolute error above which the outer quadrature is reported as failed.
    double fail_above = 1e-8;
};

/// Hadamard finite part of the integral over [lo, hi] of an integrand singular at s in [lo, hi].
/// Near s the local expansion is integrated analytically (the 1/|tau| term gives log of the
/// window width); the remainder is integrated adaptively.
double finite_part_integral(const FinitePartIntegrand& f, double s, double lo, double hi,
                            const FinitePartOptions& options = {});

/// Lambda_k(X) for k in {1, 2, 3} at non-integer X.
double lattice_sum(int k, double X, int K = 10000);

/// lim_{X -> i} of Lambda_k(X) minus its local singular term: 2 zeta(3), 0, 2 gamma.
double regularized_limit(int k);

struct PhiAmplitudes {
    Vec3 phi1;
    Vec3 phi2;
    Vec3 phi3;
};

PhiAmplitudes phi_amplitudes(const ContinuumCurve& curve, double s, int n);

enum class FieldMode { Full, Regularized };

/// Finite-part integral of the dipole kernel of the moment field along the curve, as seen from r(s).
Vec3 field_integral(const ContinuumCurve& curve, double s, const FinitePartOptions& options = {});

Vec3 continuum_field(const ContinuumCurve& curve, double s, int n, FieldMode mode, const FinitePartOptions& options = {});

/// Finite-part integral of the tangent-tangent dipole kernel appearing in the energy density.
double energy_integral(const ContinuumCurve& curve, double s, const FinitePartOptions& options = {});

double energy_density(const ContinuumCurve& curve, double s, int n, const FinitePartOptions& options = {});

struct EnergyBreakdown {
    double ground = 0.0;
    double local = 0.0;
    double nonlocal = 0.0;
    double total = 0.0;
};

struct TotalEnergyOptions {
    int quadrature_points = 64;
    FinitePartOptions finite_part;
};

EnergyBreakdown continuum_total_energy(const ContinuumCurve& curve, int n, const TotalEnergyOptions& options = {});

/// -2 zeta(3) n + (zeta(3) + 1/6) pi^2 / n.
double ring_energy_closed_form(int n);

/// Open curves must keep s at least this many gaps away from either end.
inline constexpr double kInteriorGaps = 5.0;

}  // namespace magchain
