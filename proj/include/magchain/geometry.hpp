#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "magchain/constants.hpp"
#include "magchain/series.hpp"
#include "magchain/vec3.hpp"

namespace magchain {

/// Dimensional parameters of one spherical magnet.
struct MagnetSpec {
    double a = 1.0e-3;   // sphere radius, m
    double B = 1.0;      // characteristic field strength, T
    double rho = 7500.0; // density, kg / m^3
    double mu0 = kMu0;   // T m / A

    void validate() const;
};

enum class Topology { Open, Ring };

/// Discrete chain: n+1 magnets for an open chain, n magnets for a ring.
/// Positions are in units of the chain length 2 a n, so contacting
/// neighbours sit n^-1 apart.
struct ChainConfig {
    int n = 0;
    Topology topology = Topology::Open;
    std::vector<Vec3> positions;
    std::vector<Vec3> moments;

    std::size_t count() const noexcept { return positions.size(); }
    /// Throws InvalidParameter unless counts, unit moments and finiteness are consistent.
    void check_well_formed() const;
};

/// w(theta) = sum_k a_k cos(k theta) + b_k sin(k theta), scaled by epsilon in the ring ansatz.
struct RingPerturbation {
    double epsilon = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    static RingPerturbation mode(int k, double epsilon, double amplitude = 1.0, double phase = 0.0);

    int max_wavenumber() const noexcept;
    /// d-th derivative of w at theta.
    double w(double theta, int d = 0) const;
    /// Taylor coefficients of w^(d) composed with a series argument.
    Series w_series(const Series& theta, int d = 0) const;
    /// Radial displacement u = w' + epsilon (-w'^2 + w''^2 / 2) from inextensibility.
    double u(double theta) const;
    Series u_series(const Series& theta) const;
    /// Integral over [0, 2 pi] of w'^2 - 2 w''^2 + w'''^2, from the Fourier coefficients.
    double bending_integral() const;
    /// Same perturbation with w(theta) replaced by w(theta + c).
    RingPerturbation shifted(double c) const;
    void validate() const;
};

ChainConfig build_straight_chain(int n);
ChainConfig build_circular_ring(int n);

struct ProjectionOptions {
    double tolerance = 1e-13;
    int max_sweeps = 10000;
};

ChainConfig build_perturbed_ring(int n, const RingPerturbation& pert, const ProjectionOptions& options = {});

/// Unprojected ansatz R (1 - eps u) (cos(theta + eps w), sin(theta + eps w)) at theta_i = 2 pi i / n.
std::vector<Vec3> perturbed_ring_ansatz(int n, const RingPerturbation& pert, double radius);

double chord_radius(int n);

enum class CurveFamily { Straight, Circle, PerturbedCircle, Sampled };

/// Chord: neighbouring parameter values i/n are exactly n^-1 apart.
/// Arclength: radius 1/(2 pi), so ||r'|| = 1 exactly.
enum class CircleRadius { Chord, Arclength };

struct CurveParams {
    int n = 0;
    CircleRadius radius = CircleRadius::Chord;
    RingPerturbation perturbation;
    std::vector<Vec3> samples;
};

/// Smooth centre-line r(s), s in [0, 1], with tangential moment field m = r' / ||r'||.
class ContinuumCurve {
public:
    using JetFn = std::function<SeriesVec3(double s, int order)>;

    ContinuumCurve(CurveFamily family, bool closed, JetFn jet, double base_radius);

    CurveFamily family() const noexcept { return family_; }
    bool closed() const noexcept { return closed_; }
    /// Circle radius for circle families, infinity for straight lines, 0 for sampled curves.
    double base_radius() const noexcept { return base_radius_; }

    /// Taylor coefficients of r(s + tau) in tau up to the given order.
    SeriesVec3 jet(double s, int order) const;
    /// Taylor coefficients of m(s + tau) in tau.
    SeriesVec3 moment_jet(double s, int order) const;

    Vec3 position(double s) const;
    Vec3 derivative(double s, int k) const;
    Vec3 moment(double s, int k = 0) const;

private:
    CurveFamily family_;
    bool closed_;
    JetFn jet_;
    double base_radius_;
};

ContinuumCurve make_curve(CurveFamily family, const CurveParams& params = {});

Vec3 vec_at(const SeriesVec3& v, int j);
Vec3 eval(const SeriesVec3& v, double t);

struct ValidationReport {
    double max_gap_deviation = 0.0;
    double min_pair_distance = std::numeric_limits<double>::infinity();
    double min_nonneighbour_distance = std::numeric_limits<double>::infinity();
    double max_moment_norm_deviation = 0.0;
    double global_radius = std::numeric_limits<double>::infinity();
    bool overlap = false;
    bool curvature_flag = false;
    bool gaps_ok = false;
    bool moments_ok = false;
};

ValidationReport validate_chain(const ChainConfig& config);

/// CSV with header i,x,y,z,mx,my,mz and 17 significant digits.
void write_chain_csv(const ChainConfig& config, std::ostream& out);
std::string chain_to_csv(const ChainConfig& config);
ChainConfig read_chain_csv(std::istream& in, Topology topology);

}  // namespace magchain
