#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "magchain/errors.hpp"
#include "magchain/geometry.hpp"
#include "magchain/vec3.hpp"

namespace magchain {

/// Dimensionless distance below which a field evaluation is treated as singular.
inline constexpr double kSingularDistance = 1e-9;

/// n^-3 [3 (d.m) d - |d|^2 m] / |d|^5 with d = point - source_pos.
Vec3 dipole_field_at(const Vec3& source_pos, const Vec3& source_moment, const Vec3& point, int n);

/// Field of every magnet at an arbitrary point (no self-term exclusion).
Vec3 total_field_at(const ChainConfig& config, const Vec3& point);

/// Field at magnet i from all other magnets.
Vec3 regularized_field_at(const ChainConfig& config, std::size_t i);

double per_magnet_energy(const ChainConfig& config, std::size_t i);

/// Sum over unordered pairs of -m_i . B_j(r_i).
double total_energy(const ChainConfig& config);

/// Tangent-plane gradient of total_energy with respect to each moment.
std::vector<Vec3> orientation_gradient(const ChainConfig& config);

struct OptimizeOptions {
    double tol = 1e-8;
    int max_iterations = 100000;
    double armijo_c = 1e-4;
    double shrink = 0.5;
};

struct OptimizeResult {
    ChainConfig config;
    double energy = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, OptimizeResult best)
        : Error(ErrorKind::NonConvergence, what), best_(std::move(best)) {}
    const OptimizeResult& best() const noexcept { return best_; }

private:
    OptimizeResult best_;
};

/// Projected gradient descent with Armijo backtracking on the product of unit
/// spheres; positions stay fixed. Stops when the infinity norm of the
/// projected gradient drops below tol.
OptimizeResult optimize_orientations(const ChainConfig& config, const OptimizeOptions& options = {});

/// Moments rotated away from their current direction by `angle` about a random
/// axis perpendicular to each moment.
ChainConfig tilt_moments(const ChainConfig& config, double angle, std::uint64_t seed);

/// Largest angle between each moment and the given reference directions, modulo sign.
double max_line_angle(const std::vector<Vec3>& moments, const std::vector<Vec3>& reference);

/// Energy scale pi a^3 B^2 / (18 mu0) in joules.
double energy_scale(const MagnetSpec& spec);
/// Field scale B / 24 in tesla.
double field_scale(const MagnetSpec& spec);
double redimensionalize_energy(double value, const MagnetSpec& spec);
Vec3 redimensionalize_field(const Vec3& value, const MagnetSpec& spec);
/// Frequencies are already dimensional; returned unchanged after validating the magnet parameters.
double redimensionalize_frequency(double omega, const MagnetSpec& spec);

}  // namespace magchain
