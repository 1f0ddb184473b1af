#include "magchain/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "magchain/summation.hpp"

namespace magchain {

namespace {

void check_index(const ChainConfig& config, std::size_t i) {
    if (i >= config.count())
        throw InvalidParameter("magnet index " + std::to_string(i) + " out of range [0, " +
                               std::to_string(config.count()) + ")");
}

double pair_energy(const ChainConfig& c, std::size_t i, std::size_t j) {
    const Vec3 d = c.positions[i] - c.positions[j];
    const double r2 = norm_sq(d);
    const double r = std::sqrt(r2);
    if (r < kSingularDistance) throw SingularEvaluation("magnets " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    const double n3 = 1.0 / (static_cast<double>(c.n) * c.n * c.n);
    const Vec3& mi = c.moments[i];
    const Vec3& mj = c.moments[j];
    return -n3 * (3.0 * dot(d, mi) * dot(d, mj) - r2 * dot(mi, mj)) / (r2 * r2 * r);
}

}  // namespace

Vec3 dipole_field_at(const Vec3& source_pos, const Vec3& source_moment, const Vec3& point, int n) {
    const Vec3 d = point - source_pos;
    const double r2 = norm_sq(d);
    const double r = std::sqrt(r2);
    if (r < kSingularDistance) throw SingularEvaluation("field evaluated at a dipole centre");
    const double n3 = 1.0 / (static_cast<double>(n) * n * n);
    return n3 * (3.0 * dot(d, source_moment) * d - r2 * source_moment) / (r2 * r2 * r);
}

Vec3 total_field_at(const ChainConfig& config, const Vec3& point) {
    std::vector<Vec3> terms;
    terms.reserve(config.count());
    for (std::size_t j = 0; j < config.count(); ++j)
        terms.push_back(dipole_field_at(config.positions[j], config.moments[j], point, config.n));
    return pairwise_sum(terms);
}

Vec3 regularized_field_at(const ChainConfig& config, std::size_t i) {
    check_index(config, i);
    std::vector<Vec3> terms;
    terms.reserve(config.count());
    for (std::size_t j = 0; j < config.count(); ++j) {
        if (j == i) continue;
        terms.push_back(dipole_field_at(config.positions[j], config.moments[j], config.positions[i], config.n));
    }
    return pairwise_sum(terms);
}

double per_magnet_energy(const ChainConfig& config, std::size_t i) {
    return -dot(config.moments[i], regularized_field_at(config, i));
}

double total_energy(const ChainConfig& config) {
    const std::size_t m = config.count();
    std::vector<double> rows(m, 0.0);
    std::vector<double> row;
    row.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        row.clear();
        for (std::size_t j = i + 1; j < m; ++j) row.push_back(pair_energy(config, i, j));
        rows[i] = pairwise_sum(row);
    }
    return pairwise_sum(rows);
}

std::vector<Vec3> orientation_gradient(const ChainConfig& config) {
    std::vector<Vec3> g(config.count());
    for (std::size_t i = 0; i < config.count(); ++i) {
        const Vec3 raw = -regularized_field_at(config, i);
        const Vec3& m = config.moments[i];
        g[i] = raw - dot(raw, m) * m;
    }
    return g;
}

namespace {

double inf_norm(const std::vector<Vec3>& g) {
    double v = 0.0;
    for (const Vec3& x : g) v = std::max(v, max_abs_component(x));
    return v;
}

double sum_sq(const std::vector<Vec3>& g) {
    std::vector<double> t;
    t.reserve(g.size());
    for (const Vec3& x : g) t.push_back(norm_sq(x));
    return pairwise_sum(t);
}

}  // namespace

OptimizeResult optimize_orientations(const ChainConfig& config, const OptimizeOptions& options) {
    config.check_well_formed();
    if (!(options.tol > 0.0)) throw InvalidParameter("optimizer tolerance must be positive");
    OptimizeResult cur{config, total_energy(config), 0.0, 0};
    std::vector<Vec3> g = orientation_gradient(cur.config);
    cur.gradient_norm = inf_norm(g);
    double alpha = 0.1;
    ChainConfig trial = cur.config;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (cur.gradient_norm < options.tol) return cur;
        const double gsq = sum_sq(g);
        bool accepted = false;
        while (alpha > 1e-16) {
            for (std::size_t i = 0; i < g.size(); ++i) trial.moments[i] = normalized(cur.config.moments[i] - alpha * g[i]);
            const double e = total_energy(trial);
            const double predicted = options.armijo_c * alpha * gsq;
            if (alpha * gsq < 1e-13 * std::max(1.0, std::fabs(cur.energy))) {
                // Below energy resolution: require a decrease in the gradient norm instead.
                accepted = inf_norm(orientation_gradient(trial)) < cur.gradient_norm;
            } else {
                accepted = e <= cur.energy - predicted;
            }
            if (accepted) {
                cur.config.moments.swap(trial.moments);
                trial.moments = cur.config.moments;
                cur.energy = e;
                break;
            }
            alpha *= options.shrink;
        }
        if (!accepted) break;
        g = orientation_gradient(cur.config);
        cur.gradient_norm = inf_norm(g);
        cur.iterations = it + 1;
        alpha = std::min(alpha / options.shrink, 1.0);
    }
    if (cur.gradient_norm < options.tol) return cur;
    throw NonConvergence("orientation optimizer stopped with projected gradient " + std::to_string(cur.gradient_norm) +
                             " after " + std::to_string(cur.iterations) + " iterations",
                         cur);
}

ChainConfig tilt_moments(const ChainConfig& config, double angle, std::uint64_t seed) {
    ChainConfig out = config;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Vec3& m : out.moments) {
        Vec3 e;
        do {
            const Vec3 v{normal(rng), normal(rng), normal(rng)};
            e = v - dot(v, m) * m;
        } while (norm(e) < 1e-6);
        e = normalized(e);
        m = normalized(std::cos(angle) * m + std::sin(angle) * e);
    }
    return out;
}

double max_line_angle(const std::vector<Vec3>& moments, const std::vector<Vec3>& reference) {
    if (moments.size() != reference.size()) throw InvalidParameter("moment and reference lists differ in length");
    double worst = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) worst = std::max(worst, line_angle(moments[i], reference[i]));
    return worst;
}

double energy_scale(const MagnetSpec& spec) {
    spec.validate();
    return kPi * spec.a * spec.a * spec.a * spec.B * spec.B / (18.0 * spec.mu0);
}

double field_scale(const MagnetSpec& spec) {
    spec.validate();
    return spec.B / 24.0;
}

double redimensionalize_energy(double value, const MagnetSpec& spec) { return value * energy_scale(spec); }

Vec3 redimensionalize_field(const Vec3& value, const MagnetSpec& spec) { return field_scale(spec) * value; }

double redimensionalize_frequency(double omega, const MagnetSpec& spec) {
    spec.validate();
    return omega;
}

}  // namespace magchain
