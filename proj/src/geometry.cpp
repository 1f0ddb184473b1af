#include "magchain/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "magchain/errors.hpp"

namespace magchain {

void MagnetSpec::validate() const {
    if (!(a > 0.0) || !(B > 0.0) || !(rho > 0.0) || !(mu0 > 0.0))
        throw InvalidParameter("magnet spec needs a, B, rho, mu0 > 0");
}

void ChainConfig::check_well_formed() const {
    if (n < 1) throw InvalidParameter("chain needs n >= 1");
    const std::size_t expected = topology == Topology::Open ? static_cast<std::size_t>(n) + 1 : static_cast<std::size_t>(n);
    if (positions.size() != expected || moments.size() != expected)
        throw InvalidParameter("chain holds " + std::to_string(positions.size()) + " positions and " +
                               std::to_string(moments.size()) + " moments, expected " + std::to_string(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        if (!is_finite(positions[i]) || !is_finite(moments[i]))
            throw InvalidParameter("non-finite entry at magnet " + std::to_string(i));
        if (std::fabs(norm(moments[i]) - 1.0) > 1e-9)
            throw InvalidParameter("moment " + std::to_string(i) + " is not a unit vector");
    }
}

RingPerturbation RingPerturbation::mode(int k, double epsilon, double amplitude, double phase) {
    if (k < 0) throw InvalidParameter("wavenumber must be non-negative");
    RingPerturbation p;
    p.epsilon = epsilon;
    p.cos_coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    p.sin_coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    p.cos_coeffs[static_cast<std::size_t>(k)] = amplitude * std::cos(phase);
    p.sin_coeffs[static_cast<std::size_t>(k)] = -amplitude * std::sin(phase);
    return p;
}

int RingPerturbation::max_wavenumber() const noexcept {
    return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size())) - 1;
}

namespace {

double coeff(const std::vector<double>& c, int k) {
    return k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : 0.0;
}

void series_sin_cos(const Series& a, Series& s, Series& c) {
    s = sin(a);
    c = cos(a);
}

}  // namespace

double RingPerturbation::w(double theta, int d) const {
    double acc = 0.0;
    for (int k = 0; k <= max_wavenumber(); ++k) {
        const double a = coeff(cos_coeffs, k);
        const double b = coeff(sin_coeffs, k);
        if (a == 0.0 && b == 0.0) continue;
        if (k == 0) {
            if (d == 0) acc += a;
            continue;
        }
        const double arg = k * theta + d * kPi / 2.0;
        acc += std::pow(static_cast<double>(k), d) * (a * std::cos(arg) + b * std::sin(arg));
    }
    return acc;
}

Series RingPerturbation::w_series(const Series& theta, int d) const {
    Series acc(theta.order());
    for (int k = 0; k <= max_wavenumber(); ++k) {
        const double a = coeff(cos_coeffs, k);
        const double b = coeff(sin_coeffs, k);
        if (a == 0.0 && b == 0.0) continue;
        if (k == 0) {
            if (d == 0) acc += a;
            continue;
        }
        Series s;
        Series c;
        series_sin_cos(k * theta + d * kPi / 2.0, s, c);
        acc += std::pow(static_cast<double>(k), d) * (a * c + b * s);
    }
    return acc;
}

double RingPerturbation::u(double theta) const {
    const double w1 = w(theta, 1);
    const double w2 = w(theta, 2);
    return w1 + epsilon * (-w1 * w1 + 0.5 * w2 * w2);
}

Series RingPerturbation::u_series(const Series& theta) const {
    const Series w1 = w_series(theta, 1);
    const Series w2 = w_series(theta, 2);
    return w1 + epsilon * (-1.0 * (w1 * w1) + 0.5 * (w2 * w2));
}

double RingPerturbation::bending_integral() const {
    double acc = 0.0;
    for (int k = 1; k <= max_wavenumber(); ++k) {
        const double a = coeff(cos_coeffs, k);
        const double b = coeff(sin_coeffs, k);
        const double kk = static_cast<double>(k) * k;
        acc += kPi * kk * (kk - 1.0) * (kk - 1.0) * (a * a + b * b);
    }
    return acc;
}

RingPerturbation RingPerturbation::shifted(double c) const {
    RingPerturbation p = *this;
    const int kmax = max_wavenumber();
    p.cos_coeffs.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    p.sin_coeffs.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        const double a = coeff(cos_coeffs, k);
        const double b = coeff(sin_coeffs, k);
        const double ck = std::cos(k * c);
        const double sk = std::sin(k * c);
        p.cos_coeffs[static_cast<std::size_t>(k)] = a * ck + b * sk;
        p.sin_coeffs[static_cast<std::size_t>(k)] = b * ck - a * sk;
    }
    return p;
}

void RingPerturbation::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidParameter("perturbation epsilon must be >= 0");
    for (double v : cos_coeffs)
        if (!std::isfinite(v)) throw InvalidParameter("non-finite perturbation coefficient");
    for (double v : sin_coeffs)
        if (!std::isfinite(v)) throw InvalidParameter("non-finite perturbation coefficient");
}

double chord_radius(int n) { return (1.0 / n) / (2.0 * std::sin(kPi / n)); }

ChainConfig build_straight_chain(int n) {
    if (n < 1) throw InvalidParameter("straight chain needs n >= 1");
    ChainConfig c;
    c.n = n;
    c.topology = Topology::Open;
    for (int i = 0; i <= n; ++i) {
        c.positions.push_back({static_cast<double>(i) / n, 0.0, 0.0});
        c.moments.push_back({1.0, 0.0, 0.0});
    }
    return c;
}

ChainConfig build_circular_ring(int n) {
    if (n < 3) throw InvalidParameter("ring needs n >= 3");
    ChainConfig c;
    c.n = n;
    c.topology = Topology::Ring;
    const double R = chord_radius(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        c.positions.push_back({R * std::cos(th), R * std::sin(th), 0.0});
        c.moments.push_back({-std::sin(th), std::cos(th), 0.0});
    }
    return c;
}

std::vector<Vec3> perturbed_ring_ansatz(int n, const RingPerturbation& pert, double radius) {
    std::vector<Vec3> p;
    p.reserve(static_cast<std::size_t>(n));
    const double eps = pert.epsilon;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * kPi * i / n;
        const double scale = radius * (1.0 - eps * pert.u(th));
        const double phase = th + eps * pert.w(th);
        p.push_back({scale * std::cos(phase), scale * std::sin(phase), 0.0});
    }
    return p;
}

namespace {

double max_cyclic_gap_residual(const std::vector<Vec3>& p, double h) {
    double res = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::fabs(norm(p[(i + 1) % n] - p[i]) - h));
    return res;
}

void relax_chord(std::vector<Vec3>& p, std::size_t i, double h) {
    const std::size_t j = (i + 1) % p.size();
    const Vec3 d = p[j] - p[i];
    const double len = norm(d);
    const double c = 0.5 * (len - h) / len;
    p[i] += c * d;
    p[j] -= c * d;
}

}  // namespace

ChainConfig build_perturbed_ring(int n, const RingPerturbation& pert, const ProjectionOptions& options) {
    if (n < 3) throw InvalidParameter("ring needs n >= 3");
    pert.validate();
    ChainConfig c;
    c.n = n;
    c.topology = Topology::Ring;
    c.positions = perturbed_ring_ansatz(n, pert, chord_radius(n));
    const double h = 1.0 / n;
    const std::size_t count = c.positions.size();
    double residual = max_cyclic_gap_residual(c.positions, h);
    int sweeps = 0;
    while (residual >= options.tolerance) {
        if (sweeps >= options.max_sweeps) throw ConstraintFailure("ring projection did not converge", residual);
        for (std::size_t i = 0; i < count; ++i) relax_chord(c.positions, i, h);
        for (std::size_t i = count; i-- > 0;) relax_chord(c.positions, i, h);
        residual = max_cyclic_gap_residual(c.positions, h);
        ++sweeps;
    }
    c.moments.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        c.moments[i] = normalized(c.positions[(i + 1) % count] - c.positions[(i + count - 1) % count]);
    return c;
}

ContinuumCurve::ContinuumCurve(CurveFamily family, bool closed, JetFn jet, double base_radius)
    : family_(family), closed_(closed), jet_(std::move(jet)), base_radius_(base_radius) {}

SeriesVec3 ContinuumCurve::jet(double s, int order) const { return jet_(s, order); }

SeriesVec3 ContinuumCurve::moment_jet(double s, int order) const {
    const SeriesVec3 r1 = magchain::derivative(jet_(s, order + 1));
    const Series inv = pow(dot(r1, r1), -0.5);
    return inv * r1;
}

Vec3 vec_at(const SeriesVec3& v, int j) { return {v[0][j], v[1][j], v[2][j]}; }

Vec3 eval(const SeriesVec3& v, double t) { return {v[0].eval(t), v[1].eval(t), v[2].eval(t)}; }

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Vec3 ContinuumCurve::position(double s) const { return vec_at(jet_(s, 0), 0); }

Vec3 ContinuumCurve::derivative(double s, int k) const {
    if (k < 0) throw InvalidParameter("derivative order must be non-negative");
    return factorial(k) * vec_at(jet_(s, k), k);
}

Vec3 ContinuumCurve::moment(double s, int k) const {
    if (k < 0) throw InvalidParameter("derivative order must be non-negative");
    return factorial(k) * vec_at(moment_jet(s, k), k);
}

namespace {

ContinuumCurve straight_curve() {
    auto jet = [](double s, int order) {
        SeriesVec3 r{Series::variable(s, order), Series(order), Series(order)};
        return r;
    };
    return ContinuumCurve(CurveFamily::Straight, false, jet, std::numeric_limits<double>::infinity());
}

double circle_radius(const CurveParams& p) {
    if (p.radius == CircleRadius::Arclength) return 1.0 / (2.0 * kPi);
    if (p.n < 3) throw InvalidParameter("chord-radius circle needs n >= 3");
    return chord_radius(p.n);
}

ContinuumCurve circle_curve(const CurveParams& p) {
    const double R = circle_radius(p);
    auto jet = [R](double s, int order) {
        const Series th = 2.0 * kPi * Series::variable(s, order);
        return SeriesVec3{R * cos(th), R * sin(th), Series(order)};
    };
    return ContinuumCurve(CurveFamily::Circle, true, jet, R);
}

ContinuumCurve perturbed_circle_curve(const CurveParams& p) {
    p.perturbation.validate();
    const double R = circle_radius(p);
    auto jet = [R, pert = p.perturbation](double s, int order) {
        const Series th = 2.0 * kPi * Series::variable(s, order);
        const double eps = pert.epsilon;
        const Series scale = R * (1.0 - eps * pert.u_series(th));
        const Series phase = th + eps * pert.w_series(th);
        return SeriesVec3{scale * cos(phase), scale * sin(phase), Series(order)};
    };
    return ContinuumCurve(CurveFamily::PerturbedCircle, true, jet, R);
}

ContinuumCurve sampled_curve(const CurveParams& p) {
    const std::size_t N = p.samples.size();
    if (N < 8) throw InvalidParameter("sampled curve needs at least 8 samples");
    for (const Vec3& v : p.samples)
        if (!is_finite(v)) throw InvalidParameter("non-finite curve sample");
    const std::size_t K = N / 2;
    std::vector<Vec3> A(K + 1);
    std::vector<Vec3> B(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        Vec3 a;
        Vec3 b;
        for (std::size_t j = 0; j < N; ++j) {
            const double arg = 2.0 * kPi * static_cast<double>((k * j) % N) / static_cast<double>(N);
            a += std::cos(arg) * p.samples[j];
            b += std::sin(arg) * p.samples[j];
        }
        const bool edge = k == 0 || (N % 2 == 0 && k == K);
        A[k] = (edge ? 1.0 : 2.0) / static_cast<double>(N) * a;
        B[k] = edge ? Vec3{} : 2.0 / static_cast<double>(N) * b;
    }
    auto jet = [A, B](double s, int order) {
        SeriesVec3 r{Series(order, A[0].x), Series(order, A[0].y), Series(order, A[0].z)};
        const Series th = 2.0 * kPi * Series::variable(s, order);
        for (std::size_t k = 1; k < A.size(); ++k) {
            const Series c = cos(static_cast<double>(k) * th);
            const Series sn = sin(static_cast<double>(k) * th);
            r[0] += A[k].x * c + B[k].x * sn;
            r[1] += A[k].y * c + B[k].y * sn;
            r[2] += A[k].z * c + B[k].z * sn;
        }
        return r;
    };
    return ContinuumCurve(CurveFamily::Sampled, true, jet, 0.0);
}

}  // namespace

ContinuumCurve make_curve(CurveFamily family, const CurveParams& params) {
    switch (family) {
        case CurveFamily::Straight: return straight_curve();
        case CurveFamily::Circle: return circle_curve(params);
        case CurveFamily::PerturbedCircle: return perturbed_circle_curve(params);
        case CurveFamily::Sampled: return sampled_curve(params);
    }
    throw InvalidParameter("unknown curve family");
}

namespace {

double circumradius(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const double twice_area = norm(cross(ab, ac));
    const double lab = norm(ab);
    const double lac = norm(ac);
    const double lbc = norm(c - b);
    const double scale = std::max({lab, lac, lbc});
    if (twice_area <= 1e-14 * scale * scale) return std::numeric_limits<double>::infinity();
    return lab * lac * lbc / (2.0 * twice_area);
}

}  // namespace

ValidationReport validate_chain(const ChainConfig& config) {
    ValidationReport r;
    const std::size_t m = config.count();
    const bool ring = config.topology == Topology::Ring;
    const double h = 1.0 / config.n;
    const std::size_t gaps = ring ? m : (m > 0 ? m - 1 : 0);
    for (std::size_t i = 0; i < gaps; ++i)
        r.max_gap_deviation = std::max(r.max_gap_deviation, std::fabs(norm(config.positions[(i + 1) % m] - config.positions[i]) - h));
    for (std::size_t i = 0; i < config.moments.size(); ++i)
        r.max_moment_norm_deviation = std::max(r.max_moment_norm_deviation, std::fabs(norm(config.moments[i]) - 1.0));

    auto neighbours = [&](std::size_t i, std::size_t j) {
        if (j == i + 1) return true;
        return ring && i == 0 && j == m - 1;
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = norm(config.positions[j] - config.positions[i]);
            r.min_pair_distance = std::min(r.min_pair_distance, d);
            if (!neighbours(i, j)) r.min_nonneighbour_distance = std::min(r.min_nonneighbour_distance, d);
        }
    }

    const auto& p = config.positions;
    if (m >= 3) {
        if (config.n <= 64) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    for (std::size_t k = j + 1; k < m; ++k) r.global_radius = std::min(r.global_radius, circumradius(p[i], p[j], p[k]));
        } else {
            for (std::size_t i = 0; i + 2 < m + (ring ? 2 : 0); ++i)
                r.global_radius = std::min(r.global_radius, circumradius(p[i % m], p[(i + 1) % m], p[(i + 2) % m]));
            std::mt19937_64 rng(0);
            std::uniform_int_distribution<std::size_t> pick(0, m - 1);
            for (int t = 0; t < 100000; ++t) {
                const std::size_t i = pick(rng);
                const std::size_t j = pick(rng);
                const std::size_t k = pick(rng);
                if (i == j || j == k || i == k) continue;
                r.global_radius = std::min(r.global_radius, circumradius(p[i], p[j], p[k]));
            }
        }
    }

    r.overlap = r.min_pair_distance < h * (1.0 - 1e-9);
    r.curvature_flag = r.global_radius < 3.0 * h;
    r.gaps_ok = r.max_gap_deviation <= 1e-10;
    r.moments_ok = r.max_moment_norm_deviation <= 1e-12;
    return r;
}

void write_chain_csv(const ChainConfig& config, std::ostream& out) {
    out << "i,x,y,z,mx,my,mz\n";
    char buf[512];
    for (std::size_t i = 0; i < config.count(); ++i) {
        const Vec3& p = config.positions[i];
        const Vec3& m = config.moments[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, p.x, p.y, p.z, m.x, m.y, m.z);
        out << buf;
    }
}

std::string chain_to_csv(const ChainConfig& config) {
    std::ostringstream os;
    write_chain_csv(config, os);
    return os.str();
}

ChainConfig read_chain_csv(std::istream& in, Topology topology) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("i,x,y,z,mx,my,mz", 0) != 0)
        throw InvalidParameter("chain CSV must start with the header i,x,y,z,mx,my,mz");
    ChainConfig c;
    c.topology = topology;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != 7) throw InvalidParameter("chain CSV row needs 7 columns: " + line);
        if (static_cast<std::size_t>(v[0]) != c.positions.size()) throw InvalidParameter("chain CSV rows out of order");
        c.positions.push_back({v[1], v[2], v[3]});
        c.moments.push_back({v[4], v[5], v[6]});
    }
    c.n = static_cast<int>(topology == Topology::Open ? c.positions.size() - 1 : c.positions.size());
    c.check_well_formed();
    return c;
}

}  // namespace magchain
