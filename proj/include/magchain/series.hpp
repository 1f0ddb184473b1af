#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace magchain {

/// Truncated power series c_0 + c_1 t + ... + c_N t^N.
///
/// Used as a Taylor-mode automatic differentiation type: evaluating a closed
/// form on Series::variable(x0, N) yields its Taylor coefficients at x0, i.e.
/// f^(j)(x0) / j!. Binary operations truncate to the smaller of the two orders.
class Series {
public:
    Series() = default;
    explicit Series(int order, double constant = 0.0);
    explicit Series(std::vector<double> coefficients);

    static Series variable(double x0, int order);

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    double operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }
    double& operator[](int j) { return c_[static_cast<std::size_t>(j)]; }
    std::span<const double> coefficients() const noexcept { return c_; }

    /// j-th derivative at the expansion point, c_j * j!.
    double derivative_value(int j) const;
    double eval(double t) const;

    Series derivative() const;
    /// Divides by t^k; the first k coefficients are discarded.
    Series shift_down(int k) const;
    Series truncated(int order) const;

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(double s);
    Series& operator+=(double s);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator-(Series a) { return a *= -1.0; }
    friend Series operator*(Series a, double s) { return a *= s; }
    friend Series operator*(double s, Series a) { return a *= s; }
    friend Series operator/(Series a, double s) { return a *= 1.0 / s; }
    friend Series operator+(Series a, double s) { return a += s; }
    friend Series operator+(double s, Series a) { return a += s; }
    friend Series operator-(Series a, double s) { return a += -s; }
    friend Series operator-(double s, Series a) { return (a *= -1.0) += s; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator/(const Series& a, const Series& b);

private:
    std::vector<double> c_;
};

Series sin(const Series& a);
Series cos(const Series& a);
/// a^alpha for real alpha; requires a[0] > 0.
Series pow(const Series& a, double alpha);
Series pow(const Series& a, int m);
Series sqrt(const Series& a);

using SeriesVec3 = std::array<Series, 3>;

Series dot(const SeriesVec3& a, const SeriesVec3& b);
SeriesVec3 operator+(const SeriesVec3& a, const SeriesVec3& b);
SeriesVec3 operator-(const SeriesVec3& a, const SeriesVec3& b);
SeriesVec3 operator*(const Series& s, const SeriesVec3& a);
SeriesVec3 operator*(double s, const SeriesVec3& a);
SeriesVec3 derivative(const SeriesVec3& a);
SeriesVec3 shift_down(const SeriesVec3& a, int k);

}  // namespace magchain
