#include "magchain/series.hpp"

#include <algorithm>
#include <cmath>

#include "magchain/errors.hpp"

namespace magchain {

Series::Series(int order, double constant) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
    if (order < 0) throw InvalidParameter("series order must be non-negative");
    c_[0] = constant;
}

Series::Series(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty()) throw InvalidParameter("series needs at least one coefficient");
}

Series Series::variable(double x0, int order) {
    Series s(order, x0);
    if (order >= 1) s[1] = 1.0;
    return s;
}

double Series::derivative_value(int j) const {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return (*this)[j] * f;
}

double Series::eval(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Series Series::derivative() const {
    if (order() == 0) return Series(0);
    Series d(order() - 1);
    for (int j = 1; j <= order(); ++j) d[j - 1] = j * (*this)[j];
    return d;
}

Series Series::shift_down(int k) const {
    if (k > order()) throw InvalidParameter("shift exceeds series order");
    return Series(std::vector<double>(c_.begin() + k, c_.end()));
}

Series Series::truncated(int order) const {
    return Series(std::vector<double>(c_.begin(), c_.begin() + std::min(order, this->order()) + 1));
}

Series& Series::operator+=(const Series& o) {
    c_.resize(static_cast<std::size_t>(std::min(order(), o.order())) + 1);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    c_.resize(static_cast<std::size_t>(std::min(order(), o.order())) + 1);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

Series& Series::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Series& Series::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series r(n);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
        r[k] = acc;
    }
    return r;
}

Series operator/(const Series& a, const Series& b) {
    if (b[0] == 0.0) throw SingularEvaluation("series division by a series with zero constant term");
    const int n = std::min(a.order(), b.order());
    Series q(n);
    for (int k = 0; k <= n; ++k) {
        double acc = a[k];
        for (int j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
        q[k] = acc / b[0];
    }
    return q;
}

namespace {

void sin_cos(const Series& a, Series& s, Series& c) {
    const int n = a.order();
    s = Series(n, std::sin(a[0]));
    c = Series(n, std::cos(a[0]));
    for (int k = 1; k <= n; ++k) {
        double ss = 0.0;
        double cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += j * a[j] * c[k - j];
            cc -= j * a[j] * s[k - j];
        }
        s[k] = ss / k;
        c[k] = cc / k;
    }
}

}  // namespace

Series sin(const Series& a) {
    Series s;
    Series c;
    sin_cos(a, s, c);
    return s;
}

Series cos(const Series& a) {
    Series s;
    Series c;
    sin_cos(a, s, c);
    return c;
}

Series pow(const Series& a, double alpha) {
    if (!(a[0] > 0.0)) throw InvalidParameter("real power of a series needs a positive constant term");
    const int n = a.order();
    Series p(n, std::pow(a[0], alpha));
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += ((alpha + 1.0) * j - k) * a[j] * p[k - j];
        p[k] = acc / (k * a[0]);
    }
    return p;
}

Series pow(const Series& a, int m) {
    if (m < 0) return Series(a.order(), 1.0) / pow(a, -m);
    Series result(a.order(), 1.0);
    Series base = a;
    while (m > 0) {
        if (m & 1) result = result * base;
        m >>= 1;
        if (m > 0) base = base * base;
    }
    return result;
}

Series sqrt(const Series& a) { return pow(a, 0.5); }

Series dot(const SeriesVec3& a, const SeriesVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

SeriesVec3 operator+(const SeriesVec3& a, const SeriesVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

SeriesVec3 operator-(const SeriesVec3& a, const SeriesVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

SeriesVec3 operator*(const Series& s, const SeriesVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

SeriesVec3 operator*(double s, const SeriesVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

SeriesVec3 derivative(const SeriesVec3& a) { return {a[0].derivative(), a[1].derivative(), a[2].derivative()}; }

SeriesVec3 shift_down(const SeriesVec3& a, int k) {
    return {a[0].shift_down(k), a[1].shift_down(k), a[2].shift_down(k)};
}

}  // namespace magchain
