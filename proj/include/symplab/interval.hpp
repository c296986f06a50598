#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symplab {

/// Closed interval with outward padding of 1e-12·(1 + |bound|) after every
/// operation, enough to absorb the rounding of the few operations used in
/// certification.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static constexpr double kPad = 1e-12;

    static Interval point(double v) { return padded(v, v); }
    static Interval padded(double lo, double hi) {
        if (!(lo <= hi)) throw std::invalid_argument("interval: lo > hi");
        return {lo - kPad * (1.0 + std::abs(lo)), hi + kPad * (1.0 + std::abs(hi))};
    }
    /// Exact bounds, no padding (for inputs that are representable as given).
    static Interval exact(double lo, double hi) {
        if (!(lo <= hi)) throw std::invalid_argument("interval: lo > hi");
        return {lo, hi};
    }

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool below(double v) const { return hi < v; }
    bool above(double v) const { return lo > v; }
    double width() const { return hi - lo; }
};

inline Interval operator+(Interval a, Interval b) { return Interval::padded(a.lo + b.lo, a.hi + b.hi); }
inline Interval operator-(Interval a, Interval b) { return Interval::padded(a.lo - b.hi, a.hi - b.lo); }
inline Interval operator*(Interval a, Interval b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return Interval::padded(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}
inline Interval operator*(double s, Interval a) { return Interval::point(s) * a; }

/// cos over an interval, using the extrema at multiples of π inside it.
inline Interval cos(Interval x) {
    constexpr double pi = std::numbers::pi;
    if (x.width() >= 2.0 * pi) return Interval::exact(-1.0, 1.0);
    double lo = std::min(std::cos(x.lo), std::cos(x.hi));
    double hi = std::max(std::cos(x.lo), std::cos(x.hi));
    // Multiples kπ with x.lo <= kπ <= x.hi; padding keeps boundary cases safe.
    const double k_first = std::ceil(x.lo / pi - 1e-12);
    for (double k = k_first; k * pi <= x.hi + 1e-12 * (1.0 + std::abs(x.hi)); k += 1.0) {
        if (std::fmod(std::abs(k), 2.0) == 0.0)
            hi = 1.0;
        else
            lo = -1.0;
    }
    Interval r = Interval::padded(lo, hi);
    r.lo = std::max(r.lo, -1.0);
    r.hi = std::min(r.hi, 1.0);
    return r;
}

/// sin x = cos(x − π/2).
inline Interval sin(Interval x) { return cos(x - Interval::point(std::numbers::pi / 2)); }

}  // namespace symplab
