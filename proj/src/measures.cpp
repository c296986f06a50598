#include "symplab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "symplab/point_grid.hpp"

namespace symplab {

namespace {

constexpr double kMergeRadius = 1e-12;

double chebyshev(int d, double u) {
    u = std::clamp(u, -1.0, 1.0);
    double t0 = 1.0, t1 = u;
    if (d == 0) return t0;
    for (int k = 1; k < d; ++k) {
        const double t2 = 2.0 * u * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

// e_j: 1, cos(jθ) for j > 0, sin(|j|θ) for j < 0, θ an angle in radians.
double harmonic(int j, double theta) {
    if (j == 0) return 1.0;
    return j > 0 ? std::cos(j * theta) : std::sin(-j * theta);
}

std::string label_of(const char* a, int i, const char* b, int k) {
    return std::string(a) + "(" + std::to_string(i) + ")*" + b + "(" + std::to_string(k) + ")";
}

}  // namespace

AtomicMeasure::AtomicMeasure(Topology topology, std::vector<Point> atoms, std::vector<double> weights)
    : topology_(topology) {
    if (atoms.empty()) throw std::invalid_argument("atomic measure: no atoms");
    if (atoms.size() != weights.size()) throw std::invalid_argument("atomic measure: atoms and weights differ in length");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("atomic measure: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atomic measure: weights must sum to 1");

    PointGrid grid(topology_, 1e-9);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        topology_.validate(atoms[i]);
        const Point p = topology_.wrap(atoms[i]);
        const long hit = grid.find_near(p, kMergeRadius);
        if (hit >= 0) {
            weights_[static_cast<std::size_t>(hit)] += weights[i];
            continue;
        }
        grid.insert(p, atoms_.size());
        atoms_.push_back(p);
        weights_.push_back(weights[i]);
    }
}

AtomicMeasure periodic_measure(const PeriodicOrbit& orbit, const Topology& topology) {
    if (orbit.points.empty()) throw std::invalid_argument("periodic_measure: empty orbit");
    const double w = 1.0 / static_cast<double>(orbit.points.size());
    return AtomicMeasure(topology, orbit.points, std::vector<double>(orbit.points.size(), w));
}

AtomicMeasure empirical_measure(const OrbitSegment& segment) {
    if (segment.points.empty()) throw std::invalid_argument("empirical_measure: empty segment");
    const double w = 1.0 / static_cast<double>(segment.points.size());
    return AtomicMeasure(segment.topology, segment.points, std::vector<double>(segment.points.size(), w));
}

AtomicMeasure pushforward(const PlanarMap& map, const AtomicMeasure& mu) {
    if (!(map.topology() == mu.topology())) throw DomainError("pushforward: topology mismatch");
    std::vector<Point> image;
    image.reserve(mu.size());
    for (const Point& p : mu.atoms()) image.push_back(map.evaluate(p));
    return AtomicMeasure(mu.topology(), std::move(image), mu.weights());
}

TestFunctionFamily TestFunctionFamily::for_topology(const Topology& topology, int order, Box box) {
    if (order < 0) throw std::invalid_argument("test family: order must be nonnegative");
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw std::invalid_argument("test family: degenerate box");
    TestFunctionFamily fam(topology, order, box);
    const int half = order / 2;
    const double px = topology.periodic_x() ? topology.period_x() : 0.0;
    const double py = topology.periodic_y() ? topology.period_y() : 0.0;
    const bool sphere = topology.kind() == TopologyKind::SphereChart;
    const double ry = sphere ? 1.0 : 0.5 * box.height();
    const double rx = 0.5 * box.width();

    switch (topology.kind()) {
    case TopologyKind::Torus2:
        for (int a = -half; a <= half; ++a)
            for (int b = -half; b <= half; ++b) {
                Term t;
                t.freq_x = a;
                t.freq_y = b;
                t.sine = a < 0 || (a == 0 && b < 0);
                t.degree = std::max(std::abs(a), std::abs(b));
                t.lipschitz = kTwoPi * (std::abs(a) / px + std::abs(b) / py);
                t.label = std::string(a == 0 && b == 0 ? "1" : t.sine ? "sin" : "cos") + "(" + std::to_string(a) +
                          "," + std::to_string(b) + ")";
                fam.terms_.push_back(t);
            }
        break;
    case TopologyKind::Cylinder:
    case TopologyKind::SphereChart:
        for (int a = -half; a <= half; ++a)
            for (int d = 0; d <= order; ++d) {
                Term t;
                t.freq_x = a;
                t.freq_y = d;
                t.sine = a < 0;
                t.degree = std::max(std::abs(a), d);
                t.lipschitz = kTwoPi * std::abs(a) / px + d * d / ry;
                t.label = label_of("e", a, "T", d);
                fam.terms_.push_back(t);
            }
        break;
    case TopologyKind::Plane:
        for (int a = 0; a <= order; ++a)
            for (int b = 0; b <= order; ++b) {
                Term t;
                t.freq_x = a;
                t.freq_y = b;
                t.degree = std::max(a, b);
                t.lipschitz = a * a / rx + b * b / ry;
                t.label = label_of("T", a, "T", b);
                fam.terms_.push_back(t);
            }
        break;
    }
    std::stable_sort(fam.terms_.begin(), fam.terms_.end(), [](const Term& l, const Term& r) {
        if (l.degree != r.degree) return l.degree < r.degree;
        if (l.freq_x != r.freq_x) return l.freq_x < r.freq_x;
        return l.freq_y < r.freq_y;
    });
    return fam;
}

double TestFunctionFamily::weight(std::size_t k) const { return std::ldexp(1.0, -static_cast<int>(k + 1)); }

double TestFunctionFamily::angle_x(double v) const { return kTwoPi * v / topology_.period_x(); }
double TestFunctionFamily::angle_y(double v) const { return kTwoPi * v / topology_.period_y(); }
double TestFunctionFamily::line_x(double v) const { return (2.0 * v - box_.x_lo - box_.x_hi) / box_.width(); }
double TestFunctionFamily::line_y(double v) const {
    if (topology_.kind() == TopologyKind::SphereChart) return v;
    return (2.0 * v - box_.y_lo - box_.y_hi) / box_.height();
}

double TestFunctionFamily::value(std::size_t k, Point p) const {
    const Term& t = terms_.at(k);
    switch (topology_.kind()) {
    case TopologyKind::Torus2: {
        if (t.freq_x == 0 && t.freq_y == 0) return 1.0;
        const double phase = t.freq_x * angle_x(p.x) + t.freq_y * angle_y(p.y);
        return t.sine ? std::sin(phase) : std::cos(phase);
    }
    case TopologyKind::Cylinder:
    case TopologyKind::SphereChart:
        return harmonic(t.freq_x, angle_x(p.x)) * chebyshev(t.freq_y, line_y(p.y));
    case TopologyKind::Plane:
        return chebyshev(t.freq_x, line_x(p.x)) * chebyshev(t.freq_y, line_y(p.y));
    }
    return 0.0;
}

double weak_star_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, const TestFunctionFamily& family) {
    if (!(mu.topology() == nu.topology()) || !(mu.topology() == family.topology()))
        throw DomainError("weak_star_distance: topology mismatch");
    double rho = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
        auto phi = [&](Point p) { return family.value(k, p); };
        rho += family.weight(k) * std::abs(mu.integrate(phi) - nu.integrate(phi));
    }
    return rho;
}

ShiftMeasure ShiftMeasure::bernoulli(std::vector<double> probabilities) {
    if (probabilities.empty()) throw std::invalid_argument("shift measure: no symbols");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw std::invalid_argument("shift measure: negative probability");
        total += p;
    }
    // Rounding of a long sum grows with its length.
    const double slack = 1e-12 + static_cast<double>(probabilities.size()) * 0x1.0p-52;
    if (std::abs(total - 1.0) > slack) throw std::invalid_argument("shift measure: probabilities must sum to 1");
    ShiftMeasure m;
    m.stationary_ = std::move(probabilities);
    return m;
}

ShiftMeasure ShiftMeasure::uniform(int symbols) {
    if (symbols < 1) throw std::invalid_argument("shift measure: need at least one symbol");
    return bernoulli(std::vector<double>(static_cast<std::size_t>(symbols), 1.0 / symbols));
}

ShiftMeasure ShiftMeasure::markov(std::vector<std::vector<double>> transition) {
    const std::size_t n = transition.size();
    if (n == 0) throw std::invalid_argument("shift measure: empty transition matrix");
    for (const auto& row : transition) {
        if (row.size() != n) throw std::invalid_argument("shift measure: transition matrix is not square");
        double total = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) throw std::invalid_argument("shift measure: negative transition probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("shift measure: rows must sum to 1");
    }
    auto step = [&](const std::vector<double>& pi) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[j] += pi[i] * transition[i][j];
        return out;
    };
    // Lazy chain (I + P)/2 has the same stationary vector and is aperiodic.
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 200000; ++it) {
        std::vector<double> next = step(pi);
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = 0.5 * (next[j] + pi[j]);
            change = std::max(change, std::abs(next[j] - pi[j]));
        }
        pi = std::move(next);
        if (change < 1e-16) break;
    }
    const std::vector<double> check = step(pi);
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(check[j] - pi[j]) > 1e-12) throw std::runtime_error("shift measure: stationary vector did not converge");
    ShiftMeasure m;
    m.stationary_ = std::move(pi);
    m.transition_ = std::move(transition);
    return m;
}

double shift_metric_entropy(const ShiftMeasure& m, int return_time) {
    if (return_time < 1) throw std::invalid_argument("shift_metric_entropy: return time must be positive");
    auto plogp = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };
    double h = 0.0;
    if (!m.is_markov()) {
        for (double p : m.stationary()) h -= plogp(p);
    } else {
        for (std::size_t i = 0; i < m.stationary().size(); ++i) {
            double row = 0.0;
            for (double p : m.transition()[i]) row -= plogp(p);
            h += m.stationary()[i] * row;
        }
    }
    return h / return_time;
}

std::string to_json(const AtomicMeasure& mu) {
    nlohmann::ordered_json j;
    j["atoms"] = nlohmann::ordered_json::array();
    for (const Point& p : mu.atoms()) j["atoms"].push_back({p.x, p.y});
    j["weights"] = mu.weights();
    j["topology"] = std::string(to_string(mu.topology().kind()));
    return j.dump() + "\n";
}

}  // namespace symplab
