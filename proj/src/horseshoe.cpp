#include "symplab/horseshoe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "symplab/entropy.hpp"
#include "symplab/hamiltonian_flow.hpp"
#include "symplab/interval.hpp"

namespace symplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kIterateCap = 10000;

// Fixes the geometry from (λ, a). Ly is small so that the exit strip and the
// reinjection scale α are far from the snake scale; see the header sketch.
void place(SnakeModel& m) {
    m.half_width = std::max(1.0, 3.0 * m.a / (1.0 - 1.0 / m.lambda));
    m.half_height = std::ldexp(1.0, -10);
    m.center = 0.5 * m.half_width * (1.0 + 1.0 / m.lambda);
    m.shift = 3.0 * m.half_width;
    m.exit_center = 0.5 * m.half_height * (1.0 + m.lambda);
    m.stretch = 4.0 * m.a / ((m.lambda - 1.0) * m.half_height);
}

// ψ(d) = 1 on [0, 2a], 0 beyond 3a, with derivative.
std::pair<double, double> cutoff(double d, double a) {
    const flow::Jet s = flow::smooth_step((3.0 * a - d) / a);
    return {s.value, -s.d1 / a};
}

}  // namespace

Point SnakeModel::reinject(Point p) const {
    return {center + stretch * (p.y - exit_center), -(p.x - shift) / stretch};
}

Point SnakeModel::snake(Point p) const {
    const double xi = p.x - center;
    const double psi = cutoff(std::abs(xi), a).first;
    if (psi == 0.0) return p;
    return {p.x, p.y + amplitude * std::cos(kPi * legs * xi / (2.0 * a)) * psi};
}

Mat2 SnakeModel::snake_jacobian(Point p) const {
    const double xi = p.x - center;
    const auto [psi, dpsi] = cutoff(std::abs(xi), a);
    const double w = kPi * legs / (2.0 * a);
    const double sign = xi < 0.0 ? -1.0 : 1.0;
    const double slope = amplitude * (-w * std::sin(w * xi) * psi + std::cos(w * xi) * dpsi * sign);
    return {1.0, 0.0, slope, 1.0};
}

bool SnakeModel::in_exit(Point p) const {
    return std::abs(p.x) <= half_width && p.y > half_height && p.y <= lambda * half_height;
}

bool SnakeModel::in_transit(Point p) const {
    return std::abs(p.x - shift) <= half_width && p.y > half_height && p.y <= lambda * half_height;
}

Point SnakeModel::step(Point p) const {
    if (in_transit(p)) return snake(reinject(p));
    if (in_exit(p)) return {p.x + shift, p.y};
    return saddle(p);
}

Point SnakeModel::step_unperturbed(Point p) const {
    if (in_transit(p)) return reinject(p);
    if (in_exit(p)) return {p.x + shift, p.y};
    return saddle(p);
}

Mat2 SnakeModel::jacobian(Point p) const {
    if (in_transit(p)) return snake_jacobian(reinject(p)) * Mat2{0.0, stretch, -1.0 / stretch, 0.0};
    if (in_exit(p)) return Mat2::identity();
    return {1.0 / lambda, 0.0, 0.0, lambda};
}

PlanarMap SnakeModel::as_map() const {
    const SnakeModel self = *this;
    return PlanarMap(
        "snake", Topology::plane(),
        {{"lambda", lambda}, {"a", a}, {"delta", delta}, {"legs", static_cast<double>(legs)}},
        [self](Point p) { return self.step(p); }, [self](Point p) { return self.jacobian(p); }, frame());
}

Box SnakeModel::frame() const {
    const double half = 0.5 * (shift + 2.0 * half_width);
    return {-half_width, shift + half_width, -half, half};
}

SnakeModel snake_with_amplitude(double lambda, double a, double amplitude, int legs) {
    SnakeModel m;
    m.lambda = lambda;
    m.a = a;
    m.legs = legs;
    m.amplitude = amplitude;
    m.delta = kPi * legs * amplitude / (2.0 * a);
    place(m);
    return m;
}

SnakeModel build_snake(double lambda, double a, double delta, int legs) {
    if (!(lambda > 1.0)) throw ConstructionError("snake: lambda must exceed 1");
    if (!(a > 0.0)) throw ConstructionError("snake: a must be positive");
    if (!(delta > 0.0 && delta <= 0.1)) throw ConstructionError("snake: delta must lie in (0, 0.1]");
    if (legs < 2) throw ConstructionError("snake: at least 2 legs");
    SnakeModel m = snake_with_amplitude(lambda, a, 2.0 * a * delta / (kPi * legs), legs);
    m.delta = delta;
    return m;
}

FlatteningChart flatten_graph(std::function<double(double)> r, std::function<double(double)> dr) {
    if (!r || !dr) throw std::invalid_argument("flatten_graph: missing function");
    if (std::abs(r(0.0)) > 1e-12 || std::abs(dr(0.0)) > 1e-12)
        throw std::invalid_argument("flatten_graph: need r(0) = 0 and r'(0) = 0");
    return {std::move(r), std::move(dr)};
}

int count_legs(const SnakeModel& model) {
    if (model.legs < 1) throw DegeneracyError("count_legs: no legs");
    const double w = kPi * model.legs / (2.0 * model.a);
    auto height = [&](double xi) { return model.amplitude * std::cos(w * xi); };
    auto slope = [&](double xi) { return -model.amplitude * w * std::sin(w * xi); };
    // Sign changes on a grid fine enough to separate roots (spacing 2a/N),
    // each refined by bisection and certified by its slope. The grid is
    // shifted by half a cell so a root at -a is interior to the first cell
    // and a root at +a falls outside the last one.
    const int cells = 16 * model.legs;
    const double h = 2.0 * model.a / cells;
    int count = 0;
    for (int i = 0; i < cells; ++i) {
        double lo = -model.a - 0.5 * h + i * h, hi = lo + h;
        const double f_lo = height(lo), f_hi = height(hi);
        if (f_lo == 0.0) {
            if (std::abs(slope(lo)) < 1e-12) throw DegeneracyError("count_legs: tangential crossing");
            ++count;
            continue;
        }
        if (f_hi == 0.0 || (f_lo < 0.0) == (f_hi < 0.0)) {
            // No strict sign change; a double root would show as a tiny extremum.
            const double mid = 0.5 * (lo + hi);
            if (std::abs(height(mid)) < 1e-12 && std::abs(slope(mid)) < 1e-12)
                throw DegeneracyError("count_legs: tangential crossing");
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * model.a; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((height(mid) < 0.0) == (f_lo < 0.0) ? lo : hi) = mid;
        }
        if (std::abs(slope(0.5 * (lo + hi))) < 1e-12) throw DegeneracyError("count_legs: tangential crossing");
        ++count;
    }
    return count;
}

double snake_c1_size(const SnakeModel& model, double radius, int grid) {
    if (grid < 2) throw std::invalid_argument("snake_c1_size: grid too small");
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = model.center - radius + 2.0 * radius * i / (grid - 1);
        const Mat2 d = model.snake_jacobian({x, 0.0}) - Mat2::identity();
        worst = std::max(worst, d.max_abs());
    }
    return worst;
}

LegWindow leg_window(int legs) {
    const double shift = 0.5 / legs;
    return {-1.0 - shift, 1.0 - shift};
}

ReturnTime return_time(const SnakeModel& model) {
    const LegWindow w = leg_window(model.legs);
    const double s_edge[2] = {w.lo, w.hi};
    for (int m = 1; m <= kIterateCap; ++m) {
        const double scale = std::pow(model.lambda, m);
        if (!std::isfinite(scale)) break;
        double top = 0.0, offset = 0.0;
        bool closes = true;
        for (double s : s_edge)
            for (double u : s_edge) {
                Point z{model.center + model.a * s, (model.exit_center + model.a * u / model.stretch) / scale};
                top = std::max(top, std::abs(z.y));
                for (int j = 0; j < m; ++j) {
                    if (model.in_exit(z) || model.in_transit(z)) closes = false;
                    z = model.step_unperturbed(z);
                }
                if (!model.in_exit(z)) closes = false;
                z = model.step_unperturbed(model.step_unperturbed(z));
                offset = std::max(offset, std::abs(z.y));
            }
        if (!closes) continue;
        if (0.5 * model.amplitude > top + offset) {
            ReturnTime r;
            r.linear_steps = m;
            r.t = m + 2;
            r.k1 = model.amplitude * std::pow(model.lambda, r.t);
            r.top = top;
            r.offset = offset;
            return r;
        }
    }
    throw ConstructionError("return_time: horseshoe does not close within 1e4 iterates");
}

Point HorseshoeCoding::return_map(Point su) const {
    return {su.y, gain * std::cos(frequency * su.y) - bias - su.x};
}

Point HorseshoeCoding::to_plane(Point su) const {
    return {center + a * su.x, (exit_center + a * su.y / stretch) / std::pow(lambda, linear_steps)};
}

namespace {

double spectral_radius_of(const std::vector<std::vector<int>>& m) {
    const std::size_t n = m.size();
    std::vector<double> v(n, 1.0);
    double r = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
        const double norm = *std::max_element(w.begin(), w.end());
        if (norm == 0.0) return 0.0;
        for (double& x : w) x /= norm;
        const bool settled = std::abs(norm - r) < 1e-14 * norm;
        r = norm;
        v = std::move(w);
        if (settled) break;
    }
    return r;
}

}  // namespace

HorseshoeCoding code_horseshoe(const SnakeModel& model, std::optional<int> linear_steps) {
    HorseshoeCoding h;
    const int n_legs = model.legs;
    if (n_legs < 1) throw DegeneracyError("code_horseshoe: no legs");
    h.legs = n_legs;
    h.linear_steps = linear_steps ? *linear_steps : return_time(model).linear_steps;
    if (h.linear_steps < 1) throw ConstructionError("code_horseshoe: need at least one linear step");
    h.t = h.linear_steps + 2;
    h.stretch_factor = model.amplitude * std::pow(model.lambda, h.linear_steps);
    h.window = leg_window(n_legs);
    h.gain = model.stretch * h.stretch_factor / model.a;
    h.bias = model.stretch * model.exit_center / model.a + model.center / model.a;
    h.frequency = kPi * n_legs / 2.0;
    h.center = model.center;
    h.a = model.a;
    h.stretch = model.stretch;
    h.exit_center = model.exit_center;
    h.lambda = model.lambda;

    // Second coordinate of the return map over a box of (s, u).
    const Interval s_all = Interval::exact(h.window.lo, h.window.hi);
    auto image = [&](Interval u) {
        return h.gain * cos(h.frequency * u) - Interval::point(h.bias) - s_all;
    };
    auto escapes = [&](Interval v) { return v.below(h.window.lo) || v.above(h.window.hi); };

    // Leg k is centred on the k-th zero of cos(frequency·u) inside the
    // window, u = q/N with q odd, and spans a quarter period each side.
    const int q_first = 1 - 2 * ((n_legs + 1) / 2);
    h.leg_ok.assign(static_cast<std::size_t>(n_legs), 0);
    std::vector<std::pair<double, double>> spans;
    for (int k = 0; k < n_legs; ++k) {
        const double q = q_first + 2.0 * k;
        spans.emplace_back((q - 0.5) / n_legs, (q + 0.5) / n_legs);
    }
    for (int k = 0; k < n_legs; ++k) {
        const auto [lo, hi] = spans[static_cast<std::size_t>(k)];
        const Interval at_lo = image(Interval::point(lo));
        const Interval at_hi = image(Interval::point(hi));
        const bool crosses = (at_lo.below(h.window.lo) && at_hi.above(h.window.hi)) ||
                             (at_lo.above(h.window.hi) && at_hi.below(h.window.lo));
        const Interval slope = sin(h.frequency * Interval::padded(lo, hi));
        const bool monotone = slope.above(0.0) || slope.below(0.0);
        const bool inside = lo >= h.window.lo && hi <= h.window.hi;
        const bool apart = (k == 0 || spans[k - 1].second < lo) && (k + 1 == n_legs || hi < spans[k + 1].first);
        h.leg_ok[static_cast<std::size_t>(k)] = crosses && monotone && inside && apart;
        if (!h.leg_ok[static_cast<std::size_t>(k)]) {
            std::ostringstream msg;
            msg << "leg " << k << ":" << (crosses ? "" : " no full crossing") << (monotone ? "" : " not monotone")
                << (inside ? "" : " outside window") << (apart ? "" : " overlaps a neighbour");
            h.failures.push_back(msg.str());
        } else {
            ++h.valid_legs;
        }
    }

    // Between legs |cos| ≥ √2/2, and those points must leave the window.
    h.gaps_escape = true;
    double from = h.window.lo;
    for (int k = 0; k <= n_legs && h.gaps_escape; ++k) {
        const double to = k < n_legs ? spans[static_cast<std::size_t>(k)].first : h.window.hi;
        if (to > from && !escapes(image(Interval::padded(from, to)))) {
            h.gaps_escape = false;
            h.failures.push_back("gap before leg " + std::to_string(k) + " returns to the window");
        }
        if (k < n_legs) from = spans[static_cast<std::size_t>(k)].second;
    }

    h.certified = h.gaps_escape && h.valid_legs == n_legs;
    if (n_legs <= 64) {
        h.transition.assign(static_cast<std::size_t>(n_legs), std::vector<int>(static_cast<std::size_t>(n_legs), 0));
        for (std::size_t i = 0; i < h.transition.size(); ++i)
            for (std::size_t j = 0; j < h.transition.size(); ++j) h.transition[i][j] = h.leg_ok[i] && h.leg_ok[j];
        h.spectral_radius = spectral_radius_of(h.transition);
    } else {
        h.spectral_radius = h.valid_legs;
    }
    if (h.certified)
        h.entropy = shift_entropy(n_legs, h.t);
    else
        h.entropy = h.spectral_radius > 1.0 ? std::log(h.spectral_radius) / h.t : 0.0;
    return h;
}

}  // namespace symplab
