#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "symplab/horseshoe.hpp"
#include "symplab/periodic.hpp"

namespace symplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(Point v) { return std::hypot(v.x, v.y); }
double norm_max(Point v) { return std::max(std::abs(v.x), std::abs(v.y)); }

bool inside_box(const SnakeModel& m, Point z) {
    return std::abs(z.x) <= m.half_width && std::abs(z.y) <= m.half_height;
}

double smallest_singular_value(const Mat2& m) {
    const double f = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double det = m.det();
    const double big = std::sqrt(0.5 * (f + std::sqrt(std::max(f * f - 4.0 * det * det, 0.0))));
    return big > 0.0 ? std::abs(det) / big : 0.0;
}

// Growth rate of a product kept as exp(log_scale)·matrix.
double top_exponent(const Mat2& m, double log_scale) {
    const double tr = m.trace(), det = m.det();
    const double disc = tr * tr - 4.0 * det;
    const double top = disc >= 0.0 ? 0.5 * (std::abs(tr) + std::sqrt(disc)) : std::sqrt(std::abs(det));
    return log_scale + std::log(top);
}

// Primitive words of length len over k letters, least rotation of each class.
std::vector<std::vector<int>> necklaces(int k, int len) {
    std::vector<std::vector<int>> out;
    std::vector<int> w(static_cast<std::size_t>(len), 0);
    while (true) {
        bool least = true;
        for (int r = 1; r < len && least; ++r) {
            std::vector<int> rot(w.begin() + r, w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + r);
            if (rot <= w) least = false;  // equal means a proper power
        }
        if (least) out.push_back(w);
        int i = len - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == k - 1) w[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace

double angle(Point v, Point w) {
    if (norm2(v) == 0.0 || norm2(w) == 0.0) throw DomainError("angle: zero vector");
    const double dot = v.x * w.x + v.y * w.y;
    const double cross = std::abs(v.x * w.y - v.y * w.x);
    if (dot == 0.0) return kInf;
    return cross / std::abs(dot);
}

double angle_to_subspace(Point v, Point basis) {
    if (norm2(v) == 0.0 || norm2(basis) == 0.0) throw DomainError("angle: zero vector");
    const Point e = (1.0 / norm2(basis)) * basis;
    const double along = v.x * e.x + v.y * e.y;
    const Point perp = v - along * e;
    if (along == 0.0) return kInf;
    return norm2(perp) / std::abs(along);
}

double norm_equivalence_constant() { return 1.0 / std::numbers::sqrt2; }

ExpansionReport verify_expansion(const SnakeModel& model, int k, Point v, Point z) {
    if (k < 0) throw std::invalid_argument("verify_expansion: negative iterate count");
    if (norm2(v) == 0.0) throw DomainError("verify_expansion: zero vector");
    Mat2 d = Mat2::identity();
    for (int j = 0; j < k; ++j) {
        if (!inside_box(model, z)) throw DomainError("verify_expansion: orbit leaves the linearizing box");
        d = model.jacobian(z) * d;
        z = model.step(z);
    }
    const Point image = d * v;
    const Point stable{1.0, 0.0};
    const double growth = std::pow(model.lambda, k);  // ‖Dg_p^{-k}|E^u‖^{-1}

    ExpansionReport r;
    r.k6 = norm_equivalence_constant();
    r.lhs = norm2(image);
    r.rhs = r.k6 * growth * norm2(v) * std::min(angle_to_subspace(v, stable), 1.0);
    r.margin = r.lhs - r.rhs;
    r.max_norm_lhs = norm_max(image);
    r.max_norm_rhs = growth * norm_max(v);
    r.hypothesis_holds = angle_to_subspace(image, stable) >= 1.0;
    if (!r.hypothesis_holds) {
        r.note = "hypothesis fails: the image is within angle 1 of the stable direction";
        return r;
    }
    r.holds = r.lhs >= r.rhs * (1.0 - 1e-12);
    if (std::abs(v.y) >= std::abs(v.x)) {
        // Unstable cone: the max-norm form holds with constant 1.
        r.holds = r.holds && r.max_norm_lhs >= r.max_norm_rhs * (1.0 - 1e-12);
    } else {
        r.note = "max-norm form not checked: v is outside the unstable cone";
    }
    return r;
}

double transit_constant(const SnakeModel& model) {
    // The transit derivative depends only on where R lands, so a line of
    // exit heights covering the leg window suffices.
    const LegWindow w = leg_window(model.legs);
    double c = kInf;
    const int grid = 2001;
    for (int i = 0; i < grid; ++i) {
        const double u = w.lo + (w.hi - w.lo) * i / (grid - 1);
        const Point exit{0.0, model.exit_center + model.a * u / model.stretch};
        const Point moved = model.step(exit);
        const Mat2 d = model.jacobian(moved) * model.jacobian(exit);
        c = std::min(c, smallest_singular_value(d));
    }
    return c;
}

double visit_frequency(const OrbitSegment& orbit, Point center, double zeta) {
    if (orbit.points.empty()) throw std::invalid_argument("visit_frequency: empty orbit");
    if (!(zeta > 0.0)) throw std::invalid_argument("visit_frequency: zeta must be positive");
    std::size_t hits = 0;
    for (const Point& p : orbit.points)
        if (orbit.topology.distance(p, center) <= zeta) ++hits;
    return static_cast<double>(hits) / static_cast<double>(orbit.points.size());
}

ExponentFloorReport periodic_exponent_floor(const HorseshoeCoding& coding, const SnakeModel& model, int n,
                                            int max_word) {
    if (n < 1) throw std::invalid_argument("periodic_exponent_floor: n must be positive");
    ExponentFloorReport rep;
    rep.chi_p = std::log(model.lambda);
    rep.floor = rep.chi_p - 1.0 / n;
    const int k_inside = coding.t - SnakeModel::kTransit;
    rep.a_priori = (std::log(transit_constant(model) * norm_equivalence_constant()) + k_inside * rep.chi_p) / coding.t;

    std::vector<int> valid;
    for (int k = 0; k < coding.legs; ++k)
        if (coding.leg_ok[static_cast<std::size_t>(k)]) valid.push_back(k);
    if (valid.size() <= 8) {
        rep.symbols = valid;
    } else {
        for (int i = 0; i < 8; ++i) rep.symbols.push_back(valid[(valid.size() - 1) * i / 7]);
    }
    if (rep.symbols.empty()) return rep;

    const int legs = coding.legs;
    const int q_first = 1 - 2 * ((legs + 1) / 2);
    const Topology plane = Topology::plane();
    const TestFunctionFamily family = TestFunctionFamily::for_topology(plane, 8, model.frame());
    std::vector<double> at_saddle(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) at_saddle[j] = family.value(j, {0.0, 0.0});

    for (int len = 1; len <= max_word; ++len) {
        for (const std::vector<int>& letters : necklaces(static_cast<int>(rep.symbols.size()), len)) {
            CodedOrbit q;
            for (int l : letters) q.word.push_back(rep.symbols[static_cast<std::size_t>(l)]);
            // Inverse branches: on leg k, G cos(f u) = u_next + u_prev + bias.
            std::vector<double> u(static_cast<std::size_t>(len));
            for (int i = 0; i < len; ++i) u[i] = static_cast<double>(q_first + 2 * q.word[i]) / legs;
            for (int it = 0; it < 100; ++it) {
                double change = 0.0;
                for (int i = 0; i < len; ++i) {
                    const int qi = q_first + 2 * q.word[i];
                    const double sigma = ((qi - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
                    const double target = (u[(i + 1) % len] + u[(i + len - 1) % len] + coding.bias) / coding.gain;
                    const double theta = std::asin(std::clamp(-sigma * target, -1.0, 1.0));
                    const double next = (qi + 2.0 * theta / std::numbers::pi) / legs;
                    change = std::max(change, std::abs(next - u[i]));
                    u[i] = next;
                }
                if (change < 1e-15) break;
            }
            // Each return is simulated from its solved start, so the error of
            // one return is never amplified by the next.
            Mat2 prod = Mat2::identity();
            double log_scale = 0.0;
            for (int i = 0; i < len; ++i) {
                Point z = coding.to_plane({u[(i + len - 1) % len], u[i]});
                for (int j = 0; j < coding.t; ++j) {
                    q.points.push_back(z);
                    prod = model.jacobian(z) * prod;
                    z = model.step(z);
                    const double size = prod.max_abs();
                    if (size > 1e100) {
                        prod = (1.0 / size) * prod;
                        log_scale += std::log(size);
                    }
                }
                const Point expect = coding.to_plane({u[i], u[(i + 1) % len]});
                q.closure = std::max(q.closure, norm_max(z - expect));
            }
            q.chi = top_exponent(prod, log_scale) / static_cast<double>(q.points.size());

            const double w = 1.0 / static_cast<double>(q.points.size());
            for (std::size_t j = 0; j < family.size(); ++j) {
                double mean = 0.0;
                for (const Point& p : q.points) mean += w * family.value(j, p);
                q.rho_to_saddle += family.weight(j) * std::abs(mean - at_saddle[j]);
            }
            rep.min_chi = std::min(rep.min_chi, q.chi);
            rep.max_rho = std::max(rep.max_rho, q.rho_to_saddle);
            rep.orbits.push_back(std::move(q));
        }
    }
    rep.exponents_hold = rep.min_chi > rep.floor;
    rep.measures_hold = rep.max_rho < 1.0 / n;
    return rep;
}

SweepRow sweep_row(const SnakeModel& model, int n) {
    const ReturnTime rt = return_time(model);
    const HorseshoeCoding coding = code_horseshoe(model);
    const ExponentFloorReport floor = periodic_exponent_floor(coding, model, n);
    SweepRow row;
    row.legs = model.legs;
    row.amplitude = model.amplitude;
    row.t = rt.t;
    row.coded_entropy = coding.entropy;
    row.chi_p = floor.chi_p;
    row.min_chi_q = floor.min_chi;
    row.rho_to_mu_p = floor.max_rho;
    row.k1 = rt.k1;
    row.certified = coding.certified;
    return row;
}

SweepReport snake_sweep(double lambda, double a, double delta, int n, int max_legs) {
    if (n < 1) throw std::invalid_argument("snake_sweep: n must be positive");
    SweepReport rep;
    rep.lambda = lambda;
    rep.a = a;
    rep.delta = delta;
    rep.n = n;
    const double floor = std::log(lambda) - 1.0 / n;
    auto t_of = [&](int legs) { return return_time(build_snake(lambda, a, delta, legs)).t; };

    // N₁. t(N) is nondecreasing, so the upward sweep can jump through each
    // block of constant t: inside a block (log N)/t first exceeds the floor
    // at a known N, and the block end is found by bisection.
    int legs = 2;
    while (legs <= max_legs && !rep.n1) {
        const int t = t_of(legs);
        double guess = std::max(static_cast<double>(legs), std::floor(std::exp(floor * t)));
        while (!(std::log(guess) / t > floor)) guess += 1.0;
        if (guess > max_legs) break;
        const int target = static_cast<int>(guess);
        if (t_of(target) == t) {
            const HorseshoeCoding c = code_horseshoe(build_snake(lambda, a, delta, target));
            if (c.certified && c.entropy > floor) {
                rep.n1 = target;
                break;
            }
            legs = target + 1;
            continue;
        }
        int lo = legs, hi = target;
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (t_of(mid) == t ? lo : hi) = mid;
        }
        legs = hi;
    }

    // N₂ and N₃: plain upward sweeps on the coded orbits.
    for (int k = 2; k <= max_legs && (!rep.n2 || !rep.n3); ++k) {
        const SnakeModel model = build_snake(lambda, a, delta, k);
        const ExponentFloorReport r = periodic_exponent_floor(code_horseshoe(model), model, n);
        if (!rep.n2 && r.measures_hold) rep.n2 = k;
        if (!rep.n3 && r.exponents_hold) rep.n3 = k;
    }
    if (rep.n1 && rep.n2 && rep.n3) rep.accepted = std::max({*rep.n1, *rep.n2, *rep.n3});

    std::set<int> grid;
    for (int k = 2; k <= 16; ++k) grid.insert(k);
    const int top = rep.accepted ? *rep.accepted : 64;
    for (long k = 32; k <= top; k *= 2) grid.insert(static_cast<int>(k));
    grid.insert(top);
    for (int k : grid) rep.rows.push_back(sweep_row(build_snake(lambda, a, delta, k), n));
    return rep;
}

std::string to_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "N,A,t,coded_entropy,chi_p,min_chi_q,rho_to_mu_p,K1_fit\n";
    for (const SweepRow& r : report.rows)
        out << r.legs << ',' << format12(r.amplitude) << ',' << r.t << ',' << format12(r.coded_entropy) << ','
            << format12(r.chi_p) << ',' << format12(r.min_chi_q) << ',' << format12(r.rho_to_mu_p) << ','
            << format12(r.k1) << '\n';
    return out.str();
}

std::string to_json(const SweepReport& report) {
    auto opt = [](const std::optional<int>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["lambda"] = report.lambda;
    j["a"] = report.a;
    j["delta"] = report.delta;
    j["n"] = report.n;
    j["N1"] = opt(report.n1);
    j["N2"] = opt(report.n2);
    j["N3"] = opt(report.n3);
    j["accepted_N"] = opt(report.accepted);
    j["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& r : report.rows)
        j["rows"].push_back({{"N", r.legs},
                             {"A", r.amplitude},
                             {"t", r.t},
                             {"coded_entropy", r.coded_entropy},
                             {"certified", r.certified},
                             {"chi_p", r.chi_p},
                             {"min_chi_q", r.min_chi_q},
                             {"rho_to_mu_p", r.rho_to_mu_p},
                             {"K1_fit", r.k1}});
    return j.dump(2) + "\n";
}

}  // namespace symplab
