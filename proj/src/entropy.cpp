#include "symplab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "symplab/parallel.hpp"

namespace symplab {

namespace {

constexpr double kSaturation = 0.9;
constexpr double kMaxResidual = 0.05;
constexpr int kMinWindow = 3;

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Precomputed orbits, row-major: orbit i occupies points[i*(len) .. i*len + n_max].
struct OrbitBank {
    int n_max = 0;
    std::vector<Point> points;
    std::vector<std::uint32_t> ids;  // surviving sample indices, in sample order

    std::size_t size() const { return ids.size(); }
    const Point* orbit(std::size_t k) const { return points.data() + k * static_cast<std::size_t>(n_max + 1); }
};

OrbitBank build_bank(const PlanarMap& map, long samples, std::uint64_t seed, int n_max, int workers) {
    const std::vector<Point> starts = sample_points(map, samples, seed);
    const std::size_t len = static_cast<std::size_t>(n_max + 1);
    std::vector<Point> all(starts.size() * len);
    std::vector<char> ok(starts.size(), 1);
    parallel_for(starts.size(), workers, [&](std::size_t i) {
        Point* out = all.data() + i * len;
        try {
            Point p = starts[i];
            out[0] = p;
            for (int j = 1; j <= n_max; ++j) {
                p = map.evaluate(p);
                out[j] = p;
            }
        } catch (const DomainError&) {
            ok[i] = 0;
        }
    });
    OrbitBank bank;
    bank.n_max = n_max;
    bank.points.reserve(all.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (!ok[i]) continue;
        bank.ids.push_back(static_cast<std::uint32_t>(i));
        bank.points.insert(bank.points.end(), all.begin() + static_cast<long>(i * len),
                           all.begin() + static_cast<long>((i + 1) * len));
    }
    return bank;
}

// Cell indexing along one axis with cells at least eps wide.
struct Axis {
    double period = 0.0;  // 0 = not periodic
    long cells = 0;
    double eps = 1.0;

    Axis(double p, double e) : period(p), eps(e) {
        if (period > 0.0) cells = std::max(1L, static_cast<long>(std::floor(period / eps)));
    }
    long index(double v) const {
        if (cells > 0) return std::min(cells - 1, static_cast<long>(std::floor(v / period * static_cast<double>(cells))));
        return static_cast<long>(std::floor(v / eps));
    }
    // Distinct neighbor indices of cell i; returns how many were written.
    int neighbors(long i, long out[3]) const {
        if (cells == 0) {
            out[0] = i - 1, out[1] = i, out[2] = i + 1;
            return 3;
        }
        int k = 0;
        for (long d = -1; d <= 1; ++d) {
            const long j = ((i + d) % cells + cells) % cells;
            bool seen = false;
            for (int m = 0; m < k; ++m) seen = seen || out[m] == j;
            if (!seen) out[k++] = j;
        }
        return k;
    }
};

std::uint64_t cell_key(long a, long b, long c, long d) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(a) + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ static_cast<std::uint64_t>(b));
    h = mix(h ^ static_cast<std::uint64_t>(c));
    return mix(h ^ static_cast<std::uint64_t>(d));
}

// Open-addressed buckets of accepted orbits keyed by the cells of (x_0, x_n).
class Buckets {
public:
    explicit Buckets(std::size_t capacity_hint) {
        std::size_t cap = 16;
        while (cap < 2 * capacity_hint + 16) cap <<= 1;
        keys_.assign(cap, 0);
        heads_.assign(cap, -1);
        mask_ = cap - 1;
    }

    void insert(std::uint64_t key, std::int32_t item, std::vector<std::int32_t>& next) {
        std::size_t s = slot(key);
        if (heads_[s] < 0) keys_[s] = key;
        next[static_cast<std::size_t>(item)] = heads_[s];
        heads_[s] = item;
    }

    std::int32_t head(std::uint64_t key) const {
        std::size_t s = key & mask_;
        while (heads_[s] >= 0) {
            if (keys_[s] == key) return heads_[s];
            s = (s + 1) & mask_;
        }
        return -1;
    }

private:
    std::size_t slot(std::uint64_t key) const {
        std::size_t s = key & mask_;
        while (heads_[s] >= 0 && keys_[s] != key) s = (s + 1) & mask_;
        return s;
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::int32_t> heads_;
    std::size_t mask_ = 0;
};

// One greedy pass. `seed_set` must already be (n, eps)-separated; it is kept
// and the remaining orbits are offered in sample order.
std::vector<std::int32_t> greedy_pass(const OrbitBank& bank, const Topology& topo, int n, double eps,
                                      const std::vector<std::int32_t>& seed_set) {
    const Axis ax(topo.periodic_x() ? topo.period_x() : 0.0, eps);
    const Axis ay(topo.periodic_y() ? topo.period_y() : 0.0, eps);
    const std::size_t count = bank.size();
    Buckets buckets(count);
    std::vector<std::int32_t> next(count, -1);
    std::vector<char> taken(count, 0);

    auto key_of = [&](const Point* o) {
        return cell_key(ax.index(o[0].x), ay.index(o[0].y), ax.index(o[n].x), ay.index(o[n].y));
    };
    auto separated = [&](const Point* a, const Point* b) {
        for (int j = 0; j <= n; ++j)
            if (topo.distance(a[j], b[j]) > eps) return true;
        return false;
    };

    std::vector<std::int32_t> accepted;
    accepted.reserve(seed_set.size() + 1024);
    for (std::int32_t k : seed_set) {
        buckets.insert(key_of(bank.orbit(static_cast<std::size_t>(k))), k, next);
        taken[static_cast<std::size_t>(k)] = 1;
        accepted.push_back(k);
    }

    long n0x[3], n0y[3], nnx[3], nny[3];
    for (std::size_t i = 0; i < count; ++i) {
        if (taken[i]) continue;
        const Point* o = bank.orbit(i);
        const int c0x = ax.neighbors(ax.index(o[0].x), n0x);
        const int c0y = ay.neighbors(ay.index(o[0].y), n0y);
        const int cnx = ax.neighbors(ax.index(o[n].x), nnx);
        const int cny = ay.neighbors(ay.index(o[n].y), nny);
        bool ok = true;
        for (int a = 0; a < c0x && ok; ++a)
            for (int b = 0; b < c0y && ok; ++b)
                for (int c = 0; c < cnx && ok; ++c)
                    for (int d = 0; d < cny && ok; ++d)
                        for (std::int32_t q = buckets.head(cell_key(n0x[a], n0y[b], nnx[c], nny[d])); q >= 0;
                             q = next[static_cast<std::size_t>(q)]) {
                            if (!separated(o, bank.orbit(static_cast<std::size_t>(q)))) {
                                ok = false;
                                break;
                            }
                        }
        if (!ok) continue;
        const auto item = static_cast<std::int32_t>(i);
        buckets.insert(key_of(o), item, next);
        accepted.push_back(item);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

void validate(const EntropySchedule& s) {
    if (s.n_min < 1 || s.n_max < s.n_min) throw std::invalid_argument("entropy schedule: need 1 <= n_min <= n_max");
    if (s.n_max - s.n_min + 1 < 4) throw std::invalid_argument("entropy schedule: n-range needs at least 4 points");
    if (s.eps.empty()) throw std::invalid_argument("entropy schedule: eps list is empty");
    for (std::size_t i = 0; i < s.eps.size(); ++i) {
        if (!(s.eps[i] > 0.0)) throw std::invalid_argument("entropy schedule: eps must be positive");
        if (i > 0 && !(s.eps[i] < s.eps[i - 1]))
            throw std::invalid_argument("entropy schedule: eps list must be strictly decreasing");
    }
    if (s.samples < 1) throw std::invalid_argument("entropy schedule: samples must be at least 1");
}

struct LineFit {
    double slope = 0.0;
    double residual = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t lo, std::size_t hi) {
    const double m = static_cast<double>(hi - lo);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sx += xs[i], sy += ys[i];
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = ys[i] - (my + f.slope * (xs[i] - mx));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / m);
    return f;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

long SeparatedCountTable::at(int n, double eps) const {
    for (const auto& e : entries)
        if (e.n == n && e.eps == eps) return e.count;
    throw std::out_of_range("separated count table: no entry for n=" + std::to_string(n) + " eps=" + format12(eps));
}

std::vector<Point> sample_points(const PlanarMap& map, long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("sample_points: samples must be at least 1");
    SplitMix64 rng(seed);
    const double shift_u = rng.uniform();
    const double shift_v = rng.uniform();
    std::vector<Point> pts(static_cast<std::size_t>(samples));
    for (long i = 0; i < samples; ++i) {
        double u = radical_inverse(static_cast<std::uint64_t>(i + 1), 2) + shift_u;
        double v = radical_inverse(static_cast<std::uint64_t>(i + 1), 3) + shift_v;
        u -= std::floor(u);
        v -= std::floor(v);
        pts[static_cast<std::size_t>(i)] = map.domain().at(u, v);
    }
    return pts;
}

long count_separated(const PlanarMap& map, int n, double eps, long samples, std::uint64_t seed, int workers) {
    if (n < 1) throw std::invalid_argument("count_separated: n must be at least 1");
    if (!(eps > 0.0)) throw std::invalid_argument("count_separated: eps must be positive");
    if (samples < 1) throw std::invalid_argument("count_separated: samples must be at least 1");
    const OrbitBank bank = build_bank(map, samples, seed, n, workers);
    return static_cast<long>(greedy_pass(bank, map.topology(), n, eps, {}).size());
}

SeparatedCountTable separated_count_table(const PlanarMap& map, const EntropySchedule& schedule) {
    validate(schedule);
    const OrbitBank bank = build_bank(map, schedule.samples, schedule.seed, schedule.n_max, schedule.workers);
    SeparatedCountTable table;
    table.map_spec = map.spec();
    table.seed = schedule.seed;
    table.samples = schedule.samples;
    table.dropped = schedule.samples - static_cast<long>(bank.size());

    const int rows = schedule.n_max - schedule.n_min + 1;
    std::vector<std::vector<std::int32_t>> prev_eps(static_cast<std::size_t>(rows));
    for (double eps : schedule.eps) {
        std::vector<std::vector<std::int32_t>> cur(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) {
            const auto& from_eps = prev_eps[static_cast<std::size_t>(r)];
            const std::vector<std::int32_t> empty;
            const auto& from_n = r > 0 ? cur[static_cast<std::size_t>(r - 1)] : empty;
            const auto& seed_set = from_n.size() >= from_eps.size() ? from_n : from_eps;
            cur[static_cast<std::size_t>(r)] = greedy_pass(bank, map.topology(), schedule.n_min + r, eps, seed_set);
            table.entries.push_back({schedule.n_min + r, eps, static_cast<long>(cur[static_cast<std::size_t>(r)].size()),
                                     schedule.samples});
        }
        prev_eps = std::move(cur);
    }
    assert_monotone(table);
    return table;
}

void assert_monotone(const SeparatedCountTable& table) {
    for (const auto& a : table.entries) {
        for (const auto& b : table.entries) {
            if (a.eps == b.eps && b.n == a.n + 1 && b.count < a.count)
                throw std::logic_error("separated count decreased in n at eps=" + format12(a.eps) +
                                       ", n=" + std::to_string(a.n));
            if (a.n == b.n && b.eps < a.eps && b.count < a.count)
                throw std::logic_error("separated count increased with eps at n=" + std::to_string(a.n));
        }
    }
}

EntropyEstimate fit_entropy(const SeparatedCountTable& table, const EntropySchedule& schedule) {
    validate(schedule);
    EntropyEstimate est;
    est.n_min = schedule.n_min;
    est.n_max = schedule.n_max;
    est.eps = schedule.eps;
    est.finite_sample_correction = schedule.finite_sample_correction;
    est.table = table;
    const double effective = static_cast<double>(table.samples - table.dropped);
    if (table.dropped > 0)
        est.warnings.push_back(std::to_string(table.dropped) + " samples left the chart and were dropped");

    bool any_usable = false;
    double best = 0.0;
    for (double eps : schedule.eps) {
        std::vector<double> xs, ys;
        for (int n = schedule.n_min; n <= schedule.n_max; ++n) {
            const long c = table.at(n, eps);
            if (static_cast<double>(c) > kSaturation * effective) break;  // counts only grow with n
            xs.push_back(n);
            double y = std::log(static_cast<double>(std::max(c, 1L)));
            if (schedule.finite_sample_correction) y -= std::log1p(-static_cast<double>(c) / effective);
            ys.push_back(y);
        }
        const long last = table.at(schedule.n_max, eps);
        if (static_cast<double>(last) > kSaturation * effective) {
            std::string w = fmt("eps=%g: count exceeds 0.9*samples at n=%g", eps, schedule.n_max);
            if (schedule.strict_saturation) throw SaturationError(w + "; enlarge samples");
            w += xs.empty() ? "; no unsaturated n" : "; fit restricted to n<=" + std::to_string(schedule.n_min + static_cast<int>(xs.size()) - 1);
            est.warnings.push_back(w);
        }

        SlopeFit fit;
        fit.eps = eps;
        // Longest window first, earliest start on ties.
        for (std::size_t len = xs.size(); len >= static_cast<std::size_t>(kMinWindow) && !fit.usable; --len) {
            for (std::size_t lo = 0; lo + len <= xs.size(); ++lo) {
                const LineFit lf = fit_line(xs, ys, lo, lo + len);
                if (lf.residual < kMaxResidual) {
                    fit.slope = lf.slope;
                    fit.residual = lf.residual;
                    fit.n_lo = static_cast<int>(xs[lo]);
                    fit.n_hi = static_cast<int>(xs[lo + len - 1]);
                    fit.usable = true;
                    break;
                }
            }
        }
        if (fit.usable) {
            best = any_usable ? std::max(best, fit.slope) : fit.slope;
            any_usable = true;
        } else {
            est.warnings.push_back(fmt("eps=%g: no linear window of 3 or more unsaturated points", eps));
        }
        est.slopes.push_back(fit);
    }
    if (!any_usable) throw SaturationError("no eps of the schedule leaves a usable unsaturated window; enlarge samples");
    est.value = std::max(0.0, best);
    return est;
}

EntropyEstimate estimate_entropy(const PlanarMap& map, const EntropySchedule& schedule) {
    return fit_entropy(separated_count_table(map, schedule), schedule);
}

double shift_entropy(int symbols, int return_time) {
    if (symbols < 2) throw std::invalid_argument("shift_entropy: need at least 2 symbols");
    if (return_time < 1) throw std::invalid_argument("shift_entropy: return time must be positive");
    return std::log(static_cast<double>(symbols)) / return_time;
}

EntropyBoundReport check_entropy_bound(const EntropyEstimate& estimate, const PeriodicCatalog& catalog,
                                       double tolerance) {
    EntropyBoundReport r;
    r.h_est = estimate.value;
    r.tolerance = tolerance;
    for (const auto& o : catalog.orbits) {
        if (o.stability != Stability::Hyperbolic) continue;
        const double v = sum_positive_exponents(o);
        if (!r.bound || v > *r.bound) r.bound = v;
    }
    r.s_n = s_n(catalog);
    if (!r.bound) {
        r.note = "skipped: catalog has no hyperbolic orbit";
        return r;
    }
    r.violated = r.h_est > *r.bound + tolerance;
    r.equality_gap = std::abs(r.h_est - *r.s_n);
    r.note = r.violated ? "violated: estimate exceeds the exponent bound" : "ok";
    return r;
}

std::string to_csv(const SeparatedCountTable& table) {
    std::string out = "n,eps,count,samples\n";
    for (const auto& e : table.entries)
        out += std::to_string(e.n) + ',' + format12(e.eps) + ',' + std::to_string(e.count) + ',' +
               std::to_string(e.samples) + '\n';
    return out;
}

std::string to_json(const EntropyEstimate& estimate) {
    nlohmann::ordered_json j;
    j["value"] = estimate.value;
    j["slopes"] = nlohmann::ordered_json::array();
    for (const auto& s : estimate.slopes) {
        nlohmann::ordered_json e;
        e["eps"] = s.eps;
        e["slope"] = s.slope;
        e["residual"] = s.residual;
        e["n_lo"] = s.n_lo;
        e["n_hi"] = s.n_hi;
        e["usable"] = s.usable;
        j["slopes"].push_back(e);
    }
    j["warnings"] = estimate.warnings;
    j["n_min"] = estimate.n_min;
    j["n_max"] = estimate.n_max;
    j["eps"] = estimate.eps;
    j["count_model"] = estimate.finite_sample_correction ? "k/(1-k/S)" : "k";
    j["map"] = estimate.table.map_spec;
    j["seed"] = estimate.table.seed;
    j["samples"] = estimate.table.samples;
    return j.dump(2) + "\n";
}

}  // namespace symplab
