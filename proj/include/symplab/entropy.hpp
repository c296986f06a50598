#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symplab/maps.hpp"
#include "symplab/periodic.hpp"

namespace symplab {

/// Thrown when every eps of a schedule is saturated, so no growth rate can be fitted.
class SaturationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EntropySchedule {
    int n_min = 6;
    int n_max = 14;
    std::vector<double> eps{0.1, 0.05, 0.025};  ///< strictly decreasing
    long samples = 200000;
    std::uint64_t seed = 1;
    int workers = 1;
    /// Throw SaturationError as soon as any eps saturates at n_max instead of
    /// fitting the unsaturated prefix.
    bool strict_saturation = false;
    /// Fit log(k / (1 − k/S)) instead of log k, undoing the first-order loss of
    /// a greedy packing limited by S samples (see estimate_entropy).
    bool finite_sample_correction = true;
};

struct CountEntry {
    int n = 0;
    double eps = 0.0;
    long count = 0;
    long samples = 0;
};

struct SeparatedCountTable {
    std::string map_spec;
    std::uint64_t seed = 0;
    long samples = 0;         ///< sample points requested
    long dropped = 0;         ///< samples whose orbit left the chart
    std::vector<CountEntry> entries;  ///< eps-major, n ascending within each eps

    /// Count for (n, eps); throws std::out_of_range if absent.
    long at(int n, double eps) const;
};

struct SlopeFit {
    double eps = 0.0;
    double slope = 0.0;
    double residual = 0.0;   ///< RMS residual of log count about the fitted line
    int n_lo = 0;            ///< fitted window, inclusive
    int n_hi = 0;
    bool usable = false;     ///< false when fewer than 3 unsaturated points fit
};

struct EntropyEstimate {
    double value = 0.0;
    std::vector<SlopeFit> slopes;
    std::vector<std::string> warnings;
    int n_min = 0;
    int n_max = 0;
    std::vector<double> eps;
    bool finite_sample_correction = true;
    SeparatedCountTable table;
};

/// Quasi-random sample points in the map's domain box: a Halton (2, 3)
/// sequence under a seeded random shift modulo 1.
std::vector<Point> sample_points(const PlanarMap& map, long samples, std::uint64_t seed);

/// Greedy maximal (n, eps)-separated subset of `samples` quasi-random points
/// under the Bowen metric max over 0 ≤ j ≤ n.
long count_separated(const PlanarMap& map, int n, double eps, long samples, std::uint64_t seed, int workers = 1);

/// Counts on the whole (n, eps) grid. Each pass is seeded with the larger of
/// the sets found at (n − 1, eps) and at (n, previous eps), both of which are
/// already separated, so the table is monotone in n and in eps by construction.
SeparatedCountTable separated_count_table(const PlanarMap& map, const EntropySchedule& schedule);

/// Slope of log count against n per eps, max over eps.
///
/// Greedy packing of S sample points saturates before the packing it
/// approximates: for the thin Bowen balls of a hyperbolic map it behaves like
/// one-dimensional random sequential adsorption, whose approach to jamming is
/// 1/S, so 1/k ≈ 1/r + 1/S. With the correction enabled the fit uses
/// r = k / (1 − k/S).
EntropyEstimate estimate_entropy(const PlanarMap& map, const EntropySchedule& schedule);

/// Fits slopes to an existing table (exposed for tests and reports).
EntropyEstimate fit_entropy(const SeparatedCountTable& table, const EntropySchedule& schedule);

/// Throws std::logic_error if the table is not monotone in n and in eps.
void assert_monotone(const SeparatedCountTable& table);

/// Entropy of the full N-shift read at return time t: log(N) / t.
double shift_entropy(int symbols, int return_time);

struct EntropyBoundReport {
    double h_est = 0.0;
    std::optional<double> bound;    ///< max sum of positive exponents; nullopt = skipped
    double tolerance = 0.1;
    bool violated = false;
    std::optional<double> s_n;      ///< same value as `bound` in dimension two
    std::optional<double> equality_gap;  ///< |h_est − s_n|
    std::string note;
};

EntropyBoundReport check_entropy_bound(const EntropyEstimate& estimate, const PeriodicCatalog& catalog,
                                       double tolerance = 0.1);

/// CSV columns n,eps,count,samples.
std::string to_csv(const SeparatedCountTable& table);
/// {"value", "slopes": [{"eps", "slope", "residual"}], "warnings": [...]} plus the schedule.
std::string to_json(const EntropyEstimate& estimate);

}  // namespace symplab
