#pragma once

#include <string>
#include <vector>

#include "symplab/maps.hpp"
#include "symplab/periodic.hpp"

namespace symplab {

/// Finitely supported probability measure on a phase space.
class AtomicMeasure {
public:
    /// Validates weights (positive, summing to 1 within 1e-12) and merges
    /// atoms closer than 1e-12, keeping first-occurrence order.
    AtomicMeasure(Topology topology, std::vector<Point> atoms, std::vector<double> weights);

    const Topology& topology() const { return topology_; }
    const std::vector<Point>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return atoms_.size(); }

    /// ∫ φ dμ.
    template <typename Fn>
    double integrate(Fn&& phi) const {
        double s = 0.0;
        for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * phi(atoms_[i]);
        return s;
    }

private:
    Topology topology_;
    std::vector<Point> atoms_;
    std::vector<double> weights_;
};

/// μ_p: weight 1/τ on each orbit point.
AtomicMeasure periodic_measure(const PeriodicOrbit& orbit, const Topology& topology);
/// Uniform weights on the segment points, duplicates merged.
AtomicMeasure empirical_measure(const OrbitSegment& segment);
/// f_*μ.
AtomicMeasure pushforward(const PlanarMap& map, const AtomicMeasure& mu);

/// Ordered family of bounded test functions with weights 2^-(k+1), k from 0.
///
/// At order m there are (m+1)² functions, listed by degree and then
/// lexicographically. Angle harmonics use frequencies |j| ≤ m/2, cos for
/// (j1, j2) after (0, 0) in lexicographic order and sin before it. Line
/// coordinates are rescaled into [-1, 1] by a reference box, clamped, and
/// enter through Chebyshev polynomials T_d, d ≤ m, so every |φ_k| ≤ 1.
///   torus2        e_j(x, y), j ∈ [-m/2, m/2]², degree max|j_i|
///   cylinder      e_j(x) T_d(ŷ), |j| ≤ m/2, degree max(|j|, d)
///   sphere_chart  same as cylinder with ŷ = z
///   plane         T_a(x̂) T_b(ŷ), degree max(a, b)
class TestFunctionFamily {
public:
    struct Term {
        int freq_x = 0;   ///< angle frequency, or Chebyshev degree on a line axis
        int freq_y = 0;
        bool sine = false;
        int degree = 0;
        double lipschitz = 0.0;  ///< in the max norm of the chart
        std::string label;
    };

    /// `box` rescales line coordinates; ignored on periodic axes and for the sphere height.
    static TestFunctionFamily for_topology(const Topology& topology, int order = 8, Box box = {-1.0, 1.0, -1.0, 1.0});

    const Topology& topology() const { return topology_; }
    int order() const { return order_; }
    std::size_t size() const { return terms_.size(); }
    const Term& term(std::size_t k) const { return terms_[k]; }
    double weight(std::size_t k) const;
    double value(std::size_t k, Point p) const;

private:
    TestFunctionFamily(Topology topology, int order, Box box) : topology_(topology), order_(order), box_(box) {}
    double angle_x(double v) const;
    double angle_y(double v) const;
    double line_x(double v) const;
    double line_y(double v) const;

    Topology topology_;
    int order_;
    Box box_;
    std::vector<Term> terms_;
};

/// ρ(μ, ν) = Σ_k 2^-(k+1) |∫φ_k dμ − ∫φ_k dν|. Throws DomainError when the
/// topologies of the measures and the family differ.
double weak_star_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, const TestFunctionFamily& family);

/// Invariant measure of a shift on N symbols: Bernoulli (no transition
/// matrix) or Markov with stationary vector π.
class ShiftMeasure {
public:
    static ShiftMeasure bernoulli(std::vector<double> probabilities);
    static ShiftMeasure uniform(int symbols);
    /// Stationary vector found by power iteration; throws if it does not settle.
    static ShiftMeasure markov(std::vector<std::vector<double>> transition);

    int symbols() const { return static_cast<int>(stationary_.size()); }
    const std::vector<double>& stationary() const { return stationary_; }
    const std::vector<std::vector<double>>& transition() const { return transition_; }
    bool is_markov() const { return !transition_.empty(); }

private:
    std::vector<double> stationary_;
    std::vector<std::vector<double>> transition_;
};

/// Entropy of the shift measure divided by the return time t.
double shift_metric_entropy(const ShiftMeasure& measure, int return_time);

/// {"atoms": [[x, y], ...], "weights": [...], "topology": "..."}.
std::string to_json(const AtomicMeasure& mu);

}  // namespace symplab
