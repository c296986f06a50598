#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symplab/maps.hpp"
#include "symplab/measures.hpp"

/// Two-dimensional model of a saddle whose unstable manifold returns along its
/// stable manifold, broken by a snake perturbation into an N-leg horseshoe.
///
/// Coordinates: x is the stable direction and y the unstable one, so the
/// saddle p = (0, 0) acts on V = [-Lx, Lx] × [-Ly, Ly] as (x/λ, λy). Orbits
/// leaving V through the top enter the exit strip E₁, are translated to E₂,
/// and are reinjected by an area-preserving affine map R onto a horizontal
/// segment of the stable axis centred at c. The snake
///     Θ(x, y) = (x, y + A cos(πN(x − c)/(2a)) ψ(|x − c|))
/// then bends that segment into N transverse crossings.
namespace symplab {

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A crossing of the snaked curve with the stable axis is not transverse.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SnakeModel {
    double lambda = 2.0;
    double a = 0.1;          ///< half-length of the tangency interval
    double delta = 0.05;     ///< C¹ budget of the snake
    int legs = 2;            ///< N
    double amplitude = 0.0;  ///< A = 2Kaδ/(πN)
    double k_const = 1.0;    ///< K

    // Geometry, fixed by (λ, a).
    double half_width = 1.0;    ///< Lx
    double half_height = 0.0;   ///< Ly
    double center = 0.0;        ///< c, tangency centre on the stable axis
    double shift = 0.0;         ///< translation E₁ → E₂
    double exit_center = 0.0;   ///< y₀, middle of the exit strip
    double stretch = 0.0;       ///< α, reinjection scale

    static constexpr int kTransit = 3;  ///< T: steps from the top of V back onto the snake

    /// Snake support radius 3a: ψ = 1 on [0, 2a] and smooth-steps to 0 at 3a.
    double support() const { return 3.0 * a; }

    Point saddle(Point p) const { return {p.x / lambda, lambda * p.y}; }
    Point reinject(Point p) const;  ///< R : E₂ → tangency box
    Point snake(Point p) const;     ///< Θ
    Mat2 snake_jacobian(Point p) const;

    bool in_exit(Point p) const;     ///< E₁
    bool in_transit(Point p) const;  ///< E₂

    /// g: R∘Θ on E₂, translation on E₁, the linear saddle elsewhere.
    Point step(Point p) const;
    Mat2 jacobian(Point p) const;

    /// g without the snake (Θ = id), the unperturbed map with a segment of tangency.
    Point step_unperturbed(Point p) const;

    /// "snake:lambda=..,a=..,delta=..,legs=.." on the plane.
    PlanarMap as_map() const;
    /// Reference box for measures: contains V, E₁, E₂ and the tangency box.
    Box frame() const;
};

/// Checks λ > 1, a > 0, 0 < δ ≤ 0.1, N ≥ 2 and sets A = 2aδ/(πN) (K = 1).
SnakeModel build_snake(double lambda, double a, double delta, int legs);
/// Same geometry with an arbitrary amplitude (A = 0 allowed), bypassing the
/// parameter checks. For probing return times and planted failures.
SnakeModel snake_with_amplitude(double lambda, double a, double amplitude, int legs);

/// φ(x, y) = (x, y − r(x)) for a graph r with r(0) = 0, r'(0) = 0.
struct FlatteningChart {
    std::function<double(double)> r;
    std::function<double(double)> dr;

    Point apply(Point p) const { return {p.x, p.y - r(p.x)}; }
    Point inverse(Point p) const { return {p.x, p.y + r(p.x)}; }
    Mat2 jacobian(Point p) const { return {1.0, 0.0, -dr(p.x), 1.0}; }
};

/// Throws std::invalid_argument unless |r(0)| and |r'(0)| are below 1e-12.
FlatteningChart flatten_graph(std::function<double(double)> r, std::function<double(double)> dr);

/// Transverse zeros of ξ ↦ A cos(πNξ/(2a)) on the half-open window [-a, a),
/// each certified by a sign change and |derivative| ≥ 1e-12. Throws
/// DegeneracyError on a tangential zero (including A = 0).
int count_legs(const SnakeModel& model);

/// sup ‖DΘ − Id‖ (max-abs entry) on a grid over |x − c| ≤ radius.
double snake_c1_size(const SnakeModel& model, double radius, int grid = 20001);

struct ReturnTime {
    int t = 0;             ///< linear steps + 2
    int linear_steps = 0;  ///< m: steps spent in V, the last one leaving it
    double k1 = 0.0;       ///< A·λ^t
    double top = 0.0;      ///< height of the returning strip, from corner iteration
    double offset = 0.0;   ///< stable-coordinate offset after reinjection
};

/// Smallest t = m + 2 whose returning strip D_t fits, together with the
/// reinjection offset, inside the snake band at scale A/2. Both sizes come
/// from iterating the corners of D_t through the unperturbed map. Throws
/// ConstructionError when m would exceed 1e4.
ReturnTime return_time(const SnakeModel& model);

/// Leg window in normalized coordinates: s, u ∈ [-1 − 1/(2N), 1 − 1/(2N)).
struct LegWindow {
    double lo = 0.0;
    double hi = 0.0;
};
LegWindow leg_window(int legs);

struct HorseshoeCoding {
    int legs = 0;
    int t = 0;
    int linear_steps = 0;
    double stretch_factor = 0.0;   ///< Â = λ^m A
    LegWindow window;
    bool certified = false;        ///< all N legs cross fully and gaps escape
    std::vector<char> leg_ok;      ///< per leg: disjoint, monotone, full crossing
    bool gaps_escape = false;
    int valid_legs = 0;
    /// 0/1 matrix, stored only for N ≤ 64 (row i = leg i maps across leg j).
    std::vector<std::vector<int>> transition;
    double spectral_radius = 0.0;
    double entropy = 0.0;          ///< log(spectral radius) / t
    std::vector<std::string> failures;

    /// Return map in normalized coordinates (s = stable, u = unstable position).
    Point return_map(Point su) const;
    /// Plane point of D_t with normalized coordinates (s, u).
    Point to_plane(Point su) const;

    // Constants of the normalized return map (s, u) ↦ (u, F(u) − s − c/a).
    double gain = 0.0;       ///< α Â / a
    double bias = 0.0;       ///< α y₀ / a + c / a
    double frequency = 0.0;  ///< πN / 2
    double center = 0.0;     ///< c
    double a = 0.0;
    double stretch = 0.0;    ///< α
    double exit_center = 0.0;
    double lambda = 0.0;
};

/// Certifies the N-leg horseshoe of the return map g^t on D_t with interval
/// arithmetic. `linear_steps` overrides m (planted failures use a short one).
HorseshoeCoding code_horseshoe(const SnakeModel& model, std::optional<int> linear_steps = std::nullopt);

/// |tan ∠(v, w)|; 0 for parallel vectors.
double angle(Point v, Point w);
/// Angle to span{basis}: |v⊥| / |v∥|, +∞ when v is orthogonal.
double angle_to_subspace(Point v, Point basis);

struct ExpansionReport {
    bool hypothesis_holds = false;  ///< ang(Dg^k v, E^s) ≥ 1
    double lhs = 0.0;               ///< |Dg^k(z) v|
    double rhs = 0.0;               ///< K₆ λ^k |v| min{ang(v, E^s), 1}
    double margin = 0.0;            ///< lhs − rhs
    double k6 = 0.0;
    double max_norm_lhs = 0.0;      ///< |Dg^k(z) v| in the max norm
    double max_norm_rhs = 0.0;      ///< λ^k |v| in the max norm
    bool holds = false;
    std::string note;
};

/// Lower bound for vectors pushed k steps through V. Throws DomainError if z
/// leaves V within k steps.
ExpansionReport verify_expansion(const SnakeModel& model, int k, Point v, Point z);

/// K₆ = 1/√2 from |v|∞ ≤ |v|₂ ≤ √2 |v|∞.
double norm_equivalence_constant();

/// C: smallest singular value of the T-step transit derivative, over a grid of E₁.
double transit_constant(const SnakeModel& model);

struct CodedOrbit {
    std::vector<int> word;          ///< leg indices, 0-based
    std::vector<Point> points;      ///< g-orbit, period |word|·t
    double chi = 0.0;
    double closure = 0.0;           ///< |g^period(z) − z|
    double rho_to_saddle = 0.0;     ///< ρ(μ_q, δ_p)
};

struct ExponentFloorReport {
    double chi_p = 0.0;             ///< log λ
    double floor = 0.0;             ///< χ(p) − 1/n
    double min_chi = std::numeric_limits<double>::infinity();
    double max_rho = 0.0;
    bool exponents_hold = false;    ///< every χ(q) > floor
    bool measures_hold = false;     ///< every ρ < 1/n
    double a_priori = 0.0;          ///< log((C K₆)^l λ^{k l}) / (l t) for l = 1
    std::vector<int> symbols;       ///< representative legs used
    std::vector<CodedOrbit> orbits;
};

/// Coded periodic orbits of words up to `max_word` over a representative
/// symbol set (all legs when N ≤ 8; otherwise 8 spread legs including both
/// ends), one per cyclic class.
ExponentFloorReport periodic_exponent_floor(const HorseshoeCoding& coding, const SnakeModel& model, int n,
                                            int max_word = 4);

/// Fraction of the segment within distance zeta of center.
double visit_frequency(const OrbitSegment& orbit, Point center, double zeta);

struct SweepRow {
    int legs = 0;
    double amplitude = 0.0;
    int t = 0;
    double coded_entropy = 0.0;
    double chi_p = 0.0;
    double min_chi_q = 0.0;
    double rho_to_mu_p = 0.0;
    double k1 = 0.0;
    bool certified = false;
};

struct SweepReport {
    double lambda = 0.0, a = 0.0, delta = 0.0;
    int n = 0;
    std::vector<SweepRow> rows;
    std::optional<int> n1;  ///< entropy: (log N)/t > χ(p) − 1/n
    std::optional<int> n2;  ///< measures: all ρ(μ_q, μ_p) < 1/n
    std::optional<int> n3;  ///< exponents: all χ(q) > χ(p) − 1/n
    std::optional<int> accepted;
};

/// Upward sweep for N₁ over blocks of constant return time (t(N) is monotone,
/// so each block end is found by bisection), then N₂ and N₃ by stepping N
/// from 2 until the property holds. Full rows are kept on a report grid.
SweepReport snake_sweep(double lambda, double a, double delta, int n, int max_legs = 1 << 22);

SweepRow sweep_row(const SnakeModel& model, int n);

std::string to_csv(const SweepReport& report);
std::string to_json(const SweepReport& report);

}  // namespace symplab
