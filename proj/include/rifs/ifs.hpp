#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rifs {

// Thrown when an operation's stated precondition does not hold. The message
// names the violated condition so the CLI can surface it and exit with the
// dedicated status code.
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MapKind { Affine, Polynomial };

// Which random perturbation drives the system: either the contraction is
// multiplied by a uniform factor on [1-eps, 1+eps], or (affine maps only) the
// contraction ratio itself is drawn uniformly from [lambda_i-eps, lambda_i+eps].
enum class PerturbationModel { Multiplicative, AdditiveRatio };

std::string to_string(PerturbationModel model);
PerturbationModel perturbation_from_string(const std::string& name);

// Bounds on |f'| over [-1,1]: lambda_min <= |f'(x)| <= lambda_max.
struct DerivativeBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// One branch of the system. Affine maps are f(x) = lambda*x + a*(1-lambda)
// with fixpoint a; polynomial maps are cubics with a declared fixpoint.
// Cubics keep the derivative quadratic, so |f'| extrema have closed form.
struct MapSpec {
    MapKind kind = MapKind::Affine;
    double lambda = 0.5;              // affine contraction ratio
    std::array<double, 4> coeffs{};   // cubic coefficients c0..c3
    double fixpoint = 0.0;            // declared fixpoint a

    static MapSpec affine(double lambda, double fixpoint);
    static MapSpec cubic(const std::array<double, 4>& coeffs, double fixpoint);

    // Unchecked evaluation and derivative.
    double operator()(double x) const;
    double derivative(double x) const;

    // Extrema of |f'| over [-1,1], from the quadratic derivative's endpoint
    // and vertex values. If f' changes sign the minimum is 0.
    DerivativeBounds derivative_bounds() const;

    // Min/max of f over [-1,1] (endpoints plus interior critical points).
    std::pair<double, double> range_bounds() const;
};

// Domain-checked evaluation: x must lie in [-1,1).
double evaluate(const MapSpec& map, double x);

struct IFSSpec {
    std::vector<MapSpec> maps;
    std::vector<double> probabilities;
    PerturbationModel perturbation = PerturbationModel::Multiplicative;
    double epsilon = 0.0;

    std::size_t size() const { return maps.size(); }
    bool all_affine() const;
    // max_i lambda_{i,max}
    double lambda_max_max() const;
    double lambda_min_min() const;
};

// Applies branch i perturbed by the given noise realization.
//   Multiplicative: noise in [1-eps,1+eps],  x -> noise*f_i(x) + a_i*(1-noise)
//   AdditiveRatio:  noise in [l_i-eps,l_i+eps], x -> noise*x + a_i*(1-noise)
double perturbed_map(const IFSSpec& ifs, std::size_t i, double noise, double x);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct ValidationReport {
    std::vector<CheckResult> checks;    // hard hypotheses; all must pass
    std::vector<CheckResult> warnings;  // advisory (domain escape under extreme noise, eps size)
    bool passed = false;                // AND over `checks`
};

// Runs every hypothesis check the theorems need for the selected perturbation
// model. Failures are reported, never thrown.
ValidationReport validate(const IFSSpec& ifs);

struct ConditionValue {
    double value = 0.0;
    bool passes = false;
};

// sum_i p_i^2 * lambda_{i,max} / lambda_{i,min}^2, passes iff < 1.
// For affine maps this equals sum_i p_i^2 / lambda_i.
ConditionValue check_l2_condition(const IFSSpec& ifs);

// min_{i!=j} |a_j*l_i - a_i*l_j| / |l_i - l_j|, passes iff > 1.
// Equal ratios with distinct fixpoints count as +infinity (pass).
// Affine maps only.
ConditionValue check_transversality_a1(const IFSSpec& ifs);

// min_{i!=j} |a_i - a_j| / (2 + |a_i + a_j|); +infinity when l = 1.
double max_epsilon(const IFSSpec& ifs);

// Shannon entropy -sum p_i log p_i of the branch-choice process.
double entropy(std::span<const double> probabilities);

struct LyapunovEstimate {
    double value = 0.0;      // Monte Carlo estimate of E log|noise * f'|
    double std_error = 0.0;  // i.i.d. standard error of the mean
    std::size_t n = 0;
};

// Monte Carlo Lyapunov exponent along a stationary orbit. Deterministic for a
// given seed; throws precondition_error if the estimate is >= 0.
LyapunovEstimate lyapunov(const IFSSpec& ifs, std::size_t n_samples, std::uint64_t seed);

// entropy / |lyapunov|, the upper bound for the dimension of the invariant measure.
double dimension_bound(const IFSSpec& ifs, std::size_t n_samples, std::uint64_t seed);

} // namespace rifs
