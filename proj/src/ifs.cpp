#include "rifs/ifs.hpp"
#include "rifs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rifs {

namespace {
constexpr double kEqTol = 1e-12;       // equality checks
constexpr double kDistinctTol = 1e-9;  // fixpoint distinctness
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

std::string to_string(PerturbationModel model) {
    return model == PerturbationModel::Multiplicative ? "multiplicative" : "additive_ratio";
}

PerturbationModel perturbation_from_string(const std::string& name) {
    if (name == "multiplicative") return PerturbationModel::Multiplicative;
    if (name == "additive_ratio") return PerturbationModel::AdditiveRatio;
    throw precondition_error("unknown perturbation model: " + name);
}

MapSpec MapSpec::affine(double lambda, double fixpoint) {
    MapSpec m;
    m.kind = MapKind::Affine;
    m.lambda = lambda;
    m.fixpoint = fixpoint;
    return m;
}

MapSpec MapSpec::cubic(const std::array<double, 4>& coeffs, double fixpoint) {
    MapSpec m;
    m.kind = MapKind::Polynomial;
    m.coeffs = coeffs;
    m.fixpoint = fixpoint;
    return m;
}

double MapSpec::operator()(double x) const {
    if (kind == MapKind::Affine) return lambda * x + fixpoint * (1.0 - lambda);
    // Horner
    return ((coeffs[3] * x + coeffs[2]) * x + coeffs[1]) * x + coeffs[0];
}

double MapSpec::derivative(double x) const {
    if (kind == MapKind::Affine) return lambda;
    return (3.0 * coeffs[3] * x + 2.0 * coeffs[2]) * x + coeffs[1];
}

DerivativeBounds MapSpec::derivative_bounds() const {
    if (kind == MapKind::Affine) return {std::abs(lambda), std::abs(lambda)};
    // f' is the quadratic q(x) = c1 + 2 c2 x + 3 c3 x^2; extrema of q over
    // [-1,1] sit at the endpoints or at the vertex x* = -c2/(3 c3).
    double q_lo = kInf, q_hi = -kInf;
    auto consider = [&](double x) {
        double q = derivative(x);
        q_lo = std::min(q_lo, q);
        q_hi = std::max(q_hi, q);
    };
    consider(-1.0);
    consider(1.0);
    if (coeffs[3] != 0.0) {
        double vertex = -coeffs[2] / (3.0 * coeffs[3]);
        if (vertex > -1.0 && vertex < 1.0) consider(vertex);
    }
    if (q_lo <= 0.0 && q_hi >= 0.0) {
        // f' crosses zero somewhere on the interval
        return {0.0, std::max(std::abs(q_lo), std::abs(q_hi))};
    }
    double a = std::abs(q_lo), b = std::abs(q_hi);
    return {std::min(a, b), std::max(a, b)};
}

std::pair<double, double> MapSpec::range_bounds() const {
    double lo = kInf, hi = -kInf;
    auto consider = [&](double x) {
        double v = (*this)(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    consider(-1.0);
    consider(1.0);
    if (kind == MapKind::Polynomial) {
        // interior roots of the quadratic f' = 0
        double a = 3.0 * coeffs[3], b = 2.0 * coeffs[2], c = coeffs[1];
        if (a == 0.0) {
            if (b != 0.0) {
                double root = -c / b;
                if (root > -1.0 && root < 1.0) consider(root);
            }
        } else {
            double disc = b * b - 4.0 * a * c;
            if (disc >= 0.0) {
                double s = std::sqrt(disc);
                for (double root : {(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)})
                    if (root > -1.0 && root < 1.0) consider(root);
            }
        }
    }
    return {lo, hi};
}

double evaluate(const MapSpec& map, double x) {
    if (!(x >= -1.0 && x < 1.0))
        throw std::domain_error("evaluate: x outside [-1,1)");
    return map(x);
}

bool IFSSpec::all_affine() const {
    return std::all_of(maps.begin(), maps.end(),
                       [](const MapSpec& m) { return m.kind == MapKind::Affine; });
}

double IFSSpec::lambda_max_max() const {
    double v = 0.0;
    for (const auto& m : maps) v = std::max(v, m.derivative_bounds().lambda_max);
    return v;
}

double IFSSpec::lambda_min_min() const {
    double v = kInf;
    for (const auto& m : maps) v = std::min(v, m.derivative_bounds().lambda_min);
    return v;
}

double perturbed_map(const IFSSpec& ifs, std::size_t i, double noise, double x) {
    if (i >= ifs.size()) throw precondition_error("perturbed_map: map index out of range");
    const MapSpec& map = ifs.maps[i];
    const double eps = ifs.epsilon;
    if (ifs.perturbation == PerturbationModel::Multiplicative) {
        if (noise < 1.0 - eps - kEqTol || noise > 1.0 + eps + kEqTol)
            throw precondition_error("perturbed_map: noise outside [1-eps, 1+eps]");
        return noise * map(x) + map.fixpoint * (1.0 - noise);
    }
    if (map.kind != MapKind::Affine)
        throw precondition_error("perturbed_map: additive-ratio noise requires affine maps");
    if (noise < map.lambda - eps - kEqTol || noise > map.lambda + eps + kEqTol)
        throw precondition_error("perturbed_map: noise outside [lambda_i-eps, lambda_i+eps]");
    return noise * x + map.fixpoint * (1.0 - noise);
}

ConditionValue check_l2_condition(const IFSSpec& ifs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        auto db = ifs.maps[i].derivative_bounds();
        double p = ifs.probabilities[i];
        if (db.lambda_min <= 0.0) return {kInf, false};
        sum += p * p * db.lambda_max / (db.lambda_min * db.lambda_min);
    }
    return {sum, sum < 1.0};
}

ConditionValue check_transversality_a1(const IFSSpec& ifs) {
    if (!ifs.all_affine())
        throw precondition_error("check_transversality_a1: all maps must be affine");
    double worst = kInf;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            double li = ifs.maps[i].lambda, lj = ifs.maps[j].lambda;
            double ai = ifs.maps[i].fixpoint, aj = ifs.maps[j].fixpoint;
            if (li == lj) continue;  // ratio is +inf: numerator l_i|a_j - a_i| > 0
            worst = std::min(worst, std::abs((aj * li - ai * lj) / (li - lj)));
        }
    }
    return {worst, worst > 1.0};
}

double max_epsilon(const IFSSpec& ifs) {
    double worst = kInf;
    for (std::size_t i = 0; i < ifs.size(); ++i)
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            double ai = ifs.maps[i].fixpoint, aj = ifs.maps[j].fixpoint;
            worst = std::min(worst, std::abs(ai - aj) / (2.0 + std::abs(ai + aj)));
        }
    return worst;
}

namespace {

void append_check(std::vector<CheckResult>& out, std::string name, bool passed,
                  double value, double threshold) {
    out.push_back({std::move(name), passed, value, threshold});
}

// Extremes of the perturbed map over [-1,1] at a given noise value.
std::pair<double, double> perturbed_range(const MapSpec& map, PerturbationModel model,
                                          double noise) {
    if (model == PerturbationModel::Multiplicative) {
        auto [lo, hi] = map.range_bounds();
        double a = noise * lo + map.fixpoint * (1.0 - noise);
        double b = noise * hi + map.fixpoint * (1.0 - noise);
        return {std::min(a, b), std::max(a, b)};
    }
    double a = noise * -1.0 + map.fixpoint * (1.0 - noise);
    double b = noise * 1.0 + map.fixpoint * (1.0 - noise);
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

ValidationReport validate(const IFSSpec& ifs) {
    ValidationReport report;
    auto& checks = report.checks;

    const std::size_t l = ifs.size();
    append_check(checks, "map_count", l >= 1, static_cast<double>(l), 1.0);
    if (l == 0 || ifs.probabilities.size() != l) {
        append_check(checks, "probability_count",
                     ifs.probabilities.size() == l && l > 0,
                     static_cast<double>(ifs.probabilities.size()), static_cast<double>(l));
        report.passed = false;
        return report;
    }

    double psum = 0.0, pmin = kInf;
    for (double p : ifs.probabilities) {
        psum += p;
        pmin = std::min(pmin, p);
    }
    append_check(checks, "probability_sum", std::abs(psum - 1.0) <= kEqTol,
                 std::abs(psum - 1.0), kEqTol);
    append_check(checks, "probability_positive", pmin > 0.0, pmin, 0.0);

    append_check(checks, "epsilon_nonnegative", ifs.epsilon >= 0.0, ifs.epsilon, 0.0);

    for (std::size_t i = 0; i < l; ++i) {
        const MapSpec& map = ifs.maps[i];
        std::string tag = "map" + std::to_string(i);

        auto [lo, hi] = map.range_bounds();
        double excursion = std::max({lo < -1.0 ? -1.0 - lo : 0.0,
                                     hi > 1.0 ? hi - 1.0 : 0.0});
        append_check(checks, tag + "_range", excursion <= kEqTol, excursion, kEqTol);

        double fp_gap = std::abs(map(map.fixpoint) - map.fixpoint);
        append_check(checks, tag + "_fixpoint", fp_gap <= kEqTol, fp_gap, kEqTol);

        auto db = map.derivative_bounds();
        append_check(checks, tag + "_contraction_lower", db.lambda_min > 0.0,
                     db.lambda_min, 0.0);
        append_check(checks, tag + "_contraction_upper", db.lambda_max < 1.0,
                     db.lambda_max, 1.0);
    }

    double min_fixpoint_gap = kInf;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i + 1; j < l; ++j)
            min_fixpoint_gap = std::min(
                min_fixpoint_gap, std::abs(ifs.maps[i].fixpoint - ifs.maps[j].fixpoint));
    if (l >= 2)
        append_check(checks, "distinct_fixpoints", min_fixpoint_gap > kDistinctTol,
                     min_fixpoint_gap, kDistinctTol);

    auto l2 = check_l2_condition(ifs);
    append_check(checks, "l2_condition", l2.passes, l2.value, 1.0);

    if (ifs.perturbation == PerturbationModel::AdditiveRatio) {
        append_check(checks, "additive_requires_affine", ifs.all_affine(),
                     ifs.all_affine() ? 1.0 : 0.0, 1.0);
        if (ifs.all_affine()) {
            double min_ratio_margin = kInf;
            for (const auto& m : ifs.maps)
                min_ratio_margin = std::min(min_ratio_margin, m.lambda - ifs.epsilon);
            append_check(checks, "ratio_noise_positive", min_ratio_margin > 0.0,
                         min_ratio_margin, 0.0);
            if (l >= 2) {
                auto a1 = check_transversality_a1(ifs);
                append_check(checks, "transversality_a1", a1.passes, a1.value, 1.0);
            }
        }
    }

    // Advisory: perturbed maps should stay inside [-1,1) at extreme noise,
    // otherwise samplers can escape the domain. Reported, not enforced.
    if (ifs.epsilon > 0.0) {
        for (std::size_t i = 0; i < l; ++i) {
            const MapSpec& map = ifs.maps[i];
            double noise_lo, noise_hi;
            if (ifs.perturbation == PerturbationModel::Multiplicative) {
                noise_lo = 1.0 - ifs.epsilon;
                noise_hi = 1.0 + ifs.epsilon;
            } else {
                if (map.kind != MapKind::Affine) continue;
                noise_lo = map.lambda - ifs.epsilon;
                noise_hi = map.lambda + ifs.epsilon;
            }
            double excursion = 0.0;
            for (double noise : {noise_lo, noise_hi}) {
                auto [lo, hi] = perturbed_range(map, ifs.perturbation, noise);
                excursion = std::max({excursion, lo < -1.0 ? -1.0 - lo : 0.0,
                                      hi > 1.0 ? hi - 1.0 : 0.0});
            }
            append_check(report.warnings, "map" + std::to_string(i) + "_perturbed_range",
                         excursion <= kEqTol, excursion, kEqTol);
        }
        if (l >= 2) {
            double eps_max = max_epsilon(ifs);
            append_check(report.warnings, "epsilon_below_pair_bound", ifs.epsilon < eps_max,
                         ifs.epsilon, eps_max);
        }
    }

    report.passed = std::all_of(checks.begin(), checks.end(),
                                [](const CheckResult& c) { return c.passed; });
    return report;
}

double entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p <= 0.0) throw precondition_error("entropy: probabilities must be positive");
        h -= p * std::log(p);
    }
    return h;
}

LyapunovEstimate lyapunov(const IFSSpec& ifs, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw precondition_error("lyapunov: n_samples must be >= 1");
    const double eps = ifs.epsilon;
    SequentialRandom rng(seed, /*stream=*/0);
    std::span<const double> probs(ifs.probabilities);

    double x = 0.0;
    auto step = [&](bool record, double& sum, double& sumsq) {
        std::size_t i = pick_index(probs, rng.u01());
        const MapSpec& map = ifs.maps[i];
        double noise, log_deriv;
        if (ifs.perturbation == PerturbationModel::Multiplicative) {
            noise = rng.uniform(1.0 - eps, 1.0 + eps);
            log_deriv = std::log(std::abs(noise * map.derivative(x)));
            x = noise * map(x) + map.fixpoint * (1.0 - noise);
        } else {
            noise = rng.uniform(map.lambda - eps, map.lambda + eps);
            log_deriv = std::log(std::abs(noise));
            x = noise * x + map.fixpoint * (1.0 - noise);
        }
        if (record) {
            sum += log_deriv;
            sumsq += log_deriv * log_deriv;
        }
    };

    double unused_a = 0.0, unused_b = 0.0;
    for (int t = 0; t < 1024; ++t) step(false, unused_a, unused_b);  // burn-in

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < n_samples; ++t) step(true, sum, sumsq);

    LyapunovEstimate est;
    est.n = n_samples;
    est.value = sum / static_cast<double>(n_samples);
    double var = std::max(0.0, sumsq / static_cast<double>(n_samples) - est.value * est.value);
    est.std_error = std::sqrt(var / static_cast<double>(n_samples));
    if (est.value >= 0.0)
        throw precondition_error("lyapunov: estimate is >= 0 (not contracting on average)");
    return est;
}

double dimension_bound(const IFSSpec& ifs, std::size_t n_samples, std::uint64_t seed) {
    double h = entropy(ifs.probabilities);
    LyapunovEstimate chi = lyapunov(ifs, n_samples, seed);
    return h / std::abs(chi.value);
}

} // namespace rifs
