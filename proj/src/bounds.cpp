#include "rifs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rifs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_pairs(const IFSSpec& ifs, const char* op) {
    if (ifs.size() < 2)
        throw precondition_error(std::string(op) + ": needs at least two maps");
}

// Corner certificate for the additive model: |a_j d_p - a_i d_q| > |d_p - d_q|
// over d_p in [l_i-eps, l_i+eps], d_q in [l_j-eps, l_j+eps], checked at the
// four corners of each noise rectangle.
bool additive_corner_condition(const IFSSpec& ifs, double eps) {
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            double ai = ifs.maps[i].fixpoint, aj = ifs.maps[j].fixpoint;
            double li = ifs.maps[i].lambda, lj = ifs.maps[j].lambda;
            for (double dp : {li - eps, li + eps})
                for (double dq : {lj - eps, lj + eps})
                    if (std::abs(aj * dp - ai * dq) <= std::abs(dp - dq)) return false;
        }
    }
    return true;
}

} // namespace

double c_double_prime(const IFSSpec& ifs, double eps) {
    require_pairs(ifs, "c_double_prime");
    if (eps < 0.0) throw precondition_error("c_double_prime: eps must be >= 0");
    double eps_max = max_epsilon(ifs);
    if (eps >= eps_max)
        throw precondition_error("c_double_prime: eps >= min |a_i-a_j|/(2+|a_i+a_j|)");
    double worst = kInf;
    for (std::size_t i = 0; i < ifs.size(); ++i)
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            double ai = ifs.maps[i].fixpoint, aj = ifs.maps[j].fixpoint;
            double v = (std::abs(ai - aj) + eps * (-std::abs(ai + aj) - 2.0)) /
                       (1.0 - eps * eps);
            worst = std::min(worst, v);
        }
    return worst;
}

double c_eps_m(const IFSSpec& ifs, double eps, int m) {
    double lmax = ifs.lambda_max_max();
    double denom = std::exp2(m) - lmax * (1.0 + eps);
    if (denom <= 0.0)
        throw precondition_error("c_eps_m: 2^m <= lambda_max,max (1+eps)");
    return c_double_prime(ifs, eps) - 4.0 * (1.0 + eps) * lmax / denom;
}

double c_double_prime_additive(const IFSSpec& ifs, double sigma) {
    require_pairs(ifs, "c_double_prime_additive");
    if (!ifs.all_affine())
        throw precondition_error("c_double_prime_additive: all maps must be affine");
    if (!(sigma > 0.0 && sigma < 1.0))
        throw precondition_error("c_double_prime_additive: sigma must be in (0,1)");
    double worst = kInf;
    for (std::size_t i = 0; i < ifs.size(); ++i)
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            double ai = ifs.maps[i].fixpoint, aj = ifs.maps[j].fixpoint;
            double li = ifs.maps[i].lambda, lj = ifs.maps[j].lambda;
            double v = (std::abs(ai * lj - aj * li) - std::abs(li - lj)) / (li * lj);
            worst = std::min(worst, v);
        }
    return sigma * worst;
}

double b_factor(const IFSSpec& ifs, double eps, PerturbationModel model) {
    if (eps < 0.0) throw precondition_error("b_factor: eps must be >= 0");
    double sum = 0.0;
    if (model == PerturbationModel::Multiplicative) {
        if (eps >= 1.0) throw precondition_error("b_factor: eps must be < 1");
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            auto db = ifs.maps[i].derivative_bounds();
            double p = ifs.probabilities[i];
            double denom = (1.0 - eps) * db.lambda_min;
            if (denom <= 0.0) return kInf;
            sum += p * p * (1.0 + eps) * db.lambda_max / (denom * denom);
        }
    } else {
        if (!ifs.all_affine())
            throw precondition_error("b_factor: additive model requires affine maps");
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            double li = ifs.maps[i].lambda;
            double p = ifs.probabilities[i];
            if (li - eps <= 0.0) return kInf;
            sum += p * p * (li + eps) / ((li - eps) * (li - eps));
        }
    }
    return sum;
}

bool bounds_admissible(const IFSSpec& ifs, double eps, PerturbationModel model, double sigma) {
    if (ifs.size() < 2 || eps < 0.0) return false;
    if (eps >= max_epsilon(ifs)) return false;
    if (model == PerturbationModel::Multiplicative) {
        if (eps >= 1.0) return false;
    } else {
        if (!ifs.all_affine()) return false;
        for (const auto& m : ifs.maps)
            if (m.lambda - eps <= 0.0) return false;
        if (!additive_corner_condition(ifs, eps)) return false;
        if (c_double_prime_additive(ifs, sigma) <= 0.0) return false;
    }
    if (b_factor(ifs, eps, model) >= 1.0) return false;
    if (model == PerturbationModel::Multiplicative && c_double_prime(ifs, eps) <= 0.0)
        return false;
    return true;
}

double max_admissible_epsilon(const IFSSpec& ifs, PerturbationModel model, double sigma) {
    if (!bounds_admissible(ifs, 0.0, model, sigma)) return 0.0;
    double lo = 0.0;
    double hi = std::min(max_epsilon(ifs), 1.0);
    if (model == PerturbationModel::AdditiveRatio)
        for (const auto& m : ifs.maps) hi = std::min(hi, m.lambda);
    // all admissibility predicates are monotone in eps
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (bounds_admissible(ifs, mid, model, sigma) ? lo : hi) = mid;
    }
    return lo;
}

BoundsReport bounds_report(const IFSSpec& ifs, double eps, int m, double sigma) {
    ValidationReport validation = validate(ifs);
    if (!validation.passed) {
        for (const auto& c : validation.checks)
            if (!c.passed)
                throw precondition_error("bounds_report: hypothesis check failed: " + c.name);
    }
    require_pairs(ifs, "bounds_report");
    if (eps <= 0.0) throw precondition_error("bounds_report: eps must be > 0");

    BoundsReport r;
    r.model = ifs.perturbation;
    r.epsilon = eps;
    r.m = m;
    r.sigma = sigma;
    r.eps_max_pairs = max_epsilon(ifs);
    r.b_factor = b_factor(ifs, eps, r.model);
    if (r.b_factor >= 1.0)
        throw precondition_error("bounds_report: recursion factor not contracting (b >= 1)");

    if (r.model == PerturbationModel::Multiplicative) {
        r.c_double_prime = c_double_prime(ifs, eps);
        r.c_eps_m = c_eps_m(ifs, eps, m);
    } else {
        // No finite-m form is available for the additive model; the report
        // reuses the sigma-scaled limit constant.
        r.c_double_prime = c_double_prime_additive(ifs, sigma);
        r.c_eps_m = r.c_double_prime;
    }
    if (r.c_double_prime <= 0.0)
        throw precondition_error("bounds_report: separation constant C'' <= 0");

    r.c_prime = std::sqrt(32.0 / ((1.0 - r.b_factor) * r.c_double_prime));
    r.l2_bound = r.c_prime / std::sqrt(eps);
    r.eps_max_admissible = max_admissible_epsilon(ifs, r.model, sigma);
    return r;
}

double j_recursion_bound(const IFSSpec& ifs, double eps, int m, int k, double j0) {
    if (k < 0) throw precondition_error("j_recursion_bound: k must be >= 0");
    double b = b_factor(ifs, eps, ifs.perturbation);
    if (b >= 1.0)
        throw precondition_error("j_recursion_bound: recursion factor not contracting (b >= 1)");
    double c = ifs.perturbation == PerturbationModel::Multiplicative
                   ? c_eps_m(ifs, eps, m)
                   : c_double_prime_additive(ifs, 0.5);
    if (c <= 0.0 || eps <= 0.0)
        throw precondition_error("j_recursion_bound: C_{eps,m} and eps must be positive");
    double bk = std::pow(b, k);
    return 8.0 / (c * eps) * (1.0 - bk) / (1.0 - b) + bk * j0;
}

} // namespace rifs
