#pragma once

#include "rifs/ifs.hpp"

namespace rifs {

// Every closed-form constant behind the L2-density bound, evaluated for one
// (system, epsilon, m, sigma) tuple.
struct BoundsReport {
    PerturbationModel model = PerturbationModel::Multiplicative;
    double epsilon = 0.0;
    int m = 0;
    double sigma = 0.5;           // additive model only; ignored otherwise
    double b_factor = 0.0;        // recursion contraction factor, must be < 1
    double c_double_prime = 0.0;  // separation constant C''
    double c_eps_m = 0.0;         // finite-m separation constant
    double c_prime = 0.0;         // C' = sqrt(32 / ((1-b) C''))
    double l2_bound = 0.0;        // C' / sqrt(eps)
    double eps_max_pairs = 0.0;   // min_{i!=j} |a_i-a_j| / (2+|a_i+a_j|)
    double eps_max_admissible = 0.0;  // largest eps passing all admissibility checks
};

// C'' for the multiplicative model:
//   min_{i!=j} (|a_i-a_j| + eps(-|a_i+a_j| - 2)) / (1 - eps^2).
// eps = 0 returns the limit min |a_i - a_j|.
double c_double_prime(const IFSSpec& ifs, double eps);

// Finite-m refinement: c_double_prime minus
//   4 (1+eps) lambda_max,max / (2^m - lambda_max,max (1+eps)).
// Converges to c_double_prime as m -> infinity; may be <= 0 when m is small,
// which downstream bound operations refuse.
double c_eps_m(const IFSSpec& ifs, double eps, int m);

// sigma-scaled transversality constant for the additive model:
//   sigma * min_{i!=j} (|a_i l_j - a_j l_i| - |l_i - l_j|) / (l_i l_j).
double c_double_prime_additive(const IFSSpec& ifs, double sigma);

// Recursion factor b. Multiplicative model:
//   sum_i p_i^2 (1+eps) lambda_{i,max} / ((1-eps) lambda_{i,min})^2
// Additive model:
//   sum_i p_i^2 (lambda_i + eps) / (lambda_i - eps)^2
// Values >= 1 are returned as-is; bound operations refuse them.
double b_factor(const IFSSpec& ifs, double eps, PerturbationModel model);

// eps admissibility for the bound chain: eps below the pairwise bound, b < 1,
// C'' > 0, and (additive model) positive ratios plus the noise-rectangle
// corner condition |a_j d_p - a_i d_q| > |d_p - d_q|.
bool bounds_admissible(const IFSSpec& ifs, double eps, PerturbationModel model, double sigma);

// Largest admissible eps, located by bisection to 1e-6.
double max_admissible_epsilon(const IFSSpec& ifs, PerturbationModel model, double sigma);

// Full report. Throws precondition_error when the hypotheses fail, b >= 1 or
// C'' <= 0. For the additive model the finite-m constant reuses the
// sigma-scaled limit constant.
BoundsReport bounds_report(const IFSSpec& ifs, double eps, int m, double sigma);

// Right-hand side of the correlation recursion after k steps:
//   8/(C_{eps,m} eps) * (1-b^k)/(1-b) + b^k * j0.
double j_recursion_bound(const IFSSpec& ifs, double eps, int m, int k, double j0,
                         double sigma = 0.5);

} // namespace rifs
