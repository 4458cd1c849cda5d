#pragma once

#include "maxmargin/constructions.hpp"
#include "maxmargin/group.hpp"
#include "maxmargin/network.hpp"
#include "maxmargin/tasks.hpp"

#include <cstdint>
#include <vector>

namespace maxmargin {

struct GammaValue {
    double value = 0.0;
    bool certified = true;  // false when the group fails the negativity condition
};

GammaValue theoretical_gamma(const TaskSpec& task);

struct CertificateReport {
    double tol = 1e-8;
    bool uniform_margin_ok = false;
    double uniform_deviation = 0.0;  // max (g - h) / |h|
    bool c1_ok = false;
    double c1_spread = 0.0;          // max incorrect-logit spread / |gamma_measured * norm^nu|
    double gamma_theory = 0.0;
    bool gamma_certified = true;
    double gamma_measured = 0.0;
    double rel_error = 0.0;
    bool gamma_ok = false;
    double min_margin = 0.0;
    double norm = 0.0;

    bool passed() const { return uniform_margin_ok && c1_ok && gamma_ok; }
};

CertificateReport certify_network(const Network& net, const Dataset& data, double tol = 1e-8);

// Per-point coefficient rows: coef[i][y_i] = 1, coef[i][y'] = -tau_i[y'].
// The weighted margin of a neuron is then sum over classes of coef * output.
struct ClassWeighting {
    int num_points = 0;
    int num_classes = 0;
    std::vector<double> tau;  // num_points x num_classes, zero on the correct label

    static ClassWeighting uniform(const Dataset& data);
    // Group tasks: tau(a,b)[y'] = weights[class of (ab)^{-1} y'], one weight per element.
    static ClassWeighting by_conjugacy_class(const Dataset& data, const std::vector<double>& weights);
};

// Expected weighted margin E_q[psi'] of a single neuron.
double expected_weighted_margin(const Neuron& neuron, Activation act, const Dataset& data,
                                const ClassWeighting& tau, const std::vector<double>& q = {});

struct OracleOptions {
    int restarts = 32;
    int steps = 2000;
    double step_size = 0.1;
    double grad_tol = 1e-6;
    std::uint64_t seed = 0;
};

struct OracleResult {
    Neuron neuron;
    double objective = 0.0;
    double grad_norm = 0.0;  // tangential gradient norm at the returned neuron
    bool converged = false;
    int best_restart = 0;
};

// Maximises E_q[psi'] over unit-norm neurons by projected gradient ascent.
OracleResult single_neuron_oracle(const Dataset& data, Activation act, const ClassWeighting& tau,
                                  const std::vector<double>& q = {}, const OracleOptions& opts = {});

// Closed form of E[psi'] for a quadratic neuron on Z_p under uniform class weights.
double fourier_margin_formula(const std::vector<double>& u, const std::vector<double>& v, const std::vector<double>& w,
                              int p);

// Per-class weights tau_n (one per conjugacy class, class 0 ignored) are
// per-element weights with sum |C_n| tau_n = 1.
double rep_margin_formula(const std::vector<CoeffMatrices>& coeffs, const std::vector<double>& class_tau,
                          const CharacterTable& table);

struct WeightingSolution {
    std::vector<int> kappa_r, kappa_c;
    std::vector<double> tau;         // per element of each class in kappa_c
    std::vector<double> class_mass;  // |C_n| tau_n, sums to 1
    std::vector<double> lambda;      // per rep in kappa_r, sums to 1
    std::vector<double> rep_slack;   // 1 - sum tau |C| chi / d for every rep
    bool singular = false;
    bool positive = false;           // condition 1
    bool reps_dominate = false;      // condition 2
    bool classes_on_margin = false;  // condition 3
    bool feasible = false;
    std::vector<int> condition2_violations;  // reps outside kappa_r that beat a rep inside
    std::vector<int> condition3_violations;  // classes outside kappa_c that sit below the margin
    // Closed form for the full index sets (empty otherwise).
    std::vector<double> z;
    std::vector<double> tau_closed_form;
};

WeightingSolution solve_general_weighting(const CharacterTable& table, std::vector<int> kappa_r,
                                          std::vector<int> kappa_c);

}  // namespace maxmargin
