#include "maxmargin/certify.hpp"

#include "maxmargin/error.hpp"
#include "maxmargin/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace maxmargin {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::vector<double> resolve_q(const std::vector<double>& q, int n) {
    if (q.empty()) return std::vector<double>(n, 1.0 / n);
    if (static_cast<int>(q.size()) != n) throw InvalidArgument("q needs one weight per data point");
    double s = 0.0;
    for (double x : q) {
        if (x < 0.0) throw InvalidArgument("q must be non-negative");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("q must sum to 1");
    return q;
}

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Objective pieces shared by evaluation and the oracle.
struct WeightedProblem {
    bool parity = false;
    int in_dim = 0;
    int classes = 0;
    Matrix coef;            // points x classes
    Vector q;
    std::vector<int> a, b;  // group-style inputs
    Matrix x;               // parity inputs, points x n
    Activation act;

    WeightedProblem(const Dataset& data, Activation activation, const ClassWeighting& tau,
                    const std::vector<double>& qin)
        : parity(data.is_parity()), in_dim(data.task.input_dim()), classes(data.num_classes), act(activation) {
        const int n = data.size();
        if (tau.num_points != n || tau.num_classes != classes) throw InvalidArgument("class weighting shape mismatch");
        const auto qv = resolve_q(qin, n);
        q = Eigen::Map<const Vector>(qv.data(), n);
        coef.resize(n, classes);
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < classes; ++c) coef(i, c) = -tau.tau[static_cast<size_t>(i) * classes + c];
            coef(i, data.labels[i]) = 1.0;
        }
        if (parity) {
            x.resize(n, in_dim);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < in_dim; ++j) x(i, j) = data.row(i)[j];
            }
        } else {
            a = data.a;
            b = data.b;
        }
    }

    int dim() const { return parity ? in_dim + classes : 2 * in_dim + classes; }

    Vector pre(const Vector& w) const {
        const int n = static_cast<int>(q.size());
        Vector z(n);
        if (parity) {
            z = x * w.head(in_dim);
        } else {
            for (int i = 0; i < n; ++i) z(i) = w(a[i]) + w(in_dim + b[i]);
        }
        return z;
    }

    double value(const Vector& omega, Vector* grad) const {
        const int n = static_cast<int>(q.size());
        const int off = parity ? in_dim : 2 * in_dim;
        const Vector z = pre(omega);
        const Vector out_w = omega.segment(off, classes);
        const Vector s = coef * out_w;
        Vector h(n), dh(n);
        for (int i = 0; i < n; ++i) {
            h(i) = act.apply(z(i));
            dh(i) = act.derivative(z(i));
        }
        const double val = (q.array() * h.array() * s.array()).sum();
        if (grad) {
            grad->setZero(omega.size());
            grad->segment(off, classes) = coef.transpose() * (q.array() * h.array()).matrix();
            const Vector dz = (q.array() * dh.array() * s.array()).matrix();
            if (parity) {
                grad->head(in_dim) = x.transpose() * dz;
            } else {
                for (int i = 0; i < n; ++i) {
                    (*grad)(a[i]) += dz(i);
                    (*grad)(in_dim + b[i]) += dz(i);
                }
            }
        }
        return val;
    }

    Vector pack(const Neuron& nr) const {
        Vector omega(dim());
        int k = 0;
        for (double v : nr.u) omega(k++) = v;
        if (!parity) {
            for (double v : nr.v) omega(k++) = v;
        }
        for (double v : nr.w) omega(k++) = v;
        return omega;
    }

    Neuron unpack(const Vector& omega) const {
        Neuron nr;
        int k = 0;
        nr.u.assign(omega.data(), omega.data() + in_dim);
        k = in_dim;
        if (!parity) {
            nr.v.assign(omega.data() + k, omega.data() + k + in_dim);
            k += in_dim;
        }
        nr.w.assign(omega.data() + k, omega.data() + k + classes);
        return nr;
    }
};

}  // namespace

GammaValue theoretical_gamma(const TaskSpec& task) {
    task.validate();
    auto cyclic = [](int p) { return std::sqrt(2.0 / 27.0) / (std::sqrt(static_cast<double>(p)) * (p - 1)); };
    switch (task.kind) {
        case TaskKind::modular: return {cyclic(task.p), true};
        case TaskKind::parity: {
            const int k = task.k;
            return {factorial(k) * std::sqrt(2.0 * std::pow(k + 1.0, -(k + 1.0))), true};
        }
        case TaskKind::group: {
            if (task.group.kind == GroupKind::cyclic) return {cyclic(task.group.param), true};
            const Group g = make_group(task.group);
            const auto reps = irreps(g);
            const auto table = character_table(reps, g);
            double sum = 0.0;
            for (size_t r = 1; r < reps.size(); ++r) sum += std::pow(reps[r].dim, 2.5);
            const double value = 2.0 / (3.0 * std::sqrt(3.0 * g.order)) / sum;
            return {value, negativity_condition(table).all_negative};
        }
    }
    return {};
}

CertificateReport certify_network(const Network& net, const Dataset& data, double tol) {
    if (net.activation.kind == Activation::Kind::relu) {
        throw UnsupportedKind("certificates are only defined for polynomial activations");
    }
    CertificateReport rep;
    rep.tol = tol;
    const auto margin = dataset_margin(net, data);
    rep.min_margin = margin.min_margin;
    rep.norm = margin.norm;
    rep.gamma_measured = margin.normalized_margin;

    const double h = margin.min_margin;
    const double scale = std::abs(h);
    if (scale > 0.0) {
        double dev = 0.0;
        for (double g : margin.margins) dev = std::max(dev, g - h);
        rep.uniform_deviation = dev / scale;
        rep.c1_spread = margin.incorrect_spread / scale;
    } else {
        rep.uniform_deviation = std::numeric_limits<double>::infinity();
        rep.c1_spread = std::numeric_limits<double>::infinity();
    }
    rep.uniform_margin_ok = h > 0.0 && rep.uniform_deviation <= tol;
    rep.c1_ok = h > 0.0 && rep.c1_spread <= tol;

    const auto gamma = theoretical_gamma(net.task);
    rep.gamma_theory = gamma.value;
    rep.gamma_certified = gamma.certified;
    rep.rel_error = std::abs(rep.gamma_measured - rep.gamma_theory) / rep.gamma_theory;
    rep.gamma_ok = gamma.certified && rep.rel_error <= tol;
    return rep;
}

ClassWeighting ClassWeighting::uniform(const Dataset& data) {
    ClassWeighting cw;
    cw.num_points = data.size();
    cw.num_classes = data.num_classes;
    cw.tau.assign(static_cast<size_t>(cw.num_points) * cw.num_classes, 1.0 / (cw.num_classes - 1));
    for (int i = 0; i < cw.num_points; ++i) cw.tau[static_cast<size_t>(i) * cw.num_classes + data.labels[i]] = 0.0;
    return cw;
}

ClassWeighting ClassWeighting::by_conjugacy_class(const Dataset& data, const std::vector<double>& weights) {
    if (!data.group || data.is_parity()) throw InvalidArgument("conjugacy-class weights need a group task");
    const Group& g = *data.group;
    if (static_cast<int>(weights.size()) != g.num_classes()) throw InvalidArgument("need one weight per class");
    ClassWeighting cw;
    cw.num_points = data.size();
    cw.num_classes = data.num_classes;
    cw.tau.assign(static_cast<size_t>(cw.num_points) * cw.num_classes, 0.0);
    for (int i = 0; i < cw.num_points; ++i) {
        const int y = data.labels[i];
        const int yinv = g.inv[y];
        double total = 0.0;
        for (int c = 0; c < cw.num_classes; ++c) {
            if (c == y) continue;
            const double t = weights[g.class_of[g.product(yinv, c)]];
            cw.tau[static_cast<size_t>(i) * cw.num_classes + c] = t;
            total += t;
        }
        if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("class weights must satisfy sum |C_n| tau_n = 1");
    }
    return cw;
}

double expected_weighted_margin(const Neuron& neuron, Activation act, const Dataset& data, const ClassWeighting& tau,
                                const std::vector<double>& q) {
    WeightedProblem prob(data, act, tau, q);
    return prob.value(prob.pack(neuron), nullptr);
}

OracleResult single_neuron_oracle(const Dataset& data, Activation act, const ClassWeighting& tau,
                                  const std::vector<double>& q, const OracleOptions& opts) {
    if (act.kind == Activation::Kind::relu) throw UnsupportedKind("the oracle needs a polynomial activation");
    if (opts.restarts < 1 || opts.steps < 0) throw InvalidArgument("oracle needs restarts >= 1 and steps >= 0");
    WeightedProblem prob(data, act, tau, q);
    const int dim = prob.dim();

    OracleResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < opts.restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        Vector omega(dim);
        for (int i = 0; i < dim; ++i) omega(i) = normal(rng);
        omega.normalize();

        Vector grad;
        double val = prob.value(omega, &grad);
        for (int s = 0; s < opts.steps; ++s) {
            omega += opts.step_size * grad;
            omega.normalize();
            val = prob.value(omega, &grad);
        }
        const Vector tangent = grad - grad.dot(omega) * omega;
        if (val > best.objective) {
            best.objective = val;
            best.neuron = prob.unpack(omega);
            best.grad_norm = tangent.norm();
            best.converged = best.grad_norm <= opts.grad_tol;
            best.best_restart = r;
        }
    }
    return best;
}

double fourier_margin_formula(const std::vector<double>& u, const std::vector<double>& v, const std::vector<double>& w,
                              int p) {
    if (static_cast<int>(u.size()) != p || static_cast<int>(v.size()) != p || static_cast<int>(w.size()) != p) {
        throw InvalidArgument("fourier_margin_formula: vectors must have length p");
    }
    double mean = 0.0;
    for (double x : w) mean += x;
    mean /= p;
    std::vector<double> wc(w);
    for (double& x : wc) x -= mean;
    const auto uh = dft(u), vh = dft(v), wh = dft(wc);
    double acc = 0.0;
    for (int j = 1; j < p; ++j) acc += (uh[j] * vh[j] * wh[p - j]).real();
    return 2.0 * acc / ((p - 1.0) * p * p);
}

double rep_margin_formula(const std::vector<CoeffMatrices>& coeffs, const std::vector<double>& class_tau,
                          const CharacterTable& table) {
    const int k = static_cast<int>(table.class_sizes.size());
    if (static_cast<int>(class_tau.size()) != k) throw InvalidArgument("need one weight per conjugacy class");
    double total = 0.0;
    for (const auto& cm : coeffs) {
        const int d = cm.dim;
        double mix = 0.0;
        for (int n = 1; n < k; ++n) mix += class_tau[n] * table.class_sizes[n] * table.chi[cm.rep][n];
        const double slack = 1.0 - mix / d;
        double tr = 0.0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                for (int l = 0; l < d; ++l) tr += cm.alpha[i * d + j] * cm.beta[j * d + l] * cm.gamma[i * d + l];
            }
        }
        total += slack * tr / (static_cast<double>(d) * d);
    }
    // Squared terms average out; only the cross term 2 u_a v_b survives.
    return 2.0 * total;
}

WeightingSolution solve_general_weighting(const CharacterTable& table, std::vector<int> kappa_r,
                                          std::vector<int> kappa_c) {
    const int k = static_cast<int>(table.class_sizes.size());
    auto check = [k](std::vector<int>& idx, const char* what) {
        std::sort(idx.begin(), idx.end());
        if (idx.empty()) throw InvalidArgument(std::string(what) + " must be non-empty");
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
            throw InvalidArgument(std::string(what) + " has duplicates");
        }
        if (idx.front() < 1 || idx.back() >= k) throw InvalidArgument(std::string(what) + " must index non-trivial entries");
    };
    check(kappa_r, "kappa_r");
    check(kappa_c, "kappa_c");
    if (kappa_r.size() != kappa_c.size()) throw InvalidArgument("kappa_r and kappa_c must have the same size");

    WeightingSolution sol;
    sol.kappa_r = kappa_r;
    sol.kappa_c = kappa_c;
    const int s = static_cast<int>(kappa_r.size());
    const auto& chi = table.chi;
    auto dim = [&](int m) { return static_cast<double>(table.dims[m]); };
    auto size = [&](int n) { return static_cast<double>(table.class_sizes[n]); };

    // tau: equal slack / sqrt(d) across kappa_r, total class mass 1.
    Matrix at(s, s);
    Vector bt(s);
    const int m0 = kappa_r[0];
    for (int row = 0; row + 1 < s; ++row) {
        const int m = kappa_r[row + 1];
        for (int col = 0; col < s; ++col) {
            const int n = kappa_c[col];
            at(row, col) = size(n) * (chi[m][n] / std::pow(dim(m), 1.5) - chi[m0][n] / std::pow(dim(m0), 1.5));
        }
        bt(row) = 1.0 / std::sqrt(dim(m)) - 1.0 / std::sqrt(dim(m0));
    }
    for (int col = 0; col < s; ++col) at(s - 1, col) = size(kappa_c[col]);
    bt(s - 1) = 1.0;

    // lambda: equal output across kappa_c, total 1.
    Matrix al(s, s);
    Vector bl(s);
    const int n0 = kappa_c[0];
    for (int row = 0; row + 1 < s; ++row) {
        const int n = kappa_c[row + 1];
        for (int col = 0; col < s; ++col) al(row, col) = chi[kappa_r[col]][n] - chi[kappa_r[col]][n0];
        bl(row) = 0.0;
    }
    for (int col = 0; col < s; ++col) al(s - 1, col) = 1.0;
    bl(s - 1) = 1.0;

    Eigen::FullPivLU<Matrix> lut(at), lul(al);
    lut.setThreshold(1e-12);
    lul.setThreshold(1e-12);
    if (!lut.isInvertible() || !lul.isInvertible()) {
        sol.singular = true;
        return sol;
    }
    const Vector tau = lut.solve(bt);
    const Vector lambda = lul.solve(bl);
    sol.tau.assign(tau.data(), tau.data() + s);
    sol.lambda.assign(lambda.data(), lambda.data() + s);
    for (int col = 0; col < s; ++col) sol.class_mass.push_back(size(kappa_c[col]) * tau(col));

    const double eps = 1e-12;
    sol.positive = tau.minCoeff() >= -eps && lambda.minCoeff() >= -eps;

    const int nreps = static_cast<int>(chi.size());
    sol.rep_slack.assign(nreps, 0.0);
    for (int m = 0; m < nreps; ++m) {
        double mix = 0.0;
        for (int col = 0; col < s; ++col) mix += tau(col) * size(kappa_c[col]) * chi[m][kappa_c[col]];
        sol.rep_slack[m] = 1.0 - mix / dim(m);
    }
    auto in = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    for (int mp = 1; mp < nreps; ++mp) {
        if (in(kappa_r, mp)) continue;
        for (int m : kappa_r) {
            if (sol.rep_slack[m] < std::sqrt(dim(m) / dim(mp)) * sol.rep_slack[mp] - eps) {
                sol.condition2_violations.push_back(mp);
                break;
            }
        }
    }
    sol.reps_dominate = sol.condition2_violations.empty();

    auto output = [&](int n) {
        double acc = 0.0;
        for (int col = 0; col < s; ++col) acc += lambda(col) * chi[kappa_r[col]][n];
        return acc;
    };
    for (int np = 1; np < k; ++np) {
        if (in(kappa_c, np)) continue;
        for (int n : kappa_c) {
            if (output(n) < output(np) - eps) {
                sol.condition3_violations.push_back(np);
                break;
            }
        }
    }
    sol.classes_on_margin = sol.condition3_violations.empty();
    sol.feasible = sol.positive && sol.reps_dominate && sol.classes_on_margin;

    if (s == k - 1) {
        double denom = 0.0;
        for (int m = 1; m < nreps; ++m) denom += std::pow(dim(m), 2.5);
        sol.z.assign(nreps, 0.0);
        for (int m = 1; m < nreps; ++m) sol.z[m] = std::pow(dim(m), 1.5) / denom;
        for (int n : kappa_c) {
            double t = 0.0;
            for (int m = 1; m < nreps; ++m) t -= sol.z[m] * chi[m][n];
            sol.tau_closed_form.push_back(t);
        }
    }
    return sol;
}

}  // namespace maxmargin
