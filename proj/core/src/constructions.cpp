#include "maxmargin/constructions.hpp"

#include "maxmargin/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace maxmargin {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sampled_cos(int p, int freq, double phase, double amp) {
    std::vector<double> out(p);
    for (int a = 0; a < p; ++a) out[a] = amp * std::cos(phase + 2.0 * kPi * freq * a / p);
    return out;
}

void append_cyclic_frequency(std::vector<Neuron>& out, int p, int freq, double scale) {
    const double amp = std::sqrt(2.0 / (3.0 * p)) * scale;
    for (const auto& t : cyclic_phase_triples()) {
        out.push_back({sampled_cos(p, freq, t.theta_u, amp), sampled_cos(p, freq, t.theta_v, amp),
                       sampled_cos(p, freq, t.theta_w, amp)});
    }
}

void check_prime(int p) {
    if (p < 3 || !is_prime(p)) throw InvalidArgument("p must be a prime >= 3, got " + std::to_string(p));
}

}  // namespace

const std::vector<PhaseTriple>& cyclic_phase_triples() {
    static const std::vector<PhaseTriple> triples = {
        {0.0, 0.0, 0.0},
        {0.0, kPi, kPi},
        {kPi / 2, -kPi / 2, 0.0},
        {kPi / 2, kPi / 2, kPi},
        {-kPi / 2, 0.0, -kPi / 2},
        {-kPi / 2, kPi, kPi / 2},
        {0.0, -kPi / 2, -kPi / 2},
        {0.0, kPi / 2, kPi / 2},
    };
    return triples;
}

Network build_cyclic(int p) {
    check_prime(p);
    const double scale = std::cbrt(1.0 / (4.0 * (p - 1)));
    std::vector<Neuron> neurons;
    neurons.reserve(4 * (p - 1));
    for (int f = 1; f <= (p - 1) / 2; ++f) append_cyclic_frequency(neurons, p, f, scale);
    return make_network(TaskSpec::modular(p), Activation::square(), std::move(neurons), "build_cyclic");
}

Network build_cyclic_frequency(int p, int frequency) {
    check_prime(p);
    if (frequency < 1 || frequency > (p - 1) / 2) throw InvalidArgument("frequency must lie in 1..(p-1)/2");
    const double scale = std::cbrt(1.0 / (4.0 * (p - 1)));
    std::vector<Neuron> neurons;
    append_cyclic_frequency(neurons, p, frequency, scale);
    return make_network(TaskSpec::modular(p), Activation::square(), std::move(neurons), "build_cyclic_frequency");
}

Network build_parity(int n, int k, std::vector<int> support) {
    TaskSpec task = TaskSpec::parity(n, k, std::move(support));
    task.validate();
    const double inv_root = 1.0 / std::sqrt(k + 1.0);
    const double scale = std::pow(2.0, -(k - 1.0) / (k + 1.0));
    std::vector<Neuron> neurons;
    // Patterns with sigma_1 = +1, lexicographic with + before -.
    for (int mask = 0; mask < (1 << (k - 1)); ++mask) {
        std::vector<int> sigma(k, 1);
        for (int i = 1; i < k; ++i) sigma[i] = ((mask >> (k - 1 - i)) & 1) ? -1 : 1;
        int prod = 1;
        for (int s : sigma) prod *= s;
        Neuron nr;
        nr.u.assign(n, 0.0);
        for (int i = 0; i < k; ++i) nr.u[task.support[i]] = scale * sigma[i] * inv_root;
        const double wmag = scale * prod * inv_root / std::sqrt(2.0);
        nr.w = {wmag, -wmag};
        neurons.push_back(std::move(nr));
    }
    return make_network(task, Activation::power(k), std::move(neurons), "build_parity");
}

std::vector<CoeffMatrices> coefficients_of(const Neuron& neuron, const BasisVectors& basis, int order) {
    std::vector<CoeffMatrices> out;
    for (size_t r = 0; r < basis.rep_dims.size(); ++r) {
        const int d = basis.rep_dims[r];
        CoeffMatrices cm;
        cm.rep = static_cast<int>(r);
        cm.dim = d;
        cm.alpha.assign(d * d, 0.0);
        cm.beta.assign(d * d, 0.0);
        cm.gamma.assign(d * d, 0.0);
        const double inv = static_cast<double>(d) / order;
        for (int e = 0; e < d * d; ++e) {
            const auto& rho = basis.vectors[basis.rep_offset[r] + e].values;
            double su = 0.0, sv = 0.0, sw = 0.0;
            for (int g = 0; g < order; ++g) {
                su += neuron.u[g] * rho[g];
                sv += neuron.v[g] * rho[g];
                sw += neuron.w[g] * rho[g];
            }
            cm.alpha[e] = su * inv;
            cm.beta[e] = sv * inv;
            cm.gamma[e] = sw * inv;
        }
        out.push_back(std::move(cm));
    }
    return out;
}

Neuron neuron_from_coefficients(const std::vector<CoeffMatrices>& coeffs, const BasisVectors& basis, int order) {
    Neuron nr;
    nr.u.assign(order, 0.0);
    nr.v.assign(order, 0.0);
    nr.w.assign(order, 0.0);
    for (const auto& cm : coeffs) {
        for (int e = 0; e < cm.dim * cm.dim; ++e) {
            const auto& rho = basis.vectors[basis.rep_offset[cm.rep] + e].values;
            for (int g = 0; g < order; ++g) {
                nr.u[g] += cm.alpha[e] * rho[g];
                nr.v[g] += cm.beta[e] * rho[g];
                nr.w[g] += cm.gamma[e] * rho[g];
            }
        }
    }
    return nr;
}

Network build_group_trace(const Group& group, const std::vector<Irrep>& reps) {
    const auto table = character_table(reps, group);
    const auto neg = negativity_condition(table);
    if (!neg.all_negative) {
        std::ostringstream msg;
        msg << "negativity condition fails for " << group.spec().name() << " at classes:";
        for (int c : neg.offending) msg << ' ' << table.class_names[c] << " (sum " << neg.sums[c] << ")";
        throw InvalidArgument(msg.str());
    }

    const int order = group.order;
    const double c0 = 1.0 / std::sqrt(3.0 * order);
    std::vector<Neuron> neurons;
    for (size_t r = 1; r < reps.size(); ++r) {
        const auto& rep = reps[r];
        const int d = rep.dim;
        const double rep_scale = std::cbrt(static_cast<double>(d));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                for (int k = 0; k < d; ++k) {
                    Neuron plus;
                    plus.u.resize(order);
                    plus.v.resize(order);
                    plus.w.resize(order);
                    for (int g = 0; g < order; ++g) {
                        plus.u[g] = rep_scale * c0 * rep.at(g, i, j);
                        plus.v[g] = rep_scale * c0 * rep.at(g, j, k);
                        plus.w[g] = rep_scale * c0 * rep.at(g, i, k);
                    }
                    Neuron minus = plus;
                    for (double& x : minus.v) x = -x;
                    for (double& x : minus.w) x = -x;
                    neurons.push_back(std::move(plus));
                    neurons.push_back(std::move(minus));
                }
            }
        }
    }
    Network net = make_network(TaskSpec::group_task(group.spec()), Activation::square(), std::move(neurons),
                               "build_group_trace");
    // Delta fixed numerically by the unit L_{2,3} constraint.
    const double delta = lab_norm(net, 2.0, 3.0);
    return net.scaled(1.0 / delta);
}

Network build_memorization(int p, std::function<int(int, int)> target) {
    check_prime(p);
    if (!target) target = [p](int a, int b) { return (a + b) % p; };
    std::vector<Neuron> neurons;
    neurons.reserve(2 * p * p);
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
            const int r = target(a, b);
            if (r < 0 || r >= p) throw InvalidArgument("memorization target out of range");
            Neuron plus;
            plus.u.assign(p, 0.0);
            plus.v.assign(p, 0.0);
            plus.w.assign(p, 0.0);
            plus.u[a] = 1.0;
            plus.v[b] = 1.0;
            plus.w[r] = 0.25;
            Neuron minus = plus;
            minus.v[b] = -1.0;
            minus.w[r] = -0.25;
            neurons.push_back(std::move(plus));
            neurons.push_back(std::move(minus));
        }
    }
    return make_network(TaskSpec::modular(p), Activation::square(), std::move(neurons), "build_memorization");
}

}  // namespace maxmargin
