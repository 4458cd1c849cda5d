#include "maxmargin/network.hpp"

#include "maxmargin/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxmargin {

namespace {

double ipow(double z, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Activation Activation::parse(const std::string& text) {
    if (text == "square") return square();
    if (text == "relu") return relu();
    std::string rest;
    if (text.rfind("power:", 0) == 0) {
        rest = text.substr(6);
    } else if (text.rfind("power", 0) == 0) {
        rest = text.substr(5);
    } else {
        throw InvalidArgument("unknown activation '" + text + "'");
    }
    try {
        const int k = std::stoi(rest);
        if (k < 1) throw InvalidArgument("power activation needs degree >= 1");
        return power(k);
    } catch (const std::logic_error&) {
        throw InvalidArgument("unknown activation '" + text + "'");
    }
}

std::string Activation::name() const {
    if (kind == Kind::relu) return "relu";
    if (degree == 2) return "square";
    return "power:" + std::to_string(degree);
}

double Activation::apply(double z) const {
    if (kind == Kind::relu) return z > 0.0 ? z : 0.0;
    return ipow(z, degree);
}

double Activation::derivative(double z) const {
    if (kind == Kind::relu) return z > 0.0 ? 1.0 : 0.0;
    return degree * ipow(z, degree - 1);
}

double Neuron::norm_sq() const {
    double s = 0.0;
    for (double x : u) s += x * x;
    for (double x : v) s += x * x;
    for (double x : w) s += x * x;
    return s;
}

void Network::validate() const {
    if (nu != activation.homogeneity()) {
        throw InvalidArgument("nu=" + std::to_string(nu) + " does not match activation " + activation.name());
    }
    const size_t in = static_cast<size_t>(task.input_dim());
    const size_t out = static_cast<size_t>(task.num_classes());
    for (size_t i = 0; i < neurons.size(); ++i) {
        const auto& nr = neurons[i];
        const bool ok = is_parity() ? (nr.u.size() == in && nr.v.empty() && nr.w.size() == 2)
                                    : (nr.u.size() == in && nr.v.size() == in && nr.w.size() == out);
        if (!ok) throw InvalidArgument("neuron " + std::to_string(i) + " has the wrong shape for " + task.describe());
    }
}

Network Network::scaled(double factor) const {
    Network out = *this;
    for (auto& nr : out.neurons) {
        for (double& x : nr.u) x *= factor;
        for (double& x : nr.v) x *= factor;
        for (double& x : nr.w) x *= factor;
    }
    return out;
}

Network make_network(const TaskSpec& task, Activation act, std::vector<Neuron> neurons, std::string created_by) {
    Network net;
    net.task = task;
    net.activation = act;
    net.nu = act.homogeneity();
    net.neurons = std::move(neurons);
    net.created_by = std::move(created_by);
    net.validate();
    return net;
}

std::vector<double> forward(const Network& net, int a, int b) {
    if (net.is_parity()) throw InvalidArgument("parity networks take a +-1 vector input");
    const int c = net.num_classes();
    if (a < 0 || b < 0 || a >= net.task.input_dim() || b >= net.task.input_dim()) {
        throw InvalidArgument("input token out of range");
    }
    std::vector<double> out(c, 0.0);
    for (const auto& nr : net.neurons) {
        const double h = net.activation.apply(nr.u[a] + nr.v[b]);
        if (h == 0.0) continue;
        for (int j = 0; j < c; ++j) out[j] += h * nr.w[j];
    }
    return out;
}

std::vector<double> forward(const Network& net, std::span<const double> x) {
    if (!net.is_parity()) throw InvalidArgument("group networks take an (a, b) input");
    if (static_cast<int>(x.size()) != net.task.n) throw InvalidArgument("parity input has the wrong length");
    std::vector<double> out(2, 0.0);
    for (const auto& nr : net.neurons) {
        double z = 0.0;
        for (size_t j = 0; j < x.size(); ++j) z += nr.u[j] * x[j];
        const double h = net.activation.apply(z);
        out[0] += h * nr.w[0];
        out[1] += h * nr.w[1];
    }
    return out;
}

std::vector<double> forward(const Network& net, const Dataset& data, int i) {
    if (data.is_parity()) return forward(net, std::span<const double>(data.row(i), data.task.n));
    return forward(net, data.a[i], data.b[i]);
}

std::vector<double> forward_all(const Network& net, const Dataset& data) {
    const int m = net.width();
    const int c = net.num_classes();
    const int npts = data.size();
    if (c != data.num_classes) throw InvalidArgument("network and dataset disagree on the number of classes");
    std::vector<double> out(static_cast<size_t>(npts) * c, 0.0);
    if (m == 0 || npts == 0) return out;

    RowMatrix w(m, c);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < c; ++j) w(i, j) = net.neurons[i].w[j];
    }
    RowMatrix hidden(npts, m);
    if (data.is_parity()) {
        const int n = data.task.n;
        Eigen::Map<const RowMatrix> x(data.x.data(), npts, n);
        RowMatrix u(n, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) u(j, i) = net.neurons[i].u[j];
        }
        hidden.noalias() = x * u;
    } else {
        const int g = net.task.input_dim();
        RowMatrix u(g, m), v(g, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < g; ++j) {
                u(j, i) = net.neurons[i].u[j];
                v(j, i) = net.neurons[i].v[j];
            }
        }
        for (int t = 0; t < npts; ++t) hidden.row(t) = u.row(data.a[t]) + v.row(data.b[t]);
    }
    hidden = hidden.unaryExpr([&](double z) { return net.activation.apply(z); });
    Eigen::Map<RowMatrix> logits(out.data(), npts, c);
    logits.noalias() = hidden * w;
    return out;
}

double point_margin(std::span<const double> logits, int y) {
    if (y < 0 || y >= static_cast<int>(logits.size())) throw InvalidArgument("label out of range");
    double best = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < logits.size(); ++j) {
        if (static_cast<int>(j) != y) best = std::max(best, logits[j]);
    }
    return logits[y] - best;
}

double weighted_point_margin(std::span<const double> logits, int y, std::span<const double> tau) {
    if (tau.size() != logits.size()) throw InvalidArgument("class weights need one entry per class");
    if (y < 0 || y >= static_cast<int>(logits.size())) throw InvalidArgument("label out of range");
    double total = 0.0, mix = 0.0;
    for (size_t j = 0; j < tau.size(); ++j) {
        if (static_cast<int>(j) == y) {
            if (tau[j] != 0.0) throw InvalidArgument("class weights must vanish on the correct label");
            continue;
        }
        if (tau[j] < 0.0) throw InvalidArgument("class weights must be non-negative");
        total += tau[j];
        mix += tau[j] * logits[j];
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("class weights must sum to 1");
    return logits[y] - mix;
}

std::vector<double> uniform_tau(int num_classes, int y) {
    std::vector<double> tau(num_classes, 1.0 / (num_classes - 1));
    tau[y] = 0.0;
    return tau;
}

double lab_norm(const Network& net, double a, double b) {
    if (a < 1.0 || b < 1.0) throw InvalidArgument("L_{a,b} norm needs a, b >= 1");
    double total = 0.0;
    for (const auto& nr : net.neurons) {
        double s = 0.0;
        auto acc = [&](const std::vector<double>& vec) {
            for (double x : vec) s += std::pow(std::abs(x), a);
        };
        acc(nr.u);
        acc(nr.v);
        acc(nr.w);
        total += std::pow(s, b / a);
    }
    return std::pow(total, 1.0 / b);
}

MarginReport dataset_margin(const Network& net, const Dataset& data, const MarginOptions& opts) {
    if (data.size() == 0) throw InvalidArgument("dataset is empty");
    MarginReport rep;
    rep.nu = net.nu;
    rep.norm_a = opts.norm_a;
    rep.norm_b = opts.norm_b > 0.0 ? opts.norm_b : static_cast<double>(net.nu);

    const int c = data.num_classes;
    const auto logits = forward_all(net, data);
    rep.margins.resize(data.size());
    int correct = 0;
    for (int i = 0; i < data.size(); ++i) {
        std::span<const double> row(logits.data() + static_cast<size_t>(i) * c, c);
        const int y = data.labels[i];
        rep.margins[i] = point_margin(row, y);
        if (rep.margins[i] > 0.0) ++correct;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int j = 0; j < c; ++j) {
            if (j == y) continue;
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        if (c > 1) rep.incorrect_spread = std::max(rep.incorrect_spread, hi - lo);
    }
    rep.accuracy = static_cast<double>(correct) / data.size();
    rep.min_margin = *std::min_element(rep.margins.begin(), rep.margins.end());
    const double tol = opts.argmin_tol * std::max(1.0, std::abs(rep.min_margin));
    for (int i = 0; i < data.size(); ++i) {
        if (rep.margins[i] - rep.min_margin <= tol) rep.argmin.push_back(i);
    }
    rep.norm = lab_norm(net, rep.norm_a, rep.norm_b);
    rep.normalized_margin = rep.norm > 0.0 ? rep.min_margin / std::pow(rep.norm, net.nu) : 0.0;
    return rep;
}

}  // namespace maxmargin
