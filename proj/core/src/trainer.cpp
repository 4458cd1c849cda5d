#include "maxmargin/trainer.hpp"

#include "maxmargin/error.hpp"
#include "maxmargin/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace maxmargin {

namespace {

using Matrix = Eigen::MatrixXd;

struct Params {
    bool parity = false;
    Matrix u;  // in_dim x m
    Matrix v;  // in_dim x m (group tasks)
    Matrix w;  // m x classes

    static Params from(const Network& net) {
        Params p;
        p.parity = net.is_parity();
        const int m = net.width();
        const int in = net.task.input_dim();
        const int c = net.num_classes();
        p.u.resize(in, m);
        p.w.resize(m, c);
        if (!p.parity) p.v.resize(in, m);
        for (int i = 0; i < m; ++i) {
            const auto& nr = net.neurons[i];
            for (int j = 0; j < in; ++j) {
                p.u(j, i) = nr.u[j];
                if (!p.parity) p.v(j, i) = nr.v[j];
            }
            for (int j = 0; j < c; ++j) p.w(i, j) = nr.w[j];
        }
        return p;
    }

    void write_to(Network& net) const {
        const int m = static_cast<int>(w.rows());
        const int in = static_cast<int>(u.rows());
        const int c = static_cast<int>(w.cols());
        net.neurons.resize(m);
        for (int i = 0; i < m; ++i) {
            auto& nr = net.neurons[i];
            nr.u.resize(in);
            nr.w.resize(c);
            if (!parity) nr.v.resize(in);
            for (int j = 0; j < in; ++j) {
                nr.u[j] = u(j, i);
                if (!parity) nr.v[j] = v(j, i);
            }
            for (int j = 0; j < c; ++j) nr.w[j] = w(i, j);
        }
    }

    Params zeros_like() const {
        Params g;
        g.parity = parity;
        g.u = Matrix::Zero(u.rows(), u.cols());
        if (!parity) g.v = Matrix::Zero(v.rows(), v.cols());
        g.w = Matrix::Zero(w.rows(), w.cols());
        return g;
    }
};

struct Evaluation {
    double data_loss = 0.0;
    double reg = 0.0;
};

// Mean cross-entropy over `batch` plus lambda * sum ||omega_i||^r; fills grad.
Evaluation evaluate(const Params& p, const Dataset& data, const Activation& act, double lambda, double r,
                    const std::vector<int>& batch, Params& grad) {
    const int bsz = static_cast<int>(batch.size());
    const int m = static_cast<int>(p.w.rows());
    const int c = static_cast<int>(p.w.cols());

    Matrix z(bsz, m);
    Matrix x;
    if (p.parity) {
        const int n = data.task.n;
        x.resize(bsz, n);
        for (int t = 0; t < bsz; ++t) {
            const double* row = data.row(batch[t]);
            for (int j = 0; j < n; ++j) x(t, j) = row[j];
        }
        z.noalias() = x * p.u;
    } else {
        for (int t = 0; t < bsz; ++t) z.row(t) = p.u.row(data.a[batch[t]]) + p.v.row(data.b[batch[t]]);
    }
    const Matrix h = z.unaryExpr([&](double s) { return act.apply(s); });
    Matrix logits = h * p.w;

    Evaluation ev;
    for (int t = 0; t < bsz; ++t) {
        const double mx = logits.row(t).maxCoeff();
        double sum = 0.0;
        for (int j = 0; j < c; ++j) {
            logits(t, j) = std::exp(logits(t, j) - mx);
            sum += logits(t, j);
        }
        const int y = data.labels[batch[t]];
        ev.data_loss -= std::log(logits(t, y) / sum);
        // logits now holds (softmax - onehot) / B
        for (int j = 0; j < c; ++j) logits(t, j) /= sum;
        logits(t, y) -= 1.0;
    }
    ev.data_loss /= bsz;
    logits /= bsz;

    grad.w.noalias() = h.transpose() * logits;
    Matrix dz = logits * p.w.transpose();
    dz.array() *= z.unaryExpr([&](double s) { return act.derivative(s); }).array();
    if (p.parity) {
        grad.u.noalias() = x.transpose() * dz;
    } else {
        grad.u.setZero();
        grad.v.setZero();
        for (int t = 0; t < bsz; ++t) {
            grad.u.row(data.a[batch[t]]) += dz.row(t);
            grad.v.row(data.b[batch[t]]) += dz.row(t);
        }
    }

    if (lambda > 0.0) {
        for (int i = 0; i < m; ++i) {
            double sq = p.u.col(i).squaredNorm() + p.w.row(i).squaredNorm();
            if (!p.parity) sq += p.v.col(i).squaredNorm();
            if (sq == 0.0) continue;  // subgradient 0 at the origin
            const double nrm = std::sqrt(sq);
            ev.reg += lambda * std::pow(nrm, r);
            const double coef = lambda * r * std::pow(nrm, r - 2.0);
            grad.u.col(i) += coef * p.u.col(i);
            if (!p.parity) grad.v.col(i) += coef * p.v.col(i);
            grad.w.row(i) += coef * p.w.row(i);
        }
    }
    return ev;
}

std::vector<int> all_points(int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

}  // namespace

double TrainConfig::lr_at(int step) const {
    double rate = lr;
    for (int s : double_at) {
        if (step >= s) rate *= 2.0;
    }
    return rate;
}

void TrainConfig::validate() const {
    task.validate();
    if (width < 1) throw InvalidArgument("width must be >= 1");
    if (reg_lambda < 0.0) throw InvalidArgument("reg lambda must be >= 0");
    if (resolved_reg_exp() < 1.0) throw InvalidArgument("reg exponent must be >= 1");
    if (lr <= 0.0) throw InvalidArgument("learning rate must be > 0");
    if (steps < 0) throw InvalidArgument("steps must be >= 0");
    if (batch < 0) throw InvalidArgument("batch must be >= 0");
    if (eval_every < 1) throw InvalidArgument("eval interval must be >= 1");
    for (size_t i = 1; i < double_at.size(); ++i) {
        if (double_at[i] <= double_at[i - 1]) throw InvalidArgument("doubling steps must be strictly increasing");
    }
    if (task.kind == TaskKind::parity && activation.kind == Activation::Kind::relu) {
        throw InvalidArgument("parity networks use a power activation");
    }
}

TrainConfig preset(const std::string& name) {
    TrainConfig c;
    if (name == "cyclic13") {
        c.task = TaskSpec::modular(13);
        c.width = 100;
        c.reg_lambda = 1e-4;
        c.lr = 0.05;
        c.double_at = {1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000};
        c.steps = 20000;
        c.eval_every = 500;
    } else if (name == "cyclic71" || name == "cyclic71-relu") {
        c.task = TaskSpec::modular(71);
        c.width = 500;
        c.reg_lambda = 1e-4;
        c.lr = 0.05;
        c.double_at = {1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000};
        c.steps = 40000;
        c.eval_every = 1000;
        if (name == "cyclic71-relu") {
            c.activation = Activation::relu();
            c.reg_exp = 2.0;
        }
    } else if (name == "parity10-4") {
        c.task = TaskSpec::parity(10, 4);
        c.width = 40;
        c.activation = Activation::power(4);
        c.reg_lambda = 1e-3;
        c.lr = 0.1;
        c.double_at = {};
        c.steps = 30000;
        c.eval_every = 1000;
    } else if (name == "s3" || name == "s4") {
        c.task = TaskSpec::group_task(GroupSpec::parse(name));
        c.width = name == "s3" ? 30 : 200;
        c.reg_lambda = 1e-7;
        c.lr = 0.05;
        c.double_at = {200, 400, 600, 800, 1000, 1200, 1400, 1600, 1800, 2000, 2200, 2400, 2600, 5000, 10000};
        c.steps = 50000;
        c.eval_every = 1000;
    } else if (name == "s5") {
        c.task = TaskSpec::group_task(GroupSpec::parse("s5"));
        c.width = 2000;
        c.reg_lambda = 1e-5;
        c.lr = 0.05;
        c.double_at = {3000, 6000, 9000, 12000, 15000, 18000, 21000, 24000};
        c.steps = 75000;
        c.batch = 1000;
        c.eval_every = 2500;
    } else {
        throw InvalidArgument("unknown preset '" + name + "'");
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"cyclic13", "cyclic71", "cyclic71-relu", "parity10-4", "s3", "s4", "s5"};
}

Network init_network(const TrainConfig& config) {
    config.validate();
    const TaskSpec& task = config.task;
    const int in = task.input_dim();
    const int c = task.num_classes();
    const bool parity = task.kind == TaskKind::parity;
    const double in_fan = parity ? in : 2.0 * in;
    const double sigma_in = config.init_scale >= 0.0 ? config.init_scale : 1.0 / std::sqrt(in_fan);
    const double sigma_out = config.init_scale >= 0.0 ? config.init_scale : 1.0 / std::sqrt(config.width);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Neuron> neurons(config.width);
    for (auto& nr : neurons) {
        nr.u.resize(in);
        for (double& x : nr.u) x = sigma_in * normal(rng);
        if (!parity) {
            nr.v.resize(in);
            for (double& x : nr.v) x = sigma_in * normal(rng);
        }
        nr.w.resize(c);
        for (double& x : nr.w) x = sigma_out * normal(rng);
    }
    Network net = make_network(task, config.activation, std::move(neurons), "train");
    net.seed = config.seed;
    return net;
}

LossGrad loss_and_grad(const Network& net, const Dataset& data, double reg_lambda, double reg_exp,
                       const std::vector<int>& batch) {
    net.validate();
    if (data.num_classes != net.num_classes()) throw InvalidArgument("network and dataset disagree on classes");
    const Params p = Params::from(net);
    Params g = p.zeros_like();
    const std::vector<int> idx = batch.empty() ? all_points(data.size()) : batch;
    const double r = reg_exp > 0.0 ? reg_exp : net.nu;
    const Evaluation ev = evaluate(p, data, net.activation, reg_lambda, r, idx, g);
    LossGrad out;
    out.data_loss = ev.data_loss;
    out.reg = ev.reg;
    out.loss = ev.data_loss + ev.reg;
    if (!std::isfinite(out.loss)) throw NumericalError("loss is not finite");
    out.grad = net;
    g.write_to(out.grad);
    return out;
}

TrainResult train(const TrainConfig& config) {
    config.validate();
    TrainResult result;
    result.net = init_network(config);
    const Dataset data = build_dataset(config.task);
    const double r = config.resolved_reg_exp();
    const Activation act = config.activation;

    std::optional<BasisVectors> basis;
    if (config.task.kind == TaskKind::group && data.group->kind == GroupKind::symmetric) {
        basis = basis_vectors(irreps(*data.group), *data.group);
    }

    Params p = Params::from(result.net);
    Params g = p.zeros_like();
    const int npts = data.size();
    const std::vector<int> full = all_points(npts);
    std::vector<int> order = full;
    std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    int cursor = npts;
    std::vector<int> batch;

    auto record = [&](int step, const Evaluation& ev) {
        p.write_to(result.net);
        const auto margin = dataset_margin(result.net, data);
        TraceRecord rec;
        rec.step = step;
        rec.loss = ev.data_loss;
        rec.reg = ev.reg;
        rec.norm = margin.norm;
        rec.normalized_margin = margin.normalized_margin;
        rec.accuracy = margin.accuracy;
        if (config.task.kind == TaskKind::modular ||
            (config.task.kind == TaskKind::group && data.group->kind == GroupKind::cyclic)) {
            rec.mean_max_power = census(result.net, FourierAnalysis{data.group->order, true}).mean_max_power;
        } else if (basis) {
            rec.mean_max_power = census(result.net, RepAnalysis{&*basis, {}}).mean_max_power;
        }
        result.trace.records.push_back(rec);
    };

    for (int step = 0; step <= config.steps; ++step) {
        const bool eval_now = step % config.eval_every == 0 || step == config.steps;
        if (config.batch == 0 || config.batch >= npts) {
            batch = full;
        } else {
            batch.clear();
            while (static_cast<int>(batch.size()) < config.batch) {
                if (cursor >= npts) {
                    std::shuffle(order.begin(), order.end(), shuffle_rng);
                    cursor = 0;
                }
                batch.push_back(order[cursor++]);
            }
        }
        Evaluation ev = evaluate(p, data, act, config.reg_lambda, r, batch, g);
        if (eval_now && config.batch != 0 && config.batch < npts) {
            Params scratch = p.zeros_like();
            ev = evaluate(p, data, act, config.reg_lambda, r, full, scratch);
        }
        if (!std::isfinite(ev.data_loss) || !std::isfinite(ev.reg)) {
            result.status = TrainStatus::diverged;
            result.message = "loss became non-finite at step " + std::to_string(step);
            p.write_to(result.net);
            return result;
        }
        if (eval_now) record(step, ev);
        if (step == 0) {
            const double gnorm = g.u.norm() + g.w.norm() + (p.parity ? 0.0 : g.v.norm());
            if (gnorm == 0.0) {
                result.status = TrainStatus::degenerate;
                result.message = "gradient vanishes at initialisation (zero network)";
                return result;
            }
        }
        if (step == config.steps) break;
        const double rate = config.lr_at(step);
        p.u -= rate * g.u;
        if (!p.parity) p.v -= rate * g.v;
        p.w -= rate * g.w;
    }
    p.write_to(result.net);
    return result;
}

std::string to_string(TrainStatus status) {
    switch (status) {
        case TrainStatus::ok: return "ok";
        case TrainStatus::diverged: return "diverged";
        case TrainStatus::degenerate: return "degenerate";
    }
    return "?";
}

void write_trace_csv(const TrainTrace& trace, std::ostream& out) {
    out << "step,loss,reg,norm,normalized_margin,accuracy,mean_max_power\n";
    const auto flags = out.flags();
    const auto prec = out.precision();
    out.setf(std::ios::scientific, std::ios::floatfield);
    out.precision(17);
    for (const auto& r : trace.records) {
        out << r.step << ',' << r.loss << ',' << r.reg << ',' << r.norm << ',' << r.normalized_margin << ','
            << r.accuracy << ',';
        if (r.mean_max_power) out << *r.mean_max_power;
        out << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace maxmargin
