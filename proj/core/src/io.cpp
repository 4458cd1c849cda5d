#include "maxmargin/io.hpp"

#include "maxmargin/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace maxmargin {

using nlohmann::json;

namespace {

json task_json(const TaskSpec& t) {
    json j;
    j["kind"] = to_string(t.kind);
    switch (t.kind) {
        case TaskKind::modular: j["p"] = t.p; break;
        case TaskKind::parity:
            j["n"] = t.n;
            j["k"] = t.k;
            j["support"] = t.support;
            break;
        case TaskKind::group: j["group"] = t.group.name(); break;
    }
    return j;
}

TaskSpec task_from(const json& j) {
    const TaskKind kind = parse_task_kind(j.at("kind").get<std::string>());
    TaskSpec t;
    switch (kind) {
        case TaskKind::modular: t = TaskSpec::modular(j.at("p").get<int>()); break;
        case TaskKind::parity:
            t = TaskSpec::parity(j.at("n").get<int>(), j.at("k").get<int>(),
                                 j.value("support", std::vector<int>{}));
            break;
        case TaskKind::group: t = TaskSpec::group_task(GroupSpec::parse(j.at("group").get<std::string>())); break;
    }
    t.validate();
    return t;
}

// Non-finite values have no JSON spelling; store them as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string dump(const json& j, int indent) { return j.dump(indent); }

}  // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

std::string network_to_json(const Network& net, int indent) {
    json j;
    j["task"] = task_json(net.task);
    j["activation"] = net.activation.name();
    j["nu"] = net.nu;
    json neurons = json::array();
    for (const auto& nr : net.neurons) {
        json n;
        n["u"] = nr.u;
        if (!nr.v.empty()) n["v"] = nr.v;
        n["w"] = nr.w;
        neurons.push_back(std::move(n));
    }
    j["neurons"] = std::move(neurons);
    json meta;
    meta["created_by"] = net.created_by;
    if (net.seed) meta["seed"] = *net.seed;
    j["meta"] = meta;
    return dump(j, indent);
}

Network network_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        Network net;
        net.task = task_from(j.at("task"));
        net.activation = Activation::parse(j.at("activation").get<std::string>());
        net.nu = j.value("nu", net.activation.homogeneity());
        for (const auto& n : j.at("neurons")) {
            Neuron nr;
            nr.u = n.at("u").get<std::vector<double>>();
            if (n.contains("v")) nr.v = n.at("v").get<std::vector<double>>();
            nr.w = n.at("w").get<std::vector<double>>();
            net.neurons.push_back(std::move(nr));
        }
        if (j.contains("meta")) {
            const auto& meta = j.at("meta");
            net.created_by = meta.value("created_by", std::string{});
            if (meta.contains("seed")) net.seed = meta.at("seed").get<std::uint64_t>();
        }
        net.validate();
        return net;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed network JSON: ") + e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << network_to_json(net) << '\n';
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

std::string task_to_json(const TaskSpec& task) { return task_json(task).dump(); }

TaskSpec task_from_json(const std::string& text) {
    try {
        return task_from(json::parse(text));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed task JSON: ") + e.what());
    }
}

std::string group_to_json(const Group& group, const CharacterTable& table, bool include_mul) {
    json j;
    j["kind"] = group.kind == GroupKind::cyclic ? "cyclic" : "symmetric";
    j["param"] = group.param;
    j["order"] = group.order;
    json classes = json::array();
    for (int c = 0; c < group.num_classes(); ++c) {
        classes.push_back({{"name", group.class_name(c)},
                           {"size", group.classes[c].size()},
                           {"representative", group.element_name(group.classes[c].front())}});
    }
    j["classes"] = classes;
    j["dims"] = table.dims;
    j["reps"] = table.rep_names;
    j["chi"] = table.chi;
    if (include_mul) j["mul"] = group.mul;
    return j.dump(2);
}

std::string margin_to_json(const MarginReport& r, bool include_points) {
    json j;
    j["min_margin"] = num(r.min_margin);
    j["normalized_margin"] = num(r.normalized_margin);
    j["norm"] = num(r.norm);
    j["norm_a"] = r.norm_a;
    j["norm_b"] = r.norm_b;
    j["nu"] = r.nu;
    j["accuracy"] = r.accuracy;
    j["argmin_count"] = r.argmin.size();
    j["incorrect_spread"] = num(r.incorrect_spread);
    if (include_points) {
        j["argmin"] = r.argmin;
        j["margins"] = r.margins;
    }
    return j.dump(2);
}

std::string certificate_to_json(const CertificateReport& r) {
    json j;
    j["tol"] = r.tol;
    j["uniform_margin_ok"] = r.uniform_margin_ok;
    j["uniform_deviation"] = num(r.uniform_deviation);
    j["c1_ok"] = r.c1_ok;
    j["c1_spread"] = num(r.c1_spread);
    j["gamma_theory"] = num(r.gamma_theory);
    j["gamma_certified"] = r.gamma_certified;
    j["gamma_measured"] = num(r.gamma_measured);
    j["rel_error"] = num(r.rel_error);
    j["gamma_ok"] = r.gamma_ok;
    j["min_margin"] = num(r.min_margin);
    j["norm"] = num(r.norm);
    j["passed"] = r.passed();
    return j.dump(2);
}

std::string weighting_to_json(const WeightingSolution& s, const CharacterTable& table) {
    json j;
    auto names = [](const std::vector<int>& idx, const std::vector<std::string>& all) {
        std::vector<std::string> out;
        for (int i : idx) out.push_back(all[i]);
        return out;
    };
    j["kappa_r"] = s.kappa_r;
    j["kappa_r_names"] = names(s.kappa_r, table.rep_names);
    j["kappa_c"] = s.kappa_c;
    j["kappa_c_names"] = names(s.kappa_c, table.class_names);
    j["singular"] = s.singular;
    j["tau"] = s.tau;
    j["class_mass"] = s.class_mass;
    j["lambda"] = s.lambda;
    j["rep_slack"] = s.rep_slack;
    j["positive"] = s.positive;
    j["reps_dominate"] = s.reps_dominate;
    j["classes_on_margin"] = s.classes_on_margin;
    j["feasible"] = s.feasible;
    j["condition2_violations"] = s.condition2_violations;
    j["condition3_violations"] = s.condition3_violations;
    if (!s.z.empty()) {
        j["z"] = s.z;
        j["tau_closed_form"] = s.tau_closed_form;
    }
    return j.dump(2);
}

std::string oracle_to_json(const OracleResult& r, const TaskSpec& task) {
    json j;
    j["task"] = task_json(task);
    j["objective"] = num(r.objective);
    j["grad_norm"] = num(r.grad_norm);
    j["converged"] = r.converged;
    j["best_restart"] = r.best_restart;
    json n;
    n["u"] = r.neuron.u;
    if (!r.neuron.v.empty()) n["v"] = r.neuron.v;
    n["w"] = r.neuron.w;
    j["neuron"] = n;
    return j.dump(2);
}

std::string presence_to_json(const PresenceReport& r) {
    json j;
    j["p"] = r.p;
    j["threshold"] = r.threshold;
    json vals = json::array();
    for (int f = 1; f < r.p; ++f) vals.push_back({{"j", f}, {"re", r.values[f].real()}, {"im", r.values[f].imag()}});
    j["values"] = vals;
    j["present"] = r.present;
    j["count"] = r.count;
    j["all_present"] = r.all_present;
    return j.dump(2);
}

void write_spectrum_csv(const SpectrumReport& report, std::ostream& neurons_out, std::ostream& summary_out) {
    const char* key = report.fourier ? "frequency" : "rep";
    neurons_out << "index,norm,active,dominant_" << key << ",max_power\n";
    for (const auto& ns : report.neurons) {
        neurons_out << ns.index << ',' << format_number(ns.norm) << ',' << (ns.active ? 1 : 0) << ',';
        if (ns.dominant >= 0) {
            neurons_out << (report.fourier ? std::to_string(ns.dominant) : report.label_names[ns.dominant]);
        }
        neurons_out << ',' << format_number(ns.max_power) << '\n';
    }
    summary_out << key << ",count\n";
    for (size_t s = 0; s < report.labels.size(); ++s) {
        summary_out << report.label_names[s] << ',' << report.counts[s] << '\n';
    }
}

}  // namespace maxmargin
