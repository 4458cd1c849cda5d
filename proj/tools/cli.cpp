#include "cli.hpp"

#include "maxmargin/certify.hpp"
#include "maxmargin/constructions.hpp"
#include "maxmargin/error.hpp"
#include "maxmargin/io.hpp"
#include "maxmargin/spectra.hpp"
#include "maxmargin/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#ifndef MAXMARGIN_VERSION
#define MAXMARGIN_VERSION "0.0.0"
#endif

namespace maxmargin::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string task;
    int p = 5;
    int n = 10;
    int k = 4;
    std::string set;
    std::string group = "s3";
    int width = 100;
    std::string activation;
    double reg_lambda = 1e-4;
    double reg_exp = 0.0;
    double lr = 0.05;
    std::string double_at;
    int steps = 20000;
    int batch = 0;
    std::uint64_t seed = 0;
    std::string out;
    double tol = 1e-8;
    std::string net;
    std::string preset;
    int eval_every = 500;
    int restarts = 32;
    int oracle_steps = 2000;
    double step_size = 0.1;
    bool unfolded = false;
    std::string kappa_r;
    std::string kappa_c;
    int frequency = 0;
};

// Binds flags to Options and lets a JSON config file fill anything not given on the command line.
class Registry {
public:
    template <typename T>
    void bind(CLI::App* app, const std::string& key, T& target, const std::string& desc) {
        Entry e;
        e.key = key;
        e.owner = app;
        e.option = app->add_option("--" + key, target, desc);
        e.set = [&target](const json& v) {
            if constexpr (std::is_same_v<T, std::string>) {
                if (v.is_string()) {
                    target = v.get<std::string>();
                } else if (v.is_array()) {
                    std::string joined;
                    for (const auto& item : v) {
                        if (!joined.empty()) joined += ',';
                        joined += item.is_string() ? item.get<std::string>() : item.dump();
                    }
                    target = joined;
                } else {
                    target = v.dump();
                }
            } else {
                target = v.get<T>();
            }
        };
        e.get = [&target] { return json(target); };
        entries_.push_back(std::move(e));
    }

    void flag(CLI::App* app, const std::string& key, bool& target, const std::string& desc) {
        Entry e;
        e.key = key;
        e.owner = app;
        e.option = app->add_flag("--" + key, target, desc);
        e.set = [&target](const json& v) { target = v.get<bool>(); };
        e.get = [&target] { return json(target); };
        entries_.push_back(std::move(e));
    }

    // Only entries of the active subcommand take part from here on.
    void activate(const CLI::App* app) {
        std::erase_if(entries_, [app](const Entry& e) { return e.owner != app; });
    }

    // Flags win; the config file fills the rest.
    void apply_config(const std::string& path) {
        for (const auto& e : entries_) {
            if (e.option->count() > 0) explicit_.insert(e.key);
        }
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file " + path);
        json cfg;
        try {
            in >> cfg;
        } catch (const json::exception& ex) {
            throw UsageError(std::string("config file is not valid JSON: ") + ex.what());
        }
        if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
            if (it == entries_.end()) throw UsageError("unknown config key '" + key + "'");
            if (it->option->count() > 0) continue;
            try {
                it->set(value);
            } catch (const json::exception&) {
                throw UsageError("config key '" + key + "' has the wrong type");
            }
            explicit_.insert(key);
        }
    }

    bool given(const std::string& key) const { return explicit_.count(key) > 0; }

    json resolved() const {
        json j = json::object();
        for (const auto& e : entries_) {
            if (e.key != "config") j[e.key] = e.get();
        }
        return j;
    }

private:
    struct Entry {
        std::string key;
        const CLI::App* owner = nullptr;
        CLI::Option* option = nullptr;
        std::function<void(const json&)> set;
        std::function<json()> get;
    };
    std::vector<Entry> entries_;
    std::set<std::string> explicit_;
};

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t used = 0;
            // accept 1e3-style entries
            const double v = std::stod(item, &used);
            if (used != item.size() || v != static_cast<double>(static_cast<int>(v))) throw std::invalid_argument(item);
            out.push_back(static_cast<int>(v));
        } catch (const std::logic_error&) {
            throw UsageError("bad integer '" + item + "' in --" + what);
        }
    }
    return out;
}

struct Context {
    Options opt;
    Registry reg;
    std::string command;
    fs::path out_dir;
    std::vector<fs::path> outputs;
    std::ostream* out = &std::cout;
    std::ostream* err = &std::cerr;
    std::uint64_t seed = 0;
};

TaskSpec task_from_options(const Context& ctx) {
    const auto& o = ctx.opt;
    if (o.task.empty()) throw UsageError("--task is required");
    TaskSpec t;
    try {
        switch (parse_task_kind(o.task)) {
            case TaskKind::modular: t = TaskSpec::modular(o.p); break;
            case TaskKind::parity: t = TaskSpec::parity(o.n, o.k, parse_int_list(o.set, "set")); break;
            case TaskKind::group: t = TaskSpec::group_task(GroupSpec::parse(o.group)); break;
        }
        t.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return t;
}

fs::path output_path(Context& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    fs::path path = ctx.out_dir / name;
    ctx.outputs.push_back(path);
    return path;
}

void write_text(Context& ctx, const std::string& name, const std::string& text) {
    std::ofstream f(output_path(ctx, name));
    f << text << '\n';
}

std::string fnv1a(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(Context& ctx, double seconds) {
    json m;
    m["command"] = ctx.command;
    m["config"] = ctx.reg.resolved();
    m["version"] = MAXMARGIN_VERSION;
    m["seed"] = ctx.seed;
    json outs = json::array();
    for (const auto& p : ctx.outputs) outs.push_back({{"path", p.string()}, {"fnv1a64", fnv1a(p)}});
    m["outputs"] = outs;
    m["wall_time_s"] = seconds;
    fs::create_directories(ctx.out_dir);
    std::ofstream f(ctx.out_dir / "manifest.json");
    f << m.dump(2) << '\n';
}

void print_kv(Context& ctx, const std::string& key, double value) {
    *ctx.out << key << ' ' << format_number(value) << '\n';
}

void summarize_network(Context& ctx, const Network& net) {
    const Dataset data = build_dataset(net.task);
    const auto margin = dataset_margin(net, data);
    *ctx.out << "task " << net.task.describe() << '\n';
    *ctx.out << "width " << net.width() << '\n';
    print_kv(ctx, "norm", margin.norm);
    print_kv(ctx, "normalized_margin", margin.normalized_margin);
    if (net.activation.kind != Activation::Kind::relu) {
        print_kv(ctx, "gamma_theory", theoretical_gamma(net.task).value);
    }
    print_kv(ctx, "accuracy", margin.accuracy);
}

Network network_option(const Context& ctx) {
    if (ctx.opt.net.empty()) throw UsageError("--net is required");
    try {
        return load_network(ctx.opt.net);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

int cmd_construct(Context& ctx) {
    const TaskSpec task = task_from_options(ctx);
    Network net;
    switch (task.kind) {
        case TaskKind::modular:
            net = ctx.opt.frequency > 0 ? build_cyclic_frequency(task.p, ctx.opt.frequency) : build_cyclic(task.p);
            break;
        case TaskKind::parity: net = build_parity(task.n, task.k, task.support); break;
        case TaskKind::group: {
            if (task.group.kind == GroupKind::cyclic) {
                net = build_cyclic(task.group.param);
                break;
            }
            const Group g = make_group(task.group);
            net = build_group_trace(g, irreps(g));
            break;
        }
    }
    save_network(net, output_path(ctx, "network.json"));
    summarize_network(ctx, net);
    return 0;
}

int cmd_memorize(Context& ctx) {
    const Network net = build_memorization(ctx.opt.p);
    save_network(net, output_path(ctx, "network.json"));
    summarize_network(ctx, net);
    return 0;
}

int cmd_certify(Context& ctx) {
    const Network net = network_option(ctx);
    if (!ctx.opt.task.empty()) {
        const TaskSpec t = task_from_options(ctx);
        if (task_to_json(t) != task_to_json(net.task)) {
            throw UsageError("network task " + net.task.describe() + " does not match --task " + t.describe());
        }
    }
    const Dataset data = build_dataset(net.task);
    const auto rep = certify_network(net, data, ctx.opt.tol);
    write_text(ctx, "certificate.json", certificate_to_json(rep));
    *ctx.out << "uniform_margin " << (rep.uniform_margin_ok ? "pass" : "FAIL") << " deviation "
             << format_number(rep.uniform_deviation) << '\n';
    *ctx.out << "c1 " << (rep.c1_ok ? "pass" : "FAIL") << " spread " << format_number(rep.c1_spread) << '\n';
    *ctx.out << "gamma " << (rep.gamma_ok ? "pass" : "FAIL") << " measured " << format_number(rep.gamma_measured)
             << " theory " << format_number(rep.gamma_theory) << " rel_error " << format_number(rep.rel_error)
             << '\n';
    *ctx.out << (rep.passed() ? "certified" : "not certified") << '\n';
    return rep.passed() ? 0 : 1;
}

int cmd_gamma(Context& ctx) {
    const TaskSpec task = task_from_options(ctx);
    const auto g = theoretical_gamma(task);
    json j;
    j["task"] = json::parse(task_to_json(task));
    j["gamma"] = g.value;
    j["certified"] = g.certified;
    write_text(ctx, "gamma.json", j.dump(2));
    *ctx.out << format_number(g.value) << '\n';
    if (!g.certified) *ctx.out << "warning: group fails the negativity condition; value is not certified\n";
    return 0;
}

int cmd_oracle(Context& ctx) {
    const TaskSpec task = task_from_options(ctx);
    const Dataset data = build_dataset(task);
    const Activation act = task.kind == TaskKind::parity ? Activation::power(task.k) : Activation::square();
    OracleOptions oo;
    oo.restarts = ctx.opt.restarts;
    oo.steps = ctx.opt.oracle_steps;
    oo.step_size = ctx.opt.step_size;
    oo.seed = ctx.opt.seed;
    ctx.seed = oo.seed;
    const auto res = single_neuron_oracle(data, act, ClassWeighting::uniform(data), {}, oo);
    write_text(ctx, "oracle.json", oracle_to_json(res, task));
    print_kv(ctx, "objective", res.objective);
    print_kv(ctx, "gamma_theory", theoretical_gamma(task).value);
    print_kv(ctx, "grad_norm", res.grad_norm);
    *ctx.out << "converged " << (res.converged ? "yes" : "no") << '\n';
    return 0;
}

int cmd_train(Context& ctx) {
    const auto& o = ctx.opt;
    TrainConfig cfg;
    if (!o.preset.empty()) {
        try {
            cfg = preset(o.preset);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    } else {
        cfg.task = task_from_options(ctx);
        cfg.activation = cfg.task.kind == TaskKind::parity ? Activation::power(cfg.task.k) : Activation::square();
    }
    const auto& r = ctx.reg;
    if (!o.preset.empty() && r.given("task")) cfg.task = task_from_options(ctx);
    if (r.given("width")) cfg.width = o.width;
    if (r.given("activation")) {
        try {
            cfg.activation = Activation::parse(o.activation);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    }
    if (r.given("reg-lambda")) cfg.reg_lambda = o.reg_lambda;
    if (r.given("reg-exp")) cfg.reg_exp = o.reg_exp;
    if (r.given("lr")) cfg.lr = o.lr;
    if (r.given("double-at")) cfg.double_at = parse_int_list(o.double_at, "double-at");
    if (r.given("steps")) cfg.steps = o.steps;
    if (r.given("batch")) cfg.batch = o.batch;
    if (r.given("seed")) cfg.seed = o.seed;
    if (r.given("eval-every")) cfg.eval_every = o.eval_every;
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    ctx.seed = cfg.seed;

    const auto result = train(cfg);
    {
        std::ofstream f(output_path(ctx, "trace.csv"));
        write_trace_csv(result.trace, f);
    }
    save_network(result.net, output_path(ctx, "network.json"));
    *ctx.out << "status " << to_string(result.status) << '\n';
    if (!result.message.empty()) *ctx.out << "message " << result.message << '\n';
    if (!result.trace.records.empty()) {
        const auto& last = result.trace.records.back();
        *ctx.out << "step " << last.step << '\n';
        print_kv(ctx, "loss", last.loss);
        print_kv(ctx, "normalized_margin", last.normalized_margin);
        if (cfg.activation.kind != Activation::Kind::relu) {
            const double gamma = theoretical_gamma(cfg.task).value;
            print_kv(ctx, "gamma_theory", gamma);
            print_kv(ctx, "margin_ratio", last.normalized_margin / gamma);
        }
        print_kv(ctx, "accuracy", last.accuracy);
        if (last.mean_max_power) print_kv(ctx, "mean_max_power", *last.mean_max_power);
    }
    return result.status == TrainStatus::ok ? 0 : 1;
}

struct Analysis {
    std::optional<BasisVectors> basis;
    std::vector<std::string> names;
};

SpectrumReport analyse(const Network& net, bool fold, Analysis& holder) {
    if (net.is_parity()) throw UsageError("spectral analysis needs a modular or group network");
    if (net.task.kind == TaskKind::modular ||
        (net.task.kind == TaskKind::group && net.task.group.kind == GroupKind::cyclic)) {
        return census(net, FourierAnalysis{net.task.input_dim(), fold});
    }
    const Group g = make_group(net.task.group);
    const auto reps = irreps(g);
    holder.basis = basis_vectors(reps, g);
    for (const auto& rp : reps) holder.names.push_back(rp.name);
    return census(net, RepAnalysis{&*holder.basis, holder.names});
}

int cmd_spectrum(Context& ctx) {
    const Network net = network_option(ctx);
    Analysis holder;
    const auto rep = analyse(net, !ctx.opt.unfolded, holder);
    {
        std::ofstream f(output_path(ctx, "spectrum.csv"));
        f << "index,norm";
        for (const auto& name : rep.label_names) f << ',' << (rep.fourier ? "f" : "") << name;
        f << '\n';
        for (const auto& ns : rep.neurons) {
            f << ns.index << ',' << format_number(ns.norm);
            for (size_t s = 0; s < rep.labels.size(); ++s) {
                f << ',' << (s < ns.power.size() ? format_number(ns.power[s]) : "");
            }
            f << '\n';
        }
    }
    const int p = net.task.input_dim();
    if (rep.fourier && p <= 31) {
        write_text(ctx, "presence.json", presence_to_json(multidim_presence(net, p)));
    }
    print_kv(ctx, "mean_max_power", rep.mean_max_power);
    *ctx.out << "active_neurons " << rep.active_neurons << '\n';
    return 0;
}

int cmd_census(Context& ctx) {
    const Network net = network_option(ctx);
    Analysis holder;
    const auto rep = analyse(net, !ctx.opt.unfolded, holder);
    {
        std::ofstream fn(output_path(ctx, "census_neurons.csv"));
        std::ofstream fs_(output_path(ctx, "census_summary.csv"));
        write_spectrum_csv(rep, fn, fs_);
    }
    for (size_t s = 0; s < rep.labels.size(); ++s) {
        *ctx.out << (rep.fourier ? "frequency " : "rep ") << rep.label_names[s] << ' ' << rep.counts[s] << '\n';
    }
    print_kv(ctx, "mean_max_power", rep.mean_max_power);
    *ctx.out << "all_present " << (rep.all_present ? "yes" : "no") << '\n';
    return 0;
}

std::vector<int> resolve_indices(const std::string& text, const std::vector<std::string>& names, const char* what) {
    std::vector<int> out;
    if (text.empty() || text == "all") {
        for (size_t i = 1; i < names.size(); ++i) out.push_back(static_cast<int>(i));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto it = std::find(names.begin(), names.end(), item);
        if (it != names.end()) {
            out.push_back(static_cast<int>(it - names.begin()));
            continue;
        }
        try {
            size_t used = 0;
            const int idx = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(idx);
        } catch (const std::logic_error&) {
            throw UsageError(std::string("unknown entry '") + item + "' in --" + what);
        }
    }
    return out;
}

int cmd_weighting(Context& ctx) {
    GroupSpec gs;
    try {
        gs = GroupSpec::parse(ctx.opt.group);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    if (gs.kind != GroupKind::symmetric) throw UsageError("weighting needs a symmetric group");
    const Group g = make_group(gs);
    const auto reps = irreps(g);
    const auto table = character_table(reps, g);
    const auto kr = resolve_indices(ctx.opt.kappa_r, table.rep_names, "kappa-r");
    const auto kc = resolve_indices(ctx.opt.kappa_c, table.class_names, "kappa-c");
    WeightingSolution sol;
    try {
        sol = solve_general_weighting(table, kr, kc);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    write_text(ctx, "weighting.json", weighting_to_json(sol, table));
    write_text(ctx, "group.json", group_to_json(g, table));
    const auto neg = negativity_condition(table);
    for (int c = 1; c < g.num_classes(); ++c) {
        *ctx.out << "negativity " << table.class_names[c] << ' ' << format_number(neg.sums[c]) << '\n';
    }
    if (sol.singular) {
        *ctx.out << "infeasible: singular system\n";
        return 1;
    }
    for (size_t i = 0; i < sol.kappa_c.size(); ++i) {
        *ctx.out << "tau " << table.class_names[sol.kappa_c[i]] << ' ' << format_number(sol.tau[i]) << '\n';
    }
    for (size_t i = 0; i < sol.kappa_r.size(); ++i) {
        *ctx.out << "lambda " << table.rep_names[sol.kappa_r[i]] << ' ' << format_number(sol.lambda[i]) << '\n';
    }
    *ctx.out << (sol.feasible ? "feasible" : "infeasible") << '\n';
    return sol.feasible ? 0 : 1;
}

void add_task_flags(Registry& reg, CLI::App* sub, Options& o) {
    reg.bind(sub, "task", o.task, "modular | parity | group");
    reg.bind(sub, "p", o.p, "modulus for modular tasks");
    reg.bind(sub, "n", o.n, "input bits for parity");
    reg.bind(sub, "k", o.k, "support size for parity");
    reg.bind(sub, "set", o.set, "parity support, comma separated 0-based indices");
    reg.bind(sub, "group", o.group, "s3 | s4 | s5 | s6 | z<p>");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.out = &out;
    ctx.err = &err;
    Options& o = ctx.opt;
    Registry& reg = ctx.reg;

    CLI::App app{"Analytic maximum-margin networks: construct, certify, train, analyse"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MAXMARGIN_VERSION);

    struct Sub {
        CLI::App* app;
        std::function<int(Context&)> fn;
    };
    std::vector<Sub> subs;
    auto make = [&](const std::string& name, const std::string& desc, std::function<int(Context&)> fn) {
        CLI::App* sub = app.add_subcommand(name, desc);
        reg.bind(sub, "config", o.config, "JSON config file; flags override its entries");
        reg.bind(sub, "out", o.out, std::string("output directory (default $") + kOutEnv + " or ./maxmargin_out)");
        subs.push_back({sub, std::move(fn)});
        return sub;
    };

    auto* construct = make("construct", "build an analytic max-margin network", cmd_construct);
    add_task_flags(reg, construct, o);
    reg.bind(construct, "frequency", o.frequency, "modular only: keep the neurons of one frequency");

    auto* memorize = make("memorize", "build the one-hot memorization baseline", cmd_memorize);
    reg.bind(memorize, "p", o.p, "modulus");

    auto* certify = make("certify", "check a network against the margin certificate", cmd_certify);
    reg.bind(certify, "net", o.net, "network JSON");
    add_task_flags(reg, certify, o);
    reg.bind(certify, "tol", o.tol, "relative tolerance for all checks");

    auto* gamma = make("gamma", "print the closed-form maximum margin", cmd_gamma);
    add_task_flags(reg, gamma, o);

    auto* oracle = make("oracle", "search for the best single neuron under uniform class weights", cmd_oracle);
    add_task_flags(reg, oracle, o);
    reg.bind(oracle, "restarts", o.restarts, "random restarts");
    reg.bind(oracle, "oracle-steps", o.oracle_steps, "ascent steps per restart");
    reg.bind(oracle, "step-size", o.step_size, "ascent step size");
    reg.bind(oracle, "seed", o.seed, "random seed");

    auto* trainc = make("train", "train a network with regularized gradient descent", cmd_train);
    add_task_flags(reg, trainc, o);
    reg.bind(trainc, "preset", o.preset, "cyclic13 | cyclic71 | cyclic71-relu | parity10-4 | s3 | s4 | s5");
    reg.bind(trainc, "width", o.width, "hidden width");
    reg.bind(trainc, "activation", o.activation, "square | relu | power:<k>");
    reg.bind(trainc, "reg-lambda", o.reg_lambda, "regularization coefficient");
    reg.bind(trainc, "reg-exp", o.reg_exp, "regularization exponent (default: homogeneity)");
    reg.bind(trainc, "lr", o.lr, "initial learning rate");
    reg.bind(trainc, "double-at", o.double_at, "comma separated steps at which the rate doubles");
    reg.bind(trainc, "steps", o.steps, "gradient steps");
    reg.bind(trainc, "batch", o.batch, "minibatch size, 0 for full batch");
    reg.bind(trainc, "seed", o.seed, "random seed");
    reg.bind(trainc, "eval-every", o.eval_every, "trace interval in steps");

    auto* spectrum = make("spectrum", "per-neuron Fourier or representation power", cmd_spectrum);
    reg.bind(spectrum, "net", o.net, "network JSON");
    reg.flag(spectrum, "unfolded", o.unfolded, "keep frequencies j and p-j apart");

    auto* censusc = make("census", "dominant frequency or representation counts", cmd_census);
    reg.bind(censusc, "net", o.net, "network JSON");
    reg.flag(censusc, "unfolded", o.unfolded, "keep frequencies j and p-j apart");

    auto* weighting = make("weighting", "solve the class-weighting and rep-scaling systems", cmd_weighting);
    reg.bind(weighting, "group", o.group, "s3 | s4 | s5 | s6");
    reg.bind(weighting, "kappa-r", o.kappa_r, "';'-separated rep names or indices (default all non-trivial)");
    reg.bind(weighting, "kappa-c", o.kappa_c, "';'-separated class names or indices (default all non-trivial)");

    std::vector<const char*> argv;
    argv.push_back("maxmargin");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        for (auto& s : subs) {
            if (!s.app->parsed()) continue;
            ctx.command = s.app->get_name();
            reg.activate(s.app);
            reg.apply_config(o.config);
            if (!o.out.empty()) {
                ctx.out_dir = o.out;
            } else if (const char* env = std::getenv(kOutEnv); env && *env) {
                ctx.out_dir = env;
            } else {
                ctx.out_dir = "maxmargin_out";
            }
            const int code = s.fn(ctx);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_manifest(ctx, secs);
            return code;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedKind& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace maxmargin::cli
