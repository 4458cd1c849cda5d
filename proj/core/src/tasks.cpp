#include "maxmargin/tasks.hpp"

#include "maxmargin/error.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace maxmargin {

TaskSpec TaskSpec::modular(int p) {
    TaskSpec t;
    t.kind = TaskKind::modular;
    t.p = p;
    return t;
}

TaskSpec TaskSpec::parity(int n, int k, std::vector<int> support) {
    TaskSpec t;
    t.kind = TaskKind::parity;
    t.n = n;
    t.k = k;
    if (support.empty()) {
        support.resize(std::max(k, 0));
        std::iota(support.begin(), support.end(), 0);
    }
    std::sort(support.begin(), support.end());
    t.support = std::move(support);
    return t;
}

TaskSpec TaskSpec::group_task(GroupSpec g) {
    TaskSpec t;
    t.kind = TaskKind::group;
    t.group = g;
    return t;
}

int TaskSpec::num_classes() const {
    switch (kind) {
        case TaskKind::modular: return p;
        case TaskKind::parity: return 2;
        case TaskKind::group: {
            int order = 1;
            if (group.kind == GroupKind::cyclic) return group.param;
            for (int i = 2; i <= group.param; ++i) order *= i;
            return order;
        }
    }
    return 0;
}

int TaskSpec::input_dim() const { return kind == TaskKind::parity ? n : num_classes(); }

std::string TaskSpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case TaskKind::modular: out << "modular(p=" << p << ")"; break;
        case TaskKind::parity:
            out << "parity(n=" << n << ",k=" << k << ",S={";
            for (size_t i = 0; i < support.size(); ++i) out << (i ? "," : "") << support[i];
            out << "})";
            break;
        case TaskKind::group: out << "group(" << group.name() << ")"; break;
    }
    return out.str();
}

void TaskSpec::validate() const {
    switch (kind) {
        case TaskKind::modular:
            if (p < 3 || !is_prime(p)) throw InvalidArgument("modulus must be a prime >= 3, got " + std::to_string(p));
            break;
        case TaskKind::parity: {
            if (n < 1 || n > 16) throw InvalidArgument("parity needs 1 <= n <= 16, got " + std::to_string(n));
            if (k < 1 || k > n) throw InvalidArgument("parity needs 1 <= k <= n");
            if (static_cast<int>(support.size()) != k) throw InvalidArgument("parity support size must equal k");
            for (size_t i = 0; i < support.size(); ++i) {
                if (support[i] < 0 || support[i] >= n) throw InvalidArgument("parity support index out of range");
                if (i && support[i] == support[i - 1]) throw InvalidArgument("parity support has duplicates");
            }
            break;
        }
        case TaskKind::group:
            if (group.kind == GroupKind::cyclic && (group.param < 3 || !is_prime(group.param))) {
                throw InvalidArgument("cyclic group order must be a prime >= 3");
            }
            if (group.kind == GroupKind::symmetric && (group.param < 2 || group.param > 6)) {
                throw InvalidArgument("symmetric group degree must be in [2, 6]");
            }
            break;
    }
}

std::string to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::modular: return "modular";
        case TaskKind::parity: return "parity";
        case TaskKind::group: return "group";
    }
    return "?";
}

TaskKind parse_task_kind(const std::string& text) {
    if (text == "modular") return TaskKind::modular;
    if (text == "parity") return TaskKind::parity;
    if (text == "group") return TaskKind::group;
    throw InvalidArgument("unknown task kind '" + text + "'");
}

Dataset build_dataset(const TaskSpec& spec) {
    spec.validate();
    Dataset d;
    d.task = spec;
    d.num_classes = spec.num_classes();

    if (spec.kind == TaskKind::parity) {
        const int n = spec.n;
        const int count = 1 << n;
        d.x.resize(static_cast<size_t>(count) * n);
        d.labels.resize(count);
        for (int t = 0; t < count; ++t) {
            int prod = 1;
            for (int j = 0; j < n; ++j) {
                // bit n-1-j of t picks x_j, so point 0 is all +1
                const double xj = ((t >> (n - 1 - j)) & 1) ? -1.0 : 1.0;
                d.x[static_cast<size_t>(t) * n + j] = xj;
            }
            for (int j : spec.support) prod *= static_cast<int>(d.x[static_cast<size_t>(t) * n + j]);
            d.labels[t] = prod == 1 ? 0 : 1;
        }
        return d;
    }

    const GroupSpec gs = spec.kind == TaskKind::modular ? GroupSpec{GroupKind::cyclic, spec.p} : spec.group;
    auto group = std::make_shared<Group>(make_group(gs));
    const int order = group->order;
    d.a.reserve(static_cast<size_t>(order) * order);
    d.b.reserve(static_cast<size_t>(order) * order);
    d.labels.reserve(static_cast<size_t>(order) * order);
    for (int a = 0; a < order; ++a) {
        for (int b = 0; b < order; ++b) {
            d.a.push_back(a);
            d.b.push_back(b);
            d.labels.push_back(group->product(a, b));
        }
    }
    d.group = std::move(group);
    return d;
}

void write_csv(const Dataset& data, std::ostream& out) {
    if (data.is_parity()) {
        for (int j = 0; j < data.task.n; ++j) out << "x" << j << ',';
        out << "label\n";
        for (int i = 0; i < data.size(); ++i) {
            const double* r = data.row(i);
            for (int j = 0; j < data.task.n; ++j) out << static_cast<int>(r[j]) << ',';
            out << data.labels[i] << '\n';
        }
        return;
    }
    out << "a,b,label\n";
    for (int i = 0; i < data.size(); ++i) out << data.a[i] << ',' << data.b[i] << ',' << data.labels[i] << '\n';
}

}  // namespace maxmargin
