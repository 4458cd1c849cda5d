#include "maxmargin/group.hpp"

#include "maxmargin/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace maxmargin {

namespace {

int lehmer_rank(const std::vector<int>& word) {
    const int n = static_cast<int>(word.size());
    int rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j) {
            if (word[j] < word[i]) ++smaller;
        }
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

std::vector<int> cycle_type(const std::vector<int>& word) {
    const int n = static_cast<int>(word.size());
    std::vector<bool> seen(n, false);
    std::vector<int> lengths;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = word[j]) {
            seen[j] = true;
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

std::string cycle_type_name(const std::vector<int>& lengths) {
    std::ostringstream out;
    int next = 1;
    bool any = false;
    for (int len : lengths) {
        if (len < 2) continue;
        any = true;
        out << '(';
        for (int i = 0; i < len; ++i) {
            if (i) out << ' ';
            out << next++;
        }
        out << ')';
    }
    return any ? out.str() : "e";
}

std::vector<std::vector<int>> partitions_of(int n) {
    // descending lexicographic order
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            cur.push_back(part);
            self(self, remaining - part, part);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

// Standard Young tableaux stored as (row, col) of each entry 0..n-1.
using Tableau = std::vector<std::pair<int, int>>;

std::vector<Tableau> standard_tableaux(const std::vector<int>& shape) {
    const int n = std::accumulate(shape.begin(), shape.end(), 0);
    std::vector<Tableau> out;
    std::vector<int> filled(shape.size(), 0);
    Tableau cur;
    auto rec = [&](auto&& self, int t) -> void {
        if (t == n) {
            out.push_back(cur);
            return;
        }
        for (size_t r = 0; r < shape.size(); ++r) {
            if (filled[r] >= shape[r]) continue;
            if (r > 0 && filled[r - 1] <= filled[r]) continue;
            cur.emplace_back(static_cast<int>(r), filled[r]);
            ++filled[r];
            self(self, t + 1);
            --filled[r];
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::string partition_name(const std::vector<int>& shape) {
    const int n = std::accumulate(shape.begin(), shape.end(), 0);
    if (shape.size() == 1) return "trivial";
    if (static_cast<int>(shape.size()) == n) return "sign";
    if (n >= 3 && shape.size() == 2 && shape[1] == 1) return "standard";
    if (n >= 4 && shape[0] == 2 && static_cast<int>(shape.size()) == n - 1) return "standard_x_sign";
    std::ostringstream out;
    out << '[';
    for (size_t i = 0; i < shape.size(); ++i) out << (i ? " " : "") << shape[i];
    out << ']';
    return out.str();
}

// Young's orthogonal form for the adjacent transposition swapping k and k+1.
std::vector<double> adjacent_generator(const std::vector<Tableau>& tabs, int k) {
    const int d = static_cast<int>(tabs.size());
    std::map<Tableau, int> index;
    for (int t = 0; t < d; ++t) index[tabs[t]] = t;
    std::vector<double> m(static_cast<size_t>(d) * d, 0.0);
    for (int t = 0; t < d; ++t) {
        const auto [r0, c0] = tabs[t][k];
        const auto [r1, c1] = tabs[t][k + 1];
        if (r0 == r1) {
            m[t * d + t] = 1.0;
        } else if (c0 == c1) {
            m[t * d + t] = -1.0;
        } else {
            const double axial = static_cast<double>((c1 - r1) - (c0 - r0));
            Tableau swapped = tabs[t];
            std::swap(swapped[k], swapped[k + 1]);
            const int s = index.at(swapped);
            m[t * d + t] = 1.0 / axial;
            m[s * d + t] = std::sqrt(1.0 - 1.0 / (axial * axial));
        }
    }
    return m;
}

void matmul(const double* a, const double* b, double* out, int d) {
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int l = 0; l < d; ++l) acc += a[i * d + l] * b[l * d + j];
            out[i * d + j] = acc;
        }
    }
}

}  // namespace

bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q) {
        if (p % q == 0) return false;
    }
    return true;
}

GroupSpec GroupSpec::parse(std::string_view text) {
    std::string s;
    for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s.size() < 2) throw InvalidArgument("unrecognised group '" + std::string(text) + "'");
    GroupSpec spec;
    if (s[0] == 's') {
        spec.kind = GroupKind::symmetric;
    } else if (s[0] == 'z' || s[0] == 'c') {
        spec.kind = GroupKind::cyclic;
    } else {
        throw InvalidArgument("unrecognised group '" + std::string(text) + "'");
    }
    const std::string digits = s.substr(1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw InvalidArgument("unrecognised group '" + std::string(text) + "'");
    }
    spec.param = std::stoi(digits);
    return spec;
}

std::string GroupSpec::name() const {
    return (kind == GroupKind::symmetric ? "s" : "z") + std::to_string(param);
}

std::string Group::element_name(int g) const {
    if (kind == GroupKind::cyclic) return std::to_string(g);
    std::ostringstream out;
    out << '[';
    for (size_t i = 0; i < words[g].size(); ++i) out << (i ? "," : "") << words[g][i] + 1;
    out << ']';
    return out.str();
}

std::string Group::class_name(int c) const {
    if (kind == GroupKind::cyclic) return std::to_string(classes[c].front());
    return cycle_type_name(cycle_type(words[classes[c].front()]));
}

Group make_group(const GroupSpec& spec) {
    Group g;
    g.kind = spec.kind;
    g.param = spec.param;
    if (spec.kind == GroupKind::cyclic) {
        if (!is_prime(spec.param) || spec.param < 3) {
            throw InvalidArgument("cyclic group order must be a prime >= 3, got " + std::to_string(spec.param));
        }
        const int p = spec.param;
        g.order = p;
        g.mul.resize(static_cast<size_t>(p) * p);
        g.inv.resize(p);
        for (int a = 0; a < p; ++a) {
            g.inv[a] = (p - a) % p;
            for (int b = 0; b < p; ++b) g.mul[a * p + b] = (a + b) % p;
        }
        g.class_of.resize(p);
        for (int a = 0; a < p; ++a) {
            g.classes.push_back({a});
            g.class_of[a] = a;
        }
        return g;
    }

    const int n = spec.param;
    if (n < 2 || n > 6) throw InvalidArgument("symmetric group degree must be in [2, 6], got " + std::to_string(n));
    std::vector<int> word(n);
    std::iota(word.begin(), word.end(), 0);
    do {
        g.words.push_back(word);
    } while (std::next_permutation(word.begin(), word.end()));
    g.order = static_cast<int>(g.words.size());
    const int order = g.order;

    g.mul.resize(static_cast<size_t>(order) * order);
    g.inv.resize(order);
    std::vector<int> composed(n);
    for (int a = 0; a < order; ++a) {
        for (int b = 0; b < order; ++b) {
            for (int i = 0; i < n; ++i) composed[i] = g.words[a][g.words[b][i]];
            g.mul[static_cast<size_t>(a) * order + b] = lehmer_rank(composed);
        }
        for (int i = 0; i < n; ++i) composed[g.words[a][i]] = i;
        g.inv[a] = lehmer_rank(composed);
    }

    g.class_of.assign(order, -1);
    for (int x = 0; x < order; ++x) {
        if (g.class_of[x] >= 0) continue;
        const int c = static_cast<int>(g.classes.size());
        g.classes.emplace_back();
        for (int h = 0; h < order; ++h) {
            const int y = g.product(g.product(h, x), g.inv[h]);
            if (g.class_of[y] < 0) {
                g.class_of[y] = c;
                g.classes[c].push_back(y);
            }
        }
        std::sort(g.classes[c].begin(), g.classes[c].end());
    }
    return g;
}

std::vector<Irrep> irreps(const Group& group) {
    if (group.kind != GroupKind::symmetric) {
        throw UnsupportedKind("irreps are only built for symmetric groups; analyse cyclic groups with the spectra DFT tools");
    }
    const int n = group.param;
    const int order = group.order;

    auto shapes = partitions_of(n);
    std::vector<Irrep> out;
    for (const auto& shape : shapes) {
        const auto tabs = standard_tableaux(shape);
        const int d = static_cast<int>(tabs.size());
        Irrep rep;
        rep.dim = d;
        rep.partition = shape;
        rep.name = partition_name(shape);
        rep.matrices.assign(static_cast<size_t>(order) * d * d, 0.0);

        std::vector<std::vector<double>> gens;
        std::vector<int> gen_elem;
        for (int k = 0; k + 1 < n; ++k) {
            gens.push_back(adjacent_generator(tabs, k));
            std::vector<int> w(n);
            std::iota(w.begin(), w.end(), 0);
            std::swap(w[k], w[k + 1]);
            gen_elem.push_back(lehmer_rank(w));
        }

        std::vector<bool> done(order, false);
        double* id = rep.matrices.data();
        for (int i = 0; i < d; ++i) id[i * d + i] = 1.0;
        done[0] = true;
        std::queue<int> frontier;
        frontier.push(0);
        while (!frontier.empty()) {
            const int x = frontier.front();
            frontier.pop();
            for (size_t s = 0; s < gens.size(); ++s) {
                const int y = group.product(x, gen_elem[s]);
                if (done[y]) continue;
                matmul(rep.matrix(x), gens[s].data(), rep.matrices.data() + static_cast<size_t>(y) * d * d, d);
                done[y] = true;
                frontier.push(y);
            }
        }
        out.push_back(std::move(rep));
    }

    std::stable_sort(out.begin(), out.end(), [n](const Irrep& a, const Irrep& b) {
        auto key = [n](const Irrep& r) {
            if (r.partition.size() == 1) return 0;
            if (static_cast<int>(r.partition.size()) == n) return 1;
            return 2;
        };
        const int ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        if (ka < 2) return false;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.partition > b.partition;
    });
    return out;
}

CharacterTable character_table(const std::vector<Irrep>& reps, const Group& group) {
    CharacterTable table;
    const int k = group.num_classes();
    for (int c = 0; c < k; ++c) {
        table.class_sizes.push_back(static_cast<int>(group.classes[c].size()));
        table.class_names.push_back(group.class_name(c));
    }
    for (const auto& rep : reps) {
        table.dims.push_back(rep.dim);
        table.rep_names.push_back(rep.name);
        std::vector<double> row(k, 0.0);
        for (int c = 0; c < k; ++c) {
            double first = 0.0;
            bool have = false;
            for (int g : group.classes[c]) {
                double tr = 0.0;
                for (int i = 0; i < rep.dim; ++i) tr += rep.at(g, i, i);
                if (!have) {
                    first = tr;
                    have = true;
                } else if (std::abs(tr - first) > 1e-9) {
                    throw NumericalError("character of " + rep.name + " not constant on class " + group.class_name(c));
                }
            }
            // Characters of symmetric groups are integers.
            const double rounded = std::round(first);
            row[c] = (std::abs(rounded - first) < 1e-9 ? rounded : first) + 0.0;
        }
        table.chi.push_back(std::move(row));
    }
    return table;
}

BasisVectors basis_vectors(const std::vector<Irrep>& reps, const Group& group) {
    BasisVectors out;
    for (size_t r = 0; r < reps.size(); ++r) {
        const auto& rep = reps[r];
        out.rep_dims.push_back(rep.dim);
        out.rep_offset.push_back(out.size());
        for (int i = 0; i < rep.dim; ++i) {
            for (int j = 0; j < rep.dim; ++j) {
                BasisVector v;
                v.rep = static_cast<int>(r);
                v.row = i;
                v.col = j;
                v.values.resize(group.order);
                for (int g = 0; g < group.order; ++g) v.values[g] = rep.at(g, i, j);
                out.vectors.push_back(std::move(v));
            }
        }
    }
    if (out.size() != group.order) {
        throw NumericalError("basis has " + std::to_string(out.size()) + " vectors for a group of order " +
                             std::to_string(group.order));
    }
    // Cheap orthogonality guard on each vector against the trivial one and itself.
    for (const auto& v : out.vectors) {
        const double expect = static_cast<double>(group.order) / out.rep_dims[v.rep];
        double sq = 0.0, ones = 0.0;
        for (double x : v.values) {
            sq += x * x;
            ones += x;
        }
        if (std::abs(sq - expect) > 1e-9 * expect || (v.rep != 0 && std::abs(ones) > 1e-9 * group.order)) {
            throw NumericalError("basis vector orthogonality check failed");
        }
    }
    return out;
}

NegativityReport negativity_condition(const CharacterTable& table) {
    NegativityReport out;
    const size_t k = table.class_sizes.size();
    out.sums.assign(k, 0.0);
    out.all_negative = true;
    for (size_t c = 1; c < k; ++c) {
        double s = 0.0;
        for (size_t r = 1; r < table.chi.size(); ++r) s += std::pow(table.dims[r], 1.5) * table.chi[r][c];
        out.sums[c] = s;
        if (!(s < 0.0)) {
            out.all_negative = false;
            out.offending.push_back(static_cast<int>(c));
        }
    }
    return out;
}

}  // namespace maxmargin
