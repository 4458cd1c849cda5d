#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace maxmargin {

enum class GroupKind { cyclic, symmetric };

struct GroupSpec {
    GroupKind kind = GroupKind::symmetric;
    int param = 3;  // p for cyclic, n for symmetric

    // Accepts "s3".."s6" and "z<p>" / "c<p>".
    static GroupSpec parse(std::string_view text);
    std::string name() const;
};

struct Group {
    GroupKind kind = GroupKind::cyclic;
    int param = 0;
    int order = 0;
    std::vector<int> mul;                  // order x order, row-major
    std::vector<int> inv;
    std::vector<std::vector<int>> classes; // class 0 is {identity}
    std::vector<int> class_of;
    std::vector<std::vector<int>> words;   // one-line permutation (0-based), symmetric only

    int product(int a, int b) const { return mul[static_cast<size_t>(a) * order + b]; }
    int num_classes() const { return static_cast<int>(classes.size()); }
    GroupSpec spec() const { return {kind, param}; }
    std::string element_name(int g) const;
    std::string class_name(int c) const;
};

Group make_group(const GroupSpec& spec);

bool is_prime(int p);

struct Irrep {
    int dim = 0;
    std::vector<int> partition;
    std::string name;
    std::vector<double> matrices;  // order blocks of dim x dim, row-major

    double at(int g, int i, int j) const {
        return matrices[(static_cast<size_t>(g) * dim + i) * dim + j];
    }
    const double* matrix(int g) const { return matrices.data() + static_cast<size_t>(g) * dim * dim; }
};

// Real orthogonal irreps of S_n: trivial first, sign second, then by
// dimension ascending with ties in descending lexicographic partition order.
std::vector<Irrep> irreps(const Group& group);

struct CharacterTable {
    std::vector<std::vector<double>> chi;  // chi[rep][class]
    std::vector<int> class_sizes;
    std::vector<int> dims;
    std::vector<std::string> rep_names;
    std::vector<std::string> class_names;

    int num_reps() const { return static_cast<int>(chi.size()); }
};

CharacterTable character_table(const std::vector<Irrep>& reps, const Group& group);

struct BasisVector {
    int rep = 0;
    int row = 0;
    int col = 0;
    std::vector<double> values;  // values[g] = R(g)(row, col)
};

struct BasisVectors {
    std::vector<BasisVector> vectors;  // rep-major, then row-major position
    std::vector<int> rep_dims;
    std::vector<int> rep_offset;       // first vector index of each rep

    int size() const { return static_cast<int>(vectors.size()); }
};

BasisVectors basis_vectors(const std::vector<Irrep>& reps, const Group& group);

struct NegativityReport {
    std::vector<double> sums;   // indexed by class; entry 0 unused (0.0)
    std::vector<int> offending; // non-trivial classes whose sum is >= 0
    bool all_negative = false;
};

NegativityReport negativity_condition(const CharacterTable& table);

}  // namespace maxmargin
