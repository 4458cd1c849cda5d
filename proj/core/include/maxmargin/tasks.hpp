#pragma once

#include "maxmargin/group.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace maxmargin {

enum class TaskKind { modular, parity, group };

struct TaskSpec {
    TaskKind kind = TaskKind::modular;
    int p = 0;                 // modular
    int n = 0;                 // parity: input bits
    int k = 0;                 // parity: support size
    std::vector<int> support;  // parity: 0-based indices, sorted
    GroupSpec group;           // group

    static TaskSpec modular(int p);
    static TaskSpec parity(int n, int k, std::vector<int> support = {});
    static TaskSpec group_task(GroupSpec g);

    int num_classes() const;
    int input_dim() const;  // |G| (one-hot size) or n
    std::string describe() const;
    void validate() const;
};

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& text);

struct Dataset {
    TaskSpec task;
    std::shared_ptr<const Group> group;  // Z_p for modular, G for group tasks, null for parity
    std::vector<int> a, b;               // group-style inputs
    std::vector<double> x;               // parity inputs, size() x n, entries +-1
    std::vector<int> labels;
    int num_classes = 0;

    int size() const { return static_cast<int>(labels.size()); }
    bool is_parity() const { return task.kind == TaskKind::parity; }
    const double* row(int i) const { return x.data() + static_cast<size_t>(i) * task.n; }
};

Dataset build_dataset(const TaskSpec& spec);

// One row per point: input tokens then label.
void write_csv(const Dataset& data, std::ostream& out);

}  // namespace maxmargin
