#pragma once

#include "maxmargin/tasks.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxmargin {

struct Activation {
    enum class Kind { power, relu };
    Kind kind = Kind::power;
    int degree = 2;

    static Activation square() { return {Kind::power, 2}; }
    static Activation power(int k) { return {Kind::power, k}; }
    static Activation relu() { return {Kind::relu, 1}; }

    // "square", "relu", "power:<k>" (also "power<k>").
    static Activation parse(const std::string& text);
    std::string name() const;

    // Homogeneity of the whole network: degree + 1. ReLU reports 2.
    int homogeneity() const { return kind == Kind::relu ? 2 : degree + 1; }

    double apply(double z) const;
    double derivative(double z) const;

    bool operator==(const Activation&) const = default;
};

// Group-task neurons use u, v, w (each length |G|); parity neurons use u
// (length n) and w (length 2) and leave v empty.
struct Neuron {
    std::vector<double> u, v, w;

    double norm_sq() const;
};

struct Network {
    TaskSpec task;
    Activation activation = Activation::square();
    int nu = 3;
    std::vector<Neuron> neurons;
    std::string created_by;
    std::optional<std::uint64_t> seed;

    int width() const { return static_cast<int>(neurons.size()); }
    int num_classes() const { return task.num_classes(); }
    bool is_parity() const { return task.kind == TaskKind::parity; }

    // Throws InvalidArgument when vector lengths or nu do not fit the task.
    void validate() const;
    Network scaled(double factor) const;
};

Network make_network(const TaskSpec& task, Activation act, std::vector<Neuron> neurons, std::string created_by);

// Logits for one group-style input (a, b).
std::vector<double> forward(const Network& net, int a, int b);
// Logits for one parity input.
std::vector<double> forward(const Network& net, std::span<const double> x);
// Logits for dataset point i.
std::vector<double> forward(const Network& net, const Dataset& data, int i);
// All logits, row-major size() x num_classes.
std::vector<double> forward_all(const Network& net, const Dataset& data);

double point_margin(std::span<const double> logits, int y);

// tau has one entry per class; tau[y] must be 0 and the rest sum to 1.
double weighted_point_margin(std::span<const double> logits, int y, std::span<const double> tau);
std::vector<double> uniform_tau(int num_classes, int y);

double lab_norm(const Network& net, double a, double b);

struct MarginReport {
    std::vector<double> margins;
    double min_margin = 0.0;
    std::vector<int> argmin;
    double norm_a = 2.0, norm_b = 3.0;
    double norm = 0.0;
    int nu = 3;
    double normalized_margin = 0.0;
    double accuracy = 0.0;
    // max over points of (max - min) across incorrect logits
    double incorrect_spread = 0.0;
};

struct MarginOptions {
    double norm_a = 2.0;
    double norm_b = 0.0;       // 0 selects nu
    double argmin_tol = 1e-9;  // relative to max(1, |h|)
};

MarginReport dataset_margin(const Network& net, const Dataset& data, const MarginOptions& opts = {});

}  // namespace maxmargin
