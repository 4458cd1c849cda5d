#pragma once

#include "maxmargin/network.hpp"
#include "maxmargin/tasks.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace maxmargin {

struct TrainConfig {
    TaskSpec task = TaskSpec::modular(13);
    int width = 100;
    Activation activation = Activation::square();
    double reg_lambda = 1e-4;
    double reg_exp = 0.0;          // 0 selects the network homogeneity
    double lr = 0.05;
    std::vector<int> double_at;    // strictly increasing step indices
    int steps = 20000;
    int batch = 0;                 // 0 = full batch
    std::uint64_t seed = 0;
    double init_scale = -1.0;      // < 0 selects 1/sqrt(fan-in) per layer
    int eval_every = 500;

    double resolved_reg_exp() const { return reg_exp > 0.0 ? reg_exp : activation.homogeneity(); }
    double lr_at(int step) const;
    void validate() const;
};

// Named settings: "cyclic13", "cyclic71", "cyclic71-relu", "parity10-4", "s3", "s4", "s5".
TrainConfig preset(const std::string& name);
std::vector<std::string> preset_names();

Network init_network(const TrainConfig& config);

struct LossGrad {
    double loss = 0.0;       // data loss + reg
    double data_loss = 0.0;  // mean cross-entropy
    double reg = 0.0;        // lambda * sum ||omega_i||^r
    Network grad;            // same shape as the input network
};

// Empty batch means the whole dataset.
LossGrad loss_and_grad(const Network& net, const Dataset& data, double reg_lambda, double reg_exp,
                       const std::vector<int>& batch = {});

struct TraceRecord {
    int step = 0;
    double loss = 0.0;
    double reg = 0.0;
    double norm = 0.0;
    double normalized_margin = 0.0;
    double accuracy = 0.0;
    std::optional<double> mean_max_power;
};

struct TrainTrace {
    std::vector<TraceRecord> records;
};

enum class TrainStatus { ok, diverged, degenerate };

struct TrainResult {
    Network net;
    TrainTrace trace;
    TrainStatus status = TrainStatus::ok;
    std::string message;
};

TrainResult train(const TrainConfig& config);

std::string to_string(TrainStatus status);
void write_trace_csv(const TrainTrace& trace, std::ostream& out);

}  // namespace maxmargin
