#pragma once

#include "maxmargin/group.hpp"
#include "maxmargin/network.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace maxmargin {

using Spectrum = std::vector<std::complex<double>>;

// uhat(j) = sum_k u(k) exp(-2 pi i j k / p), direct O(p^2).
Spectrum dft(std::span<const double> u);
Spectrum dft(std::span<const std::complex<double>> u);
Spectrum inverse_dft(std::span<const std::complex<double>> uhat);

// Folded: entry f-1 holds |uhat(f)|^2 + |uhat(p-f)|^2 for f = 1..floor(p/2)
// (a self-conjugate p/2 bin counts once). Unfolded: entry j-1 holds |uhat(j)|^2
// for j = 1..p-1. DC is excluded either way. Values are raw, not normalised.
std::vector<double> power_spectrum(std::span<const double> u, bool fold = true);

// Largest normalised entry of power_spectrum; empty when there is no non-DC power.
std::optional<double> max_normalized_power(std::span<const double> u, bool fold = true);

// Fraction of ||u||^2 in each irrep's basis span (trivial rep included).
std::vector<double> rep_power(std::span<const double> u, const BasisVectors& basis);

struct FourierAnalysis {
    int p = 0;
    bool fold = true;
};

struct RepAnalysis {
    const BasisVectors* basis = nullptr;
    std::vector<std::string> rep_names;
};

struct NeuronSpectrum {
    int index = 0;
    double norm = 0.0;
    bool active = false;         // norm above the nonzero threshold
    std::vector<double> power;   // normalised, combined over u, v, w
    double max_power = 0.0;
    int dominant = -1;           // frequency (1-based) or rep index
    std::optional<double> max_power_u;
};

struct SpectrumReport {
    bool fourier = true;
    std::vector<int> labels;              // frequency or rep index per power slot
    std::vector<std::string> label_names;
    std::vector<NeuronSpectrum> neurons;
    std::vector<int> counts;              // per power slot, over active neurons
    int active_neurons = 0;
    double mean_max_power = 0.0;          // over active neurons
    bool all_present = false;             // every frequency / non-trivial rep dominates some neuron
};

SpectrumReport census(const Network& net, const FourierAnalysis& analysis);
SpectrumReport census(const Network& net, const RepAnalysis& analysis);

struct PresenceReport {
    int p = 0;
    std::vector<std::complex<double>> values;  // fhat(j, j, -j), index j = 0..p-1 (entry 0 unused)
    double threshold = 0.0;
    std::vector<bool> present;                 // per folded frequency 1..(p-1)/2, entry f-1
    int count = 0;
    bool all_present = false;
};

// Three-dimensional DFT of the logit table f(a, b, c) on the diagonal (j, j, -j).
PresenceReport multidim_presence(const Network& net, int p);

}  // namespace maxmargin
