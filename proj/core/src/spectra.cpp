#include "maxmargin/spectra.hpp"

#include "maxmargin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace maxmargin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename T>
Spectrum dft_impl(std::span<const T> u, double sign) {
    const size_t p = u.size();
    Spectrum out(p);
    for (size_t j = 0; j < p; ++j) {
        std::complex<double> acc = 0.0;
        for (size_t k = 0; k < p; ++k) {
            // reduce jk mod p first so the angle stays small
            const double angle = sign * kTwoPi * static_cast<double>((j * k) % p) / static_cast<double>(p);
            acc += std::complex<double>(u[k]) * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[j] = acc;
    }
    return out;
}

void add_power(std::vector<double>& acc, std::span<const double> u, bool fold) {
    const auto pw = power_spectrum(u, fold);
    if (acc.empty()) acc.assign(pw.size(), 0.0);
    for (size_t i = 0; i < pw.size(); ++i) acc[i] += pw[i];
}

SpectrumReport finish(SpectrumReport rep, int first_required) {
    rep.counts.assign(rep.labels.size(), 0);
    double sum = 0.0;
    for (const auto& ns : rep.neurons) {
        if (!ns.active || ns.dominant < 0) continue;
        const auto slot = std::find(rep.labels.begin(), rep.labels.end(), ns.dominant) - rep.labels.begin();
        ++rep.counts[slot];
        ++rep.active_neurons;
        sum += ns.max_power;
    }
    rep.mean_max_power = rep.active_neurons ? sum / rep.active_neurons : 0.0;
    rep.all_present = rep.active_neurons > 0;
    for (size_t s = 0; s < rep.labels.size(); ++s) {
        if (rep.labels[s] >= first_required && rep.counts[s] == 0) rep.all_present = false;
    }
    return rep;
}

double max_neuron_norm(const Network& net) {
    double best = 0.0;
    for (const auto& nr : net.neurons) best = std::max(best, std::sqrt(nr.norm_sq()));
    return best;
}

}  // namespace

Spectrum dft(std::span<const double> u) {
    if (u.size() < 2) throw InvalidArgument("dft needs length >= 2");
    return dft_impl(u, -1.0);
}

Spectrum dft(std::span<const std::complex<double>> u) {
    if (u.size() < 2) throw InvalidArgument("dft needs length >= 2");
    return dft_impl(u, -1.0);
}

Spectrum inverse_dft(std::span<const std::complex<double>> uhat) {
    if (uhat.size() < 2) throw InvalidArgument("dft needs length >= 2");
    Spectrum out = dft_impl(uhat, 1.0);
    for (auto& x : out) x /= static_cast<double>(uhat.size());
    return out;
}

std::vector<double> power_spectrum(std::span<const double> u, bool fold) {
    const auto uhat = dft(u);
    const int p = static_cast<int>(u.size());
    if (!fold) {
        std::vector<double> out(p - 1);
        for (int j = 1; j < p; ++j) out[j - 1] = std::norm(uhat[j]);
        return out;
    }
    std::vector<double> out(p / 2, 0.0);
    for (int f = 1; f <= p / 2; ++f) {
        out[f - 1] = std::norm(uhat[f]);
        if (p - f != f) out[f - 1] += std::norm(uhat[p - f]);
    }
    return out;
}

std::optional<double> max_normalized_power(std::span<const double> u, bool fold) {
    const auto pw = power_spectrum(u, fold);
    double total = 0.0, best = 0.0;
    for (double x : pw) {
        total += x;
        best = std::max(best, x);
    }
    double scale = 0.0;
    for (double x : u) scale += x * x;
    if (total <= 1e-24 * std::max(1.0, scale * u.size())) return std::nullopt;
    return best / total;
}

std::vector<double> rep_power(std::span<const double> u, const BasisVectors& basis) {
    if (basis.vectors.empty() || u.size() != basis.vectors.front().values.size()) {
        throw InvalidArgument("rep_power: vector length does not match the group order");
    }
    std::vector<double> out(basis.rep_dims.size(), 0.0);
    double total = 0.0;
    for (double x : u) total += x * x;
    if (total == 0.0) return out;
    const double order = static_cast<double>(u.size());
    for (const auto& bv : basis.vectors) {
        double dot = 0.0;
        for (size_t g = 0; g < u.size(); ++g) dot += u[g] * bv.values[g];
        const double norm_sq = order / basis.rep_dims[bv.rep];
        out[bv.rep] += dot * dot / norm_sq;
    }
    for (double& x : out) x /= total;
    return out;
}

SpectrumReport census(const Network& net, const FourierAnalysis& analysis) {
    if (net.is_parity()) throw UnsupportedKind("Fourier census needs a group-task network");
    const int p = analysis.p > 0 ? analysis.p : net.task.input_dim();
    if (net.task.input_dim() != p) throw InvalidArgument("census: p does not match the network");
    SpectrumReport rep;
    rep.fourier = true;
    const int slots = analysis.fold ? p / 2 : p - 1;
    for (int s = 0; s < slots; ++s) {
        rep.labels.push_back(s + 1);
        rep.label_names.push_back(std::to_string(s + 1));
    }
    const double thresh = 1e-8 * max_neuron_norm(net);
    for (int i = 0; i < net.width(); ++i) {
        const auto& nr = net.neurons[i];
        NeuronSpectrum ns;
        ns.index = i;
        ns.norm = std::sqrt(nr.norm_sq());
        ns.active = ns.norm > thresh;
        ns.max_power_u = max_normalized_power(nr.u, analysis.fold);
        std::vector<double> acc;
        add_power(acc, nr.u, analysis.fold);
        add_power(acc, nr.v, analysis.fold);
        add_power(acc, nr.w, analysis.fold);
        double total = 0.0;
        for (double x : acc) total += x;
        if (total > 0.0) {
            for (double& x : acc) x /= total;
            const auto it = std::max_element(acc.begin(), acc.end());
            ns.max_power = *it;
            ns.dominant = static_cast<int>(it - acc.begin()) + 1;
        }
        ns.power = std::move(acc);
        rep.neurons.push_back(std::move(ns));
    }
    return finish(std::move(rep), 1);
}

SpectrumReport census(const Network& net, const RepAnalysis& analysis) {
    if (net.is_parity()) throw UnsupportedKind("representation census needs a group-task network");
    if (!analysis.basis) throw InvalidArgument("census: no basis supplied");
    const auto& basis = *analysis.basis;
    SpectrumReport rep;
    rep.fourier = false;
    for (size_t r = 0; r < basis.rep_dims.size(); ++r) {
        rep.labels.push_back(static_cast<int>(r));
        rep.label_names.push_back(r < analysis.rep_names.size() ? analysis.rep_names[r] : std::to_string(r));
    }
    const double thresh = 1e-8 * max_neuron_norm(net);
    for (int i = 0; i < net.width(); ++i) {
        const auto& nr = net.neurons[i];
        NeuronSpectrum ns;
        ns.index = i;
        ns.norm = std::sqrt(nr.norm_sq());
        ns.active = ns.norm > thresh;
        std::vector<double> acc(basis.rep_dims.size(), 0.0);
        const std::vector<double>* parts[] = {&nr.u, &nr.v, &nr.w};
        double total = 0.0;
        for (const auto* vec : parts) {
            double sq = 0.0;
            for (double x : *vec) sq += x * x;
            const auto frac = rep_power(*vec, basis);
            for (size_t r = 0; r < acc.size(); ++r) acc[r] += frac[r] * sq;
            total += sq;
        }
        {
            const auto frac_u = rep_power(nr.u, basis);
            double su = 0.0;
            for (double x : nr.u) su += x * x;
            if (su > 0.0) ns.max_power_u = *std::max_element(frac_u.begin(), frac_u.end());
        }
        if (total > 0.0) {
            for (double& x : acc) x /= total;
            const auto it = std::max_element(acc.begin(), acc.end());
            ns.max_power = *it;
            ns.dominant = static_cast<int>(it - acc.begin());
        }
        ns.power = std::move(acc);
        rep.neurons.push_back(std::move(ns));
    }
    return finish(std::move(rep), 1);
}

PresenceReport multidim_presence(const Network& net, int p) {
    if (p > 31) throw InvalidArgument("multidim_presence is limited to p <= 31");
    if (net.is_parity() || net.task.input_dim() != p || net.num_classes() != p) {
        throw InvalidArgument("multidim_presence needs a network on Z_p");
    }
    const Dataset data = build_dataset(TaskSpec::modular(p));
    const auto logits = forward_all(net, data);
    const auto margin = dataset_margin(net, data);

    PresenceReport rep;
    rep.p = p;
    rep.values.assign(p, 0.0);
    // fhat(j, j, -j) = sum_{a,b,c} f(a,b,c) exp(-2 pi i j (a + b - c) / p)
    std::vector<double> by_offset(p, 0.0);
    for (int i = 0; i < data.size(); ++i) {
        for (int c = 0; c < p; ++c) {
            const int s = ((data.a[i] + data.b[i] - c) % p + p) % p;
            by_offset[s] += logits[static_cast<size_t>(i) * p + c];
        }
    }
    const auto hat = dft(by_offset);
    for (int j = 1; j < p; ++j) rep.values[j] = hat[j];
    rep.threshold = 1e-6 * p * p * std::abs(margin.min_margin);
    rep.present.assign((p - 1) / 2, false);
    for (int f = 1; f <= (p - 1) / 2; ++f) {
        rep.present[f - 1] = std::abs(rep.values[f]) > rep.threshold;
        if (rep.present[f - 1]) ++rep.count;
    }
    rep.all_present = rep.count == (p - 1) / 2;
    return rep;
}

}  // namespace maxmargin
