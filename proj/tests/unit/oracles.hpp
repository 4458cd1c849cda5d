#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library, so a bug there cannot hide behind a matching bug here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

inline double cyclic_gamma(int p) { return std::sqrt(2.0 / 27.0) / (std::sqrt(double(p)) * (p - 1)); }

inline double parity_gamma(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * std::sqrt(2.0 * std::pow(k + 1.0, -(k + 1.0)));
}

inline double group_gamma(int order, const std::vector<int>& nontrivial_dims) {
    double s = 0.0;
    for (int d : nontrivial_dims) s += std::pow(d, 2.5);
    return 2.0 / (3.0 * std::sqrt(3.0 * order)) / s;
}

using Perm = std::vector<int>;

inline std::vector<Perm> all_perms(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline Perm compose(const Perm& g, const Perm& h) {
    Perm r(g.size());
    for (size_t i = 0; i < g.size(); ++i) r[i] = g[h[i]];
    return r;
}

inline Perm inverse(const Perm& g) {
    Perm r(g.size());
    for (size_t i = 0; i < g.size(); ++i) r[g[i]] = static_cast<int>(i);
    return r;
}

// Conjugacy class sizes of S_n by brute-force orbits, in first-seen order.
inline std::vector<int> class_sizes(int n) {
    const auto perms = all_perms(n);
    std::set<Perm> seen;
    std::vector<int> sizes;
    for (const auto& x : perms) {
        if (seen.count(x)) continue;
        std::set<Perm> orbit;
        for (const auto& h : perms) orbit.insert(compose(compose(h, x), inverse(h)));
        sizes.push_back(static_cast<int>(orbit.size()));
        seen.insert(orbit.begin(), orbit.end());
    }
    return sizes;
}

inline int partition_count(int n) {
    std::vector<int> ways(n + 1, 0);
    ways[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int s = part; s <= n; ++s) ways[s] += ways[s - part];
    return ways[n];
}

// Direct E_{a,b}[psi'] for a quadratic neuron on Z_p with uniform class weights.
inline double direct_cyclic_weighted_margin(const std::vector<double>& u, const std::vector<double>& v,
                                            const std::vector<double>& w) {
    const int p = static_cast<int>(u.size());
    double total = 0.0;
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
            const int c = (a + b) % p;
            const double h = (u[a] + v[b]) * (u[a] + v[b]);
            double others = 0.0;
            for (int j = 0; j < p; ++j)
                if (j != c) others += w[j];
            total += h * (w[c] - others / (p - 1));
        }
    }
    return total / (double(p) * p);
}

inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& u) {
    const int p = static_cast<int>(u.size());
    std::vector<std::complex<double>> out(p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) out[j] += u[k] * std::polar(1.0, -2.0 * M_PI * j * k / p);
    return out;
}

}  // namespace oracle
