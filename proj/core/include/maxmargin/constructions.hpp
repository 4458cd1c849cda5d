#pragma once

#include "maxmargin/group.hpp"
#include "maxmargin/network.hpp"

#include <functional>
#include <vector>

namespace maxmargin {

struct PhaseTriple {
    double theta_u = 0.0;
    double theta_v = 0.0;
    double theta_w = 0.0;
};

// The eight phase offsets used per frequency, listed as four (+, -) pairs.
const std::vector<PhaseTriple>& cyclic_phase_triples();

// 4(p-1) neurons, 8 per frequency 1..(p-1)/2, scaled to unit L_{2,3} norm.
Network build_cyclic(int p);

// The 8 neurons of build_cyclic(p) that use one frequency, with the same scale.
Network build_cyclic_frequency(int p, int frequency);

// 2^{k-1} neurons over sign patterns with the first sign fixed to +1.
Network build_parity(int n, int k, std::vector<int> support = {});

// Basis-vector coefficients of one weight vector restricted to one irrep.
struct CoeffMatrices {
    int rep = 0;
    int dim = 0;
    std::vector<double> alpha, beta, gamma;  // dim x dim, row-major, for u, v, w
};

// Coefficients of (u, v, w) in every irrep, by orthogonal projection onto the basis.
std::vector<CoeffMatrices> coefficients_of(const Neuron& neuron, const BasisVectors& basis, int order);

// Inverse of coefficients_of: u = sum alpha_ij rho_ij, and so on.
Neuron neuron_from_coefficients(const std::vector<CoeffMatrices>& coeffs, const BasisVectors& basis, int order);

// Width 2 * sum of d^3 over non-trivial irreps. Throws InvalidArgument
// naming the offending classes if the negativity condition fails.
Network build_group_trace(const Group& group, const std::vector<Irrep>& reps);

// 2p^2 one-hot neurons computing the indicator of target(a, b).
// An empty target selects (a + b) mod p.
Network build_memorization(int p, std::function<int(int, int)> target = {});

}  // namespace maxmargin
