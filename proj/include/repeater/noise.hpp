#pragma once

#include <array>
#include <limits>

namespace repeater {

// Pauli-twirled concatenation of amplitude damping and dephasing. m1_star and
// m2_star are the discrete analogues of the T1 and T2 times; m1_star may be
// infinite (pure dephasing).
struct PauliChannelParams {
    double m1_star = std::numeric_limits<double>::infinity();
    double m2_star = 5.0;

    bool valid() const { return m1_star >= 1.0 && m2_star >= 1.0; }
};

struct PauliProbs {
    double p_i, p_x, p_y, p_z;
};

// Bell-basis populations (Phi+, Phi-, Psi+, Psi-) of a two-qubit state.
// Index order matches the (phase, parity) bit labels 00, 01, 10, 11 so that
// entanglement swapping composes populations by XOR of labels.
struct BellCoefficients {
    std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};

    double fidelity() const { return q[0]; }
    double& operator[](int k) { return q[k]; }
    double operator[](int k) const { return q[k]; }
};

PauliProbs pauli_probs(const PauliChannelParams& params);

// Populations of an initially perfect Bell pair after m rounds of the channel
// on both qubits.
BellCoefficients bell_coefficients(int age, const PauliChannelParams& params);

// Dephasing-only example map: f(m) = (1 + exp(-2m / (5 m*))) / 2.
double fidelity_of_age(int age, int m_star);

// Inverse of fidelity_of_age, rounded up to an integer age. Domain
// (f(m*), 1]; f = 1 maps to age 0.
int age_of_fidelity(double fidelity, int m_star);

// Bell-population vector of the post-swap state: XOR convolution of the two
// parents' populations.
BellCoefficients swap_bell_diagonal(const BellCoefficients& a, const BellCoefficients& b);

// Largest number of elementary links n-1 such that (n-1) * t_star stays
// within the age budget imposed by a minimum end-to-end fidelity.
int max_chain_for_fidelity(double f_min, int t_star, int m_star);

}  // namespace repeater
