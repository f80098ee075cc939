#include "repeater/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace repeater {

PauliProbs pauli_probs(const PauliChannelParams& params) {
    if (!params.valid()) throw std::invalid_argument("invalid Pauli channel parameters");
    const double e1 = std::exp(-1.0 / params.m1_star);
    const double e2 = std::exp(-1.0 / params.m2_star);
    const double px = (1.0 - e1) / 4.0;
    PauliProbs p;
    p.p_i = (1.0 + e2) / 2.0 - px;
    p.p_x = px;
    p.p_y = px;
    p.p_z = (1.0 - e2) / 2.0 - px;
    return p;
}

BellCoefficients bell_coefficients(int age, const PauliChannelParams& params) {
    if (age < 0) throw std::invalid_argument("age must be non-negative");
    if (!params.valid()) throw std::invalid_argument("invalid Pauli channel parameters");
    const double a1 = std::exp(-2.0 * age / params.m1_star);
    const double a2 = std::exp(-2.0 * age / params.m2_star);
    BellCoefficients q;
    q[0] = 0.25 * (1.0 + a1 + 2.0 * a2);  // Phi+
    q[1] = 0.25 * (1.0 + a1 - 2.0 * a2);  // Phi-
    q[2] = 0.25 * (1.0 - a1);             // Psi+
    q[3] = 0.25 * (1.0 - a1);             // Psi-
    return q;
}

double fidelity_of_age(int age, int m_star) {
    if (age < 0) throw std::invalid_argument("age must be non-negative");
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    return 0.5 * (1.0 + std::exp(-2.0 * age / (5.0 * m_star)));
}

int age_of_fidelity(double fidelity, int m_star) {
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    if (fidelity >= 1.0) {
        if (fidelity > 1.0) throw std::domain_error("fidelity above 1");
        return 0;
    }
    if (fidelity <= fidelity_of_age(m_star, m_star))
        throw std::domain_error("fidelity at or below f(m_star)");
    const double raw = -2.5 * m_star * std::log(2.0 * fidelity - 1.0);
    // absorb float noise so that the round trip over integer ages is exact
    return static_cast<int>(std::ceil(raw - 1e-9));
}

BellCoefficients swap_bell_diagonal(const BellCoefficients& a, const BellCoefficients& b) {
    BellCoefficients out;
    out.q = {0.0, 0.0, 0.0, 0.0};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) out[x ^ y] += a[x] * b[y];
    return out;
}

int max_chain_for_fidelity(double f_min, int t_star, int m_star) {
    if (t_star < 1) throw std::invalid_argument("t_star must be >= 1");
    const int budget = age_of_fidelity(f_min, m_star);  // throws on domain violations
    return budget / t_star;
}

}  // namespace repeater
