#pragma once

#include "otm/thermo.hpp"

namespace otm {

// -------------------------------------------- characteristic functions ----
//
// Fourier transforms of the conditional work distributions.  The detailed
// symmetry relation states C_f(u) / C_b(-u + i beta) = Z~_tau / Z~_0 for
// every u; the backward value at the shifted argument is what the
// interferometry module estimates on circuits.

struct CharacteristicValue {
    Complex u_arg;  // the argument actually evaluated (possibly shifted)
    Complex value;
};

// Spectral sums over the atoms:
//   forward   sum_i p_i e^{+i u_arg W~_i}
//   backward  sum_i q_i e^{-i u_arg W~_i}
// Complex u_arg is permitted (that is how the i*beta shift enters).
// Throws std::invalid_argument when the distribution is not normalized.
CharacteristicValue cf_spectral(const WorkDistribution& dist, Complex u_arg,
                                Direction direction);

enum class TraceForm { forward, backward_shifted };

// Trace forms, equivalent to the spectral sums within roundoff:
//   forward           tr[U^dag e^{i u G_tau} U e^{-i u G0} rho~_0]
//   backward_shifted  tr[U e^{-i u G0} e^{-beta G0} U^dag e^{i u G_tau}
//                        e^{beta G_tau} rho~_tau]
// (the latter evaluates C_b at -u + i beta).  In default-basis mode G0 is
// the H0 matrix itself.  Matrix exponentials only ever take a real angle u
// or a real weight beta; the shift never exponentiates a complex angle.
CharacteristicValue cf_trace(const SystemSpec& spec, double u, TraceForm which);

// C_f(u) / C_b(-u + i beta); equals Z~_tau/Z~_0 independent of u.
// Throws DivisionNearZero when |C_b| <= 1e-14.
Complex symmetry_ratio(const SystemSpec& spec, double u);

}  // namespace otm
