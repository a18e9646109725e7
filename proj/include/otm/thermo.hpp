#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "otm/linalg.hpp"

namespace otm {

// ---------------------------------------------------------- problem spec ----

// Full physical problem instance: initial and final Hamiltonians, the
// unitary connecting them, the inverse temperature, and optionally the
// initial measurement basis {|psi_i>}.  Without an explicit basis the H0
// eigenbasis from herm_eig is used; its degeneracy tie-break makes that
// choice deterministic.
struct SystemSpec {
    Matrix h0;      // energy units
    Matrix h_tau;   // energy units
    Matrix u_evol;  // dimensionless unitary
    double beta = 1.0;
    std::optional<Matrix> initial_basis;  // columns |psi_i>, pairwise orthonormal
};

// Structural validation: h0/h_tau Hermitian within 1e-9 (NotHermitian),
// equal dimensions everywhere (DimensionMismatch), u_evol unitary within
// 1e-9 and beta > 0 and basis orthonormal within 1e-9 (invalid_argument).
void validate_spec(const SystemSpec& spec);

// Bundled two-qubit demonstration instance: uniform longitudinal field
// H0 = w (Z0 + Z1) quenched to an Ising coupling H_tau = J X0 X1 under a
// global Y rotation U = exp(-i (W t / 2)(Y0 + Y1)), with w = 2, W = 3,
// J = 1, t = pi/4, beta = 0.5.  Known name in configs: "paper-2qubit".
SystemSpec preset_two_qubit_quench();

// --------------------------------------------------- measurement frame ----

enum class Endpoint { initial, final_state };
enum class Direction { forward, backward };

// Everything the conditional objects share: the measurement basis, both
// conditional energy lists, and the conditional Hamiltonians.
//
//   e_initial_i = <psi_i| H0 |psi_i>,  e_final_i = <psi_i| U^dag H_tau U |psi_i>
//   g0    = sum_i e_initial_i |psi_i><psi_i|     (the h0 matrix itself in
//           default mode, where the basis diagonalizes H0 exactly)
//   g_tau = sum_i e_final_i U|psi_i><psi_i|U^dag
//
// Each U|psi_i> is an exact eigenvector of g_tau by construction (pointer
// state): measuring g_tau leaves the evolved basis states untouched.
struct ConditionalFrame {
    Matrix basis;          // d columns |psi_i>
    RealVector e_initial;  // conditional initial energies
    RealVector e_final;    // conditional final energies
    Matrix g0;
    Matrix g_tau;
    bool default_basis = true;
};

ConditionalFrame conditional_frame(const SystemSpec& spec);

// ----------------------------------------------------- thermal states ----

// (exp(-beta h)/Z, Z).  beta = 0 is the infinite-temperature limit (I/d, d);
// beta < 0 is rejected.
std::pair<Matrix, double> gibbs_state(const Matrix& h, double beta);

// G0 or G_tau from the frame above.
Matrix conditional_hamiltonian(const SystemSpec& spec, Endpoint endpoint);

// (exp(-beta G)/Z~, Z~) with Z~ = sum_i exp(-beta E_i) over the conditional
// energies; commutes with G by construction.
std::pair<Matrix, double> conditional_thermal_state(const SystemSpec& spec,
                                                    Endpoint endpoint);

// ------------------------------------------------- work distributions ----

struct WorkAtom {
    int index = 0;       // trajectory index i (basis order)
    double work = 0.0;   // W~_i = e_final_i - e_initial_i
    double probability = 0.0;
};

// Atomic measure over trajectories.  Forward and backward distributions
// built from the same spec share work values atom-by-atom; only the weights
// differ (Boltzmann in e_initial forward, in e_final backward).
struct WorkDistribution {
    Direction direction = Direction::forward;
    std::vector<WorkAtom> atoms;
};

WorkDistribution work_distribution(const SystemSpec& spec, Direction direction);

// Joint two-point-measurement distribution p(i,j) = e^{-beta E_i}/Z0 *
// |<E'_j|U|E_i>|^2; the comparison baseline.  Default basis only
// (BasisNotSupported otherwise).
struct TtmAtom {
    int initial_index = 0;
    int final_index = 0;
    double e_initial = 0.0;  // E_i
    double e_final = 0.0;    // E'_j
    double probability = 0.0;
};

struct TtmDistribution {
    std::vector<TtmAtom> atoms;  // ordered i-major, j-minor
};

TtmDistribution ttm_distribution(const SystemSpec& spec);

// ----------------------------------------------------------- entropies ----

// -sum r ln r over eigenvalues above the 1e-14 support cutoff.
double von_neumann_entropy(const Matrix& rho);

// tr rho (ln rho - ln sigma) via eigendecompositions; >= -1e-10 up to
// roundoff.  Eigenvalues below 1e-14 count as outside the support; weight
// above 1e-10 of rho outside sigma's support raises SupportMismatch.
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// ------------------------------------------------------------- report ----

// The identity suite in one bundle.  Cross-identities (tested properties):
//   symmetry ratio   Z~_tau/Z~_0 = exp(-beta delta_f - rel_ent_tau + rel_ent_0)
//   excess work      beta * excess_work = kl_fb + rel_ent_tau   (default basis)
//   crossing point   crossing_work = ln(Z~_0/Z~_tau) / beta
struct ThermoReport {
    double z0 = 0, z_tau = 0;              // equilibrium partition functions
    double z_tilde_0 = 0, z_tilde_tau = 0; // conditional partition functions
    double delta_f = 0;                    // -ln(Z_tau/Z0)/beta
    double rel_ent_tau = 0;                // S(rho~_tau || rho_tau^eq)
    double rel_ent_0 = 0;                  // S(rho~_0  || rho_0^eq)
    double avg_work = 0;                   // sum p_f(i) W~_i
    double excess_work = 0;                // avg_work - delta_f
    double kl_fb = 0;                      // sum_i p_f(i) ln(p_f(i)/p_b(i))
    double crossing_work = 0;              // where the atom-ratio function hits 1
};

// Throws DegenerateDistribution when a backward probability underflows to
// exact zero against a nonzero forward probability.
ThermoReport thermo_report(const SystemSpec& spec);

}  // namespace otm
