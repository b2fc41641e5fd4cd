#pragma once

#include <string>

#include "otfs/types.hpp"

namespace otfs {
namespace analysis {

enum class EfficiencyVariant { SuFullGuard, SuPartialGuard, MuPcp };

// Fraction of the frame carrying data for the given pilot structure:
//   SU full:    N (M - Q(2 L_ch - 1)) / (MN + L_cp)
//   SU partial: (MN - Q(2 L_ch - 1)(4 kappa_max + 1)) / (MN + L_cp)
//   MU:         N (M - (beta + 2 L_ch - 1)) / (MN + L_cp)
double spectral_efficiency(EfficiencyVariant variant, int M, int N, int Q,
                           int L_ch, int L_cp, double kappa_max, int beta);

struct CrossoverConditions {
    double beta_vs_partial;   // beta <= (Q/N (4 kappa_max + 1) - 1)(2 L_ch - 1)
    double beta_vs_full;      // beta <= (Q - 1)(2 L_ch - 1)
    double kappa_vs_partial;  // kappa_max <= 0.5 ((2L-1) Q/N - 2) / ((2L-1) 2Q/N + 1)
    double kappa_vs_full;     // kappa_max <= 0.5 ((Q-1)(2L-1) - 1)
    bool partial_feasible;    // false when the partial-guard condition has no
                              // nonnegative kappa_max solution
};

CrossoverConditions crossover_conditions(int M, int N, int Q, int L_ch,
                                         double kappa_max);

enum class Technique { SuPcp, MuPcp, AbsorbedCfo };

// Complex-multiplication counts:
//   SU-PCP:   Q N^2 L_ch / 2 + MN (2 L_ch + Q - 1)
//   MU-PCP:   Q N^2 (L_ch + kappa_max) / 2 + MN (2 L_ch + 2 kappa_max + log2(MN) + Q - 1)
//   absorbed: MN (2 L_ch + Q - 1)
double complexity_cms(Technique technique, int M, int N, int Q, int L_ch,
                      double kappa_max);

// Raised-cosine Doppler spectrum energy within [-alpha nu_max, alpha nu_max]:
//   E_s(alpha) = alpha + sin(pi alpha) / pi.
double doppler_energy_concentration(double alpha);

// Same quantity by numerical quadrature of the spectrum (Simpson).
double doppler_energy_concentration_numeric(double alpha, int intervals = 4096);

// alpha solving E_s(alpha) = target, by bisection on [0, 1].
double doppler_energy_inverse(double target);

// Human-readable report for the closed-form suite; includes the source
// text's printed Appendix values next to the formula's values where they
// disagree.
std::string doppler_energy_report();

}  // namespace analysis
}  // namespace otfs
