#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "swiptsec/linkmodel.hpp"

// The three ergodic-secrecy-capacity engines: exact quadrature of the
// integral form, the source closed-form/semi-closed-form expressions,
// and Monte Carlo simulation. All feed comparable SecrecyEstimate
// values; quadrature is the reference, the closed forms are fidelity
// modes whose deviation is reported rather than asserted.

namespace swiptsec::secrecy {

enum class Engine { Quadrature, ClosedForm, MonteCarlo };

// The closed-form Rician expression carries a beta factor whose
// printed arguments (p, -p) sit exactly on a pole; ComplementPair is
// the (p, 1-p) reading consistent with the underlying integral
// identity. AsPrinted is evaluated faithfully and flags the pole.
enum class BetaInterpretation { AsPrinted, ComplementPair };

// The closed-form Nakagami Sp-In denominator bracket retains stray
// SNR factors in print; GammaRemoved drops them (dimensional
// consistency), AsPrinted keeps the bracket as typeset with the
// unbound SNR variable set to 1 (the bracket is homogeneous of degree
// one in it, so this is the literal reading made evaluable).
enum class SpInBracket { GammaRemoved, AsPrinted };

struct SecrecyEstimate {
    double value = 0.0;  // bits/s/Hz
    Engine engine = Engine::Quadrature;
    double uncertainty = 0.0;  // MC standard error / quadrature error bound / 0
    std::map<std::string, std::string> meta;

    bool flagged() const { return meta.count("flag") > 0; }
};

const char* engine_name(Engine engine);

// Reference engine: adaptive quadrature of
//   (1/ln2) Int_0^inf F_max_e(v) * kernel(v) * S_s(v) dv
// with kernel 1/(1+v) for a separated eavesdropper and 1/(C v) for an
// integrated one (split at v=1, sqrt substitution near 0). Requires a
// separated main receiver. Degenerate main SNR gives value 0; a
// divergent integrated-eavesdropper integral is flagged.
SecrecyEstimate secrecy_quadrature(const linkmodel::Scenario& scenario,
                                   double rel_tol = 1e-7);

// Monte Carlo: per trial draws |h_s|^2 and n_eves i.i.d. |h_e|^2,
// forms gamma_s, gamma_e = A_e * max|h_e|^2, and accumulates
//   Sp-Sp: max(0, log2(1+gamma_s) - log2(1+gamma_e))
//   Sp-In: (1/C) * max(0, log2(gamma_s / gamma_e))
// (the Sp-In per-trial rule integrates by parts to exactly the 1/(Cv)
// kernel above). Trials are split into fixed 65536-trial chunks, each
// chunk's RNG seeded from (seed, chunk index) and partials reduced in
// chunk order, so results are bit-identical for fixed (trials, seed)
// regardless of thread count. max_threads = 0 uses the hardware count.
SecrecyEstimate secrecy_montecarlo(const linkmodel::Scenario& scenario,
                                   std::size_t trials, std::uint64_t seed,
                                   unsigned max_threads = 0);

// Closed-form Rician capacity from the fitted Marcum exponential
// approximation and the binomial z-sum. Requires Rician fading on
// both links and non-degenerate SNR laws; n_eves = 0 is accepted as a
// formal edge (the sum collapses to its z=0 term). A beta pole under
// AsPrinted yields a flagged non-finite estimate, never a silent
// number.
SecrecyEstimate secrecy_closedform_rician(const linkmodel::Scenario& scenario,
                                          BetaInterpretation beta_interpretation);

// Closed-form Nakagami capacity: the z/a/b triple sum with the inner
// 1-D integral evaluated by the quadrature utility (Sp-Sp), or the
// fully closed Sp-In sum. Requires integer m on both links.
SecrecyEstimate secrecy_closedform_nakagami(
    const linkmodel::Scenario& scenario,
    SpInBracket bracket = SpInBracket::GammaRemoved);

}  // namespace swiptsec::secrecy
