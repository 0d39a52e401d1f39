#pragma once

#include <span>

#include "fracneumann/kernel.hpp"
#include "fracneumann/neumann.hpp"
#include "fracneumann/params.hpp"

namespace fracneumann {

struct EnergyBreakdown {
    double seminorm_term = 0.0;   ///< d c_{n,s}/2 times seminorm_T
    double mass_term = 0.0;       ///< ∫_Ω u^2
    double potential_term = 0.0;  ///< ∫_Ω |u|^{p+1}/(p+1)
    double total = 0.0;           ///< (seminorm_term + mass_term)/2 - potential_term
};

/// ∬_{T(Ω)} |u(x) - u(y)|^2 |x - y|^{-(1+2s)}, split as Ω×Ω + 2 Ω×CΩ, with the
/// far field beyond the collar carried by the tail coefficients.
double seminorm_T(const ExtendedField& u, const KernelTable& table);

/// Same double integral for arbitrary values on every node, by direct
/// O(N_Ω N) summation. The far field is still the layout's model value.
double seminorm_T(std::span<const double> u, const KernelTable& table);

EnergyBreakdown J_d(const ExtendedField& u, const Params& params, const KernelTable& table);

/// Maximiser t0 of t -> J_d(t u): t0^{p-1} = Q(u)/∫_Ω |u|^{p+1}.
/// Throws PreconditionError when ∫|u|^{p+1} = 0.
double nehari_scale(const ExtendedField& u, const Params& params, const KernelTable& table);

/// M[u] = sup_t J_d(t u) = (1/2 - 1/(p+1)) t0^{p+1} ∫|u|^{p+1}.
double peak_energy(const ExtendedField& u, const Params& params, const KernelTable& table);

/// Terms of the whole-space functional on a window grid (zero beyond the window).
struct WholeSpaceTerms {
    double seminorm = 0.0;   ///< ∬ |u(x) - u(y)|^2 |x - y|^{-(1+2s)}
    double mass = 0.0;       ///< ∫ u^2
    double potential = 0.0;  ///< ∫ |u|^{p+1}
};

WholeSpaceTerms whole_space_terms(std::span<const double> u, const Params& params, const KernelTable& table);

/// F(u) = 1/2 [c/2 ∬ + ∫u^2] - ∫|u|^{p+1}/(p+1).
double F_energy(std::span<const double> u, const Params& params, const KernelTable& table);

/// P(u) = ((n - 2s)c/4) ∬ + (n/2)∫u^2 - (n/(p+1))∫|u|^{p+1}.
double pohozaev(std::span<const double> u, const Params& params, const KernelTable& table);

/// |P(u)| divided by the largest of its three terms.
double pohozaev_relative(std::span<const double> u, const Params& params, const KernelTable& table);

}  // namespace fracneumann
