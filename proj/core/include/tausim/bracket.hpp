#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tausim/numdiff.hpp"

namespace tausim {

/// Canonical (q, p) index pairs into a flat coordinate vector. The same
/// bracket kernel serves the discrete bracket, the q-bit bracket and the
/// hybrid bracket; only the pair layout differs between them.
struct CanonicalLayout {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// { f, g } = sum over pairs of df/dq dg/dp - df/dp dg/dq, with central
/// finite differences of step h (relative, floored; see fd_step). The
/// computation reuses the same four derivative values for {f, g} and
/// {g, f}, so antisymmetry holds exactly, not just to tolerance.
double canonical_bracket(const ScalarFn& f, const ScalarFn& g, std::span<const double> point,
                         const CanonicalLayout& layout, double h);

/// First-order canonical map generated by g:
///   q -> q + dg/dp dalpha,  p -> p - dg/dq dalpha,
/// with all gradients evaluated at the original point.
std::vector<double> infinitesimal_canonical(const ScalarFn& g, double dalpha,
                                            std::span<const double> point,
                                            const CanonicalLayout& layout, double h = 1e-4);

}  // namespace tausim
