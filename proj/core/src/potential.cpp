#include "tausim/potential.hpp"

#include <stdexcept>

namespace tausim {

PotentialSpec PotentialSpec::constant(double c0) {
    PotentialSpec s;
    s.kind = PotentialKind::constant;
    s.c0 = c0;
    return s;
}

PotentialSpec PotentialSpec::linear(double c1, double c0) {
    PotentialSpec s;
    s.kind = PotentialKind::linear;
    s.c0 = c0;
    s.c1 = c1;
    return s;
}

PotentialSpec PotentialSpec::harmonic(double c2, double c1, double c0) {
    if (!(c2 > 0.0)) {
        throw std::invalid_argument("PotentialSpec::harmonic: quadratic coefficient must be > 0");
    }
    PotentialSpec s;
    s.kind = PotentialKind::harmonic;
    s.c0 = c0;
    s.c1 = c1;
    s.c2 = c2;
    return s;
}

double eval_potential(const PotentialSpec& spec, double q) {
    switch (spec.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::constant:
            return spec.c0;
        case PotentialKind::linear:
            return spec.c0 + spec.c1 * q;
        case PotentialKind::harmonic:
            return spec.c0 + spec.c1 * q + spec.c2 * q * q;
    }
    return 0.0;
}

double eval_potential_gradient(const PotentialSpec& spec, double q) {
    switch (spec.kind) {
        case PotentialKind::zero:
        case PotentialKind::constant:
            return 0.0;
        case PotentialKind::linear:
            return spec.c1;
        case PotentialKind::harmonic:
            return spec.c1 + 2.0 * spec.c2 * q;
    }
    return 0.0;
}

const char* to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::zero:
            return "zero";
        case PotentialKind::constant:
            return "constant";
        case PotentialKind::linear:
            return "linear";
        case PotentialKind::harmonic:
            return "harmonic";
    }
    return "?";
}

}  // namespace tausim
