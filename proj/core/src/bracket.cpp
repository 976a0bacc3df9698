#include "tausim/bracket.hpp"

#include <stdexcept>

namespace tausim {

namespace {

double diff_at(const ScalarFn& f, std::vector<double>& pt, std::size_t i, double h) {
    const double save = pt[i];
    const double step = fd_step(save, h);
    pt[i] = save + step;
    const double fp = f(pt);
    pt[i] = save - step;
    const double fm = f(pt);
    pt[i] = save;
    return (fp - fm) / (2.0 * step);
}

}  // namespace

double central_diff(const ScalarFn& f, std::span<const double> point, std::size_t i, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("central_diff: h must be > 0");
    if (i >= point.size()) throw std::invalid_argument("central_diff: index out of range");
    std::vector<double> pt(point.begin(), point.end());
    return diff_at(f, pt, i, h);
}

std::vector<double> fd_gradient(const ScalarFn& f, std::span<const double> point, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h must be > 0");
    std::vector<double> pt(point.begin(), point.end());
    std::vector<double> grad(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i) {
        grad[i] = diff_at(f, pt, i, h);
    }
    return grad;
}

double canonical_bracket(const ScalarFn& f, const ScalarFn& g, std::span<const double> point,
                         const CanonicalLayout& layout, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("canonical_bracket: h must be > 0");
    std::vector<double> pt(point.begin(), point.end());
    double acc = 0.0;
    for (const auto& [qi, pi] : layout.pairs) {
        if (qi >= pt.size() || pi >= pt.size()) {
            throw std::invalid_argument("canonical_bracket: layout index out of range");
        }
        const double dfq = diff_at(f, pt, qi, h);
        const double dgp = diff_at(g, pt, pi, h);
        const double dfp = diff_at(f, pt, pi, h);
        const double dgq = diff_at(g, pt, qi, h);
        acc += dfq * dgp - dfp * dgq;
    }
    return acc;
}

std::vector<double> infinitesimal_canonical(const ScalarFn& g, double dalpha,
                                            std::span<const double> point,
                                            const CanonicalLayout& layout, double h) {
    const std::vector<double> grad = fd_gradient(g, point, h);
    std::vector<double> out(point.begin(), point.end());
    for (const auto& [qi, pi] : layout.pairs) {
        out[qi] += grad[pi] * dalpha;
        out[pi] -= grad[qi] * dalpha;
    }
    return out;
}

}  // namespace tausim
