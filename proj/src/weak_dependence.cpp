#include "wdep/weak_dependence.hpp"

#include <stdexcept>

namespace wdep {

double psi_value(WeakDepKind kind, double u, double v, double a, double b) {
    switch (kind) {
        case WeakDepKind::kappa: return u * v * a * b;
        case WeakDepKind::kappa_prime: return v * a * b;
        case WeakDepKind::eta: return u * a + v * b;
        case WeakDepKind::theta: return v * b;
        case WeakDepKind::lambda: return u * v * a * b + u * a + v * b;
    }
    throw std::logic_error("psi_value: unknown kind");
}

std::string to_string(WeakDepKind kind) {
    switch (kind) {
        case WeakDepKind::kappa: return "kappa";
        case WeakDepKind::kappa_prime: return "kappa_prime";
        case WeakDepKind::eta: return "eta";
        case WeakDepKind::theta: return "theta";
        case WeakDepKind::lambda: return "lambda";
    }
    return "unknown";
}

WeakDepKind parse_weak_dep_kind(const std::string& name) {
    if (name == "kappa") return WeakDepKind::kappa;
    if (name == "kappa_prime" || name == "kappa'") return WeakDepKind::kappa_prime;
    if (name == "eta") return WeakDepKind::eta;
    if (name == "theta") return WeakDepKind::theta;
    if (name == "lambda") return WeakDepKind::lambda;
    throw std::invalid_argument("unknown dependence kind '" + name +
                                "' (expected kappa, kappa_prime, eta, theta or lambda)");
}

}  // namespace wdep
