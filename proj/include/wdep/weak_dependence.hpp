#pragma once

#include <string>

namespace wdep {

/// The five covariance-inequality flavours; theta and kappa_prime are causal.
enum class WeakDepKind { kappa, kappa_prime, eta, theta, lambda };

/// psi(u, v, a, b) for arities u, v and Lipschitz constants a, b:
///   kappa: uvab   kappa_prime: vab   eta: ua + vb   theta: vb   lambda: uvab + ua + vb
double psi_value(WeakDepKind kind, double u, double v, double a, double b);

std::string to_string(WeakDepKind kind);
/// Accepts the names produced by to_string.
WeakDepKind parse_weak_dep_kind(const std::string& name);

}  // namespace wdep
