#include "wdep/innovation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "overloaded.hpp"
#include "wdep/stats.hpp"
#include "wdep/text.hpp"

namespace wdep {

namespace {

using detail::Overloaded;

double empirical_power_mean(const std::vector<double>& xs, double m) {
    double s = 0.0;
    for (double x : xs) s += std::pow(std::abs(x), m);
    return s / static_cast<double>(xs.size());
}

// E|U|^m for U ~ Uniform(a, b).
double uniform_abs_moment(double a, double b, double m) {
    auto antiderivative = [m](double x) {
        return std::copysign(std::pow(std::abs(x), m + 1.0) / (m + 1.0), x);
    };
    return (antiderivative(b) - antiderivative(a)) / (b - a);
}

}  // namespace

InnovationDist InnovationDist::rademacher() { return InnovationDist(Rademacher{}); }

InnovationDist InnovationDist::gaussian(double sd) {
    if (!(sd > 0.0) || !std::isfinite(sd))
        throw std::invalid_argument("gaussian innovation: sd must be positive");
    return InnovationDist(Gaussian{sd});
}

InnovationDist InnovationDist::uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("uniform innovation: need finite a < b");
    return InnovationDist(Uniform{a, b});
}

InnovationDist InnovationDist::empirical(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical innovation: no samples");
    return InnovationDist(Empirical{std::make_shared<const std::vector<double>>(std::move(samples))});
}

double InnovationDist::sample(Rng& rng) const {
    return std::visit(Overloaded{
                          [&](const Rademacher&) { return (rng.next_u64() >> 63) ? 1.0 : -1.0; },
                          [&](const Gaussian& g) { return g.sd * rng.normal(); },
                          [&](const Uniform& u) { return u.a + (u.b - u.a) * rng.uniform(); },
                          [&](const Empirical& e) { return (*e.samples)[rng.below(e.samples->size())]; },
                      },
                      law_);
}

void InnovationDist::fill(Rng& rng, std::span<double> out) const {
    for (double& x : out) x = sample(rng);
}

double InnovationDist::mean() const {
    return std::visit(Overloaded{
                          [](const Rademacher&) { return 0.0; },
                          [](const Gaussian&) { return 0.0; },
                          [](const Uniform& u) { return 0.5 * (u.a + u.b); },
                          [](const Empirical& e) {
                              return summarize(*e.samples).mean;
                          },
                      },
                      law_);
}

double InnovationDist::second_moment() const {
    return std::visit(Overloaded{
                          [](const Rademacher&) { return 1.0; },
                          [](const Gaussian& g) { return g.sd * g.sd; },
                          [](const Uniform& u) { return (u.a * u.a + u.a * u.b + u.b * u.b) / 3.0; },
                          [](const Empirical& e) { return empirical_power_mean(*e.samples, 2.0); },
                      },
                      law_);
}

double InnovationDist::variance() const {
    const double m = mean();
    return second_moment() - m * m;
}

double InnovationDist::fourth_moment() const {
    return std::visit(Overloaded{
                          [](const Rademacher&) { return 1.0; },
                          [](const Gaussian& g) { return 3.0 * std::pow(g.sd, 4); },
                          [](const Uniform& u) { return uniform_abs_moment(u.a, u.b, 4.0); },
                          [](const Empirical& e) { return empirical_power_mean(*e.samples, 4.0); },
                      },
                      law_);
}

double InnovationDist::abs_mean() const { return moment_norm(1.0); }

double InnovationDist::moment_norm(double m) const {
    if (!(m > 0.0)) throw std::invalid_argument("moment_norm: order must be positive");
    const double moment = std::visit(
        Overloaded{
            [](const Rademacher&) { return 1.0; },
            [m](const Gaussian& g) {
                // E|Z|^m = 2^(m/2) Gamma((m+1)/2) / sqrt(pi)
                return std::pow(g.sd, m) * std::pow(2.0, m / 2.0) * std::tgamma((m + 1.0) / 2.0) /
                       std::sqrt(std::numbers::pi);
            },
            [m](const Uniform& u) { return uniform_abs_moment(u.a, u.b, m); },
            [m](const Empirical& e) { return empirical_power_mean(*e.samples, m); },
        },
        law_);
    return std::pow(moment, 1.0 / m);
}

double InnovationDist::sup_norm() const {
    return std::visit(Overloaded{
                          [](const Rademacher&) { return 1.0; },
                          [](const Gaussian&) { return std::numeric_limits<double>::infinity(); },
                          [](const Uniform& u) { return std::max(std::abs(u.a), std::abs(u.b)); },
                          [](const Empirical& e) {
                              double s = 0.0;
                              for (double x : *e.samples) s = std::max(s, std::abs(x));
                              return s;
                          },
                      },
                      law_);
}

bool InnovationDist::bounded() const { return std::isfinite(sup_norm()); }

std::string InnovationDist::describe() const {
    return std::visit(Overloaded{
                          [](const Rademacher&) { return std::string("rademacher"); },
                          [](const Gaussian& g) { return "gaussian(" + format_double(g.sd) + ")"; },
                          [](const Uniform& u) {
                              return "uniform(" + format_double(u.a) + "," + format_double(u.b) + ")";
                          },
                          [](const Empirical& e) {
                              const std::uint64_t h = fnv1a64(std::as_bytes(std::span(*e.samples)));
                              return "empirical(n=" + std::to_string(e.samples->size()) +
                                     ",digest=" + std::to_string(h) + ")";
                          },
                      },
                      law_);
}

InnovationDist parse_innovation(const std::string& text) {
    const auto call = parse_call(text);
    const std::string& name = call.name;
    const auto& args = call.args;
    if (name == "rademacher" && args.empty()) return InnovationDist::rademacher();
    if (name == "gaussian" || name == "normal") {
        if (args.empty()) return InnovationDist::gaussian(1.0);
        if (args.size() == 1) return InnovationDist::gaussian(parse_real(args[0]));
    }
    if (name == "uniform" && args.size() == 2)
        return InnovationDist::uniform(parse_real(args[0]), parse_real(args[1]));
    throw std::invalid_argument("unknown innovation law '" + text +
                                "' (expected rademacher, gaussian(sd) or uniform(a,b))");
}

}  // namespace wdep
