#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wdep/rng.hpp"

namespace wdep {

struct Rademacher {};
struct Gaussian {
    double sd = 1.0;
};
struct Uniform {
    double a = -1.0;
    double b = 1.0;
};
/// Uniform resampling from a stored sample (bootstrap innovations).
struct Empirical {
    std::shared_ptr<const std::vector<double>> samples;
};

/// Law of the i.i.d. driving noise of a recursion.
class InnovationDist {
public:
    using Law = std::variant<Rademacher, Gaussian, Uniform, Empirical>;

    static InnovationDist rademacher();
    static InnovationDist gaussian(double sd);
    static InnovationDist uniform(double a, double b);
    static InnovationDist empirical(std::vector<double> samples);

    double sample(Rng& rng) const;
    void fill(Rng& rng, std::span<double> out) const;

    double mean() const;
    double variance() const;
    double second_moment() const;
    double fourth_moment() const;
    /// E|e|
    double abs_mean() const;
    /// ||e||_m = (E|e|^m)^(1/m), m > 0.
    double moment_norm(double m) const;
    /// ||e||_inf; +inf for Gaussian.
    double sup_norm() const;
    bool bounded() const;

    /// Canonical text form, parseable by parse_innovation.
    std::string describe() const;

    const Law& law() const { return law_; }

private:
    explicit InnovationDist(Law law) : law_(std::move(law)) {}
    Law law_;
};

/// Parses "rademacher", "gaussian(sd)", "uniform(a,b)". Empirical laws have no
/// text form; they come from data.
InnovationDist parse_innovation(const std::string& text);

}  // namespace wdep
