#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wdep/innovation.hpp"

namespace wdep {

// Decay family of an infinite coefficient sequence; selects the reference
// rate curve of a model.
struct FiniteSupport {};
struct GeometricDecay {
    double ratio = 0.5;
};
struct PowerDecay {
    double exponent = 2.0;
};
using DecayProfile = std::variant<FiniteSupport, GeometricDecay, PowerDecay>;

std::string describe(const DecayProfile& profile);

/// Lags 1..K of an infinite sequence, with the discarded mass sum_{k>K} |c_k|.
struct TruncatedSequence {
    std::vector<double> coefficients;
    double tail_mass = 0.0;
    DecayProfile profile = FiniteSupport{};
};

/// c_k = scale * ratio^k, k = 1..k_trunc.
TruncatedSequence geometric_sequence(double scale, double ratio, std::size_t k_trunc);
/// c_k = scale * k^(-exponent), k = 1..k_trunc; exponent > 1.
TruncatedSequence power_sequence(double scale, double exponent, std::size_t k_trunc);
TruncatedSequence explicit_sequence(std::vector<double> coefficients);

/// X_t = theta_1 X_{t-1} + ... + theta_p X_{t-p} + e_t
class ARModel {
public:
    ARModel(std::vector<double> theta, InnovationDist innovation);

    const std::vector<double>& theta() const { return theta_; }
    std::size_t order() const { return theta_.size(); }
    const InnovationDist& innovation() const { return innovation_; }

private:
    std::vector<double> theta_;
    InnovationDist innovation_;
};

/// Continuous piecewise-linear map through (knot, value) pairs, extended
/// linearly beyond the outer knots.
class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> knots, std::vector<double> values);
    static PiecewiseLinear linear(double slope);

    double operator()(double x) const;
    /// Local Lipschitz modulus: the largest |slope| among segments touching x.
    double slope_modulus(double x) const;
    /// Global modulus sup_{y != x} |m(y) - m(x)| / |y - x|, evaluated exactly
    /// from the knots and the outer slopes.
    double chord_modulus(double x) const;
    /// max |slope| over all segments.
    double lipschitz() const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// X_t = m(X_{t-1}) + e_t
class NonlinearARModel {
public:
    NonlinearARModel(PiecewiseLinear m, InnovationDist innovation);

    const PiecewiseLinear& map() const { return m_; }
    const InnovationDist& innovation() const { return innovation_; }

private:
    PiecewiseLinear m_;
    InnovationDist innovation_;
};

/// X_t = rho_t xi_t,  rho_t^2 = b0 + sum_{k=1}^{K} b_k X_{t-k}^2
class ArchInfModel {
public:
    ArchInfModel(double b0, TruncatedSequence b, InnovationDist innovation, double m_norm = 2.0);

    double b0() const { return b0_; }
    const std::vector<double>& b() const { return b_.coefficients; }
    double tail_mass() const { return b_.tail_mass; }
    const DecayProfile& profile() const { return b_.profile; }
    std::size_t k_trunc() const { return b_.coefficients.size(); }
    double m_norm() const { return m_norm_; }
    const InnovationDist& innovation() const { return innovation_; }
    /// ||xi||_m^2 * sum |b_j|
    double contraction() const;

private:
    double b0_;
    TruncatedSequence b_;
    InnovationDist innovation_;
    double m_norm_;
};

/// Non-causal X_t = xi_t (a0 + sum_{k != 0} a_k X_{t-k}), bounded xi.
class LarchModel {
public:
    LarchModel(double a0, std::map<int, double> a, InnovationDist innovation,
               DecayProfile profile = FiniteSupport{}, double tail_mass = 0.0);
    /// a_k = scale |k|^(-exponent) for 1 <= |k| <= k_trunc.
    static LarchModel power_law(double a0, double scale, double exponent, std::size_t k_trunc,
                                InnovationDist innovation);

    double a0() const { return a0_; }
    const std::map<int, double>& a() const { return a_; }
    std::size_t k_trunc() const;
    double tail_mass() const { return tail_mass_; }
    const DecayProfile& profile() const { return profile_; }
    const InnovationDist& innovation() const { return innovation_; }
    /// ||xi||_inf * sum_{j != 0} |a_j|
    double lambda() const;

private:
    double a0_;
    std::map<int, double> a_;
    InnovationDist innovation_;
    DecayProfile profile_;
    double tail_mass_;
};

/// X_t = xi_t (a0 + sum a_k X_{t-k}) + c0 + sum c_k X_{t-k}
class BilinearModel {
public:
    BilinearModel(double a0, std::vector<double> a, double c0, std::vector<double> c,
                  InnovationDist innovation, double m_norm = 2.0,
                  DecayProfile profile = FiniteSupport{});

    double a0() const { return a0_; }
    double c0() const { return c0_; }
    const std::vector<double>& a() const { return a_; }
    const std::vector<double>& c() const { return c_; }
    std::size_t k_trunc() const { return std::max(a_.size(), c_.size()); }
    double m_norm() const { return m_norm_; }
    const DecayProfile& profile() const { return profile_; }
    const InnovationDist& innovation() const { return innovation_; }
    /// ||xi||_m * (sum |a_k| + sum |c_k|)
    double contraction() const;

private:
    double a0_, c0_;
    std::vector<double> a_, c_;
    InnovationDist innovation_;
    double m_norm_;
    DecayProfile profile_;
};

/// Finite-order Volterra expansion sum_J a_J prod_{j in J} xi_{t-j}, J strictly increasing.
class VolterraModel {
public:
    using Terms = std::map<std::vector<int>, double>;

    VolterraModel(Terms terms, InnovationDist innovation, DecayProfile profile = FiniteSupport{});

    const Terms& terms() const { return terms_; }
    std::size_t max_order() const;
    int min_lag() const;
    int max_lag() const;
    const DecayProfile& profile() const { return profile_; }
    const InnovationDist& innovation() const { return innovation_; }

private:
    Terms terms_;
    InnovationDist innovation_;
    DecayProfile profile_;
};

/// Two-sided linear process X_t = sum_k a_k xi_{t-k} on a finite lag window.
class LinearModel {
public:
    LinearModel(std::map<int, double> a, InnovationDist innovation,
                DecayProfile profile = FiniteSupport{}, double tail_mass = 0.0);
    /// a_0 = scale, a_k = scale k^(-exponent) for 1 <= k <= k_trunc (causal).
    static LinearModel power_law(double scale, double exponent, std::size_t k_trunc,
                                 InnovationDist innovation);

    const std::map<int, double>& a() const { return a_; }
    int min_lag() const { return a_.begin()->first; }
    int max_lag() const { return a_.rbegin()->first; }
    double tail_mass() const { return tail_mass_; }
    const DecayProfile& profile() const { return profile_; }
    const InnovationDist& innovation() const { return innovation_; }

private:
    std::map<int, double> a_;
    InnovationDist innovation_;
    DecayProfile profile_;
    double tail_mass_;
};

using ProcessModel = std::variant<ARModel, NonlinearARModel, ArchInfModel, LarchModel,
                                  BilinearModel, VolterraModel, LinearModel>;

/// Short kind tag: ar, nlar, arch, larch, bilinear, volterra, linear.
std::string kind_name(const ProcessModel& model);
/// Canonical, deterministic text description (coefficients at full precision).
std::string describe(const ProcessModel& model);
/// FNV-1a hash of describe(model).
std::uint64_t model_id(const ProcessModel& model);
const InnovationDist& innovation_of(const ProcessModel& model);

/// A simulated stationary path with its provenance.
struct TimeSeries {
    std::vector<double> values;
    std::uint64_t model_id = 0;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
};

}  // namespace wdep
