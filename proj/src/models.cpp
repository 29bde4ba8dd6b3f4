#include "wdep/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "overloaded.hpp"
#include "wdep/stats.hpp"
#include "wdep/text.hpp"

namespace wdep {

using detail::Overloaded;

namespace {

void require_finite(const std::vector<double>& xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
}

std::string join(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += format_double(xs[i]);
    }
    return s + "]";
}

std::string join(const std::map<int, double>& a) {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, v] : a) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(k) + ":" + format_double(v);
    }
    return s + "}";
}

double abs_sum(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += std::abs(x);
    return s;
}

// sum_{k > K} k^(-exponent): direct summation over a stretch, then
// Euler-Maclaurin for the remainder.
double power_tail(double exponent, std::size_t k_trunc) {
    const std::size_t direct_end = k_trunc + 2000;
    double s = 0.0;
    for (std::size_t k = direct_end; k > k_trunc; --k) s += std::pow(static_cast<double>(k), -exponent);
    const double n = static_cast<double>(direct_end + 1);
    const double f = std::pow(n, -exponent);
    s += n * f / (exponent - 1.0) + 0.5 * f + exponent * f / (12.0 * n) -
         exponent * (exponent + 1.0) * (exponent + 2.0) * f / (720.0 * n * n * n);
    return s;
}

}  // namespace

std::string describe(const DecayProfile& profile) {
    return std::visit(Overloaded{
                          [](const FiniteSupport&) { return std::string("finite"); },
                          [](const GeometricDecay& g) { return "geometric(" + format_double(g.ratio) + ")"; },
                          [](const PowerDecay& p) { return "power(" + format_double(p.exponent) + ")"; },
                      },
                      profile);
}

TruncatedSequence geometric_sequence(double scale, double ratio, std::size_t k_trunc) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("geometric sequence: ratio must lie in (0,1)");
    TruncatedSequence seq;
    seq.coefficients.resize(k_trunc);
    for (std::size_t k = 1; k <= k_trunc; ++k)
        seq.coefficients[k - 1] = scale * std::pow(ratio, static_cast<double>(k));
    seq.tail_mass = std::abs(scale) * std::pow(ratio, static_cast<double>(k_trunc + 1)) / (1.0 - ratio);
    seq.profile = GeometricDecay{ratio};
    return seq;
}

TruncatedSequence power_sequence(double scale, double exponent, std::size_t k_trunc) {
    if (!(exponent > 1.0)) throw std::invalid_argument("power sequence: exponent must exceed 1");
    TruncatedSequence seq;
    seq.coefficients.resize(k_trunc);
    for (std::size_t k = 1; k <= k_trunc; ++k)
        seq.coefficients[k - 1] = scale * std::pow(static_cast<double>(k), -exponent);
    seq.tail_mass = std::abs(scale) * power_tail(exponent, k_trunc);
    seq.profile = PowerDecay{exponent};
    return seq;
}

TruncatedSequence explicit_sequence(std::vector<double> coefficients) {
    TruncatedSequence seq;
    seq.coefficients = std::move(coefficients);
    return seq;
}

// --- AR ---------------------------------------------------------------------

ARModel::ARModel(std::vector<double> theta, InnovationDist innovation)
    : theta_(std::move(theta)), innovation_(std::move(innovation)) {
    if (theta_.empty()) throw std::invalid_argument("AR model: theta must be nonempty");
    require_finite(theta_, "AR model");
}

// --- piecewise-linear map ----------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() < 2 || knots_.size() != values_.size())
        throw std::invalid_argument("piecewise-linear map: need at least two (knot, value) pairs");
    require_finite(knots_, "piecewise-linear map");
    require_finite(values_, "piecewise-linear map");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1]))
            throw std::invalid_argument("piecewise-linear map: knots must be strictly increasing");
        slopes_.push_back((values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]));
    }
}

PiecewiseLinear PiecewiseLinear::linear(double slope) { return PiecewiseLinear({-1.0, 1.0}, {-slope, slope}); }

std::size_t PiecewiseLinear::segment(double x) const {
    // Segment i spans [knots_[i], knots_[i+1]); outer segments extend to infinity.
    const auto it = std::upper_bound(knots_.begin() + 1, knots_.end() - 1, x);
    return static_cast<std::size_t>(it - (knots_.begin() + 1));
}

double PiecewiseLinear::operator()(double x) const {
    const std::size_t i = segment(x);
    return values_[i] + slopes_[i] * (x - knots_[i]);
}

double PiecewiseLinear::slope_modulus(double x) const {
    const std::size_t i = segment(x);
    double d = std::abs(slopes_[i]);
    // At an interior knot both adjacent segments touch x.
    if (i > 0 && x == knots_[i]) d = std::max(d, std::abs(slopes_[i - 1]));
    return d;
}

double PiecewiseLinear::chord_modulus(double x) const {
    // Along y the chord slope moves monotonically inside each segment, so its
    // extremes sit at knots, at y -> x, or at y -> +-inf.
    double d = std::max({slope_modulus(x), std::abs(slopes_.front()), std::abs(slopes_.back())});
    const double mx = (*this)(x);
    for (std::size_t i = 0; i < knots_.size(); ++i)
        if (knots_[i] != x) d = std::max(d, std::abs((values_[i] - mx) / (knots_[i] - x)));
    return d;
}

double PiecewiseLinear::lipschitz() const {
    double d = 0.0;
    for (double s : slopes_) d = std::max(d, std::abs(s));
    return d;
}

NonlinearARModel::NonlinearARModel(PiecewiseLinear m, InnovationDist innovation)
    : m_(std::move(m)), innovation_(std::move(innovation)) {}

// --- ARCH(inf) -----------------------------------------------------------------

ArchInfModel::ArchInfModel(double b0, TruncatedSequence b, InnovationDist innovation, double m_norm)
    : b0_(b0), b_(std::move(b)), innovation_(std::move(innovation)), m_norm_(m_norm) {
    if (!(b0_ >= 0.0) || !std::isfinite(b0_)) throw std::invalid_argument("ARCH model: b0 must be nonnegative");
    require_finite(b_.coefficients, "ARCH model");
    for (double x : b_.coefficients)
        if (x < 0.0) throw std::invalid_argument("ARCH model: b_k must be nonnegative");
    if (!(m_norm_ > 0.0)) throw std::invalid_argument("ARCH model: moment order must be positive");
}

double ArchInfModel::contraction() const {
    const double norm = innovation_.moment_norm(m_norm_);
    return norm * norm * (abs_sum(b_.coefficients) + b_.tail_mass);
}

// --- LARCH(inf) ----------------------------------------------------------------

LarchModel::LarchModel(double a0, std::map<int, double> a, InnovationDist innovation, DecayProfile profile,
                       double tail_mass)
    : a0_(a0), a_(std::move(a)), innovation_(std::move(innovation)), profile_(profile), tail_mass_(tail_mass) {
    if (!std::isfinite(a0_)) throw std::invalid_argument("LARCH model: a0 must be finite");
    if (a_.count(0)) throw std::invalid_argument("LARCH model: lag 0 is not allowed");
    for (const auto& [k, v] : a_)
        if (!std::isfinite(v)) throw std::invalid_argument("LARCH model: non-finite coefficient");
    if (!innovation_.bounded())
        throw std::invalid_argument("LARCH model: innovation must be bounded (rademacher or uniform)");
}

LarchModel LarchModel::power_law(double a0, double scale, double exponent, std::size_t k_trunc,
                                 InnovationDist innovation) {
    const TruncatedSequence one_side = power_sequence(scale, exponent, k_trunc);
    std::map<int, double> a;
    for (std::size_t k = 1; k <= k_trunc; ++k) {
        a[static_cast<int>(k)] = one_side.coefficients[k - 1];
        a[-static_cast<int>(k)] = one_side.coefficients[k - 1];
    }
    return LarchModel(a0, std::move(a), std::move(innovation), one_side.profile, 2.0 * one_side.tail_mass);
}

std::size_t LarchModel::k_trunc() const {
    std::size_t k = 0;
    for (const auto& [lag, v] : a_) k = std::max<std::size_t>(k, static_cast<std::size_t>(std::abs(lag)));
    return k;
}

double LarchModel::lambda() const {
    double s = tail_mass_;
    for (const auto& [k, v] : a_) s += std::abs(v);
    return innovation_.sup_norm() * s;
}

// --- bilinear ---------------------------------------------------------------

BilinearModel::BilinearModel(double a0, std::vector<double> a, double c0, std::vector<double> c,
                             InnovationDist innovation, double m_norm, DecayProfile profile)
    : a0_(a0),
      c0_(c0),
      a_(std::move(a)),
      c_(std::move(c)),
      innovation_(std::move(innovation)),
      m_norm_(m_norm),
      profile_(profile) {
    if (!std::isfinite(a0_) || !std::isfinite(c0_)) throw std::invalid_argument("bilinear model: non-finite intercept");
    require_finite(a_, "bilinear model");
    require_finite(c_, "bilinear model");
    if (!(m_norm_ > 0.0)) throw std::invalid_argument("bilinear model: moment order must be positive");
}

double BilinearModel::contraction() const {
    return innovation_.moment_norm(m_norm_) * (abs_sum(a_) + abs_sum(c_));
}

// --- Volterra ---------------------------------------------------------------

VolterraModel::VolterraModel(Terms terms, InnovationDist innovation, DecayProfile profile)
    : terms_(std::move(terms)), innovation_(std::move(innovation)), profile_(profile) {
    if (terms_.empty()) throw std::invalid_argument("Volterra model: no terms");
    for (const auto& [idx, coef] : terms_) {
        if (idx.empty()) throw std::invalid_argument("Volterra model: empty index tuple");
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (!(idx[i] > idx[i - 1]))
                throw std::invalid_argument("Volterra model: index tuples must be strictly increasing");
        if (!std::isfinite(coef)) throw std::invalid_argument("Volterra model: non-finite coefficient");
    }
}

std::size_t VolterraModel::max_order() const {
    std::size_t p = 0;
    for (const auto& [idx, coef] : terms_) p = std::max(p, idx.size());
    return p;
}

int VolterraModel::min_lag() const {
    int lo = terms_.begin()->first.front();
    for (const auto& [idx, coef] : terms_) lo = std::min(lo, idx.front());
    return lo;
}

int VolterraModel::max_lag() const {
    int hi = terms_.begin()->first.back();
    for (const auto& [idx, coef] : terms_) hi = std::max(hi, idx.back());
    return hi;
}

// --- linear -----------------------------------------------------------------

LinearModel::LinearModel(std::map<int, double> a, InnovationDist innovation, DecayProfile profile,
                         double tail_mass)
    : a_(std::move(a)), innovation_(std::move(innovation)), profile_(profile), tail_mass_(tail_mass) {
    if (a_.empty()) throw std::invalid_argument("linear model: no coefficients");
    for (const auto& [k, v] : a_)
        if (!std::isfinite(v)) throw std::invalid_argument("linear model: non-finite coefficient");
}

LinearModel LinearModel::power_law(double scale, double exponent, std::size_t k_trunc,
                                   InnovationDist innovation) {
    const TruncatedSequence seq = power_sequence(scale, exponent, k_trunc);
    std::map<int, double> a{{0, scale}};
    for (std::size_t k = 1; k <= k_trunc; ++k) a[static_cast<int>(k)] = seq.coefficients[k - 1];
    return LinearModel(std::move(a), std::move(innovation), seq.profile, seq.tail_mass);
}

// --- variant helpers ----------------------------------------------------------

std::string kind_name(const ProcessModel& model) {
    return std::visit(Overloaded{
                          [](const ARModel&) { return std::string("ar"); },
                          [](const NonlinearARModel&) { return std::string("nlar"); },
                          [](const ArchInfModel&) { return std::string("arch"); },
                          [](const LarchModel&) { return std::string("larch"); },
                          [](const BilinearModel&) { return std::string("bilinear"); },
                          [](const VolterraModel&) { return std::string("volterra"); },
                          [](const LinearModel&) { return std::string("linear"); },
                      },
                      model);
}

std::string describe(const ProcessModel& model) {
    const std::string body = std::visit(
        Overloaded{
            [](const ARModel& m) { return "theta=" + join(m.theta()); },
            [](const NonlinearARModel& m) {
                return "knots=" + join(m.map().knots()) + ";values=" + join(m.map().values());
            },
            [](const ArchInfModel& m) {
                return "b0=" + format_double(m.b0()) + ";b=" + join(m.b()) + ";tail=" + format_double(m.tail_mass()) +
                       ";decay=" + describe(m.profile()) + ";m=" + format_double(m.m_norm());
            },
            [](const LarchModel& m) {
                return "a0=" + format_double(m.a0()) + ";a=" + join(m.a()) + ";tail=" + format_double(m.tail_mass()) +
                       ";decay=" + describe(m.profile());
            },
            [](const BilinearModel& m) {
                return "a0=" + format_double(m.a0()) + ";a=" + join(m.a()) + ";c0=" + format_double(m.c0()) +
                       ";c=" + join(m.c()) + ";decay=" + describe(m.profile()) + ";m=" + format_double(m.m_norm());
            },
            [](const VolterraModel& m) {
                std::string s = "terms={";
                bool first = true;
                for (const auto& [idx, coef] : m.terms()) {
                    if (!first) s += ",";
                    first = false;
                    s += "(";
                    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? " " : "") + std::to_string(idx[i]);
                    s += "):" + format_double(coef);
                }
                return s + "};decay=" + describe(m.profile());
            },
            [](const LinearModel& m) {
                return "a=" + join(m.a()) + ";tail=" + format_double(m.tail_mass()) + ";decay=" + describe(m.profile());
            },
        },
        model);
    return kind_name(model) + "(" + body + ";innovation=" + innovation_of(model).describe() + ")";
}

std::uint64_t model_id(const ProcessModel& model) { return fnv1a64(describe(model)); }

const InnovationDist& innovation_of(const ProcessModel& model) {
    return std::visit([](const auto& m) -> const InnovationDist& { return m.innovation(); }, model);
}

}  // namespace wdep
