#pragma once

// Static law-invariant coherent risk measures on finite discrete distributions.
//
// Values are costs: larger is worse. Every measure is available in primal
// form (closed-form formula over the atoms) and, where useful, in dual form
// as a maximization of <m, Z> over a set of probability densities m.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskdp {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

/// Finite distribution given as a list of (value, probability) atoms.
///
/// Atoms need not be sorted or distinct. Construction validates that every
/// probability is strictly positive and that they sum to one within 1e-12.
class DiscreteDistribution {
  public:
    static constexpr double kSumTolerance = 1e-12;

    explicit DiscreteDistribution(std::vector<Atom> atoms);

    /// Equal-weight distribution over the given outcomes.
    static DiscreteDistribution uniform(std::span<const double> values);

    /// Same probabilities with values replaced (size must match).
    DiscreteDistribution with_values(std::span<const double> values) const;

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double mean() const noexcept;
    double min_value() const noexcept;
    double max_value() const noexcept;

    /// Atoms sorted by value with equal values merged.
    DiscreteDistribution merged() const;

  private:
    std::vector<Atom> atoms_;
};

// Risk specifications ------------------------------------------------------

struct Expectation {};

struct AVaR {
    double alpha = 0.0;
};

struct MeanDeviation {
    double kappa = 0.0;
};

struct KusuokaComponent {
    double alpha = 0.0;
    double weight = 0.0;
};

/// Finitely supported mixing measure over AV@R levels.
struct KusuokaMixture {
    std::vector<KusuokaComponent> components;
};

/// One-step risk mapping.
class RiskSpec {
  public:
    using Kind = std::variant<Expectation, AVaR, MeanDeviation, KusuokaMixture>;

    RiskSpec() = default;

    static RiskSpec expectation();
    static RiskSpec avar(double alpha);
    static RiskSpec mean_deviation(double kappa);
    static RiskSpec kusuoka(std::vector<KusuokaComponent> components);

    const Kind& kind() const noexcept { return kind_; }

    /// Supremum of the densities in the dual set (1 for the expectation).
    double density_cap() const noexcept;

    /// Short literal such as "avar(0.5)", parseable by parse_risk_literal.
    std::string to_string() const;

  private:
    explicit RiskSpec(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_ = Expectation{};
};

/// Parses "expectation", "avar(a)", "mean_deviation(k)" or
/// "kusuoka(a1:w1,a2:w2,...)". Throws DomainError on bad literals.
RiskSpec parse_risk_literal(const std::string& literal);

/// Density weights aligned with the atoms of the distribution they were
/// computed for.
struct DualDensity {
    std::vector<double> weights;
};

struct DualResult {
    double value = 0.0;
    DualDensity argmax;
};

struct MeanDeviationDualResult {
    double value = 0.0;
    DualDensity argmax;
    std::vector<double> h;
};

// Operations ---------------------------------------------------------------

double expectation(const DiscreteDistribution& dist) noexcept;

/// Left p-quantile: smallest atom value z with P(Z <= z) >= p, p in (0, 1].
double value_at_risk(double p, const DiscreteDistribution& dist);

/// (1 / (1 - alpha)) * integral of the quantile function over (alpha, 1].
double avar_primal(double alpha, const DiscreteDistribution& dist);

/// Greedy maximizer of <m, Z> over densities capped at 1 / (1 - alpha).
/// Ties at the mass boundary are filled in input order.
DualResult avar_dual(double alpha, const DiscreteDistribution& dist);

/// E[Z] + kappa * E|Z - E[Z]|, kappa in [0, 1/2].
double mean_deviation_primal(double kappa, const DiscreteDistribution& dist);

/// Dual form with m = 1 + h - E[h], h = kappa * sign(Z - E[Z]).
MeanDeviationDualResult mean_deviation_dual(double kappa, const DiscreteDistribution& dist);

/// Maximum over a finite family of mixtures of sum_j weight_j * AV@R_{alpha_j}.
double kusuoka_evaluate(std::span<const KusuokaMixture> family, const DiscreteDistribution& dist);

/// Primal evaluation of any supported risk mapping.
double evaluate(const RiskSpec& spec, const DiscreteDistribution& dist);

/// Throws DomainError unless the mixture is a valid Kusuoka mixture.
void validate_mixture(const KusuokaMixture& mixture);

} // namespace riskdp
