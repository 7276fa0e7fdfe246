#include "riskdp/risk_measures.hpp"

#include "riskdp/errors.hpp"
#include "numfmt.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riskdp {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError("AV@R level must lie in [0, 1), got " + detail::format_double(alpha));
}

void check_kappa(double kappa) {
    if (!(kappa >= 0.0 && kappa <= 0.5))
        throw DomainError("mean-deviation coefficient must lie in [0, 1/2], got " +
                          detail::format_double(kappa));
}

std::vector<std::size_t> order_by_value(const std::vector<Atom>& atoms, bool descending) {
    std::vector<std::size_t> idx(atoms.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (descending)
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return atoms[a].value > atoms[b].value;
        });
    else
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return atoms[a].value < atoms[b].value;
        });
    return idx;
}

} // namespace

// DiscreteDistribution -----------------------------------------------------

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty())
        throw DomainError("distribution must have at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!std::isfinite(a.value))
            throw DomainError("atom " + std::to_string(i) + " has a non-finite value");
        if (!(a.prob > 0.0) || !std::isfinite(a.prob))
            throw DomainError("atom " + std::to_string(i) + " has non-positive probability " +
                              detail::format_double(a.prob));
        total += a.prob;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
        throw DomainError("probabilities sum to " + detail::format_double(total) + ", not 1");
}

DiscreteDistribution DiscreteDistribution::uniform(std::span<const double> values) {
    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    const double p = values.empty() ? 0.0 : 1.0 / static_cast<double>(values.size());
    for (double v : values)
        atoms.push_back({v, p});
    return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution DiscreteDistribution::with_values(std::span<const double> values) const {
    if (values.size() != atoms_.size())
        throw DomainError("value count does not match atom count");
    std::vector<Atom> atoms = atoms_;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        atoms[i].value = values[i];
    return DiscreteDistribution(std::move(atoms));
}

double DiscreteDistribution::mean() const noexcept {
    double m = 0.0;
    for (const Atom& a : atoms_)
        m += a.prob * a.value;
    return m;
}

double DiscreteDistribution::min_value() const noexcept {
    return std::min_element(atoms_.begin(), atoms_.end(),
                            [](const Atom& a, const Atom& b) { return a.value < b.value; })
        ->value;
}

double DiscreteDistribution::max_value() const noexcept {
    return std::max_element(atoms_.begin(), atoms_.end(),
                            [](const Atom& a, const Atom& b) { return a.value < b.value; })
        ->value;
}

DiscreteDistribution DiscreteDistribution::merged() const {
    std::vector<Atom> sorted = atoms_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    for (const Atom& a : sorted) {
        if (!out.empty() && out.back().value == a.value)
            out.back().prob += a.prob;
        else
            out.push_back(a);
    }
    return DiscreteDistribution(std::move(out));
}

// RiskSpec -----------------------------------------------------------------

RiskSpec RiskSpec::expectation() { return RiskSpec(Expectation{}); }

RiskSpec RiskSpec::avar(double alpha) {
    check_alpha(alpha);
    return RiskSpec(AVaR{alpha});
}

RiskSpec RiskSpec::mean_deviation(double kappa) {
    check_kappa(kappa);
    return RiskSpec(MeanDeviation{kappa});
}

RiskSpec RiskSpec::kusuoka(std::vector<KusuokaComponent> components) {
    KusuokaMixture mix{std::move(components)};
    validate_mixture(mix);
    return RiskSpec(std::move(mix));
}

double RiskSpec::density_cap() const noexcept {
    struct {
        double operator()(const Expectation&) const { return 1.0; }
        double operator()(const AVaR& s) const { return 1.0 / (1.0 - s.alpha); }
        double operator()(const MeanDeviation& s) const { return 1.0 + 2.0 * s.kappa; }
        double operator()(const KusuokaMixture& s) const {
            double cap = 0.0;
            for (const auto& c : s.components)
                cap += c.weight / (1.0 - c.alpha);
            return cap;
        }
    } visitor;
    return std::visit(visitor, kind_);
}

std::string RiskSpec::to_string() const {
    struct {
        std::string operator()(const Expectation&) const { return "expectation"; }
        std::string operator()(const AVaR& s) const {
            return "avar(" + detail::format_double(s.alpha) + ")";
        }
        std::string operator()(const MeanDeviation& s) const {
            return "mean_deviation(" + detail::format_double(s.kappa) + ")";
        }
        std::string operator()(const KusuokaMixture& s) const {
            std::string out = "kusuoka(";
            for (std::size_t i = 0; i < s.components.size(); ++i) {
                if (i)
                    out += ",";
                out += detail::format_double(s.components[i].alpha) + ":" +
                       detail::format_double(s.components[i].weight);
            }
            return out + ")";
        }
    } visitor;
    return std::visit(visitor, kind_);
}

namespace {

double parse_number(const std::string& text, const std::string& literal) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw DomainError("bad number '" + text + "' in risk literal '" + literal + "'");
    return v;
}

} // namespace

RiskSpec parse_risk_literal(const std::string& literal) {
    std::string s;
    for (char c : literal)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    if (s == "expectation" || s == "mean")
        return RiskSpec::expectation();

    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw DomainError("unrecognized risk literal '" + literal + "'");
    const std::string name = s.substr(0, open);
    const std::string args = s.substr(open + 1, s.size() - open - 2);

    if (name == "avar" || name == "cvar")
        return RiskSpec::avar(parse_number(args, literal));
    if (name == "mean_deviation" || name == "meandeviation")
        return RiskSpec::mean_deviation(parse_number(args, literal));
    if (name == "kusuoka") {
        std::vector<KusuokaComponent> comps;
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw DomainError("kusuoka component '" + item + "' must be alpha:weight");
            comps.push_back({parse_number(item.substr(0, colon), literal),
                             parse_number(item.substr(colon + 1), literal)});
        }
        return RiskSpec::kusuoka(std::move(comps));
    }
    throw DomainError("unrecognized risk literal '" + literal + "'");
}

void validate_mixture(const KusuokaMixture& mixture) {
    if (mixture.components.empty())
        throw DomainError("Kusuoka mixture has no components");
    double total = 0.0;
    for (const auto& c : mixture.components) {
        check_alpha(c.alpha);
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw DomainError("Kusuoka weights must be nonnegative");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("Kusuoka weights sum to " + detail::format_double(total) + ", not 1");
}

// Evaluators ---------------------------------------------------------------

double expectation(const DiscreteDistribution& dist) noexcept { return dist.mean(); }

double value_at_risk(double p, const DiscreteDistribution& dist) {
    if (!(p > 0.0 && p <= 1.0))
        throw DomainError("V@R level must lie in (0, 1], got " + detail::format_double(p));
    const auto& atoms = dist.atoms();
    const auto idx = order_by_value(atoms, false);
    double cum = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        cum += atoms[idx[k]].prob;
        // accumulated rounding must not push the quantile one atom to the right
        if (cum >= p - 1e-14)
            return atoms[idx[k]].value;
    }
    return atoms[idx.back()].value;
}

double avar_primal(double alpha, const DiscreteDistribution& dist) {
    check_alpha(alpha);
    const auto& atoms = dist.atoms();
    const auto idx = order_by_value(atoms, false);
    // The quantile function equals atom k's value on (F_{k-1}, F_k].
    double lower = 0.0;
    double integral = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const Atom& a = atoms[idx[k]];
        const double upper = (k + 1 == idx.size()) ? 1.0 : lower + a.prob;
        const double overlap = upper - std::max(lower, alpha);
        if (overlap > 0.0)
            integral += a.value * overlap;
        lower = upper;
    }
    return integral / (1.0 - alpha);
}

DualResult avar_dual(double alpha, const DiscreteDistribution& dist) {
    check_alpha(alpha);
    const auto& atoms = dist.atoms();
    const double cap = 1.0 / (1.0 - alpha);
    DualResult out;
    out.argmax.weights.assign(atoms.size(), 0.0);
    double budget = 1.0;
    for (std::size_t i : order_by_value(atoms, true)) {
        if (budget <= 0.0)
            break;
        const double mass = std::min(cap * atoms[i].prob, budget);
        out.argmax.weights[i] = mass / atoms[i].prob;
        out.value += mass * atoms[i].value;
        budget -= mass;
    }
    return out;
}

double mean_deviation_primal(double kappa, const DiscreteDistribution& dist) {
    check_kappa(kappa);
    const double m = dist.mean();
    double dev = 0.0;
    for (const Atom& a : dist.atoms())
        dev += a.prob * std::abs(a.value - m);
    return m + kappa * dev;
}

MeanDeviationDualResult mean_deviation_dual(double kappa, const DiscreteDistribution& dist) {
    check_kappa(kappa);
    const auto& atoms = dist.atoms();
    const double m = dist.mean();
    MeanDeviationDualResult out;
    out.h.resize(atoms.size());
    double h_mean = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double d = atoms[i].value - m;
        out.h[i] = d > 0.0 ? kappa : (d < 0.0 ? -kappa : 0.0);
        h_mean += atoms[i].prob * out.h[i];
    }
    out.argmax.weights.resize(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        out.argmax.weights[i] = 1.0 + out.h[i] - h_mean;
        out.value += out.argmax.weights[i] * atoms[i].prob * atoms[i].value;
    }
    return out;
}

double kusuoka_evaluate(std::span<const KusuokaMixture> family, const DiscreteDistribution& dist) {
    if (family.empty())
        throw DomainError("Kusuoka family is empty");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& mix : family) {
        validate_mixture(mix);
        double v = 0.0;
        for (const auto& c : mix.components)
            v += c.weight * avar_primal(c.alpha, dist);
        best = std::max(best, v);
    }
    return best;
}

double evaluate(const RiskSpec& spec, const DiscreteDistribution& dist) {
    struct {
        const DiscreteDistribution& d;
        double operator()(const Expectation&) const { return d.mean(); }
        double operator()(const AVaR& s) const { return avar_primal(s.alpha, d); }
        double operator()(const MeanDeviation& s) const { return mean_deviation_primal(s.kappa, d); }
        double operator()(const KusuokaMixture& s) const {
            return kusuoka_evaluate(std::span<const KusuokaMixture>(&s, 1), d);
        }
    } visitor{dist};
    return std::visit(visitor, spec.kind());
}

} // namespace riskdp
