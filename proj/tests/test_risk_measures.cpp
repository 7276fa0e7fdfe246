#include "riskdp/errors.hpp"
#include "riskdp/fixtures.hpp"
#include "riskdp/risk_measures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace riskdp;

namespace {

DiscreteDistribution two_point(double a, double b) {
    return DiscreteDistribution({{a, 0.5}, {b, 0.5}});
}

// Rockafellar-Uryasev: AV@R_a(Z) = min_t t + E[(Z - t)^+] / (1 - a). For a
// discrete Z the minimum is attained at an atom value.
double avar_rockafellar_uryasev(double alpha, const DiscreteDistribution& d) {
    double best = INFINITY;
    for (const Atom& t : d.atoms()) {
        double excess = 0.0;
        for (const Atom& a : d.atoms())
            excess += a.prob * std::max(a.value - t.value, 0.0);
        best = std::min(best, t.value + excess / (1.0 - alpha));
    }
    return best;
}

std::vector<RiskSpec> all_specs() {
    std::vector<RiskSpec> specs{RiskSpec::expectation()};
    for (int i = 0; i < 10; ++i)
        specs.push_back(RiskSpec::avar(0.1 * i));
    for (double k : {0.0, 0.25, 0.5})
        specs.push_back(RiskSpec::mean_deviation(k));
    specs.push_back(RiskSpec::kusuoka({{0.0, 0.5}, {0.5, 0.5}}));
    specs.push_back(RiskSpec::kusuoka({{0.2, 0.3}, {0.8, 0.7}}));
    specs.push_back(RiskSpec::kusuoka({{0.1, 0.25}, {0.5, 0.25}, {0.9, 0.5}}));
    return specs;
}

} // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({}), DomainError);
    CHECK_THROWS_AS(DiscreteDistribution({{1.0, 0.5}, {2.0, 0.4}}), DomainError);
    CHECK_THROWS_AS(DiscreteDistribution({{1.0, 1.0}, {2.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(DiscreteDistribution({{NAN, 1.0}}), DomainError);
    CHECK_NOTHROW(DiscreteDistribution({{1.0, 0.25}, {1.0, 0.75}}));

    const auto merged = DiscreteDistribution({{3.0, 0.2}, {1.0, 0.3}, {3.0, 0.5}}).merged();
    REQUIRE(merged.size() == 2);
    CHECK(merged.atoms()[0].value == 1.0);
    CHECK(merged.atoms()[1].prob == doctest::Approx(0.7));
}

TEST_CASE("value at risk") {
    const auto d = two_point(0.0, 10.0);
    CHECK(value_at_risk(0.5, d) == 0.0);
    CHECK(value_at_risk(0.51, d) == 10.0);
    CHECK(value_at_risk(1.0, d) == 10.0);
    CHECK(value_at_risk(0.3, DiscreteDistribution({{7.0, 1.0}})) == 7.0);
    CHECK(value_at_risk(0.5, DiscreteDistribution({{10.0, 0.5}, {0.0, 0.5}})) == 0.0);
    CHECK_THROWS_AS(value_at_risk(0.0, d), DomainError);
    CHECK_THROWS_AS(value_at_risk(1.5, d), DomainError);

    // accumulated 0.1 + 0.1 + 0.1 must still reach 0.3 at the third atom
    const auto tenths = DiscreteDistribution::uniform(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(value_at_risk(0.3, tenths) == 3.0);
}

TEST_CASE("avar primal") {
    CHECK(avar_primal(0.0, two_point(1.0, 3.0)) == doctest::Approx(2.0));
    CHECK(avar_primal(0.5, two_point(0.0, 10.0)) == doctest::Approx(10.0));
    CHECK(avar_primal(0.25, two_point(0.0, 10.0)) == doctest::Approx(20.0 / 3.0));
    CHECK_THROWS_AS(avar_primal(1.0, two_point(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(avar_primal(-0.1, two_point(0.0, 1.0)), DomainError);
}

TEST_CASE("avar dual") {
    const auto d = two_point(0.0, 10.0);
    const auto r = avar_dual(0.25, d);
    CHECK(r.value == doctest::Approx(20.0 / 3.0));
    CHECK(r.argmax.weights[1] == doctest::Approx(4.0 / 3.0));
    CHECK(r.argmax.weights[0] == doctest::Approx(2.0 / 3.0));

    const auto zero = avar_dual(0.0, DiscreteDistribution({{1.0, 0.2}, {5.0, 0.3}, {2.0, 0.5}}));
    CHECK(zero.value == doctest::Approx(0.2 + 1.5 + 1.0));
    for (double w : zero.argmax.weights)
        CHECK(w == doctest::Approx(1.0));

    const auto single = avar_dual(0.7, DiscreteDistribution({{4.0, 1.0}}));
    CHECK(single.value == doctest::Approx(4.0));
    CHECK(single.argmax.weights[0] == doctest::Approx(1.0));

    SUBCASE("ties at the boundary fill in input order") {
        const auto tie = DiscreteDistribution({{5.0, 0.25}, {5.0, 0.25}, {0.0, 0.5}});
        const auto t = avar_dual(0.6, tie); // cap 2.5, budget 1: first atom takes 0.625
        CHECK(t.argmax.weights[0] == doctest::Approx(2.5));
        CHECK(t.argmax.weights[1] == doctest::Approx(1.5));
        CHECK(t.argmax.weights[2] == doctest::Approx(0.0));
        CHECK(t.value == doctest::Approx(5.0));
    }
}

TEST_CASE("mean deviation") {
    CHECK(mean_deviation_primal(0.5, two_point(0.0, 2.0)) == doctest::Approx(1.5));
    CHECK(mean_deviation_primal(0.3, DiscreteDistribution({{4.0, 1.0}})) == doctest::Approx(4.0));
    const auto d = DiscreteDistribution({{1.0, 0.2}, {5.0, 0.3}, {2.0, 0.5}});
    CHECK(mean_deviation_primal(0.0, d) == doctest::Approx(d.mean()));

    const auto r = mean_deviation_dual(0.5, two_point(0.0, 2.0));
    CHECK(r.value == doctest::Approx(1.5));
    CHECK(r.h[0] == doctest::Approx(-0.5));
    CHECK(r.h[1] == doctest::Approx(0.5));

    const auto z = mean_deviation_dual(0.0, d);
    CHECK(z.value == doctest::Approx(d.mean()));
    for (double h : z.h)
        CHECK(h == 0.0);

    const auto c = mean_deviation_dual(0.4, DiscreteDistribution({{3.0, 0.5}, {3.0, 0.5}}));
    CHECK(c.value == doctest::Approx(3.0));

    CHECK_THROWS_AS(mean_deviation_primal(0.51, d), DomainError);
    CHECK_THROWS_AS(mean_deviation_dual(-0.1, d), DomainError);
    CHECK_THROWS_AS(RiskSpec::mean_deviation(0.75), DomainError);
}

TEST_CASE("kusuoka mixtures") {
    const auto d = two_point(0.0, 10.0);
    const std::vector<KusuokaMixture> point{{{{0.5, 1.0}}}};
    CHECK(kusuoka_evaluate(point, d) == doctest::Approx(10.0));
    const std::vector<KusuokaMixture> mean{{{{0.0, 1.0}}}};
    CHECK(kusuoka_evaluate(mean, d) == doctest::Approx(5.0));
    const std::vector<KusuokaMixture> half{{{{0.0, 0.5}, {0.5, 0.5}}}};
    CHECK(kusuoka_evaluate(half, d) == doctest::Approx(7.5));

    // the supremum over a family picks the largest mixture
    const std::vector<KusuokaMixture> family{half[0], mean[0]};
    CHECK(kusuoka_evaluate(family, d) == doctest::Approx(7.5));

    CHECK_THROWS_AS(kusuoka_evaluate(std::vector<KusuokaMixture>{}, d), DomainError);
    CHECK_THROWS_AS(RiskSpec::kusuoka({{0.2, 0.5}, {0.4, 0.4}}), DomainError);
    CHECK_THROWS_AS(RiskSpec::kusuoka({{1.0, 1.0}}), DomainError);
}

TEST_CASE("evaluate dispatch and literals") {
    CHECK(evaluate(RiskSpec::expectation(), two_point(1.0, 3.0)) == doctest::Approx(2.0));
    CHECK(evaluate(RiskSpec::avar(0.5), two_point(0.0, 10.0)) == doctest::Approx(10.0));
    CHECK(evaluate(RiskSpec::mean_deviation(0.5), two_point(0.0, 2.0)) == doctest::Approx(1.5));

    for (const auto& spec : all_specs()) {
        const auto back = parse_risk_literal(spec.to_string());
        CHECK(back.to_string() == spec.to_string());
    }
    CHECK(parse_risk_literal(" AVaR( 0.5 ) ").to_string() == "avar(0.5)");
    CHECK_THROWS_AS(parse_risk_literal("avar(abc)"), DomainError);
    CHECK_THROWS_AS(parse_risk_literal("entropic(1)"), DomainError);
    CHECK_THROWS_AS(parse_risk_literal("avar(1)"), DomainError);

    CHECK(RiskSpec::avar(0.5).density_cap() == doctest::Approx(2.0));
    CHECK(RiskSpec::expectation().density_cap() == 1.0);
}

TEST_CASE("property: primal and dual agree, densities are feasible") {
    fixtures::Rng rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const auto d = fixtures::random_distribution(rng, 16);
        const double alpha = 0.99 * unit(rng);
        const double kappa = 0.5 * unit(rng);

        const auto av = avar_dual(alpha, d);
        CHECK(std::abs(av.value - avar_primal(alpha, d)) < 1e-9);
        CHECK(std::abs(av.value - avar_rockafellar_uryasev(alpha, d)) < 1e-9);
        double mass = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            CHECK(av.argmax.weights[k] >= 0.0);
            CHECK(av.argmax.weights[k] <= 1.0 / (1.0 - alpha) + 1e-12);
            mass += av.argmax.weights[k] * d.atoms()[k].prob;
        }
        CHECK(std::abs(mass - 1.0) < 1e-9);

        const auto md = mean_deviation_dual(kappa, d);
        CHECK(std::abs(md.value - mean_deviation_primal(kappa, d)) < 1e-9);
        mass = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            CHECK(std::abs(md.h[k]) <= kappa);
            CHECK(md.argmax.weights[k] >= -1e-15);
            mass += md.argmax.weights[k] * d.atoms()[k].prob;
        }
        CHECK(std::abs(mass - 1.0) < 1e-9);
    }
}

TEST_CASE("property: coherence axioms") {
    fixtures::Rng rng(12);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    std::uniform_real_distribution<double> bump(0.0, 3.0);
    const auto specs = all_specs();
    for (int i = 0; i < 100; ++i) {
        const auto x = fixtures::random_distribution(rng, 8);
        std::vector<double> yv(x.size());
        std::vector<double> up(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            yv[k] = shift(rng);
            up[k] = x.atoms()[k].value + bump(rng);
        }
        const auto y = x.with_values(yv);
        const auto x_up = x.with_values(up);
        const double c = shift(rng);
        for (const auto& spec : specs) {
            const double rx = evaluate(spec, x);
            const double ry = evaluate(spec, y);
            for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                std::vector<double> mix(x.size());
                for (std::size_t k = 0; k < x.size(); ++k)
                    mix[k] = lam * x.atoms()[k].value + (1.0 - lam) * yv[k];
                CHECK(evaluate(spec, x.with_values(mix)) <= lam * rx + (1.0 - lam) * ry + 1e-9);
            }
            CHECK(rx <= evaluate(spec, x_up) + 1e-9);
            std::vector<double> tr(x.size());
            for (std::size_t k = 0; k < x.size(); ++k)
                tr[k] = x.atoms()[k].value + c;
            CHECK(std::abs(evaluate(spec, x.with_values(tr)) - (rx + c)) < 1e-9);
            for (double b : {0.0, 0.5, 2.0}) {
                std::vector<double> sc(x.size());
                for (std::size_t k = 0; k < x.size(); ++k)
                    sc[k] = b * x.atoms()[k].value;
                CHECK(std::abs(evaluate(spec, x.with_values(sc)) - b * rx) < 1e-9);
            }
            CHECK(rx >= x.mean() - 1e-9);
        }
    }
}

TEST_CASE("property: level monotonicity, endpoints, splitting, order invariance") {
    fixtures::Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const auto d = fixtures::random_distribution(rng, 12);
        double prev = -INFINITY;
        for (int k = 0; k < 20; ++k) {
            const double v = avar_primal(0.05 * k, d);
            CHECK(prev <= v + 1e-12);
            prev = v;
        }
        CHECK(std::abs(avar_primal(0.0, d) - d.mean()) < 1e-9);
        const double pmax = d.merged().atoms().back().prob;
        for (double a : {1.0 - pmax, 1.0 - 0.5 * pmax})
            if (a < 1.0)
                CHECK(std::abs(avar_primal(a, d) - d.max_value()) < 1e-9);

        std::vector<KusuokaMixture> point{{{{0.3, 1.0}}}};
        CHECK(kusuoka_evaluate(point, d) == avar_primal(0.3, d));

        // split atom 0 in two halves and reverse the atom order
        std::vector<Atom> split = d.atoms();
        split[0].prob /= 2.0;
        split.push_back(split[0]);
        std::reverse(split.begin(), split.end());
        const DiscreteDistribution d2(split);
        for (const auto& spec : all_specs())
            CHECK(std::abs(evaluate(spec, d) - evaluate(spec, d2)) < 1e-12);
        for (double p : {0.1, 0.5, 0.9, 1.0})
            CHECK(value_at_risk(p, d) == value_at_risk(p, d2));
    }
}
