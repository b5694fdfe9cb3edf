#include "mobcost/vho.hpp"

#include <cmath>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "vertical-handover";

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(kModule, std::string(what) + " must be positive and finite");
}

}  // namespace

void CompositeScenario::validate() const {
    require_positive(ratio_a, "ratio_a");
    require_positive(ratio_b, "ratio_b");
    if (mu < 0.0 || !std::isfinite(mu)) throw Error(kModule, "mu must be finite and >= 0");
    if (tau) require_positive(*tau, "tau");
    if (coupling_weight) require_positive(*coupling_weight, "coupling weight");
    if (couplings.empty()) throw Error(kModule, "at least one coupling pair is required");
    if (net_a.size() != rates_a.size() || net_b.size() != rates_b.size())
        throw Error(kModule, "rate matrix size does not match its network");
    for (const auto& [a, b] : couplings) {
        if (a >= net_a.size() || b >= net_b.size()) throw Error(kModule, "coupling index out of range");
        if (!net_a.is_map(a) || !net_b.is_map(b))
            throw Error(kModule, "coupling (" + std::to_string(a) + "," + std::to_string(b) + ") references a non-MAP node");
    }
    all_pairs_distances(net_a);
    all_pairs_distances(net_b);
}

Composite compose(const CompositeScenario& s, double nu) {
    require_positive(nu, "nu");
    s.validate();
    const std::size_t na = s.net_a.size();
    const std::size_t nb = s.net_b.size();
    const bool shared = s.home == HomePlacement::Shared;
    const std::size_t n = na + nb + (shared ? 1 : 0);

    const double avg_a = s.ratio_a * average_weight(s.net_a);
    const double avg_b = s.ratio_b * average_weight(s.net_b);
    const double link = s.coupling_weight ? *s.coupling_weight : 0.5 * (avg_a + avg_b);

    Matrix weights = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Matrix rates = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto ia = static_cast<Eigen::Index>(na);
    const auto ib = static_cast<Eigen::Index>(nb);
    weights.block(0, 0, ia, ia) = s.ratio_a * s.net_a.weights();
    weights.block(ia, ia, ib, ib) = s.ratio_b * s.net_b.weights();
    rates.block(0, 0, ia, ia) = s.rates_a.rates();
    rates.block(ia, ia, ib, ib) = s.rates_b.rates();

    for (const auto& [a, b] : s.couplings) {
        const auto i = static_cast<Eigen::Index>(a);
        const auto j = static_cast<Eigen::Index>(na + b);
        weights(i, j) = link;
        weights(j, i) = link;
        rates(j, i) += nu;
        rates(i, j) += 1.0 / nu;
    }

    std::vector<bool> is_map(n, false);
    for (std::size_t i = 0; i < na; ++i) is_map[i] = s.net_a.is_map(i);
    for (std::size_t i = 0; i < nb; ++i) is_map[na + i] = s.net_b.is_map(i);

    std::size_t ha = 0;
    switch (s.home) {
        case HomePlacement::A: ha = s.net_a.ha(); break;
        case HomePlacement::B: ha = na + s.net_b.ha(); break;
        case HomePlacement::Shared: {
            ha = na + nb;
            const auto core = static_cast<Eigen::Index>(ha);
            const auto ga = static_cast<Eigen::Index>(s.net_a.ha());
            const auto gb = static_cast<Eigen::Index>(na + s.net_b.ha());
            weights(core, ga) = weights(ga, core) = avg_a;
            weights(core, gb) = weights(gb, core) = avg_b;
            break;
        }
    }
    return Composite{NetworkGraph(std::move(weights), is_map, ha), RateMatrix(std::move(rates), std::move(is_map)), 0, na};
}

double mass_on_a(const CompositeScenario& s, const Composite& c, const StationaryDistribution& b) {
    double mass = 0.0;
    for (std::size_t i = 0; i < s.net_a.size(); ++i) mass += b[c.a_offset + i];
    return mass;
}

ChoiceProbability choice_probability(double nu, double tau, ChoiceForm form) {
    require_positive(nu, "nu");
    require_positive(tau, "tau");
    const double x = nu * tau;
    if (form == ChoiceForm::NormalizedExponential) return {x * std::exp(1.0 - x), false};
    const double raw = x * std::exp(x);
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

VhoResult sweep_nu(const CompositeScenario& s, Strategy strategy, const std::vector<double>& grid,
                   const CostConstants& c, const CostClassWeights& w, const VhoOptions& opts) {
    if (grid.empty()) throw Error(kModule, "nu grid is empty");
    for (double nu : grid) require_positive(nu, "nu grid value");

    VhoResult result;
    result.strategy = strategy;
    if (s.tau) {
        result.tau = *s.tau;
    } else {
        const Composite unit = compose(s, 1.0);
        const StationaryDistribution b = stationary_continuous(unit.rates);
        const double lambda = mobility_rates(unit.rates, b, s.mu).lambda;
        require_positive(lambda, "composite handover intensity");
        result.tau = 1.0 / lambda;
    }

    for (double nu : grid) {
        const Composite comp = compose(s, nu);
        const Analysis a = analyze(comp.graph, comp.rates, s.mu, opts.analysis);
        VhoPoint p;
        p.nu = nu;
        p.cost = evaluate(strategy, a, c, w, opts.tracking, opts.cost);
        p.mass_a = mass_on_a(s, comp, a.b);
        p.p_choose_a = choice_probability(nu, result.tau, opts.form);
        double e1 = 0.0;
        for (const auto& [ai, bi] : s.couplings) e1 += nu / (nu + s.rates_b.row_sum(bi));
        p.p_e1_given_e2 = e1 / static_cast<double>(s.couplings.size());
        p.p_e3_given_e4 = nu / (nu + s.mu);
        result.points.push_back(p);
    }

    const VhoPoint* best = &result.points.front();
    for (const auto& p : result.points)
        if (p.cost.total < best->cost.total || (p.cost.total == best->cost.total && p.nu < best->nu)) best = &p;
    result.nu_star = best->nu;
    result.p_choose_a = best->p_choose_a;
    result.p_e1_given_e2 = best->p_e1_given_e2;
    result.p_e3_given_e4 = best->p_e3_given_e4;
    return result;
}

}  // namespace mobcost
