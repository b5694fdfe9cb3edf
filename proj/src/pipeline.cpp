#include "mobcost/pipeline.hpp"

namespace mobcost {

StrategyInputs Analysis::inputs() const {
    StrategyInputs in;
    in.rho = rates.rho;
    in.m = params.m;
    in.g_H = params.g_H;
    in.g_T = params.g_T;
    in.paging = PagingInputs{plan.g_C, plan.n_C, static_cast<double>(plan.n_d), plan.P_cell};
    in.P_M = P_M;
    return in;
}

Analysis analyze(const NetworkGraph& g, const RateMatrix& r, double mu, const AnalysisOptions& opts) {
    DistanceMatrix dist = all_pairs_distances(g);
    TransitionMatrix trans = to_transition_matrix(r);
    StationaryDistribution b = stationary_continuous(r);
    MobilityRates rates = mobility_rates(r, b, mu);

    DeriveOptions derive = opts.derive;
    if (opts.g_H_measured && !derive.overrides.g_H) {
        const double w = average_weight(g, derive.averaging);
        derive.overrides.g_H = measured_junction_distance(g, dist, trans, b, w);
    }
    DerivedParams params = derive_params(g, dist, trans, b, derive);
    if (opts.g_H_measured && !opts.derive.overrides.g_H) params.g_H_source = ParamSource::Measured;

    PagingPlan plan = opts.plan ? plan_from_assignment(g, dist, b, trans, opts.plan->area_of, opts.plan->heads, params.w)
                                : plan_areas(g, dist, b, trans, opts.target_areas, params.w);
    Analysis a{std::move(dist), std::move(trans), std::move(b), rates, params, std::move(plan), opts.P_M};
    return a;
}

CostBreakdown evaluate(Strategy s, const Analysis& a, const CostConstants& c, const CostClassWeights& w,
                       const TrackingSettings& tracking, const CostOptions& opts) {
    StrategyInputs in = a.inputs();
    if (is_tracking(s)) {
        if (tracking.fixed_H) {
            in.chain = chain_statistics({*tracking.fixed_H, tracking.p_loop}, in.rho);
        } else {
            return optimize_H(s, in, c, w, tracking.H_max, tracking.p_loop, opts).cost;
        }
    }
    return cost(s, in, c, w, opts);
}

ChainRefresh chain_refresh(const TrackingSettings& tracking, const CostOptions& opts) {
    return [tracking, opts](Strategy s, const StrategyInputs& in, const CostConstants& c,
                            const CostClassWeights& w) -> ChainStatistics {
        if (tracking.fixed_H) return chain_statistics({*tracking.fixed_H, tracking.p_loop}, in.rho);
        return optimize_H(s, in, c, w, tracking.H_max, tracking.p_loop, opts).stats;
    };
}

}  // namespace mobcost
