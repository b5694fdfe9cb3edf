#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mobcost/costs.hpp"
#include "mobcost/graph.hpp"
#include "mobcost/mobility.hpp"
#include "mobcost/pipeline.hpp"

namespace mobcost {

/// Where the home agent of the composite network sits.
enum class HomePlacement {
    Shared,  ///< an extra core node linked to both networks' gateway (ha) nodes
    A,       ///< network A's ha node
    B,       ///< network B's ha node
};

enum class ChoiceForm {
    NormalizedExponential,  ///< (nu tau) exp(-nu tau) e, peak 1 at nu tau = 1
    Literal,                ///< (nu tau) exp(nu tau), clamped to [0,1]
};

/// Two overlapping access networks. Larger nu pulls the MN toward network A:
/// every coupling pair (a, b) gets handover rate nu for b -> a and 1/nu for
/// a -> b.
struct CompositeScenario {
    NetworkGraph net_a;
    NetworkGraph net_b;
    RateMatrix rates_a;
    RateMatrix rates_b;
    double ratio_a = 1.0;  ///< cost/QoS multiplier on network A link weights
    double ratio_b = 1.0;
    std::vector<std::pair<std::size_t, std::size_t>> couplings;  ///< (node in A, node in B)
    std::optional<double> coupling_weight;  ///< default: mean of the scaled average weights
    HomePlacement home = HomePlacement::Shared;
    double mu = 1.0;
    std::optional<double> tau;  ///< default: 1/lambda of the composite at nu = 1

    void validate() const;
};

struct Composite {
    NetworkGraph graph;
    RateMatrix rates;
    std::size_t a_offset = 0;
    std::size_t b_offset = 0;
};

Composite compose(const CompositeScenario& s, double nu);

/// Stationary probability mass on network A's nodes.
double mass_on_a(const CompositeScenario& s, const Composite& c, const StationaryDistribution& b);

struct ChoiceProbability {
    double value = 0.0;
    bool clamped = false;
};

ChoiceProbability choice_probability(double nu, double tau, ChoiceForm form = ChoiceForm::NormalizedExponential);

struct VhoPoint {
    double nu = 0.0;
    CostBreakdown cost;
    double mass_a = 0.0;
    ChoiceProbability p_choose_a;
    double p_e1_given_e2 = 0.0;
    double p_e3_given_e4 = 0.0;
};

struct VhoResult {
    Strategy strategy = Strategy::Centralized;
    double tau = 0.0;
    std::vector<VhoPoint> points;
    double nu_star = 0.0;
    ChoiceProbability p_choose_a;  ///< at nu_star
    double p_e1_given_e2 = 0.0;    ///< at nu_star
    double p_e3_given_e4 = 0.0;    ///< at nu_star
};

struct VhoOptions {
    AnalysisOptions analysis;
    TrackingSettings tracking;
    CostOptions cost;
    ChoiceForm form = ChoiceForm::NormalizedExponential;
};

/// Full pipeline per nu; nu_star is the argmin (ties to the smaller nu).
VhoResult sweep_nu(const CompositeScenario& s, Strategy strategy, const std::vector<double>& grid,
                   const CostConstants& c, const CostClassWeights& w, const VhoOptions& opts = {});

}  // namespace mobcost
