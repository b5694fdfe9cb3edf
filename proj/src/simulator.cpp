#include "mobcost/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>

#include "mobcost/error.hpp"

namespace mobcost {
namespace {

constexpr const char* kModule = "simulator";

// 53-bit uniforms and inverse-CDF exponentials keep the stream identical
// across standard library implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::uint32_t salt) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
        engine_.seed(seq);
    }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 engine_;
};

struct Charge {
    double sig = 0.0, proc = 0.0, air = 0.0;
};

struct Link {
    std::size_t from, to;
};

// Sums over one batch of post-warmup events.
struct Batch {
    std::uint64_t events = 0, handovers = 0, calls = 0;
    std::uint64_t handovers_at_H = 0, calls_at_0 = 0, chain_sum = 0;
    double time = 0.0, depth_time = 0.0;
    double gT_rate = 0.0, gT_plain = 0.0, gH_plain = 0.0, cross_rate = 0.0;
    std::vector<double> node_time;
    std::vector<Charge> cost;
};

Estimate ratio_estimate(const std::vector<Batch>& batches, auto num, auto den) {
    double sn = 0.0, sd = 0.0;
    std::vector<double> values;
    for (const auto& b : batches) {
        const double n = num(b), d = den(b);
        sn += n;
        sd += d;
        if (d > 0.0) values.push_back(n / d);
    }
    Estimate e;
    e.mean = sd > 0.0 ? sn / sd : 0.0;
    if (values.size() >= 2) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() - 1);
        e.se = std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::uint64_t SimConfig::warmup_events() const { return warmup ? *warmup : horizon / 100; }

void SimConfig::validate() const {
    if (horizon == 0 || warmup_events() >= horizon) throw Error(kModule, "horizon must exceed warmup");
    if (batches < 2 || batches > horizon - warmup_events())
        throw Error(kModule, "batch count must be in [2, post-warmup events]");
    if (strategies.empty()) throw Error(kModule, "no strategy configured");
    constants.validate();
    weights.validate();
    if (w && !(*w > 0.0)) throw Error(kModule, "normalizing weight must be positive");
    if (!(P_M >= 0.0 && P_M <= 1.0)) throw Error(kModule, "P_M must lie in [0,1]");
    for (Strategy s : strategies) {
        if (is_tracking(s) && !tracking) throw Error(kModule, to_string(s) + " needs a tracking policy");
        if (is_cellular_family(s) && !plan) throw Error(kModule, to_string(s) + " needs a paging plan");
    }
    if (tracking && !(tracking->p_loop >= 0.0 && tracking->p_loop < 1.0))
        throw Error(kModule, "p_loop must lie in [0,1)");
}

SimReport run(const NetworkGraph& g, const RateMatrix& r, double mu, const SimConfig& cfg) {
    cfg.validate();
    if (g.size() != r.size()) throw Error(kModule, "rate matrix size does not match the graph");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw Error(kModule, "mu must be finite and >= 0");
    const std::size_t n = g.size();
    const DistanceMatrix dist = all_pairs_distances(g);
    const auto hops = shortest_path_hops(g, dist);
    const RootedTree tree = shortest_path_tree(g, dist);
    const double w = cfg.w ? *cfg.w : average_weight(g);
    const std::size_t ha = g.ha();
    const CostConstants& c = cfg.constants;

    Matrix D = dist.dist / w;
    Matrix jd = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::vector<int>> jh(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t x = tree.lowest_common_ancestor(i, j);
            jd(i, j) = (dist(ha, j) - dist(ha, x)) / w;
            jh[i][j] = static_cast<int>(tree.depth[j]) - static_cast<int>(tree.depth[x]);
        }

    std::vector<double> q(n);
    std::vector<std::vector<double>> cumulative(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = r.row_sum(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += q[i] > 0.0 ? r.rate(i, j) / q[i] : 0.0;
            cumulative[i][j] = acc;
        }
    }

    std::vector<std::size_t> head(n, ha);
    std::vector<long> area(n, -1);
    double nC = 0.0, nd = 0.0;
    if (cfg.plan) {
        if (cfg.plan->area_of.size() != n) throw Error(kModule, "paging plan size does not match the graph");
        for (std::size_t i = 0; i < n; ++i)
            if (cfg.plan->area_of[i]) {
                area[i] = static_cast<long>(*cfg.plan->area_of[i]);
                head[i] = cfg.plan->heads.at(*cfg.plan->area_of[i]);
            }
        nC = cfg.plan->n_C;
        nd = static_cast<double>(cfg.plan->n_d);
    }

    const std::size_t H = cfg.tracking ? cfg.tracking->H : 0;
    const double p_loop = cfg.tracking ? cfg.tracking->p_loop : 0.0;
    const double PM = cfg.P_M;
    const std::size_t k_strat = cfg.strategies.size();

    std::size_t pos = n;
    for (std::size_t i = 0; i < n && pos == n; ++i)
        if (g.is_map(i) && q[i] > 0.0) pos = i;
    if (pos == n) pos = g.maps().front();

    // Tracking chain: links since the last registration, current anchor and
    // the handover that produced the registered junction.
    std::vector<Link> links;
    std::size_t anchor = pos;
    Link reg{pos, pos};

    Stream main(cfg.seed, 0);
    Stream loop(cfg.seed, 1);

    const std::uint64_t warm = cfg.warmup_events();
    const std::uint64_t post = cfg.horizon - warm;
    std::vector<Batch> batches(cfg.batches);
    for (auto& b : batches) {
        b.node_time.assign(n, 0.0);
        b.cost.assign(k_strat, Charge{});
    }

    SimReport rep;
    rep.seed = cfg.seed;
    rep.w = w;
    if (cfg.tracking) rep.chain_histogram.assign(H + 1, 0);
    double now = 0.0;
    std::vector<Charge> charges(k_strat);

    for (std::uint64_t e = 0; e < cfg.horizon; ++e) {
        const double total_rate = q[pos] + mu;
        if (!(total_rate > 0.0)) throw Error(kModule, "MAP " + std::to_string(pos) + " has no outgoing events");
        const double dt = main.exponential(total_rate);
        now += dt;
        const bool counted = e >= warm;
        Batch* batch = counted ? &batches[(e - warm) * cfg.batches / post] : nullptr;
        if (batch) {
            batch->events++;
            batch->time += dt;
            batch->node_time[pos] += dt;
            batch->depth_time += dt * D(ha, pos);
        }

        const std::size_t s = links.size();
        if (main.uniform() * total_rate < q[pos]) {
            const double u = main.uniform();
            std::size_t j = 0;
            while (j + 1 < n && cumulative[pos][j] <= u) ++j;
            while (r.rate(pos, j) == 0.0 && j > 0) --j;
            const std::size_t i = pos;
            const bool crossing = cfg.plan && area[i] != area[j];
            const double upd = cfg.cost_options.update_on_crossing ? (crossing ? 1.0 : 0.0) : (crossing ? 0.0 : 1.0);
            const bool tracking_step = s < H;
            const bool pop = tracking_step && p_loop > 0.0 && loop.uniform() < p_loop;
            const double hd = D(j, head[j]);
            const double hh = hops[j][head[j]];

            for (std::size_t k = 0; k < k_strat; ++k) {
                Charge& ch = charges[k];
                switch (cfg.strategies[k]) {
                    case Strategy::Centralized:
                        ch = {D(j, ha) * c.c_u, c.c_r + (hops[j][ha] - 1) * c.c_f + c.c_m, c.c_au};
                        break;
                    case Strategy::Hierarchical:
                        ch = {jd(i, j) * c.c_u, c.c_r + (jh[i][j] - 1) * c.c_f + c.c_m, c.c_au};
                        break;
                    case Strategy::WirelessTracking:
                        if (tracking_step) ch = {0.0, c.c_r + c.c_m, 2.0 * c.c_au};
                        else ch = {jd(i, j) * c.c_u, c.c_r + (jh[i][j] - 1) * c.c_f + c.c_m, c.c_au};
                        break;
                    case Strategy::WiredTracking:
                        ch = {(tracking_step ? D(i, j) : jd(i, j)) * c.c_u, c.c_r + (hops[i][j] - 1) * c.c_f + c.c_m,
                              c.c_au};
                        break;
                    case Strategy::Cellular:
                        ch = {upd * jd(i, j) * c.c_u, upd * (c.c_r + jh[i][j] * c.c_f + c.c_m), upd * c.c_au};
                        break;
                    case Strategy::HPage:
                        ch = {upd * hd * c.c_u, upd * c.c_r + hh * c.c_f + c.c_m, upd * c.c_au};
                        break;
                    case Strategy::Manet:
                        ch = {upd * jd(i, j) * c.c_u, upd * c.c_r + jh[i][j] * c.c_f + c.c_m,
                              upd * (hh - 1.0) * c.c_au};
                        break;
                }
            }
            if (batch) {
                batch->handovers++;
                if (cfg.tracking) {
                    if (s == H) batch->handovers_at_H++;
                    if (tracking_step) rep.counts.tracking_handovers++;
                    else rep.counts.normal_handovers++;
                } else {
                    rep.counts.normal_handovers++;
                }
                if (crossing) rep.counts.crossings++;
                batch->gT_rate += D(i, j) / q[i];
                batch->gT_plain += D(i, j);
                batch->gH_plain += jd(i, j);
                if (crossing) batch->cross_rate += 1.0 / q[i];
            }
            if (tracking_step) {
                if (!pop) {
                    links.push_back({i, j});
                } else if (!links.empty()) {
                    links.pop_back();
                } else {
                    anchor = j;
                }
            } else {
                links.clear();
                anchor = j;
                reg = {i, j};
            }
            if (batch && cfg.record_trace) rep.trace.push_back({now, false, i, j, charges[0].sig, charges[0].proc, charges[0].air});
            pos = j;
        } else {
            const std::size_t cur = pos;
            const std::size_t hc = head[cur];
            const double dA = D(ha, cur), dC = D(cur, hc);
            const double hA = hops[ha][cur], hC = hops[cur][hc];
            double link_dist = 0.0, link_proc = 0.0;
            for (const Link& l : links) {
                link_dist += D(l.from, l.to);
                link_proc += (hops[l.from][l.to] - 1) * c.c_f + c.c_rc;
            }
            const Link last = s > 0 ? links.back() : reg;
            const double reroute = s > 0 ? jd(last.from, last.to) * c.c_u : 0.0;
            const double track_proc =
                c.c_ec + (hops[ha][anchor] - 1) * c.c_f +
                (s == 0 ? c.c_dc : link_proc + c.c_dc + (jh[last.from][last.to] - 1) * c.c_f + c.c_m);

            for (std::size_t k = 0; k < k_strat; ++k) {
                Charge& ch = charges[k];
                switch (cfg.strategies[k]) {
                    case Strategy::Centralized:
                        ch = {dA * c.c_d, c.c_ec + (hA - 2) * c.c_f + c.c_dc, c.c_ad};
                        break;
                    case Strategy::Hierarchical:
                        ch = {dA * c.c_d, c.c_ec + (hA - 2) * c.c_f + c.c_rc + c.c_dc, c.c_ad};
                        break;
                    case Strategy::WirelessTracking:
                        ch = {jd(reg.from, reg.to) * c.c_d + link_dist * c.c_d + reroute, track_proc, c.c_ad};
                        break;
                    case Strategy::WiredTracking:
                        ch = {D(ha, anchor) * c.c_d + link_dist * c.c_d + reroute, track_proc, c.c_ad};
                        break;
                    case Strategy::Cellular:
                        ch = {((dA - dC) + nC * dC) * c.c_d + dC * c.c_u,
                              c.c_ec + (hA - hC - 1) * c.c_f + c.c_rc + (hC - 1) * nC * c.c_f + nC * c.c_dc,
                              nC * c.c_ad + c.c_au};
                        break;
                    case Strategy::HPage:
                        ch = {((dA - dC) * nd + nC * dC) * c.c_d + dC * c.c_u,
                              c.c_ec + (hA - hC - 1) * nd * c.c_f + c.c_rc + (hC - 1) * nC * c.c_f + c.c_dc,
                              nC * c.c_ad + c.c_au};
                        break;
                    case Strategy::Manet:
                        ch = {((dA - dC + 1.0) + PM * nC * dC) * c.c_d + dC * c.c_u,
                              c.c_ec + (hA - hC) * c.c_f + c.c_rc + PM * hC * nC * c.c_f + c.c_dc,
                              PM * nC * dC * c.c_ad + c.c_au};
                        break;
                }
            }
            if (batch) {
                batch->calls++;
                if (s == 0) batch->calls_at_0++;
                batch->chain_sum += s;
                if (cfg.tracking) rep.chain_histogram[s]++;
            }
            if (s > 0) {
                reg = last;
                links.clear();
            }
            anchor = cur;
            if (batch && cfg.record_trace) rep.trace.push_back({now, true, cur, cur, charges[0].sig, charges[0].proc, charges[0].air});
        }
        if (batch)
            for (std::size_t k = 0; k < k_strat; ++k) {
                batch->cost[k].sig += charges[k].sig;
                batch->cost[k].proc += charges[k].proc;
                batch->cost[k].air += charges[k].air;
            }
    }

    for (const auto& b : batches) {
        rep.counts.events += b.events;
        rep.counts.handovers += b.handovers;
        rep.counts.calls += b.calls;
        rep.total_time += b.time;
    }
    auto time = [](const Batch& b) { return b.time; };
    auto events = [](const Batch& b) { return static_cast<double>(b.events); };
    auto handovers = [](const Batch& b) { return static_cast<double>(b.handovers); };
    auto calls = [](const Batch& b) { return static_cast<double>(b.calls); };

    for (std::size_t i = 0; i < n; ++i)
        rep.occupancy.push_back(ratio_estimate(batches, [i](const Batch& b) { return b.node_time[i]; }, time));
    rep.lambda = ratio_estimate(batches, handovers, time);
    rep.rho = ratio_estimate(batches, handovers, events);
    rep.m = ratio_estimate(batches, [](const Batch& b) { return b.depth_time; }, time);
    rep.g_T = ratio_estimate(batches, [](const Batch& b) { return b.gT_rate; }, time);
    rep.g_T_per_handover = ratio_estimate(batches, [](const Batch& b) { return b.gT_plain; }, handovers);
    rep.g_H_per_handover = ratio_estimate(batches, [](const Batch& b) { return b.gH_plain; }, handovers);
    if (cfg.plan) rep.P_cell = ratio_estimate(batches, [](const Batch& b) { return b.cross_rate; }, time);
    if (cfg.tracking) {
        rep.P_H = ratio_estimate(batches, [](const Batch& b) { return static_cast<double>(b.handovers_at_H); }, handovers);
        rep.P_0 = ratio_estimate(batches, [](const Batch& b) { return static_cast<double>(b.calls_at_0); }, calls);
        rep.Mh_r = ratio_estimate(batches, [](const Batch& b) { return static_cast<double>(b.chain_sum); }, calls);
    }
    const CostClassWeights& cw = cfg.weights;
    for (std::size_t k = 0; k < k_strat; ++k) {
        StrategyEstimate se;
        se.strategy = cfg.strategies[k];
        se.signalling = ratio_estimate(batches, [k](const Batch& b) { return b.cost[k].sig; }, events);
        se.processing = ratio_estimate(batches, [k](const Batch& b) { return b.cost[k].proc; }, events);
        se.air = ratio_estimate(batches, [k](const Batch& b) { return b.cost[k].air; }, events);
        se.total = ratio_estimate(
            batches,
            [k, &cw](const Batch& b) {
                return cw.w_sig * b.cost[k].sig + cw.w_proc * b.cost[k].proc + cw.w_air * b.cost[k].air;
            },
            events);
        rep.costs.push_back(se);
    }
    return rep;
}

std::vector<SimReport> run_many(const std::vector<SimJob>& jobs) {
    std::vector<std::future<SimReport>> futures;
    futures.reserve(jobs.size());
    for (const auto& job : jobs)
        futures.push_back(std::async(std::launch::async, [&job] { return run(job.graph, job.rates, job.mu, job.config); }));
    std::vector<SimReport> out;
    out.reserve(jobs.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

std::vector<NamedEstimate> estimate(const SimReport& report, Quantity q) {
    switch (q) {
        case Quantity::Occupancy: {
            std::vector<NamedEstimate> out;
            for (std::size_t i = 0; i < report.occupancy.size(); ++i)
                out.push_back({"b" + std::to_string(i), report.occupancy[i]});
            return out;
        }
        case Quantity::TrackingDistance:
            return {{"g_T", report.g_T}};
        case Quantity::CrossingProbability:
            if (!report.P_cell) throw Error(kModule, "P_cell needs a run with a paging plan");
            return {{"P_cell", *report.P_cell}};
        case Quantity::ChainStatistics:
            if (!report.P_H) throw Error(kModule, "chain statistics need a run with a tracking policy");
            return {{"P_H", *report.P_H}, {"P_0", *report.P_0}, {"Mh_r", *report.Mh_r}};
    }
    return {};
}

std::string report_csv(const SimReport& rep) {
    std::ostringstream out;
    out << "# counts\nquantity,value\n";
    out << "events," << rep.counts.events << "\nhandovers," << rep.counts.handovers << "\nnormal_handovers,"
        << rep.counts.normal_handovers << "\ntracking_handovers," << rep.counts.tracking_handovers << "\ncalls,"
        << rep.counts.calls << "\ncrossings," << rep.counts.crossings << "\n\n";
    out << "# occupancy\nnode,mean,se\n";
    for (std::size_t i = 0; i < rep.occupancy.size(); ++i)
        out << i << ',' << num(rep.occupancy[i].mean) << ',' << num(rep.occupancy[i].se) << '\n';
    out << "\n# estimates\nquantity,mean,se\n";
    auto row = [&](const char* name, const Estimate& e) {
        out << name << ',' << num(e.mean) << ',' << num(e.se) << '\n';
    };
    row("lambda", rep.lambda);
    row("rho", rep.rho);
    row("m", rep.m);
    row("g_T", rep.g_T);
    row("g_T_per_handover", rep.g_T_per_handover);
    row("g_H_per_handover", rep.g_H_per_handover);
    if (rep.P_cell) row("P_cell", *rep.P_cell);
    if (rep.P_H) {
        row("P_H", *rep.P_H);
        row("P_0", *rep.P_0);
        row("Mh_r", *rep.Mh_r);
    }
    out << "\n# costs\nstrategy,signalling,signalling_se,processing,processing_se,air,air_se,total,total_se\n";
    for (const auto& s : rep.costs)
        out << to_string(s.strategy) << ',' << num(s.signalling.mean) << ',' << num(s.signalling.se) << ','
            << num(s.processing.mean) << ',' << num(s.processing.se) << ',' << num(s.air.mean) << ','
            << num(s.air.se) << ',' << num(s.total.mean) << ',' << num(s.total.se) << '\n';
    if (!rep.chain_histogram.empty()) {
        out << "\n# chain_length_at_calls\nlength,count\n";
        for (std::size_t s = 0; s < rep.chain_histogram.size(); ++s) out << s << ',' << rep.chain_histogram[s] << '\n';
    }
    return out.str();
}

std::string report_summary(const SimReport& rep) {
    std::ostringstream out;
    out << "rng=" << rep.rng << "\nseed=" << rep.seed << "\nevents=" << rep.counts.events
        << "\nhandovers=" << rep.counts.handovers << "\ncalls=" << rep.counts.calls
        << "\ncrossings=" << rep.counts.crossings << "\ntotal_time=" << num(rep.total_time) << "\nw=" << num(rep.w)
        << '\n';
    auto kv = [&](const std::string& name, const Estimate& e) {
        out << name << '=' << num(e.mean) << '\n' << name << "_se=" << num(e.se) << '\n';
    };
    kv("lambda", rep.lambda);
    kv("rho", rep.rho);
    kv("m", rep.m);
    kv("g_T", rep.g_T);
    if (rep.P_cell) kv("P_cell", *rep.P_cell);
    if (rep.P_H) {
        kv("P_H", *rep.P_H);
        kv("P_0", *rep.P_0);
        kv("Mh_r", *rep.Mh_r);
    }
    for (const auto& s : rep.costs) kv("total." + to_string(s.strategy), s.total);
    return out.str();
}

std::string trace_csv(const SimReport& rep) {
    std::ostringstream out;
    out << "time,event,from,to,cost_sig,cost_proc,cost_air\n";
    for (const auto& t : rep.trace)
        out << num(t.time) << ',' << (t.call ? "call" : "handover") << ',' << t.from << ',' << t.to << ','
            << num(t.sig) << ',' << num(t.proc) << ',' << num(t.air) << '\n';
    return out.str();
}

}  // namespace mobcost
