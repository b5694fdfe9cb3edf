#include "mobcost/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mobcost/error.hpp"

namespace mobcost {
namespace fs = std::filesystem;

namespace {

constexpr const char* kModule = "cli-io";

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::optional<double> to_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    const char* begin = t.data();
    if (*begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::ifstream open(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, "cannot open file '" + path.string() + "'");
    return in;
}

std::vector<bool> map_flags(const ConfigFile& cfg, const std::string& key, std::size_t n, std::size_t ha) {
    std::vector<bool> flags(n, false);
    const auto text = cfg.get(key);
    if (!text) {
        for (std::size_t i = 0; i < n; ++i) flags[i] = i != ha;
        if (n == 1) flags[0] = true;
        return flags;
    }
    if (lower(*text) == "all") return std::vector<bool>(n, true);
    for (const auto& item : split(*text, ',')) {
        const auto v = to_double(item);
        if (!v || *v < 0 || *v != std::floor(*v) || *v >= static_cast<double>(n))
            throw Error(kModule, cfg.path().string() + ": key '" + key + "': invalid node index '" + item + "'");
        flags[static_cast<std::size_t>(*v)] = true;
    }
    return flags;
}

std::size_t index_key(const ConfigFile& cfg, const std::string& key, std::size_t fallback) {
    const auto v = cfg.count(key);
    return v ? static_cast<std::size_t>(*v) : fallback;
}

}  // namespace

Matrix read_matrix_csv(const fs::path& path) {
    auto in = open(path);
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        row_lines.push_back(line_no);
        std::vector<double> row;
        for (const auto& cell : split(t, ',')) {
            const auto v = to_double(cell);
            if (!v || !std::isfinite(*v) || *v < 0.0)
                throw Error(kModule, path.string() + ":" + std::to_string(line_no) + ": invalid entry '" + cell +
                                         "' (expected a non-negative number)");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw Error(kModule, path.string() + ": matrix is empty");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw Error(kModule, path.string() + ":" + std::to_string(row_lines[i]) + ": row has " +
                                     std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

std::vector<std::pair<std::size_t, std::size_t>> read_pairs_csv(const fs::path& path) {
    auto in = open(path);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = split(t, ',');
        const auto a = cells.size() == 2 ? to_double(cells[0]) : std::nullopt;
        const auto b = cells.size() == 2 ? to_double(cells[1]) : std::nullopt;
        if (first && cells.size() == 2 && !a) {
            first = false;
            continue;
        }
        first = false;
        const double x = a.value_or(-1.0), y = b.value_or(-1.0);
        if (x < 0 || y < 0 || x != std::floor(x) || y != std::floor(y))
            throw Error(kModule, path.string() + ":" + std::to_string(line_no) + ": expected two node indices");
        out.emplace_back(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    }
    return out;
}

const std::vector<std::string>& ConfigFile::known_keys() {
    static const std::vector<std::string> keys{
        "network.matrix", "network.rates", "network.ha", "network.maps", "mu",
        "graph.averaging", "derive.delta_mode", "param.m", "param.g_t", "param.delta", "param.g_h",
        "costs.preset", "c_u", "c_d", "c_r", "c_f", "c_m", "c_ec", "c_rc", "c_dc", "c_au", "c_ad",
        "weights.sig", "weights.proc", "weights.air",
        "tracking.h_max", "tracking.p_loop", "tracking.h",
        "cellular.target_areas", "cellular.update_on_crossing", "cellular.plan", "cellular.heads",
        "manet.p_m",
        "vho.net_b.matrix", "vho.net_b.rates", "vho.net_b.ha", "vho.net_b.maps", "vho.couplings",
        "vho.ratio_a", "vho.ratio_b", "vho.tau", "vho.nu_grid", "vho.coupling_weight", "vho.home",
        "vho.choice_form", "vho.strategy",
        "sim.seed", "sim.horizon", "sim.warmup", "sim.batches", "sim.trace", "sim.strategies"};
    return keys;
}

ConfigFile ConfigFile::parse(const std::string& text, fs::path base_dir, fs::path name) {
    ConfigFile cfg;
    cfg.dir_ = std::move(base_dir);
    cfg.path_ = std::move(name);
    const auto& keys = known_keys();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        const std::string where = cfg.path_.string() + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw Error(kModule, where + ": expected 'key = value'");
        const std::string key = lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw Error(kModule, where + ": unknown key '" + key + "'");
        if (value.empty()) throw Error(kModule, where + ": key '" + key + "' has no value");
        if (!cfg.values_.emplace(key, value).second) throw Error(kModule, where + ": duplicate key '" + key + "'");
    }
    return cfg;
}

ConfigFile ConfigFile::load(const fs::path& path) {
    auto in = open(path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path.parent_path(), path);
}

const std::string& ConfigFile::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(kModule, path_.string() + ": missing required key '" + key + "'");
    return it->second;
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> ConfigFile::number(const std::string& key) const {
    const auto text = get(key);
    if (!text) return std::nullopt;
    const auto v = to_double(*text);
    if (!v || !std::isfinite(*v))
        throw Error(kModule, path_.string() + ": key '" + key + "': '" + *text + "' is not a number");
    return v;
}

std::optional<std::uint64_t> ConfigFile::count(const std::string& key) const {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (*v < 0 || *v != std::floor(*v) || *v > 1e18)
        throw Error(kModule, path_.string() + ": key '" + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(*v);
}

std::optional<bool> ConfigFile::flag(const std::string& key) const {
    const auto text = get(key);
    if (!text) return std::nullopt;
    const std::string t = lower(*text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw Error(kModule, path_.string() + ": key '" + key + "' must be true or false");
}

std::optional<fs::path> ConfigFile::file(const std::string& key) const {
    const auto text = get(key);
    if (!text) return std::nullopt;
    fs::path p(*text);
    return p.is_absolute() ? p : dir_ / p;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        const auto v = to_double(item);
        if (!v || !std::isfinite(*v)) throw Error(kModule, "invalid number '" + item + "' in list '" + text + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw Error(kModule, "empty list");
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text);
    const auto parts = split(text, ':');
    const bool log = parts.size() == 4 && lower(parts[3]) == "log";
    if (parts.size() != 3 && !log) throw Error(kModule, "grid '" + text + "' must be lo:hi:steps or lo:hi:steps:log");
    const auto lo = to_double(parts[0]), hi = to_double(parts[1]), steps = to_double(parts[2]);
    if (!lo || !hi || !steps || *steps < 1 || *steps != std::floor(*steps))
        throw Error(kModule, "grid '" + text + "' must be lo:hi:steps with an integer step count");
    if (log && !(*lo > 0.0 && *hi > 0.0)) throw Error(kModule, "log grid '" + text + "' needs positive bounds");
    const auto k = static_cast<std::size_t>(*steps);
    std::vector<double> out;
    for (std::size_t i = 0; i < k; ++i) {
        const double f = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
        out.push_back(log ? std::exp(std::log(*lo) + f * (std::log(*hi) - std::log(*lo))) : *lo + f * (*hi - *lo));
    }
    return out;
}

std::vector<Strategy> parse_strategy_list(const std::string& text) {
    if (trim(text).empty()) return {kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<Strategy> out;
    for (const auto& name : split(text, ',')) out.push_back(parse_strategy(name));
    return out;
}

Scenario Scenario::load(const fs::path& path) { return from_config(ConfigFile::load(path)); }

Scenario Scenario::from_config(ConfigFile cfg) {
    const std::string where = cfg.path().string();
    auto key_error = [&](const std::string& key, const std::string& msg) {
        return Error(kModule, where + ": key '" + key + "': " + msg);
    };

    const auto matrix_path = cfg.file("network.matrix");
    if (!matrix_path) throw key_error("network.matrix", "required");
    const Matrix weights = read_matrix_csv(*matrix_path);
    const std::size_t n = static_cast<std::size_t>(weights.rows());
    const std::size_t ha = index_key(cfg, "network.ha", 0);
    const auto is_map = map_flags(cfg, "network.maps", n, ha);
    const auto rates_path = cfg.file("network.rates");
    if (!rates_path) throw key_error("network.rates", "required");
    const Matrix rates = read_matrix_csv(*rates_path);
    if (rates.rows() != weights.rows())
        throw Error(kModule, rates_path->string() + ": rate matrix size does not match the network matrix");

    const auto mu = cfg.number("mu");
    if (!mu) throw key_error("mu", "required");
    if (*mu < 0.0) throw key_error("mu", "must be >= 0");

    Scenario s{cfg, NetworkGraph(weights, is_map, ha), RateMatrix(rates, is_map), *mu};

    // derive / paging
    if (const auto v = cfg.get("graph.averaging")) {
        const std::string t = lower(*v);
        if (t == "edges") s.analysis.derive.averaging = AveragingMode::Edges;
        else if (t == "literal_n2") s.analysis.derive.averaging = AveragingMode::LiteralN2;
        else throw key_error("graph.averaging", "expected edges or literal_n2");
    }
    if (const auto v = cfg.get("derive.delta_mode")) {
        const std::string t = lower(*v);
        if (t == "weighted") s.analysis.derive.delta_mode = DeltaMode::Weighted;
        else if (t == "literal_n") s.analysis.derive.delta_mode = DeltaMode::LiteralN;
        else throw key_error("derive.delta_mode", "expected weighted or literal_n");
    }
    auto& ov = s.analysis.derive.overrides;
    ov.m = cfg.number("param.m");
    ov.g_T = cfg.number("param.g_t");
    ov.delta = cfg.number("param.delta");
    if (const auto v = cfg.get("param.g_h")) {
        if (lower(*v) == "measured") s.analysis.g_H_measured = true;
        else ov.g_H = cfg.number("param.g_h");
    }
    for (const char* key : {"param.m", "param.g_t", "param.delta", "param.g_h"})
        if (const auto v = cfg.get(key); v && lower(*v) != "measured" && *cfg.number(key) < 0.0)
            throw key_error(key, "must be >= 0");
    s.analysis.target_areas = index_key(cfg, "cellular.target_areas", 1);
    if (s.analysis.target_areas == 0) throw key_error("cellular.target_areas", "must be >= 1");
    if (const auto plan = cfg.file("cellular.plan")) {
        const auto heads_text = cfg.get("cellular.heads");
        if (!heads_text) throw key_error("cellular.heads", "required with cellular.plan");
        ExplicitPlan ep;
        ep.area_of.assign(n, std::nullopt);
        for (const auto& [node, area] : read_pairs_csv(*plan)) {
            if (node >= n) throw Error(kModule, plan->string() + ": node " + std::to_string(node) + " out of range");
            ep.area_of[node] = area;
        }
        for (double h : parse_list(*heads_text)) {
            if (h < 0 || h != std::floor(h)) throw key_error("cellular.heads", "expected node indices");
            ep.heads.push_back(static_cast<std::size_t>(h));
        }
        s.analysis.plan = std::move(ep);
    } else if (cfg.has("cellular.heads")) {
        throw key_error("cellular.heads", "only valid together with cellular.plan");
    }
    if (const auto pm = cfg.number("manet.p_m")) {
        if (!(*pm >= 0.0 && *pm <= 1.0)) throw key_error("manet.p_m", "must lie in [0,1]");
        s.analysis.P_M = *pm;
    }

    // costs
    s.constants = cost_preset(cfg.get("costs.preset").value_or("MIPV4"));
    const std::pair<const char*, double CostConstants::*> constant_keys[] = {
        {"c_u", &CostConstants::c_u},   {"c_d", &CostConstants::c_d},   {"c_r", &CostConstants::c_r},
        {"c_f", &CostConstants::c_f},   {"c_m", &CostConstants::c_m},   {"c_ec", &CostConstants::c_ec},
        {"c_rc", &CostConstants::c_rc}, {"c_dc", &CostConstants::c_dc}, {"c_au", &CostConstants::c_au},
        {"c_ad", &CostConstants::c_ad}};
    for (const auto& [key, member] : constant_keys)
        if (const auto v = cfg.number(key)) s.constants.*member = *v;
    s.constants.validate();
    if (const auto v = cfg.number("weights.sig")) s.weights.w_sig = *v;
    if (const auto v = cfg.number("weights.proc")) s.weights.w_proc = *v;
    if (const auto v = cfg.number("weights.air")) s.weights.w_air = *v;
    s.weights.validate();
    s.cost_options.update_on_crossing = cfg.flag("cellular.update_on_crossing").value_or(false);

    // tracking
    s.tracking.H_max = index_key(cfg, "tracking.h_max", 32);
    if (const auto h = cfg.count("tracking.h")) s.tracking.fixed_H = static_cast<std::size_t>(*h);
    if (const auto v = cfg.get("tracking.p_loop")) {
        if (lower(*v) == "auto") {
            s.p_loop_auto = true;
        } else {
            s.tracking.p_loop = *cfg.number("tracking.p_loop");
            if (!(s.tracking.p_loop >= 0.0 && s.tracking.p_loop < 1.0)) throw key_error("tracking.p_loop", "must lie in [0,1)");
        }
    }

    // simulator
    s.sim.seed = cfg.count("sim.seed").value_or(1);
    s.sim.horizon = cfg.count("sim.horizon").value_or(1'000'000);
    s.sim.warmup = cfg.count("sim.warmup");
    s.sim.batches = index_key(cfg, "sim.batches", 100);
    s.sim.trace = cfg.file("sim.trace");
    if (const auto v = cfg.get("sim.strategies")) {
        parse_strategy_list(*v);
        s.sim.strategies = *v;
    }
    if (s.sim.horizon == 0) throw key_error("sim.horizon", "must be positive");
    if (s.sim.warmup && *s.sim.warmup >= s.sim.horizon) throw key_error("sim.warmup", "must be below sim.horizon");

    // vertical handover
    const bool any_vho = std::any_of(ConfigFile::known_keys().begin(), ConfigFile::known_keys().end(),
                                     [&](const std::string& k) { return k.rfind("vho.", 0) == 0 && cfg.has(k); });
    if (any_vho) {
        const auto b_matrix = cfg.file("vho.net_b.matrix");
        const auto b_rates = cfg.file("vho.net_b.rates");
        const auto couplings = cfg.file("vho.couplings");
        if (!b_matrix) throw key_error("vho.net_b.matrix", "required for vertical handover");
        if (!b_rates) throw key_error("vho.net_b.rates", "required for vertical handover");
        if (!couplings) throw key_error("vho.couplings", "required for vertical handover");
        const Matrix wb = read_matrix_csv(*b_matrix);
        const Matrix rb = read_matrix_csv(*b_rates);
        if (rb.rows() != wb.rows())
            throw Error(kModule, b_rates->string() + ": rate matrix size does not match the network matrix");
        const std::size_t nb = static_cast<std::size_t>(wb.rows());
        const std::size_t hb = index_key(cfg, "vho.net_b.ha", 0);
        const auto mb = map_flags(cfg, "vho.net_b.maps", nb, hb);
        CompositeScenario cs{s.graph, NetworkGraph(wb, mb, hb), s.rates, RateMatrix(rb, mb)};
        cs.ratio_a = cfg.number("vho.ratio_a").value_or(1.0);
        cs.ratio_b = cfg.number("vho.ratio_b").value_or(1.0);
        cs.couplings = read_pairs_csv(*couplings);
        cs.coupling_weight = cfg.number("vho.coupling_weight");
        cs.tau = cfg.number("vho.tau");
        cs.mu = s.mu;
        if (const auto v = cfg.get("vho.home")) {
            const std::string t = lower(*v);
            if (t == "shared") cs.home = HomePlacement::Shared;
            else if (t == "a") cs.home = HomePlacement::A;
            else if (t == "b") cs.home = HomePlacement::B;
            else throw key_error("vho.home", "expected shared, a or b");
        }
        cs.validate();
        VhoSettings vs{std::move(cs)};
        vs.nu_grid = parse_grid(cfg.get("vho.nu_grid").value_or("0.125:8:13:log"));
        for (double nu : vs.nu_grid)
            if (!(nu > 0.0)) throw key_error("vho.nu_grid", "values must be positive");
        if (const auto v = cfg.get("vho.choice_form")) {
            const std::string t = lower(*v);
            if (t == "normalized") vs.form = ChoiceForm::NormalizedExponential;
            else if (t == "literal") vs.form = ChoiceForm::Literal;
            else throw key_error("vho.choice_form", "expected normalized or literal");
        }
        if (const auto v = cfg.get("vho.strategy")) vs.strategy = parse_strategy(*v);
        s.vho = std::move(vs);
    }
    return s;
}

Analysis Scenario::analyze() const { return mobcost::analyze(graph, rates, mu, analysis); }

TrackingSettings Scenario::tracking_for(const Analysis& a) const {
    TrackingSettings t = tracking;
    if (p_loop_auto) t.p_loop = std::min(estimate_p_loop(a.transitions, a.b), 0.999999);
    return t;
}

}  // namespace mobcost
