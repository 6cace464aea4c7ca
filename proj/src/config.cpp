#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace jlva {

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw ConfigError("cannot format number");
    return std::string(buf, p);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || p != last || !std::isfinite(x))
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    return x;
}

struct Key {
    std::string section, name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::string dotted() const { return section + "." + name; }
};

Key num(std::string sec, std::string name, double RunConfig::*field) {
    return {sec, name, [field](const RunConfig& c) { return format_double(c.*field); },
            [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); }};
}

template <class Sub>
Key sub(std::string sec, std::string name, Sub RunConfig::*outer, double Sub::*field) {
    return {sec, name, [=](const RunConfig& c) { return format_double(c.*outer.*field); },
            [=](RunConfig& c, const std::string& k, const std::string& v) { c.*outer.*field = parse_double(k, v); }};
}

Key u64(std::string sec, std::string name, std::uint64_t RunConfig::*field) {
    return {sec, name, [field](const RunConfig& c) { return std::to_string(c.*field); },
            [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_u64(k, v); }};
}

Key str(std::string sec, std::string name, std::string RunConfig::*field, std::vector<std::string> allowed = {}) {
    return {sec, name, [field](const RunConfig& c) { return c.*field; },
            [field, allowed](RunConfig& c, const std::string& k, const std::string& v) {
                if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                    std::string opts;
                    for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
                    throw ConfigError("key '" + k + "': '" + v + "' is not one of " + opts);
                }
                c.*field = v;
            }};
}

const std::vector<Key>& keys() {
    static const std::vector<Key> k = [] {
        std::vector<Key> v;
        v.push_back(num("market", "a", &RunConfig::a));
        v.push_back(num("market", "b", &RunConfig::b));
        v.push_back(num("market", "sigma2", &RunConfig::sigma2));
        v.push_back(sub("market", "nig1_alpha", &RunConfig::nig1, &NigParams::alpha));
        v.push_back(sub("market", "nig1_beta", &RunConfig::nig1, &NigParams::beta));
        v.push_back(sub("market", "nig1_delta", &RunConfig::nig1, &NigParams::delta));
        v.push_back(sub("market", "nig2_alpha", &RunConfig::nig2, &NigParams::alpha));
        v.push_back(sub("market", "nig2_beta", &RunConfig::nig2, &NigParams::beta));
        v.push_back(sub("market", "nig2_delta", &RunConfig::nig2, &NigParams::delta));
        v.push_back(str("market", "curve", &RunConfig::curve, {"flat", "table"}));
        v.push_back(num("market", "curve_level", &RunConfig::curve_level));
        v.push_back(str("market", "curve_file", &RunConfig::curve_file));
        for (auto [tag, field] : {std::pair{"spouse1", &RunConfig::spouse1}, std::pair{"spouse2", &RunConfig::spouse2}}) {
            const std::string t = tag;
            v.push_back(sub("mortality", t + "_lambda0", field, &SpouseParams::lambda0));
            v.push_back(sub("mortality", t + "_mu", field, &SpouseParams::mu));
            v.push_back(sub("mortality", t + "_sigma", field, &SpouseParams::sigma));
            v.push_back(sub("mortality", t + "_eps", field, &SpouseParams::eps));
            v.push_back(sub("mortality", t + "_kappa", field, &SpouseParams::kappa));
        }
        v.push_back(num("mortality", "t_star", &RunConfig::t_star));
        v.push_back(num("contract", "notional", &RunConfig::notional));
        v.push_back(num("contract", "maturity", &RunConfig::maturity));
        v.push_back(num("contract", "guarantee_rate", &RunConfig::guarantee_rate));
        v.push_back(num("contract", "surrender_step", &RunConfig::surrender_step));
        v.push_back(num("contract", "death_step", &RunConfig::death_step));
        v.push_back(num("contract", "penalty_base", &RunConfig::penalty_base));
        v.push_back(num("contract", "death_multiplier", &RunConfig::death_multiplier));
        v.push_back(num("contract", "damping", &RunConfig::damping));
        v.push_back(num("surrender", "beta", &RunConfig::beta));
        v.push_back(num("surrender", "baseline", &RunConfig::baseline));
        v.push_back(str("numerics", "method", &RunConfig::method, {"auto", "quad", "mc", "oracle", "all"}));
        v.push_back(u64("numerics", "samples", &RunConfig::samples));
        v.push_back(u64("numerics", "seed", &RunConfig::seed));
        v.push_back(num("numerics", "quad_tol", &RunConfig::quad_tol));
        v.push_back(u64("numerics", "oracle_paths", &RunConfig::oracle_paths));
        v.push_back(num("numerics", "oracle_step", &RunConfig::oracle_step));
        v.push_back(u64("numerics", "threads", &RunConfig::threads));
        v.push_back(str("output", "dir", &RunConfig::out_dir));
        return v;
    }();
    return k;
}

const std::vector<std::string> kSections{"market", "mortality", "contract", "surrender", "numerics", "output"};
const std::set<std::string> kRequired{"market", "mortality", "contract", "surrender"};

const Key* find_key(const std::string& section, const std::string& name) {
    for (const auto& k : keys())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.push_back(k.dotted());
    return out;
}

void set_config_value(RunConfig& cfg, const std::string& dotted, const std::string& value) {
    const auto dot = dotted.find('.');
    const Key* k = dot == std::string::npos ? nullptr : find_key(dotted.substr(0, dot), dotted.substr(dot + 1));
    if (!k) throw ConfigError("unknown config key '" + dotted + "'");
    k->set(cfg, dotted, trim(value));
}

std::string get_config_value(const RunConfig& cfg, const std::string& dotted) {
    const auto dot = dotted.find('.');
    const Key* k = dot == std::string::npos ? nullptr : find_key(dotted.substr(0, dot), dotted.substr(dot + 1));
    if (!k) throw ConfigError("unknown config key '" + dotted + "'");
    return k->get(cfg);
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> seen_sections, seen_keys;
    int lineno = 0;
    auto where = [&] { return "config line " + std::to_string(lineno) + ": "; };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find_first_of("#;"); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where() + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
                throw ConfigError(where() + "unknown section [" + section + "]");
            if (!seen_sections.insert(section).second) throw ConfigError(where() + "duplicate section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
        if (section.empty()) throw ConfigError(where() + "key outside of a section");
        const std::string name = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const Key* k = find_key(section, name);
        if (!k) throw ConfigError(where() + "unknown key '" + name + "' in [" + section + "]");
        if (!seen_keys.insert(k->dotted()).second) throw ConfigError(where() + "duplicate key '" + k->dotted() + "'");
        try {
            k->set(cfg, k->dotted(), value);
        } catch (const ConfigError& e) {
            throw ConfigError(where() + e.what());
        }
    }
    std::string missing;
    for (const auto& s : kSections) {
        if (!kRequired.count(s) || seen_sections.count(s)) continue;
        missing += (missing.empty() ? "" : "; ") + std::string("section [") + s + "] is missing (keys:";
        for (const auto& k : keys())
            if (k.section == s) missing += " " + k.dotted();
        missing += ")";
    }
    if (!missing.empty()) throw ConfigError(missing);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const auto& k : keys()) {
        if (k.section != section) {
            if (!section.empty()) os << "\n";
            section = k.section;
            os << "[" << section << "]\n";
        }
        os << k.name << " = " << k.get(cfg) << "\n";
    }
    return os.str();
}

MarketModel build_market(const RunConfig& cfg) {
    MarketModel m;
    m.a = cfg.a;
    m.b = cfg.b;
    m.sigma2 = cfg.sigma2;
    m.nig1 = cfg.nig1;
    m.nig2 = cfg.nig2;
    if (cfg.curve == "flat") {
        m.f0 = ForwardCurve::flat(cfg.curve_level);
    } else {
        if (cfg.curve_file.empty()) throw ConfigError("market.curve = table requires market.curve_file");
        m.f0 = ForwardCurve::load_table(cfg.curve_file);
    }
    return m;
}

ContractSpec build_contract(const RunConfig& cfg) {
    ContractSpec c = ContractSpec::standard(cfg.maturity, cfg.surrender_step, cfg.death_step);
    c.notional = cfg.notional;
    c.guarantee_rate = cfg.guarantee_rate;
    c.penalty_base = cfg.penalty_base;
    c.death_multiplier = cfg.death_multiplier;
    c.damping = cfg.damping;
    c.surrender_beta = cfg.beta;
    c.surrender_baseline = cfg.baseline;
    c.validate();
    return c;
}

CoupleMortality build_mortality(const RunConfig& cfg) { return CoupleMortality(cfg.spouse1, cfg.spouse2, cfg.t_star); }

EvaluatorConfig build_evaluator(const RunConfig& cfg) {
    EvaluatorConfig ev;
    ev.method = (cfg.method == "oracle" || cfg.method == "all") ? MethodChoice::Auto : parse_method_choice(cfg.method);
    ev.samples = cfg.samples;
    ev.seed = cfg.seed;
    if (!(cfg.quad_tol > 0.0)) throw ConfigError("numerics.quad_tol must be > 0");
    ev.quad_tol = cfg.quad_tol;
    ev.threads = static_cast<unsigned>(cfg.threads);
    if (cfg.samples < 2) throw ConfigError("numerics.samples must be >= 2");
    return ev;
}

OracleConfig build_oracle(const RunConfig& cfg) {
    OracleConfig o;
    o.paths = cfg.oracle_paths;
    o.seed = cfg.seed;
    if (!(cfg.oracle_step > 0.0)) throw ConfigError("numerics.oracle_step must be > 0");
    o.market_step = o.mortality_step = cfg.oracle_step;
    o.threads = static_cast<unsigned>(cfg.threads);
    return o;
}

}  // namespace jlva
