#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "path_oracle.hpp"

namespace jlva {

namespace {

class Table {
public:
    explicit Table(std::vector<std::string> head) : head_(std::move(head)) {}
    void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
    std::string str() const {
        std::vector<std::size_t> w(head_.size(), 0);
        auto widen = [&](const std::vector<std::string>& r) {
            for (std::size_t k = 0; k < r.size() && k < w.size(); ++k) w[k] = std::max(w[k], r[k].size());
        };
        widen(head_);
        for (const auto& r : rows_) widen(r);
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                const std::string& cell = k < r.size() ? r[k] : std::string();
                if (k == 0)
                    os << std::left << std::setw(static_cast<int>(w[k])) << cell;
                else
                    os << "  " << std::right << std::setw(static_cast<int>(w[k])) << cell;
            }
            os << "\n";
        };
        line(head_);
        std::size_t total = 0;
        for (auto x : w) total += x + 2;
        os << std::string(total - 2, '-') << "\n";
        for (const auto& r : rows_) line(r);
        return os.str();
    }

private:
    std::vector<std::string> head_;
    std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double x, int prec = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << x;
    return os.str();
}

std::string sci(double x, int prec = 3) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(prec) << x;
    return os.str();
}

std::string csv_num(double x) { return format_double(x); }

std::string curve_note(const RunConfig& cfg) {
    if (cfg.curve == "flat") return "flat " + format_double(cfg.curve_level);
    return "table " + cfg.curve_file;
}

std::string header(const char* what, const RunConfig& cfg) {
    std::ostringstream os;
    os << what << "  T=" << format_double(cfg.maturity) << "  seed=" << cfg.seed << "  method=" << cfg.method
       << "  samples=" << cfg.samples << "  curve=" << curve_note(cfg) << "  r=" << format_double(cfg.damping)
       << "  alpha=" << format_double(cfg.death_multiplier) << "\n";
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool wants_semi(const RunConfig& cfg) { return cfg.method != "oracle"; }
bool wants_oracle(const RunConfig& cfg) { return cfg.method == "oracle" || cfg.method == "all"; }

std::string pieces_csv(const PriceBreakdown& b) {
    std::ostringstream os;
    os << "label,dim,method,integral,integral_std_error,value,std_error,imag_residual,samples,seed\n";
    for (const auto& p : b.pieces)
        os << p.label << "," << p.dim << "," << to_string(p.integral.method) << "," << csv_num(p.integral.value) << ","
           << csv_num(p.integral.std_error) << "," << csv_num(p.value) << "," << csv_num(p.std_error) << ","
           << csv_num(p.imag_residual) << "," << p.integral.n_samples << "," << p.integral.seed << "\n";
    return os.str();
}

}  // namespace

std::pair<std::size_t, std::size_t> benchmark_db_pair(const ContractSpec& c) {
    for (std::size_t i = 1; i <= c.N(); ++i) {
        const std::size_t j = c.death_branch(i);
        if (j >= 1 && db_admissible(c, j, i)) return {j, i};
    }
    return {0, 1};
}

Report cmd_price(const RunConfig& cfg) {
    Report rep;
    const MarketModel m = build_market(cfg);
    const ContractSpec c = build_contract(cfg);
    const CoupleMortality mort = build_mortality(cfg);
    std::ostringstream os;
    os << header("price", cfg);

    std::optional<PriceBreakdown> b;
    if (wants_semi(cfg)) {
        PricingEngine eng(m, c, mort, build_evaluator(cfg));
        b = eng.price_total();
    }
    std::optional<OracleResult> o;
    if (wants_oracle(cfg)) o = oracle_price(m, c, mort, build_oracle(cfg));

    std::vector<std::string> head{"component"};
    if (b) head.insert(head.end(), {"value", "std_error"});
    if (o) head.insert(head.end(), {"oracle", "oracle_se"});
    if (b && o) head.insert(head.end(), {"z", "agree"});
    Table tab(head);
    std::ostringstream csv;
    csv << "component";
    if (b) csv << ",value,std_error";
    if (o) csv << ",oracle_value,oracle_std_error";
    if (b && o) csv << ",z,agree";
    csv << "\n";

    const char* names[] = {"GMAB", "SB", "DB", "Total"};
    for (int k = 0; k < 4; ++k) {
        std::vector<std::string> r{names[k]};
        csv << names[k];
        ComponentPrice cp;
        OracleEstimate oe;
        if (b) {
            cp = k == 0 ? b->gmab : k == 1 ? b->sb : k == 2 ? b->db : b->total;
            r.insert(r.end(), {fixed(cp.value), fixed(cp.std_error)});
            csv << "," << csv_num(cp.value) << "," << csv_num(cp.std_error);
        }
        if (o) {
            oe = k == 0 ? o->gmab : k == 1 ? o->sb : k == 2 ? o->db : o->total;
            r.insert(r.end(), {fixed(oe.value), fixed(oe.std_error)});
            csv << "," << csv_num(oe.value) << "," << csv_num(oe.std_error);
        }
        if (b && o) {
            const double s = std::hypot(cp.std_error, oe.std_error);
            const double z = s > 0.0 ? std::abs(cp.value - oe.value) / s : 0.0;
            const bool ok = z <= 3.0;
            r.insert(r.end(), {fixed(z, 2), ok ? "yes" : "no"});
            csv << "," << csv_num(z) << "," << (ok ? "yes" : "no");
        }
        tab.row(r);
        csv << "\n";
    }
    os << tab.str();
    rep.files.emplace_back("price.csv", csv.str());

    if (b) {
        os << "\nmethod: " << b->method_summary << "   P_T = " << fixed(b->P_T, 8) << "\n\n";
        Table pt({"piece", "dim", "method", "integral", "value", "std_error", "imag_resid"});
        for (const auto& p : b->pieces)
            pt.row({p.label, std::to_string(p.dim), to_string(p.integral.method), fixed(p.integral.value, 8),
                    fixed(p.value, 8), sci(p.std_error), sci(p.imag_residual)});
        os << pt.str();
        for (const auto& w : b->warnings) os << "warning: " << w << "\n";
        rep.files.emplace_back("pieces.csv", pieces_csv(*b));
        rep.breakdown = b;
    }
    if (o) {
        os << "\noracle: paths=" << o->paths << " seed=" << o->seed << " step=" << format_double(cfg.oracle_step)
           << "  negative-intensity steps " << o->negative_intensity_steps << "/" << o->intensity_steps << " ("
           << sci(o->negative_intensity_fraction()) << ")\n";
    }
    rep.text = os.str();
    return rep;
}

Report cmd_benchmark(const RunConfig& cfg) {
    Report rep;
    const MarketModel m = build_market(cfg);
    const ContractSpec c = build_contract(cfg);
    const EvaluatorConfig ev = build_evaluator(cfg);
    PricingEngine eng(m, c, build_mortality(cfg), ev);
    const WConstants& w = eng.w();

    struct Item {
        Integrand f;
        std::uint64_t id;
    };
    std::vector<Item> items;
    items.push_back({make_gmab_A1(m, c, w), piece_id(BenefitKind::GmabA1)});
    items.push_back({make_gmab_A2(m, c, w), piece_id(BenefitKind::GmabA2)});
    for (std::size_t i = 1; i + 1 <= c.K(); ++i) {
        if (i >= 2) items.push_back({make_sb_B1(m, c, w, i), piece_id(BenefitKind::SbB1, i)});
        items.push_back({make_sb_B2(m, c, w, i), piece_id(BenefitKind::SbB2, i)});
    }
    const auto [j, i] = benchmark_db_pair(c);
    if (j >= 1) {
        items.push_back({make_db_A1(m, c, w, j, i), piece_id(BenefitKind::DbA1, i, j)});
        items.push_back({make_db_A2(m, c, w, j, i), piece_id(BenefitKind::DbA2, i, j)});
    } else {
        items.push_back({make_db_A0(m, c, w, i), piece_id(BenefitKind::DbA0, i)});
    }

    std::ostringstream os, csv;
    os << header("benchmark", cfg);
    Table tab({"integral", "dim", "quadrature", "mc_is", "bias_%", "std_err_%", "z", "quad_s", "mc_s"});
    csv << "integral,dim,quadrature,mc_is,bias_percent,std_error_percent,quad_seconds,mc_seconds\n";
    for (const auto& it : items) {
        const IntegrationProblem p = problem_from(it.f);
        std::optional<PieceResult> q;
        double tq = 0.0;
        if (auto_uses_quad(p, ev)) {
            const auto t0 = std::chrono::steady_clock::now();
            q = eng.evaluate(it.f, it.id, Method::Quad);
            tq = seconds_since(t0);
        }
        const auto t1 = std::chrono::steady_clock::now();
        const PieceResult mc = eng.evaluate(it.f, it.id, Method::MonteCarlo);
        const double tm = seconds_since(t1);
        // bias and std error on the assembled scale (the tabulated values)
        const double se_pct = mc.value != 0.0 ? 100.0 * mc.std_error / std::abs(mc.value) : 0.0;
        std::string bias = "n/a", z = "n/a", qv = "n/a", qs = "n/a";
        std::string bias_csv, qv_csv, qs_csv;
        if (q) {
            const double bp = 100.0 * std::abs(mc.value - q->value) / std::abs(mc.value);
            bias = fixed(bp, 4);
            z = fixed(mc.std_error > 0 ? std::abs(mc.value - q->value) / mc.std_error : 0.0, 2);
            qv = fixed(q->value, 6);
            qs = fixed(tq, 2);
            bias_csv = csv_num(bp);
            qv_csv = csv_num(q->value);
            qs_csv = csv_num(tq);
        }
        tab.row({mc.label, std::to_string(mc.dim), qv, fixed(mc.value, 6), bias, fixed(se_pct, 4), z, qs, fixed(tm, 2)});
        csv << mc.label << "," << mc.dim << "," << qv_csv << "," << csv_num(mc.value) << "," << bias_csv << ","
            << csv_num(se_pct) << "," << qs_csv << "," << csv_num(tm) << "\n";
    }
    os << tab.str();
    rep.text = os.str();
    rep.files.emplace_back("benchmark.csv", csv.str());
    return rep;
}

SensitivityAxis default_axis(SensitivityParam p) {
    switch (p) {
        case SensitivityParam::Beta: return {p, 0.0, 0.06};
        case SensitivityParam::C: return {p, 0.0, 0.015};
        case SensitivityParam::Delta: return {p, 0.0, 0.03};
        case SensitivityParam::Eps1:
        case SensitivityParam::Eps2: return {p, 0.0, 1.5};
        case SensitivityParam::Kappa1:
        case SensitivityParam::Kappa2: return {p, 0.25, 1.0};
    }
    return {p, 0.0, 1.0};
}

Report cmd_sensitivity(const RunConfig& cfg, const SensitivityRequest& req) {
    if (req.resolution < 2) throw ConfigError("sensitivity resolution must be at least 2");
    if (req.axis1.param == req.axis2.param) throw ConfigError("sensitivity axes must differ");
    const auto cells = sensitivity_grid(build_market(cfg), build_contract(cfg), build_mortality(cfg),
                                        build_evaluator(cfg), req.axis1, req.axis2, req.resolution);
    Report rep;
    const std::string n1 = to_string(req.axis1.param), n2 = to_string(req.axis2.param);
    const char* names[] = {"gmab", "sb", "db", "total"};
    for (int k = 0; k < 4; ++k) {
        std::ostringstream csv;
        csv << "axis1,axis2,value,std_error\n";
        for (const auto& cell : cells) {
            const auto& b = cell.price;
            const ComponentPrice& cp = k == 0 ? b.gmab : k == 1 ? b.sb : k == 2 ? b.db : b.total;
            csv << csv_num(cell.x1) << "," << csv_num(cell.x2) << "," << csv_num(cp.value) << ","
                << csv_num(cp.std_error) << "\n";
        }
        rep.files.emplace_back("sensitivity_" + n1 + "_" + n2 + "_" + names[k] + ".csv", csv.str());
    }
    std::ostringstream os;
    os << header("sensitivity", cfg) << "axis1=" << n1 << " [" << format_double(req.axis1.lo) << ", "
       << format_double(req.axis1.hi) << "]  axis2=" << n2 << " [" << format_double(req.axis2.lo) << ", "
       << format_double(req.axis2.hi) << "]  resolution=" << req.resolution << "\n\n";
    Table tab({n1, n2, "GMAB", "SB", "DB", "Total"});
    for (const auto& cell : cells)
        tab.row({fixed(cell.x1, 4), fixed(cell.x2, 4), fixed(cell.price.gmab.value), fixed(cell.price.sb.value),
                 fixed(cell.price.db.value), fixed(cell.price.total.value)});
    os << tab.str();
    rep.text = os.str();
    return rep;
}

namespace {

struct Battery {
    Table tab{{"check", "result", "detail"}};
    int failed = 0;
    void add(const std::string& name, bool ok, const std::string& detail) {
        tab.row({name, ok ? "pass" : "FAIL", detail});
        failed += ok ? 0 : 1;
    }
    void skip(const std::string& name, const std::string& why) { tab.row({name, "skip", why}); }
};

}  // namespace

Report cmd_validate(const RunConfig& cfg) {
    Battery bat;
    const ContractSpec c = build_contract(cfg);
    const MarketModel m = build_market(cfg);
    const CoupleMortality mort = build_mortality(cfg);

    bool model_ok = true;
    try {
        m.validate(c.maturity);
        bat.add("strip", true, "cumulant arguments inside both NIG strips on [0,T]");
    } catch (const StripViolation& e) {
        model_ok = false;
        bat.add("strip", false, std::string("strip violation: ") + e.what());
    }

    const double ts = mort.t_star();
    const double mass = mort.integrate_density(0.0, ts, 0.0, ts);
    bat.add("density-normalisation", std::abs(mass - 1.0) <= 1e-3,
            "int rho over [0," + format_double(ts) + "]^2 = " + fixed(mass, 8));
    for (double t : {1.0, 3.0, 5.0, 10.0}) {
        if (t >= ts) continue;
        const double s = mort.joint_survival(t);
        const double tail = mort.integrate_density(t, ts, t, ts);
        const double rel = std::abs(s - tail) / s;
        bat.add("survival-tail t=" + format_double(t), rel <= 1e-3,
                "S=" + fixed(s, 8) + " tail=" + fixed(tail, 8) + " rel=" + sci(rel));
    }
    {
        bool ok = true;
        double prev = 1.0;
        for (double t = 0.0; t <= c.maturity + 1e-12; t += 0.25) {
            const double p = mort.prob_union_alive(t);
            ok = ok && p <= prev + 1e-12 && p >= 0.0 && p <= 1.0 + 1e-12;
            prev = p;
        }
        bat.add("union-alive-monotone", ok, "P(at least one alive) non-increasing in [0,1] on a 0.25y grid");
    }

    if (cfg.spouse1.eps == 0.0 && cfg.spouse2.eps == 0.0) {
        bat.skip("broken-heart", "eps = 0 for both spouses; contagion checks skipped");
    } else {
        SpouseParams a = cfg.spouse1, b = cfg.spouse2;
        a.eps = 0.0;
        b.eps = 0.0;
        const CoupleMortality plain(a, b, cfg.t_star);
        bool ok = true;
        std::ostringstream d;
        for (int k : {1, 2}) {
            const double eps = k == 1 ? cfg.spouse1.eps : cfg.spouse2.eps;
            if (eps == 0.0) continue;
            const double t = std::min(10.0, 0.5 * ts);
            const double s1 = mort.marginal_survival(k, t), s0 = plain.marginal_survival(k, t);
            ok = ok && s1 < s0;
            d << "S" << k << "(" << format_double(t) << ") " << fixed(s1, 6) << " < " << fixed(s0, 6) << " ";
        }
        const double js = mort.joint_survival(5.0), js0 = plain.joint_survival(5.0);
        ok = ok && std::abs(js - js0) <= 1e-12;
        d << "joint S unaffected";
        bat.add("broken-heart", ok, d.str());
    }

    if (!model_ok) {
        for (const char* n : {"conjugate-symmetry", "martingale", "bond", "method-agreement"})
            bat.skip(n, "model invalid (strip violation)");
    } else {
        const EvaluatorConfig ev = build_evaluator(cfg);
        PricingEngine eng(m, c, mort, ev);
        const WConstants& w = eng.w();
        std::vector<std::pair<Integrand, std::uint64_t>> items;
        items.emplace_back(make_gmab_A1(m, c, w), piece_id(BenefitKind::GmabA1));
        if (c.K() <= 3) items.emplace_back(make_gmab_A2(m, c, w), piece_id(BenefitKind::GmabA2));
        if (c.K() >= 2) items.emplace_back(make_sb_B2(m, c, w, 1), piece_id(BenefitKind::SbB2, 1));
        const auto [j, i] = benchmark_db_pair(c);
        if (j >= 1) {
            items.emplace_back(make_db_A1(m, c, w, j, i), piece_id(BenefitKind::DbA1, i, j));
            items.emplace_back(make_db_A2(m, c, w, j, i), piece_id(BenefitKind::DbA2, i, j));
        }

        std::mt19937_64 rng(cfg.seed);
        std::cauchy_distribution<double> cd(0.0, 1.0);
        double worst = 0.0;
        for (const auto& [f, id] : items) {
            for (int k = 0; k < 8; ++k) {
                std::vector<double> x(f.dim()), y(f.dim());
                for (std::size_t q = 0; q < x.size(); ++q) {
                    x[q] = cd(rng);
                    y[q] = -x[q];
                }
                const Complex a = f(x), b = f(y);
                const double scale = std::max(std::abs(a), 1e-300);
                worst = std::max(worst, std::abs(b - std::conj(a)) / scale);
            }
        }
        bat.add("conjugate-symmetry", worst < 1e-8, "max |f(-x) - conj f(x)| / |f(x)| = " + sci(worst));

        {
            const OracleConfig oc = build_oracle(cfg);
            const MarketKernels kern(m, c, oc.market_step);
            const std::size_t last = kern.dates().size() - 1;
            double s1 = 0, s2 = 0, d1 = 0, d2 = 0;
            const std::uint64_t n = std::max<std::uint64_t>(oc.paths, 2);
            Rng mr(substream_seed(cfg.seed, 0, 11)), ur(substream_seed(cfg.seed, 0, 12));
            for (std::uint64_t p = 0; p < n; ++p) {
                const SimulatedMarket mk = simulate_market(kern, mr, ur);
                const double de = mk.discount[last] * mk.equity[last], dd = mk.discount[last];
                s1 += de;
                s2 += de * de;
                d1 += dd;
                d2 += dd * dd;
            }
            const double nn = static_cast<double>(n);
            const double me = s1 / nn, se = std::sqrt(std::max(0.0, s2 / nn - me * me) / (nn - 1.0));
            const double md = d1 / nn, sd = std::sqrt(std::max(0.0, d2 / nn - md * md) / (nn - 1.0));
            const double B = m.bond_price0(c.maturity);
            bat.add("martingale", std::abs(me - 1.0) <= 3.0 * se + 1e-3,
                    "E[disc S_T] = " + fixed(me) + " +- " + fixed(se) + " (paths " + std::to_string(n) + ")");
            bat.add("bond", std::abs(md - B) <= 3.0 * sd + 1e-3 * B,
                    "E[disc] = " + fixed(md) + " +- " + fixed(sd) + " vs B(0,T) = " + fixed(B));
        }

        for (const auto& [f, id] : items) {
            const IntegrationProblem p = problem_from(f);
            if (!auto_uses_quad(p, ev)) continue;
            const PieceResult q = eng.evaluate(f, id, Method::Quad);
            const PieceResult mc = eng.evaluate(f, id, Method::MonteCarlo);
            const double tol = 3.0 * mc.std_error + 10.0 * cfg.quad_tol * std::abs(q.value);
            const double diff = std::abs(mc.value - q.value);
            bat.add("method-agreement " + q.label, diff <= tol,
                    "quad " + fixed(q.value, 8) + " mc " + fixed(mc.value, 8) + " se " + sci(mc.std_error));
        }
    }

    {
        Rng rng(substream_seed(cfg.seed, 0, 13));
        std::uint64_t steps = 0, neg = 0;
        const std::uint64_t couples = std::max<std::uint64_t>(cfg.oracle_paths / 10, 1000);
        for (std::uint64_t k = 0; k < couples; ++k) {
            const SimulatedCouple cp = simulate_couple(mort, c.maturity, cfg.oracle_step, rng);
            steps += cp.steps;
            neg += cp.negative_steps;
        }
        const double frac = steps ? static_cast<double>(neg) / static_cast<double>(steps) : 0.0;
        bat.add("negative-intensity", frac < 1e-3,
                "floored steps " + std::to_string(neg) + "/" + std::to_string(steps) + " = " + sci(frac));
    }

    Report rep;
    std::ostringstream os;
    os << header("validate", cfg) << bat.tab.str();
    os << (bat.failed ? std::to_string(bat.failed) + " check(s) failed\n" : "all checks passed\n");
    rep.text = os.str();
    rep.status = bat.failed ? 3 : 0;
    return rep;
}

std::vector<std::string> write_report_files(const Report& r, const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> out;
    if (r.files.empty()) return out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    for (const auto& [name, content] : r.files) {
        const fs::path p = fs::path(dir) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + p.string() + "'");
        f << content;
        out.push_back(p.string());
    }
    return out;
}

}  // namespace jlva
