#include "path_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "integration.hpp"

namespace jlva {

double sample_inverse_gaussian(double mean, double shape, Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double nu = normal(rng);
    const double phi = mean * nu * nu / (2.0 * shape);
    // mean (1 + phi - sqrt(phi^2 + 2 phi)) without cancellation.
    const double x = mean / (1.0 + phi + std::sqrt(phi * phi + 2.0 * phi));
    return unif(rng) * (mean + x) <= mean ? x : mean * mean / x;
}

double simulate_nig_increment(const NigParams& p, double dt, Rng& rng) {
    const double g = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
    const double dd = p.delta * dt;
    const double z = sample_inverse_gaussian(dd / g, dd * dd, rng);
    std::normal_distribution<double> normal;
    return p.beta * z + std::sqrt(z) * normal(rng);
}

// ------------------------------------------------------------------ couples

namespace {

struct Ou {
    double decay, sd;
    Ou(const SpouseParams& p, double h)
        : decay(std::exp(p.mu * h)), sd(p.sigma * std::sqrt(std::expm1(2.0 * p.mu * h) / (2.0 * p.mu))) {}
    double step(double x, double z) const { return x * decay + sd * z; }
};

}  // namespace

SimulatedCouple simulate_couple(const CoupleMortality& m, double horizon, double step, Rng& rng, bool record_path) {
    if (!(step > 0.0)) throw NumericError("simulate_couple: step must be positive");
    if (horizon > m.t_star()) throw NumericError("simulate_couple: horizon beyond T*");
    std::normal_distribution<double> normal;
    std::exponential_distribution<double> expo;
    std::uniform_real_distribution<double> unif;
    const double E1 = expo(rng), U = unif(rng), E2 = expo(rng);

    const SpouseParams* sp[2] = {&m.spouse1(), &m.spouse2()};
    SimulatedCouple out;
    double t = 0.0, l[2] = {sp[0]->lambda0, sp[1]->lambda0};
    double cum = 0.0;
    auto rec = [&](double tt, double a, double b) {
        if (!record_path) return;
        out.t.push_back(tt);
        out.lambda1.push_back(a);
        out.lambda2.push_back(b);
    };
    rec(0.0, l[0], l[1]);

    // Phase 1: both alive, Cox time with intensity lambda1 + lambda2.
    int q = -1;  // survivor index
    double tau_p = 0.0, lq_at = 0.0, jump = 0.0, next_t = 0.0, lq_next = 0.0;
    while (t < horizon) {
        const double h = std::min(step, horizon - t);
        const Ou o1(*sp[0], h), o2(*sp[1], h);
        const double n1 = o1.step(l[0], normal(rng)), n2 = o2.step(l[1], normal(rng));
        ++out.steps;
        if (n1 < 0.0 || n2 < 0.0) ++out.negative_steps;
        const double inc = std::max(0.0, 0.5 * h * (l[0] + l[1] + n1 + n2));
        if (cum + inc >= E1) {
            const double f = (E1 - cum) / inc;
            tau_p = t + f * h;
            const double a = l[0] + f * (n1 - l[0]), b = l[1] + f * (n2 - l[1]);
            const double den = a + b;
            const double ratio = den > 0.0 ? std::clamp(a / den, 0.0, 1.0) : 0.5;
            const int p = U <= ratio ? 0 : 1;
            q = 1 - p;
            out.first_death = p + 1;
            (p == 0 ? out.tau1 : out.tau2) = tau_p;
            lq_at = q == 0 ? a : b;
            jump = sp[q]->eps * lq_at;
            next_t = t + h;
            lq_next = q == 0 ? n1 : n2;
            rec(next_t, n1, n2);
            break;
        }
        cum += inc;
        t += h;
        l[0] = n1;
        l[1] = n2;
        rec(t, n1, n2);
    }
    if (q < 0) return out;

    // Phase 2: survivor intensity lambda_q + eps lambda_q(tau_p-) e^{-kappa (t - tau_p)}.
    const double kappa = sp[q]->kappa;
    auto bereave = [&](double u0, double u1) {
        return jump / kappa * (std::exp(-kappa * (u0 - tau_p)) - std::exp(-kappa * (u1 - tau_p)));
    };
    double cq = 0.0, u0 = tau_p, x0 = lq_at, u1 = next_t, x1 = lq_next;
    for (;;) {
        const double inc = std::max(0.0, 0.5 * (u1 - u0) * (x0 + x1) + bereave(u0, u1));
        if (cq + inc >= E2) {
            const double tq = u0 + (E2 - cq) / inc * (u1 - u0);
            if (tq < horizon) (q == 0 ? out.tau1 : out.tau2) = tq;
            break;
        }
        cq += inc;
        if (u1 >= horizon) break;
        const double h = std::min(step, horizon - u1);
        const Ou o(*sp[q], h);
        u0 = u1;
        x0 = x1;
        u1 = u0 + h;
        x1 = o.step(x0, normal(rng));
        ++out.steps;
        if (x1 < 0.0) ++out.negative_steps;
    }
    return out;
}

double simulate_integrated_intensity(const CoupleMortality& m, double t, double step, Rng& rng) {
    std::normal_distribution<double> normal;
    double l1 = m.spouse1().lambda0, l2 = m.spouse2().lambda0, acc = 0.0, s = 0.0;
    while (s < t) {
        const double h = std::min(step, t - s);
        const Ou o1(m.spouse1(), h), o2(m.spouse2(), h);
        const double n1 = o1.step(l1, normal(rng)), n2 = o2.step(l2, normal(rng));
        acc += 0.5 * h * (l1 + l2 + n1 + n2);
        l1 = n1;
        l2 = n2;
        s += h;
    }
    return acc;
}

// ------------------------------------------------------------------- market

MarketKernels::MarketKernels(const MarketModel& m, const ContractSpec& c, double step) : m_(&m), c_(&c), h_(step) {
    if (!(step > 0.0)) throw NumericError("market step must be positive");
    const double T = c.maturity;
    const double nn = T / step;
    n_ = static_cast<std::size_t>(std::llround(nn));
    if (std::abs(nn - static_cast<double>(n_)) > 1e-9 * std::max(1.0, nn))
        throw NumericError("simulation grid does not refine the maturity");
    std::vector<double> ts(c.surrender_dates.begin() + 1, c.surrender_dates.end());
    ts.insert(ts.end(), c.death_dates.begin() + 1, c.death_dates.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), ts.end());
    for (double t : ts) {
        DateInfo d;
        d.t = t;
        d.node = node_of(t);
        d.fwd0_t = m.forward_integral(0.0, t);
        d.fwd_t_T = m.forward_integral(t, T);
        d.drift_tt = m.drift_integral(0.0, t, t);
        d.drift_tT = m.drift_integral(0.0, t, T);
        d.omega = m.omega(t);
        dates_.push_back(d);
    }
}

std::size_t MarketKernels::node_of(double t) const {
    const double x = t / h_;
    const auto k = static_cast<std::size_t>(std::llround(x));
    if (std::abs(x - static_cast<double>(k)) > 1e-9 * std::max(1.0, x)) {
        std::ostringstream os;
        os << "simulation grid step " << h_ << " is coarser than contract date " << t;
        throw NumericError(os.str());
    }
    return k;
}

const MarketKernels::DateInfo& MarketKernels::info(double t) const {
    for (const auto& d : dates_)
        if (std::abs(d.t - t) < 1e-12) return d;
    throw NumericError("date is not a contract date");
}

SimulatedMarket simulate_market(const MarketKernels& k, Rng& rng, Rng& uniform_rng) {
    const MarketModel& m = k.market();
    const ContractSpec& c = k.contract();
    const double h = k.step(), T = c.maturity, a = m.a, b = m.b;
    const auto& dates = k.dates();
    SimulatedMarket out;
    out.discount.resize(dates.size());
    out.equity.resize(dates.size());
    out.D.resize(dates.size());

    double L1 = 0.0, L2 = 0.0, R1 = 0.0, R2 = 0.0;
    std::size_t next = 0;
    const double eaT = std::exp(-a * T), ebT = std::exp(-b * T);
    for (std::size_t n = 0; n <= k.nodes() && next < dates.size(); ++n) {
        while (next < dates.size() && dates[next].node == n) {
            const auto& d = dates[next];
            const double eat = std::exp(-a * d.t), ebt = std::exp(-b * d.t);
            // Left-point sums: int Sigma1(s,t) dL1 = L1 - e^{-at} sum e^{a s_k} dL1_k.
            const double I1t = L1 - eat * R1, I2t = L2 - ebt * R2;
            const double I1T = L1 - eaT * R1, I2T = L2 - ebT * R2;
            const double int_r = d.fwd0_t + d.drift_tt - I1t + I2t;
            const double Y = int_r + m.sigma2 * L2 - d.omega;
            const double fwd_tT = d.fwd_t_T + (d.drift_tT - d.drift_tt) - (I1T - I1t) + (I2T - I2t);
            out.discount[next] = std::exp(-int_r);
            out.equity[next] = std::exp(Y);
            out.D[next] = Y - c.penalty_p(d.t) + fwd_tT - c.guarantee_rate * T;
            ++next;
        }
        if (n == k.nodes()) break;
        const double s = static_cast<double>(n) * h;
        const double d1 = simulate_nig_increment(m.nig1, h, rng);
        const double d2 = simulate_nig_increment(m.nig2, h, rng);
        L1 += d1;
        L2 += d2;
        R1 += std::exp(a * s) * d1;
        R2 += std::exp(b * s) * d2;
    }

    // Surrender: lambda^s = beta |D(t_i)| + C on [t_i, t_{i+1}), zero before t_1.
    const std::size_t K = c.K();
    out.surrender_intensity.assign(K, 0.0);
    std::uniform_real_distribution<double> unif;
    const double V = unif(uniform_rng);
    double cum = 0.0;
    out.surrender_index = 0;
    for (std::size_t i = 1; i + 1 <= K; ++i) {
        std::size_t idx = 0;
        while (std::abs(dates[idx].t - c.t(i)) > 1e-12) ++idx;
        const double lam = c.surrender_beta * std::abs(out.D[idx]) + c.surrender_baseline;
        out.surrender_intensity[i] = lam;
        cum += lam * (c.t(i + 1) - c.t(i));
        if (out.surrender_index == 0 && V > std::exp(-cum)) out.surrender_index = i;
    }
    return out;
}

// ------------------------------------------------------------------- oracle

namespace {

struct Acc {
    std::uint64_t n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    static Acc merge(const Acc& a, const Acc& b) {
        if (a.n == 0) return b;
        if (b.n == 0) return a;
        Acc r;
        r.n = a.n + b.n;
        const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = static_cast<double>(r.n);
        const double d = b.mean - a.mean;
        r.mean = a.mean + d * nb / n;
        r.m2 = a.m2 + b.m2 + d * d * na * nb / n;
        return r;
    }
    OracleEstimate est() const {
        const double n = static_cast<double>(this->n);
        return {mean, this->n > 1 ? std::sqrt(m2 / (n * (n - 1.0))) : 0.0};
    }
};

constexpr std::size_t kOut = 6;  // gmab, sb, db, total, discounted equity, discount

struct Batch {
    Acc acc[kOut];
    std::uint64_t steps = 0, neg = 0;
};

Batch reduce(std::vector<Batch>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    Batch a = reduce(v, lo, mid), b = reduce(v, mid, hi), r;
    for (std::size_t q = 0; q < kOut; ++q) r.acc[q] = Acc::merge(a.acc[q], b.acc[q]);
    r.steps = a.steps + b.steps;
    r.neg = a.neg + b.neg;
    return r;
}

constexpr std::uint64_t kPathsPerBatch = 1024;

}  // namespace

OracleResult oracle_price(const MarketModel& m, const ContractSpec& c, const CoupleMortality& mort,
                          const OracleConfig& cfg) {
    c.validate();
    m.validate(c.maturity);
    if (cfg.paths < 2) throw NumericError("oracle needs at least two paths");
    const MarketKernels kern(m, c, cfg.market_step);
    const auto& dates = kern.dates();
    const double T = c.maturity, I = c.notional, delta = c.guarantee_rate, alpha = c.death_multiplier;
    const std::size_t K = c.K(), N = c.N();

    auto date_index = [&](double t) {
        for (std::size_t q = 0; q < dates.size(); ++q)
            if (std::abs(dates[q].t - t) < 1e-12) return q;
        throw NumericError("oracle: missing date");
    };
    std::vector<std::size_t> sidx(K + 1, 0), didx(N + 1, 0);
    for (std::size_t i = 1; i <= K; ++i) sidx[i] = date_index(c.t(i));
    for (std::size_t i = 1; i <= N; ++i) didx[i] = date_index(c.tbar(i));
    const std::size_t iT = didx[N];

    const std::uint64_t nb = (cfg.paths + kPathsPerBatch - 1) / kPathsPerBatch;
    std::vector<Batch> parts(nb);
    const unsigned threads = cfg.threads ? cfg.threads : default_threads();
    parallel_for(nb, threads, [&](std::size_t bidx) {
        Rng market_rng(substream_seed(cfg.seed, bidx, 1));
        Rng surrender_rng(substream_seed(cfg.seed, bidx, 2));
        Rng mortality_rng(substream_seed(cfg.seed, bidx, 3));
        Batch bt;
        const std::uint64_t lo = bidx * kPathsPerBatch, hi = std::min<std::uint64_t>(cfg.paths, lo + kPathsPerBatch);
        for (std::uint64_t p = lo; p < hi; ++p) {
            const SimulatedMarket mk = simulate_market(kern, market_rng, surrender_rng);
            const SimulatedCouple cp = simulate_couple(mort, T, cfg.mortality_step, mortality_rng);
            bt.steps += cp.steps;
            bt.neg += cp.negative_steps;
            auto alive = [&](double t) { return cp.tau1 > t || cp.tau2 > t; };
            const std::size_t sl = mk.surrender_index;  // 0 = never

            double gmab = 0.0;
            if (sl == 0 && alive(T))
                gmab = mk.discount[iT] * I * std::max(mk.equity[iT], std::exp(delta * T));

            double sb = 0.0;
            if (sl != 0 && alive(c.t(sl))) {
                const std::size_t q = sidx[sl];
                sb = mk.discount[q] * I * mk.equity[q] * c.penalty_factor(c.t(sl));
            }

            double db = 0.0;
            for (std::size_t i = 1; i <= N; ++i) {
                const double a = c.tbar(i - 1), b = c.tbar(i);
                if (sl != 0 && c.t(sl) < b) break;  // tau^s >= tbar_i fails from here on
                const bool d1 = cp.tau1 >= a && cp.tau1 < b, d2 = cp.tau2 >= a && cp.tau2 < b;
                if (!d1 && !d2) continue;
                const double X = (d1 ? 1.0 : 0.0) + (d2 ? 1.0 : 0.0) + (d1 && d2 ? alpha - 2.0 : 0.0);
                const std::size_t q = didx[i];
                db += mk.discount[q] * I * std::max(mk.equity[q], std::exp(delta * b)) * X;
            }
            bt.acc[0].add(gmab);
            bt.acc[1].add(sb);
            bt.acc[2].add(db);
            bt.acc[3].add(gmab + sb + db);
            bt.acc[4].add(mk.discount[iT] * mk.equity[iT]);
            bt.acc[5].add(mk.discount[iT]);
        }
        parts[bidx] = bt;
    });
    const Batch tot = reduce(parts, 0, parts.size());
    OracleResult r;
    r.gmab = tot.acc[0].est();
    r.sb = tot.acc[1].est();
    r.db = tot.acc[2].est();
    r.total = tot.acc[3].est();
    r.discounted_equity = tot.acc[4].est();
    r.discount = tot.acc[5].est();
    r.paths = cfg.paths;
    r.seed = cfg.seed;
    r.intensity_steps = tot.steps;
    r.negative_intensity_steps = tot.neg;
    return r;
}

}  // namespace jlva
