#include "integration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "integrands.hpp"

namespace jlva {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kBatch = 4096;
}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::Quad: return "quad";
        case Method::MonteCarlo: return "mc-is";
    }
    return "?";
}

IntegrationProblem problem_from(const Integrand& f) {
    IntegrationProblem p;
    p.gamma = f.spec().gamma;
    p.plain_last = f.spec().damped;
    if (p.plain_last) {
        const double r = f.spec().damping;
        p.plain_scale = std::sqrt(r * (r - 1.0));
    }
    p.smooth = [&f](std::span<const double> x) { return f.smooth(x); };
    return p;
}

SamplerPlan make_plan(const IntegrationProblem& p, std::uint64_t n, std::uint64_t seed, unsigned threads) {
    SamplerPlan plan;
    plan.gamma = p.gamma;
    plan.damped_scale = p.plain_last ? p.plain_scale : 0.0;
    plan.n = n;
    plan.seed = seed;
    plan.threads = threads;
    return plan;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

unsigned default_threads() {
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= n) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!err) err = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------- quadrature

namespace {

struct QuadState {
    const IntegrationProblem* p;
    std::vector<std::size_t> active;  // dimensions integrated numerically
    std::vector<double> x;
    double tol;
    std::uint64_t evals = 0;
    std::uint64_t max_evals;
};

Complex quad_rec(QuadState& st, std::size_t level) {
    if (level == st.active.size()) {
        if (++st.evals > st.max_evals)
            throw NumericError("quadrature exceeded its budget of " + std::to_string(st.max_evals) +
                               " evaluations; use Monte Carlo for this piece");
        return st.p->smooth(st.x);
    }
    const std::size_t d = st.active[level];
    const bool plain = st.p->plain_last && d == st.p->gamma.size();
    const double g = plain ? st.p->plain_scale : st.p->gamma[d];
    auto f = [&st, level, d, g, plain](double th) -> Complex {
        const double c = std::cos(th);
        st.x[d] = g * std::tan(th);
        const Complex inner = quad_rec(st, level + 1);
        // Cauchy factor times dx equals 2 d(theta); the plain dimension keeps
        // the Jacobian gamma sec^2(theta).
        return plain ? inner * (g / (c * c)) : inner * 2.0;
    };
    return integrate_complex(f, -kPi / 2, kPi / 2, {st.tol, 15});
}

}  // namespace

IntegralEstimate quad_nd(const IntegrationProblem& p, double tol, std::size_t max_dim, std::uint64_t max_evals) {
    QuadState st{&p, {}, std::vector<double>(p.dim(), 0.0), tol, 0, max_evals};
    double point_mass = 1.0;
    for (std::size_t l = 0; l < p.gamma.size(); ++l) {
        if (p.gamma[l] < kDegenerateGamma)
            point_mass *= kTwoPi;
        else
            st.active.push_back(l);
    }
    if (p.plain_last) st.active.push_back(p.gamma.size());
    if (st.active.size() > max_dim) {
        throw NumericError("quadrature requested for dimension " + std::to_string(st.active.size()) +
                           " (limit " + std::to_string(max_dim) + ")");
    }
    const Complex v = quad_rec(st, 0) * point_mass;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("quadrature produced a non-finite value");
    IntegralEstimate e;
    e.value = v.real();
    e.imag_residual = std::abs(v.imag());
    e.method = st.active.empty() ? Method::Direct : Method::Quad;
    return e;
}

// -------------------------------------------------------------- Monte Carlo

namespace {

struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0, m2 = 0.0, imag_mean = 0.0;
    std::uint64_t rejected = 0;
};

// Chan et al. pairwise merge.
Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0) return {b.n, b.mean, b.m2, b.imag_mean, a.rejected + b.rejected};
    if (b.n == 0) return {a.n, a.mean, a.m2, a.imag_mean, a.rejected + b.rejected};
    Moments r;
    r.n = a.n + b.n;
    const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = static_cast<double>(r.n);
    const double d = b.mean - a.mean;
    r.mean = a.mean + d * nb / n;
    r.m2 = a.m2 + b.m2 + d * d * na * nb / n;
    r.imag_mean = a.imag_mean + (b.imag_mean - a.imag_mean) * nb / n;
    r.rejected = a.rejected + b.rejected;
    return r;
}

Moments reduce(std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge(reduce(v, lo, mid), reduce(v, mid, hi));
}

inline double open_uniform(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

IntegralEstimate mc_is(const IntegrationProblem& p, const SamplerPlan& plan) {
    if (plan.gamma.size() != p.gamma.size() || (plan.damped_scale > 0.0) != p.plain_last)
        throw NumericError("sampler plan does not match the integrand's dimensions");
    if (plan.n < 2) throw NumericError("Monte Carlo needs at least two samples");
    for (std::size_t l = 0; l < plan.gamma.size(); ++l)
        if (plan.gamma[l] < 0.0) throw NumericError("negative Cauchy scale in sampler plan");
    double point_mass = 1.0;
    for (double g : plan.gamma)
        if (g < kDegenerateGamma) point_mass *= kTwoPi;

    const std::uint64_t nb = (plan.n + kBatch - 1) / kBatch;
    std::vector<Moments> parts(nb);
    const std::size_t d = p.dim();
    const std::size_t nc = p.gamma.size();
    parallel_for(nb, plan.threads, [&](std::size_t b) {
        std::mt19937_64 rng(substream_seed(plan.seed, b));
        const std::uint64_t lo = b * kBatch, hi = std::min<std::uint64_t>(plan.n, lo + kBatch);
        std::vector<double> x(d, 0.0);
        Moments mo;
        for (std::uint64_t s = lo; s < hi; ++s) {
            double w = point_mass;
            for (std::size_t l = 0; l < nc; ++l) {
                const double u = open_uniform(rng);
                const double g = plan.gamma[l];
                if (g < kDegenerateGamma) {
                    x[l] = 0.0;
                } else {
                    x[l] = g * std::tan(kPi * (u - 0.5));
                    w *= kTwoPi;
                }
            }
            if (p.plain_last) {
                const double g = plan.damped_scale;
                const double u = open_uniform(rng);
                const double v = g * std::tan(kPi * (u - 0.5));
                x[nc] = v;
                w *= kPi * (v * v + g * g) / g;
            }
            Complex val;
            bool ok = true;
            try {
                val = p.smooth(x) * w;
                ok = std::isfinite(val.real()) && std::isfinite(val.imag());
            } catch (const StripViolation&) {
                ok = false;
            }
            if (!ok) {
                ++mo.rejected;
                continue;
            }
            ++mo.n;
            const double delta = val.real() - mo.mean;
            mo.mean += delta / static_cast<double>(mo.n);
            mo.m2 += delta * (val.real() - mo.mean);
            mo.imag_mean += (val.imag() - mo.imag_mean) / static_cast<double>(mo.n);
        }
        parts[b] = mo;
    });
    const Moments tot = reduce(parts, 0, parts.size());
    if (static_cast<double>(tot.rejected) > 1e-6 * static_cast<double>(plan.n)) {
        throw NumericError("Monte Carlo rejected " + std::to_string(tot.rejected) + " of " +
                           std::to_string(plan.n) + " samples (limit 1e-6)");
    }
    IntegralEstimate e;
    e.method = Method::MonteCarlo;
    e.value = tot.mean;
    e.n_samples = tot.n;
    const double n = static_cast<double>(tot.n);
    e.std_error = tot.n > 1 ? std::sqrt(tot.m2 / (n * (n - 1.0))) : 0.0;
    e.imag_residual = std::abs(tot.imag_mean);
    e.rejected = tot.rejected;
    e.seed = plan.seed;
    return e;
}

double bias_report(const IntegralEstimate& mc, const IntegralEstimate& quad) {
    if (!std::isfinite(mc.value) || !std::isfinite(quad.value)) throw NumericError("bias_report: non-finite input");
    if (mc.value == 0.0) throw NumericError("bias_report: Monte Carlo value is zero");
    return 100.0 * std::abs(mc.value - quad.value) / std::abs(mc.value);
}

double std_error_percent(const IntegralEstimate& e) {
    return e.value == 0.0 ? 0.0 : 100.0 * e.std_error / std::abs(e.value);
}

}  // namespace jlva
