#include "meff/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "parallel.hpp"

namespace meff {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier compensated sum.
struct CompensatedSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

// Symmetric Kronrod nodes on [-1,1] with Kronrod weights and the embedded Gauss
// weights (zero on Kronrod-only nodes).
template <unsigned NK, unsigned NG>
struct GKRule {
    std::array<double, NK> x{}, wk{}, wg{};
    GKRule() {
        using K = boost::math::quadrature::gauss_kronrod<double, NK>;
        using G = boost::math::quadrature::gauss<double, NG>;
        const auto& kx = K::abscissa();
        const auto& kw = K::weights();
        const auto& gx = G::abscissa();
        const auto& gw = G::weights();
        std::size_t n = 0;
        for (std::size_t i = 0; i < kx.size(); ++i) {
            double g = 0.0;
            for (std::size_t j = 0; j < gx.size(); ++j)
                if (std::abs(gx[j] - kx[i]) < 1e-14) g = gw[j];
            x[n] = kx[i];
            wk[n] = kw[i];
            wg[n] = g;
            ++n;
            if (kx[i] != 0.0) {
                x[n] = -kx[i];
                wk[n] = kw[i];
                wg[n] = g;
                ++n;
            }
        }
    }
};

const GKRule<21, 10>& rule21() {
    static const GKRule<21, 10> r;
    return r;
}

const GKRule<15, 7>& rule15() {
    static const GKRule<15, 7> r;
    return r;
}

struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

Interval gk21(const Fn1& f, double a, double b) {
    const auto& R = rule21();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double fv[21];
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 21; ++i) {
        fv[i] = f(m + h * R.x[i]);
        k += R.wk[i] * fv[i];
        g += R.wg[i] * fv[i];
    }
    const double mean = 0.5 * k;
    double resabs = 0.0, resasc = 0.0;
    for (int i = 0; i < 21; ++i) {
        resabs += R.wk[i] * std::abs(fv[i]);
        resasc += R.wk[i] * std::abs(fv[i] - mean);
    }
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((k - g) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    if (!std::isfinite(k)) throw Error(ErrorKind::domain, "integrand is not finite on the interval");
    return {a, b, k * h, err};
}

}  // namespace

void validate(const CutoffConfig& cfg) {
    if (!(cfg.kappa_over_m > 0.0) || !std::isfinite(cfg.kappa_over_m))
        throw Error(ErrorKind::invalid_argument, "kappa_over_m must be positive");
    if (!(cfg.lambda_over_m >= cfg.kappa_over_m) || !std::isfinite(cfg.lambda_over_m))
        throw Error(ErrorKind::invalid_argument, "lambda_over_m must be >= kappa_over_m");
    if (!(cfg.lam_split >= 3.0)) throw Error(ErrorKind::invalid_argument, "lam_split must be >= 3");
}

const char* region_name(Region r) {
    switch (r) {
    case Region::I: return "I";
    case Region::II1: return "II1";
    case Region::II2: return "II2";
    case Region::FULL: return "FULL";
    }
    return "?";
}

IntegralResult integrate_1d(const Fn1& f, double a, double b, double rel_tol) {
    Quad1dOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_1d(f, a, b, opt);
}

IntegralResult integrate_1d(const Fn1& f, double a, double b, const Quad1dOptions& opt) {
    if (!(a <= b)) throw Error(ErrorKind::invalid_argument, "integrate_1d requires a <= b");
    if (!(opt.rel_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "rel_tol must be positive");
    if (a == b) return {0.0, 0.0, 0};
    std::priority_queue<Interval> heap;
    Interval first = gk21(f, a, b);
    heap.push(first);
    std::int64_t n_eval = 21;
    double total = first.value, err = first.err;
    int subdivisions = 0;
    auto finish = [&]() {
        CompensatedSum v, e;
        auto copy = heap;
        while (!copy.empty()) {
            v.add(copy.top().value);
            e.add(copy.top().err);
            copy.pop();
        }
        return IntegralResult{v.value(), e.value(), n_eval};
    };
    while (err > std::max(opt.rel_tol * std::abs(total), opt.abs_tol)) {
        if (subdivisions >= opt.max_subdivisions)
            throw ConvergenceError("integrate_1d: subdivision limit reached", finish());
        Interval top = heap.top();
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        if (!(mid > top.a && mid < top.b)) {
            heap.push(top);
            throw ConvergenceError("integrate_1d: interval cannot be bisected further", finish());
        }
        Interval l = gk21(f, top.a, mid), r = gk21(f, mid, top.b);
        n_eval += 42;
        ++subdivisions;
        total += l.value + r.value - top.value;
        err += l.err + r.err - top.err;
        heap.push(l);
        heap.push(r);
        // Refresh the running sums occasionally so cancellation in the updates cannot drift.
        if (subdivisions % 64 == 0) {
            const IntegralResult cur = finish();
            total = cur.value;
            err = cur.abs_err;
        }
    }
    return finish();
}

namespace {

// Integration piece in log coordinates: the outer variable runs over [o0, o1] and the
// inner one over [lo_a + lo_b*o, hi_a + hi_b*o]. Both are mapped to the unit square.
struct Piece {
    bool t2_outer;
    double o0, o1;
    double lo_a, lo_b, hi_a, hi_b;
};

struct Cell {
    int piece;
    double s0, s1, u0, u1;
    double value, err, err_s, err_u;
    bool operator<(const Cell& o) const { return err < o.err; }
};

struct Integrator2d {
    const Fn2& f;
    const std::vector<Piece>& pieces;

    void eval(Cell& c) const {
        const auto& R = rule15();
        const Piece& p = pieces[c.piece];
        const double hs = 0.5 * (c.s1 - c.s0), ms = 0.5 * (c.s0 + c.s1);
        const double hu = 0.5 * (c.u1 - c.u0), mu = 0.5 * (c.u0 + c.u1);
        double kk = 0, gg = 0, kg = 0, gk = 0, absum = 0;
        for (int i = 0; i < 15; ++i) {
            const double s = ms + hs * R.x[i];
            const double o = p.o0 + s * (p.o1 - p.o0);
            const double lo = p.lo_a + p.lo_b * o, hi = p.hi_a + p.hi_b * o;
            const double jac = (p.o1 - p.o0) * (hi - lo);
            const double eo = std::exp(o);
            double rk = 0, rg = 0, ra = 0;
            for (int j = 0; j < 15; ++j) {
                const double u = mu + hu * R.x[j];
                const double in = lo + u * (hi - lo);
                const double ei = std::exp(in);
                const double r1 = p.t2_outer ? ei : eo;
                const double r2 = p.t2_outer ? eo : ei;
                const double v = f(r1, r2) * r1 * r2 * jac;
                rk += R.wk[j] * v;
                rg += R.wg[j] * v;
                ra += R.wk[j] * std::abs(v);
            }
            kk += R.wk[i] * rk;
            gg += R.wg[i] * rg;
            kg += R.wk[i] * rg;
            gk += R.wg[i] * rk;
            absum += R.wk[i] * ra;
        }
        const double area = hs * hu;
        if (!std::isfinite(kk)) throw Error(ErrorKind::domain, "integrand is not finite on the region");
        c.value = kk * area;
        const double floor = 50.0 * kEps * absum * area;
        c.err = std::abs(kk - gg) * area + floor;
        c.err_s = std::abs(kk - gk) * area;
        c.err_u = std::abs(kk - kg) * area;
    }
};

std::vector<Piece> region_pieces(const CutoffConfig& cfg, Region region) {
    const double a = std::log(cfg.kappa_over_m), b = std::log(cfg.lambda_over_m);
    const double l = std::log(cfg.lam_split);
    std::vector<Piece> out;
    if (!(b > a)) return out;
    // Lower triangle t1 <= t2 uses t2 as the outer variable; upper triangle mirrors it.
    for (bool lower : {true, false}) {
        const bool t2o = lower;
        switch (region) {
        case Region::FULL:
            out.push_back({t2o, a, b, a, 0.0, 0.0, 1.0});
            break;
        case Region::I: {
            const double m = std::min(b, a + l);
            out.push_back({t2o, a, m, a, 0.0, 0.0, 1.0});
            if (a + l < b) out.push_back({t2o, a + l, b, -l, 1.0, 0.0, 1.0});
            break;
        }
        case Region::II1:
        case Region::II2: {
            // II1 (r1 small) lives in the lower triangle, II2 in the upper.
            if ((region == Region::II1) != lower) break;
            if (a + l < b) out.push_back({t2o, a + l, b, a, 0.0, -l, 1.0});
            break;
        }
        }
    }
    return out;
}

}  // namespace

IntegralResult integrate_2d(const Fn2& f, const CutoffConfig& cfg, Region region, double rel_tol) {
    Quad2dOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_2d(f, cfg, region, opt);
}

IntegralResult integrate_2d(const Fn2& f, const CutoffConfig& cfg, Region region, const Quad2dOptions& opt) {
    validate(cfg);
    if (!(opt.rel_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "rel_tol must be positive");
    const std::vector<Piece> pieces = region_pieces(cfg, region);
    if (pieces.empty()) return {0.0, 0.0, 0};
    Integrator2d integ{f, pieces};
    std::priority_queue<Cell> heap;
    std::int64_t n_eval = 0;
    CompensatedSum total, err;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        Cell c{i, 0.0, 1.0, 0.0, 1.0, 0, 0, 0, 0};
        integ.eval(c);
        n_eval += 225;
        total.add(c.value);
        err.add(c.err);
        heap.push(c);
    }
    auto finish = [&]() {
        CompensatedSum v, e;
        auto copy = heap;
        while (!copy.empty()) {
            v.add(copy.top().value);
            e.add(copy.top().err);
            copy.pop();
        }
        return IntegralResult{v.value(), e.value(), n_eval};
    };
    std::int64_t splits = 0;
    while (err.value() > std::max(opt.rel_tol * std::abs(total.value()), opt.abs_tol)) {
        if (n_eval + 450 > opt.max_evals)
            throw ConvergenceError("integrate_2d: evaluation limit reached", finish());
        Cell top = heap.top();
        heap.pop();
        Cell c1 = top, c2 = top;
        // Split along the axis whose embedded Gauss rule disagrees more with Kronrod.
        if (top.err_s >= top.err_u) {
            const double m = 0.5 * (top.s0 + top.s1);
            c1.s1 = m;
            c2.s0 = m;
        } else {
            const double m = 0.5 * (top.u0 + top.u1);
            c1.u1 = m;
            c2.u0 = m;
        }
        integ.eval(c1);
        integ.eval(c2);
        n_eval += 450;
        total.add(c1.value);
        total.add(c2.value);
        total.add(-top.value);
        err.add(c1.err);
        err.add(c2.err);
        err.add(-top.err);
        heap.push(c1);
        heap.push(c2);
        if (++splits % 256 == 0) {
            const IntegralResult cur = finish();
            total = CompensatedSum{};
            total.add(cur.value);
            err = CompensatedSum{};
            err.add(cur.abs_err);
        }
    }
    return finish();
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

double two_photon_measure() {
    const double tp = 2.0 * std::numbers::pi;
    return 1.0 / (4.0 * std::pow(tp, 6));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// 53-bit uniform in [0,1); spelled out so results do not depend on the standard library's
// distribution implementation.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

struct ChunkStats {
    std::int64_t n = 0;
    double mean = 0.0, m2 = 0.0;
};

}  // namespace

IntegralResult mc_integrate_6d(const Fn6& integrand, const CutoffConfig& cfg, std::int64_t n_samples,
                               std::uint64_t seed, int threads) {
    validate(cfg);
    if (n_samples < 10000) throw Error(ErrorKind::invalid_argument, "mc_integrate_6d needs >= 10^4 samples");
    const double k3 = std::pow(cfg.kappa_over_m, 3), l3 = std::pow(cfg.lambda_over_m, 3);
    const double vol = 4.0 * std::numbers::pi / 3.0 * (l3 - k3);
    constexpr std::int64_t chunk = 1 << 16;
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<ChunkStats> stats(static_cast<std::size_t>(n_chunks));
    auto draw = [&](std::mt19937_64& g) {
        const double r = std::cbrt(k3 + uniform01(g) * (l3 - k3));
        const double z = 2.0 * uniform01(g) - 1.0;
        const double phi = 2.0 * std::numbers::pi * uniform01(g);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Vec3{r * s * std::cos(phi), r * s * std::sin(phi), r * z};
    };
    detail::parallel_for(static_cast<std::size_t>(n_chunks), threads, [&](std::size_t c) {
        std::mt19937_64 g(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c))));
        const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
        const std::int64_t count = std::min(chunk, n_samples - begin);
        ChunkStats st;
        for (std::int64_t i = 0; i < count; ++i) {
            const Vec3 k1 = draw(g);
            const Vec3 k2 = draw(g);
            const double v = integrand(k1, k2);
            ++st.n;
            const double d = v - st.mean;
            st.mean += d / static_cast<double>(st.n);
            st.m2 += d * (v - st.mean);
        }
        stats[c] = st;
    });
    // Chan et al. pairwise merge, in chunk order.
    ChunkStats all;
    for (const auto& st : stats) {
        if (st.n == 0) continue;
        const double n = static_cast<double>(all.n + st.n);
        const double d = st.mean - all.mean;
        all.mean += d * static_cast<double>(st.n) / n;
        all.m2 += st.m2 + d * d * static_cast<double>(all.n) * static_cast<double>(st.n) / n;
        all.n += st.n;
    }
    if (!std::isfinite(all.mean)) throw Error(ErrorKind::domain, "Monte Carlo integrand is not finite");
    const double scale = two_photon_measure() * vol * vol;
    const double var = all.n > 1 ? all.m2 / static_cast<double>(all.n - 1) : 0.0;
    return {scale * all.mean, scale * std::sqrt(var / static_cast<double>(all.n)), all.n};
}

}  // namespace meff
