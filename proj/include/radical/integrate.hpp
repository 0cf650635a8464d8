#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>

#include "radical/jacobian.hpp"

namespace radical {

// ---------------------------------------------------------------------------
// Deterministic counter-based RNG: every (seed, index, dimension) triple maps
// to one uniform draw, so shard layout never changes the stream.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint32_t dim) {
    std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(index)) +
                                 0x632be59bd9b4e019ull * (dim + 1));
    return double(h >> 11) * 0x1.0p-53;
}

inline unsigned thread_count() {
    if (const char* env = std::getenv("RADICAL_THREADS")) {
        long v = std::atol(env);
        if (v > 0) return (unsigned)v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// ---------------------------------------------------------------------------
// Test function: a separable polynomial bump in a linear frame over the
// global coordinates of N.  profile(u) = (1 - u^2)^2 on [-1, 1].

inline double bump_profile(double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    double q = 1.0 - u * u;
    return q * q;
}

inline double bump_mass_1d() { return 16.0 / 15.0; }

// Inverse CDF of the normalized one dimensional profile, by bisection.
inline double bump_profile_sample(double u) {
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 48; ++it) {
        double mid = 0.5 * (lo + hi);
        double F = (8.0 + 15.0 * mid - 10.0 * mid * mid * mid +
                    3.0 * mid * mid * mid * mid * mid) /
                   16.0;
        (F < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct BumpFunction {
    std::vector<double> center;  // in the global chart coordinates of N
    std::vector<double> widths;  // per frame axis
    Mat<double> frame;           // columns = frame directions; identity by default

    static BumpFunction axis_aligned(std::vector<double> center, std::vector<double> widths) {
        BumpFunction b;
        b.frame = Mat<double>::identity(center.size());
        b.center = std::move(center);
        b.widths = std::move(widths);
        return b;
    }

    void validate() const {
        if (center.size() != widths.size() || frame.rows() != center.size() ||
            frame.cols() != center.size())
            throw std::invalid_argument("bump: inconsistent dimensions");
        for (double w : widths)
            if (!(w > 0.0)) throw std::invalid_argument("bump: widths must be positive");
    }
};

// Closed-form integral over the chart coordinates.
inline double lhs_exact(const BumpFunction& b) {
    b.validate();
    double v = std::fabs(det(b.frame));
    for (double w : b.widths) v *= w * bump_mass_1d();
    return v;
}

struct MCEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t shards = 0;
};

// ---------------------------------------------------------------------------
// Global chart of N: coordinates v over the first calibrated basis; the pair
// (a, B) = sum v_i basis_i gives the element n(a, B - a a*/2).  Lebesgue
// measure in these coordinates is a Haar measure on N.

class SheetIntegrator {
  public:
    SheetIntegrator(const SpaceFrame<double>& f, const XiKit<double>& kit,
                    const CalibratedBases<double>& cb, const RootDatum& rd)
        : f_(f), kit_(kit), cb_(cb), rd_(rd), b1_(basis_B1(f, kit, cb)) {
        m1_ = coords_matrix(f, b1_);
        m1_inv_ = inverse(m1_);
        pdim_ = cb.A.size() + cb.B.size() + cb.C.size();
        build_frak_m_basis();
    }

    const SpaceFrame<double>& frame() const { return f_; }
    const XiKit<double>& kit() const { return kit_; }
    const RootDatum& roots() const { return rd_; }
    std::size_t dim() const { return f_.dim_n(); }
    std::size_t pdim() const { return pdim_; }

    // v |-> n, global coordinates to group element.
    UnipotentElement<double> chart_N(const std::vector<double>& v) const {
        NilpotentVector<double> u{Mat<double>(f_.dim_W(), f_.dim_X()),
                                  Mat<double>(f_.dim_W(), f_.dim_W())};
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0.0) continue;
            u.a = u.a + b1_[i].a * v[i];
            u.b = u.b + b1_[i].b * v[i];
        }
        return {u.a, u.b - u.a * f_.star_xi(u.a) * 0.5};
    }

    // n |-> v, the inverse of chart_N.
    std::vector<double> chart_coords(const UnipotentElement<double>& n) const {
        NilpotentVector<double> u{n.xi, n.eta + n.xi * f_.star_xi(n.xi) * 0.5};
        auto raw = nilpotent_coords(f_, u);
        std::vector<double> v(raw.size(), 0.0);
        for (std::size_t i = 0; i < raw.size(); ++i)
            for (std::size_t j = 0; j < raw.size(); ++j) v[i] += m1_inv_(i, j) * raw[j];
        return v;
    }

    double bump_eval(const BumpFunction& b, const UnipotentElement<double>& n,
                     const Mat<double>& frame_inv) const {
        auto v = chart_coords(n);
        double out = 1.0;
        for (std::size_t i = 0; i < v.size() && out != 0.0; ++i) {
            double y = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j)
                y += frame_inv(i, j) * (v[j] - b.center[j]);
            out *= bump_profile(y / b.widths[i]);
        }
        return out;
    }

    // The derivative frame of the sheet chart at its center, expressed in the
    // chart coordinates of N; used to align bump supports with sheet boxes.
    Mat<double> sheet_frame(const LeviElement<double>& m_hat, const Mat<double>& gamma_hat) const {
        auto b2 = basis_B2(f_, kit_, cb_, gamma_hat);
        Mat<double> g_star = f_.star_end_W(m_hat.g);
        Mat<double> h_inv = inverse(m_hat.h);
        std::vector<NilpotentVector<double>> moved;
        for (const auto& u : b2)
            moved.push_back({m_hat.g * u.a * h_inv, m_hat.g * u.b * g_star});
        return solve(m1_, coords_matrix(f_, moved));
    }

    // Sheet chart: u = (p-part; s-part) |-> (m_hat exp, gamma_hat exp).
    std::pair<LeviElement<double>, TorusPoint<double>> chart_MS(
        const LeviElement<double>& m_hat, const TorusPoint<double>& gamma_hat,
        const std::vector<double>& u) const {
        Mat<double> P(f_.dim_W(), f_.dim_W());
        Mat<double> Q(f_.dim_X(), f_.dim_X());
        std::size_t k = 0;
        for (const auto& a : cb_.A) P = P + a * u[k++];
        for (const auto& b : cb_.B) Q = Q + b * u[k++];
        for (const auto& c : cb_.C) Q = Q + c * u[k++];
        LeviElement<double> m{m_hat.g * mat_exp(P), m_hat.h * mat_exp(Q)};
        TorusPoint<double> p = gamma_hat;
        for (std::size_t l = 0; l < cb_.Z.size(); ++l) p.t[l] *= std::exp(u[k + l]);
        return {m, p};
    }

    // Haar density of the exponential sheet chart relative to the calibrated
    // bases: determinant of the left logarithmic derivative modulo the
    // stabilizer directions.  The torus part is exactly invariant.
    double chart_density(const std::vector<double>& u) const {
        Mat<double> P(f_.dim_W(), f_.dim_W());
        Mat<double> Q(f_.dim_X(), f_.dim_X());
        std::size_t k = 0;
        for (const auto& a : cb_.A) P = P + a * u[k++];
        for (const auto& b : cb_.B) Q = Q + b * u[k++];
        for (const auto& c : cb_.C) Q = Q + c * u[k++];
        Mat<double> block(pdim_, pdim_);
        std::size_t col = 0;
        auto put = [&](const Mat<double>& gpart, const Mat<double>& hpart) {
            std::vector<double> coords = frak_m_coords(gpart, hpart);
            for (std::size_t i = 0; i < pdim_; ++i) block(i, col) = coords[i];
            ++col;
        };
        for (const auto& a : cb_.A) put(dexp_apply(P, a), Mat<double>(f_.dim_X(), f_.dim_X()));
        for (const auto& b : cb_.B) put(Mat<double>(f_.dim_W(), f_.dim_W()), dexp_apply(Q, b));
        for (const auto& c : cb_.C) put(Mat<double>(f_.dim_W(), f_.dim_W()), dexp_apply(Q, c));
        return std::fabs(det(block));
    }

    // Sample weight of the plain-measure formula at chart point u.
    double plain_weight(const LeviElement<double>& m, const TorusPoint<double>& p) const {
        return delta_N_closed(f_, m) * std::fabs(det_L_closed(f_, rd_, p));
    }

  private:
    void build_frak_m_basis() {
        const std::size_t w = f_.dim_W(), x = f_.dim_X();
        std::vector<std::vector<double>> cols;
        auto vecpair = [&](const Mat<double>& g, const Mat<double>& h) {
            auto gv = g.vec();
            auto hv = h.vec();
            gv.insert(gv.end(), hv.begin(), hv.end());
            return gv;
        };
        Mat<double> zx(x, x), zw(w, w);
        for (const auto& a : cb_.A) cols.push_back(vecpair(a, zx));
        for (const auto& b : cb_.B) cols.push_back(vecpair(zw, b));
        for (const auto& c : cb_.C) cols.push_back(vecpair(zw, c));
        for (const auto& bp : cb_.Bp) cols.push_back(vecpair(kit_.Xi(bp), bp));
        for (const auto& z : cb_.Z) cols.push_back(vecpair(kit_.Xi(z), z));
        Mat<double> sys(w * w + x * x, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < cols[j].size(); ++i) sys(i, j) = cols[j][i];
        // Least-squares style inverse is not needed: the columns are a basis
        // of a subspace containing every vector we will express, so solve
        // through the pseudo-system (B^T B) x = B^T v.
        frak_basis_ = sys;
        frak_gram_inv_ = inverse(sys.transpose() * sys);
    }

    std::vector<double> frak_m_coords(const Mat<double>& g, const Mat<double>& h) const {
        auto gv = g.vec();
        auto hv = h.vec();
        gv.insert(gv.end(), hv.begin(), hv.end());
        std::vector<double> rhs(frak_basis_.cols(), 0.0);
        for (std::size_t j = 0; j < frak_basis_.cols(); ++j)
            for (std::size_t i = 0; i < gv.size(); ++i) rhs[j] += frak_basis_(i, j) * gv[i];
        std::vector<double> out(frak_basis_.cols(), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < out.size(); ++j) out[i] += frak_gram_inv_(i, j) * rhs[j];
        return out;
    }

    Mat<double> dexp_apply(const Mat<double>& v, const Mat<double>& d) const {
        // (1 - e^{-ad_v})/ad_v applied to d.
        Mat<double> term = d;
        Mat<double> sum = d;
        double sign = -1.0;
        double fact = 1.0;
        for (int k = 1; k <= 10; ++k) {
            term = v * term - term * v;
            fact *= (k + 1);
            sum = sum + term * (sign / fact);
            sign = -sign;
            if (term.max_abs() / fact < 1e-16) break;
        }
        return sum;
    }

    const SpaceFrame<double>& f_;
    const XiKit<double>& kit_;
    const CalibratedBases<double>& cb_;
    const RootDatum& rd_;
    std::vector<NilpotentVector<double>> b1_;
    Mat<double> m1_, m1_inv_;
    Mat<double> frak_basis_, frak_gram_inv_;
    std::size_t pdim_ = 0;
};

// Ad(M)-invariant density: phi(n(xi, eta)) = |delta_N(m(eta ups, 1))|^{-1/2}.
inline double adinv_density(const SpaceFrame<double>& f, const XiKit<double>& kit,
                            const UnipotentElement<double>& n) {
    double d = std::fabs(det(n.eta * kit.upsilon()));
    if (d < 1e-300) throw std::domain_error("eta singular");
    return std::pow(d, -0.5 * (double)delta_N_exponent(f.config()));
}

enum class MeasureMode { plain, ad_invariant };

struct IntegrationReport {
    GroupConfig config;
    MeasureMode mode = MeasureMode::plain;
    double lhs = 0.0, lhs_stderr = 0.0;
    double rhs = 0.0, rhs_stderr = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double crosscheck_gap = 0.0;  // pointwise density identity along samples
    double boundary_max = 0.0;    // largest bump value on the sampling box boundary
    bool sheet_verified = false;
    bool pass = false;
    double gap() const { return std::fabs(lhs - rhs); }
};

namespace detail {

struct ShardSums {
    double sum = 0.0, sum_sq = 0.0;
    double cross = 0.0;
};

}  // namespace detail

// Monte-Carlo estimate of one sheet of the right-hand side.  The sampling box
// in the sheet chart is the bump box of widths scaled by margin.
inline MCEstimate rhs_mc(const SheetIntegrator& si, const BumpFunction& bump,
                         const LeviElement<double>& m_hat, const TorusPoint<double>& gamma_hat,
                         double margin, std::size_t samples, std::uint64_t seed,
                         MeasureMode mode, double* crosscheck = nullptr,
                         std::size_t shards = 256) {
    bump.validate();
    const auto& f = si.frame();
    const std::size_t d = si.dim();
    if (bump.widths.size() != d) throw std::invalid_argument("bump dimension mismatch");
    if (!(margin > 1.0)) throw std::invalid_argument("margin must exceed one");
    Mat<double> frame_inv = inverse(bump.frame);
    const XiKit<double>& kit = si.kit();
    const RootDatum& rd = si.roots();

    // Mixture importance sampling per axis: half uniform over the margin box,
    // half drawn from the profile itself, so wide safety margins stay cheap.
    const double beta = 0.5;
    auto axis_density = [&](double y) {
        double q = (1.0 - beta) / (2.0 * margin);
        if (std::fabs(y) < 1.0) q += beta * (15.0 / 16.0) * bump_profile(y);
        return q;
    };

    auto run_shard = [&](std::size_t s, std::size_t lo, std::size_t hi) {
        detail::ShardSums out;
        std::vector<double> u(d);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            double invq = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                double u1 = uniform01(seed, idx, (std::uint32_t)(2 * i));
                double u2 = uniform01(seed, idx, (std::uint32_t)(2 * i + 1));
                double y = u1 < beta ? bump_profile_sample(u2) : margin * (2.0 * u2 - 1.0);
                u[i] = bump.widths[i] * y;
                invq *= bump.widths[i] / axis_density(y);
            }
            auto [m, p] = si.chart_MS(m_hat, gamma_hat, u);
            auto n = sha(f, kit, m, torus_embed(f, p));
            double fb = si.bump_eval(bump, n, frame_inv);
            double wgt = 0.0;
            if (fb != 0.0) {
                fb *= invq;
                double density = si.chart_density(u);
                if (mode == MeasureMode::plain) {
                    wgt = fb * si.plain_weight(m, p) * density;
                } else {
                    double ds = D_Sha(f, rd, p);
                    wgt = fb * ds * density;
                    double other =
                        std::fabs(det_L_closed(f, rd, p)) /
                        std::sqrt(delta_N(f, LeviElement<double>{
                                                 torus_gamma_G(f, p),
                                                 Mat<double>::identity(f.dim_X())}));
                    out.cross = std::max(out.cross,
                                         std::fabs(ds - other) / std::max(1.0, std::fabs(ds)));
                }
            }
            out.sum += wgt;
            out.sum_sq += wgt * wgt;
        }
        (void)s;
        return out;
    };

    std::vector<detail::ShardSums> results(shards);
    std::size_t per = samples / shards;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t start = 0;
    for (std::size_t s = 0; s < shards; ++s) {
        std::size_t cnt = per + (s < samples % shards ? 1 : 0);
        ranges.push_back({start, start + cnt});
        start += cnt;
    }
    unsigned workers = std::min<std::size_t>(thread_count(), shards);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t s = next.fetch_add(1);
                if (s >= shards) break;
                results[s] = run_shard(s, ranges[s].first, ranges[s].second);
            }
        });
    for (auto& th : pool) th.join();

    double sum = 0.0, sum_sq = 0.0, cross = 0.0;
    for (const auto& r : results) {
        sum += r.sum;
        sum_sq += r.sum_sq;
        cross = std::max(cross, r.cross);
    }
    if (crosscheck) *crosscheck = cross;
    double mean = sum / (double)samples;
    double var = std::max(0.0, sum_sq / (double)samples - mean * mean);
    MCEstimate est;
    est.value = mean;
    est.stderr_ = std::sqrt(var / (double)samples);
    est.samples = samples;
    est.seed = seed;
    est.shards = shards;
    return est;
}

// Monte-Carlo estimate of the left-hand side with the invariant density.
inline MCEstimate lhs_mc(const SheetIntegrator& si, const XiKit<double>& kit,
                         const BumpFunction& bump, std::size_t samples, std::uint64_t seed,
                         std::size_t shards = 256) {
    bump.validate();
    const auto& f = si.frame();
    const std::size_t d = si.dim();
    double volume = std::fabs(det(bump.frame));
    for (double w : bump.widths) volume *= 2.0 * w;

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        detail::ShardSums out;
        std::vector<double> y(d), v(d);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            double fb = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                y[i] = 2.0 * uniform01(seed ^ 0x5bf0a8b1ull, idx, (std::uint32_t)i) - 1.0;
                fb *= bump_profile(y[i]);
            }
            for (std::size_t i = 0; i < d; ++i) {
                v[i] = bump.center[i];
                for (std::size_t j = 0; j < d; ++j)
                    v[i] += bump.frame(i, j) * bump.widths[j] * y[j];
            }
            double wgt = 0.0;
            if (fb != 0.0) wgt = fb * adinv_density(f, kit, si.chart_N(v));
            out.sum += wgt;
            out.sum_sq += wgt * wgt;
        }
        return out;
    };

    std::vector<detail::ShardSums> results(shards);
    std::size_t per = samples / shards;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t start = 0;
    for (std::size_t s = 0; s < shards; ++s) {
        std::size_t cnt = per + (s < samples % shards ? 1 : 0);
        ranges.push_back({start, start + cnt});
        start += cnt;
    }
    unsigned workers = std::min<std::size_t>(thread_count(), shards);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t s = next.fetch_add(1);
                if (s >= shards) break;
                results[s] = run_range(ranges[s].first, ranges[s].second);
            }
        });
    for (auto& th : pool) th.join();

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& r : results) {
        sum += r.sum;
        sum_sq += r.sum_sq;
    }
    double mean = sum / (double)samples;
    double var = std::max(0.0, sum_sq / (double)samples - mean * mean);
    MCEstimate est;
    est.value = mean * volume;
    est.stderr_ = std::sqrt(var / (double)samples) * volume;
    est.samples = samples;
    est.seed = seed;
    est.shards = shards;
    return est;
}

// Bump support must be inside the sampling box image: probe the box boundary.
inline double boundary_probe(const SheetIntegrator& si, const BumpFunction& bump,
                             const LeviElement<double>& m_hat,
                             const TorusPoint<double>& gamma_hat, double margin,
                             std::size_t probes, std::uint64_t seed) {
    const auto& f = si.frame();
    const std::size_t d = si.dim();
    Mat<double> frame_inv = inverse(bump.frame);
    const XiKit<double>& kit = si.kit();
    double worst = 0.0;
    std::vector<double> u(d);
    for (std::size_t idx = 0; idx < probes; ++idx) {
        for (std::size_t i = 0; i < d; ++i)
            u[i] = margin * bump.widths[i] *
                   (2.0 * uniform01(seed ^ 0xb0ull, idx, (std::uint32_t)i) - 1.0);
        // Project one coordinate to a face.
        std::size_t face = (std::size_t)(uniform01(seed ^ 0xb1ull, idx, d) * d);
        if (face >= d) face = d - 1;
        double sgn_face = uniform01(seed ^ 0xb2ull, idx, d + 1) < 0.5 ? -1.0 : 1.0;
        u[face] = sgn_face * margin * bump.widths[face];
        auto [m, p] = si.chart_MS(m_hat, gamma_hat, u);
        auto n = sha(f, kit, m, torus_embed(f, p));
        worst = std::max(worst, si.bump_eval(bump, n, frame_inv));
    }
    return worst;
}

// Full verification of the integration identity on one split sheet, with an
// optional sum over all Weyl sheets weighted by 1/|W|.
struct VerifyOptions {
    std::size_t samples = 1000000;
    std::uint64_t seed = 42;
    double width = 0.05;
    double margin = 1.7;
    MeasureMode mode = MeasureMode::plain;
    bool two_sheet = false;
    double rel_tol = 0.02;
    std::size_t shards = 256;
};

inline IntegrationReport verify_theorem(const SpaceFrame<double>& f, const XiKit<double>& kit,
                                        const CalibratedBases<double>& cb, const RootDatum& rd,
                                        const LeviElement<double>& m_hat,
                                        const TorusPoint<double>& gamma_hat,
                                        const VerifyOptions& opt) {
    auto reg = torus_regularity(f, gamma_hat);
    if (!reg.regular) throw std::domain_error("irregular torus point");
    SheetIntegrator si(f, kit, cb, rd);
    const std::size_t d = si.dim();

    Mat<double> gm = torus_embed(f, gamma_hat);
    BumpFunction bump;
    bump.frame = si.sheet_frame(m_hat, gm);
    bump.center = si.chart_coords(sha(f, kit, m_hat, gm));
    bump.widths.assign(d, opt.width);

    IntegrationReport rep;
    rep.config = f.config();
    rep.mode = opt.mode;
    rep.samples = opt.samples;
    rep.seed = opt.seed;

    rep.boundary_max = boundary_probe(si, bump, m_hat, gamma_hat, opt.margin, 2000, opt.seed);
    // Sheet identification: the center decomposes back to gamma_hat.
    auto dec = decompose(f, kit, sha(f, kit, m_hat, gm));
    bool center_ok = dec.cls == TorusClass::split;
    for (std::size_t i = 0; center_ok && i < gamma_hat.t.size(); ++i)
        if (std::fabs(dec.torus.t[i] - gamma_hat.t[i]) > 1e-6 * std::fabs(gamma_hat.t[i]))
            center_ok = false;
    rep.sheet_verified = center_ok && rep.boundary_max < 1e-6;
    if (!rep.sheet_verified)
        throw std::domain_error("sheet containment check failed");

    if (opt.mode == MeasureMode::plain) {
        rep.lhs = lhs_exact(bump);
        rep.lhs_stderr = 0.0;
    } else {
        auto l = lhs_mc(si, kit, bump, opt.samples, opt.seed, opt.shards);
        rep.lhs = l.value;
        rep.lhs_stderr = l.stderr_;
    }

    auto sheets = opt.two_sheet
                      ? fiber(f, kit, m_hat, gamma_hat)
                      : std::vector<std::pair<LeviElement<double>, TorusPoint<double>>>{
                            {m_hat, gamma_hat}};
    double rhs = 0.0, var = 0.0, cross = 0.0;
    for (std::size_t s = 0; s < sheets.size(); ++s) {
        double c = 0.0;
        auto est = rhs_mc(si, bump, sheets[s].first, sheets[s].second, opt.margin,
                          opt.samples / sheets.size(), opt.seed + 1000 * s, opt.mode, &c,
                          opt.shards);
        rhs += est.value;
        var += est.stderr_ * est.stderr_;
        cross = std::max(cross, c);
    }
    if (opt.two_sheet) {
        rhs /= (double)sheets.size();
        var /= (double)(sheets.size() * sheets.size());
    }
    rep.rhs = rhs;
    rep.rhs_stderr = std::sqrt(var);
    rep.crosscheck_gap = cross;

    double tol = std::max(2.0 * std::sqrt(rep.lhs_stderr * rep.lhs_stderr + var),
                          opt.rel_tol * std::fabs(rep.lhs));
    rep.pass = rep.gap() <= tol;
    return rep;
}

}  // namespace radical
