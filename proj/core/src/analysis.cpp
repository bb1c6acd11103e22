#include "relhartree/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "relhartree/lp.hpp"
#include "relhartree/observables.hpp"
#include "relhartree/potential.hpp"
#include "relhartree/propagator.hpp"
#include "relhartree/rng.hpp"
#include "relhartree/spectral.hpp"

namespace relhartree::analysis {

double phase(const PhasePoint& p) { return bracket(p.xi) - bracket(p.xi - p.eta); }

Vec2 grad_xi_phase(const PhasePoint& p) {
    const Vec2 a = p.xi;
    const Vec2 b = p.xi - p.eta;
    return (1.0 / bracket(a)) * a - (1.0 / bracket(b)) * b;
}

Vec2 sigma_gradient(const PhasePoint& p) {
    // (sigma+eta)/<sigma+eta> - sigma/<sigma>, rationalized: the naive form
    // cancels catastrophically when |d| ~ |eta|/<sigma>^3 << |eta|/<sigma>.
    // With db = <sigma+eta> - <sigma> = (2 sigma.eta + |eta|^2)/(<sigma+eta> + <sigma>),
    //   d = (eta - sigma * db/<sigma>) / <sigma+eta>     (exact identity)
    const Vec2 se = p.sigma + p.eta;
    const double bp = bracket(se);
    const double bs = bracket(p.sigma);
    const double db = (2.0 * dot(p.sigma, p.eta) + norm2(p.eta)) / (bp + bs);
    return (1.0 / bp) * (p.eta - (db / bs) * p.sigma);
}

Vec2 resonance_multiplier(const PhasePoint& p) {
    if (p.eta.x == 0.0 && p.eta.y == 0.0)
        throw NumericError("resonance_multiplier: singular at eta = 0");
    const Vec2 d = sigma_gradient(p);
    const double q = norm2(d);
    if (!(q > 0.0)) throw NumericError("resonance_multiplier: vanishing sigma-gradient");
    return (1.0 / q) * d;
}

namespace {

/// Central-difference step for sigma-derivatives of m, of the given order.
/// The bound ladder |d^a m| <~ |eta|^-1 max<.> min<.>^(2+|a|) means m varies
/// on sigma-scale ~ 1/min<.>; the rationalized sigma_gradient leaves a
/// relative noise floor ~ eps*min^2 on m. Balancing truncation against that
/// noise gives h = (eps*min^2)^(1/(order+2)) / min.
double fd_step(Vec2 eta, Vec2 sigma, int order) {
    const double mn = std::min(bracket(sigma + eta), bracket(sigma));
    const double delta = 1e-16 * mn * mn;
    return std::pow(delta, 1.0 / double(order + 2)) / mn;
}

struct BoundShapes {
    double lower;  // |eta| / (max<.> min<.>^2)
    double upper;  // |eta| / max<.>
    double mx;
    double mn;
};

BoundShapes shapes(Vec2 eta, Vec2 sigma) {
    const double b1 = bracket(sigma + eta);
    const double b2 = bracket(sigma);
    const double mx = std::max(b1, b2);
    const double mn = std::min(b1, b2);
    const double ae = norm(eta);
    return {ae / (mx * mn * mn), ae / mx, mx, mn};
}

Vec2 multiplier_raw(Vec2 eta, Vec2 sigma) {
    PhasePoint p;
    p.eta = eta;
    p.sigma = sigma;
    return resonance_multiplier(p);
}

} // namespace

SampleStats verify_null_structure(const SamplerSpec& spec, long n) {
    if (n < 10000) throw ConfigError("verify_null_structure: need n >= 1e4 samples");
    Rng rng(spec.seed);
    SampleStats st;
    st.n_samples = n;
    double c_lo = std::numeric_limits<double>::infinity();
    double c_up = 0.0;
    for (long i = 0; i < n; ++i) {
        const Vec2 eta = rng.log_uniform(spec.mag_lo, spec.mag_hi) * rng.unit_vec();
        const Vec2 sigma = rng.log_uniform(spec.mag_lo, spec.mag_hi) * rng.unit_vec();
        PhasePoint p;
        p.eta = eta;
        p.sigma = sigma;
        const double mid = norm(sigma_gradient(p));
        const BoundShapes s = shapes(eta, sigma);
        const double r_lo = mid / s.lower;
        const double r_up = mid / s.upper;
        if (!std::isfinite(r_lo) || !std::isfinite(r_up) || !(mid > 0.0)) {
            ++st.violations;
            continue;
        }
        c_lo = std::min(c_lo, r_lo);
        c_up = std::max(c_up, r_up);
    }
    st.c_lower = c_lo;
    st.c_upper = c_up;
    st.worst_ratio = c_up;
    if (!(st.c_lower > 0.0)) ++st.violations;
    return st;
}

SampleStats verify_m_derivatives(int max_order, const SamplerSpec& spec, long n) {
    if (max_order < 0 || max_order > 2)
        throw ConfigError("verify_m_derivatives: max_order must be in [0,2]");
    Rng rng(spec.seed);
    SampleStats st;
    st.n_samples = n;
    double c_up = 0.0;
    for (long i = 0; i < n; ++i) {
        const Vec2 eta = rng.log_uniform(spec.mag_lo, spec.mag_hi) * rng.unit_vec();
        const Vec2 sigma = rng.log_uniform(spec.mag_lo, spec.mag_hi) * rng.unit_vec();
        const BoundShapes s = shapes(eta, sigma);
        const double inv_eta = 1.0 / norm(eta);

        auto m = [&](Vec2 sg) { return multiplier_raw(eta, sg); };
        auto quotient = [&](double deriv_mag, int order) {
            const double bound = inv_eta * s.mx * std::pow(s.mn, 2.0 + order);
            return deriv_mag / bound;
        };

        double q = quotient(norm(m(sigma)), 0);
        if (max_order >= 1) {
            const double h1 = fd_step(eta, sigma, 1);
            const Vec2 ex{h1, 0.0}, ey{0.0, h1};
            const Vec2 d1 = (0.5 / h1) * (m(sigma + ex) - m(sigma - ex));
            const Vec2 d2 = (0.5 / h1) * (m(sigma + ey) - m(sigma - ey));
            q = std::max({q, quotient(norm(d1), 1), quotient(norm(d2), 1)});
        }
        if (max_order >= 2) {
            const double h2 = fd_step(eta, sigma, 2);
            const Vec2 ex{h2, 0.0}, ey{0.0, h2};
            const Vec2 m0 = m(sigma);
            const Vec2 dxx = (1.0 / (h2 * h2)) * (m(sigma + ex) - 2.0 * m0 + m(sigma - ex));
            const Vec2 dyy = (1.0 / (h2 * h2)) * (m(sigma + ey) - 2.0 * m0 + m(sigma - ey));
            const Vec2 dxy = (0.25 / (h2 * h2)) * ((m(sigma + ex + ey) - m(sigma - ex + ey)) -
                                                   (m(sigma + ex - ey) - m(sigma - ex - ey)));
            q = std::max({q, quotient(norm(dxx), 2), quotient(norm(dyy), 2), quotient(norm(dxy), 2)});
        }
        if (!std::isfinite(q)) {
            ++st.violations;
            continue;
        }
        c_up = std::max(c_up, q);
    }
    st.c_upper = c_up;
    st.worst_ratio = c_up;
    return st;
}

namespace {

/// Random localized smooth field: a few modulated Gaussian bumps, built
/// from per-axis tables (envelope and phase both factor across axes).
Field random_smooth_field(const std::shared_ptr<const Grid>& grid, Rng& rng) {
    const int n = grid->n();
    Field u(grid, Space::physical);
    const int bumps = 2 + int(rng.next_u64() % 4);
    std::vector<double> ex(n), ey(n), cx(n), sx(n), cy(n), sy(n);
    for (int b = 0; b < bumps; ++b) {
        const double w = rng.uniform(0.6, 1.8);
        const Vec2 x0 = rng.uniform(0.0, 3.0) * rng.unit_vec();
        const Vec2 xi0 = rng.uniform(0.0, 2.0) * rng.unit_vec();
        const double amp = rng.uniform(0.2, 1.0);
        const double ph0 = rng.uniform(0.0, 2.0 * M_PI);
        const double inv2w2 = 1.0 / (2.0 * w * w);
        for (int j = 0; j < n; ++j) {
            const double c = grid->coord(j);
            ex[j] = amp * std::exp(-(c - x0.x) * (c - x0.x) * inv2w2);
            ey[j] = std::exp(-(c - x0.y) * (c - x0.y) * inv2w2);
            const double px = c * xi0.x + ph0;
            const double py = c * xi0.y;
            cx[j] = std::cos(px);
            sx[j] = std::sin(px);
            cy[j] = std::cos(py);
            sy[j] = std::sin(py);
        }
        for (int iy = 0; iy < n; ++iy) {
            cplx* row = u.values().data() + std::size_t(iy) * n;
            for (int ix = 0; ix < n; ++ix) {
                const double env = ex[ix] * ey[iy];
                row[ix] += cplx(env * (cx[ix] * cy[iy] - sx[ix] * sy[iy]),
                                env * (sx[ix] * cy[iy] + cx[ix] * sy[iy]));
            }
        }
    }
    return u;
}

} // namespace

SampleStats verify_hls(double gamma, long n_fields, std::uint64_t seed, int grid_n, double extent) {
    const PotentialParams p(gamma, 1.0, 1.0,
                            ZeroModePolicy::value(riesz_dc_r2_consistent(gamma, extent)));
    const double c_hls = 2.0 * M_PI / (2.0 - gamma) + 1.0;
    auto grid = make_grid(grid_n, extent);
    const auto table = riesz_symbol_table(*grid, p);
    Rng rng(seed);
    SampleStats st;
    st.n_samples = n_fields;
    st.c_upper = c_hls;
    double worst = 0.0;
    for (long i = 0; i < n_fields; ++i) {
        const Field u = random_smooth_field(grid, rng);
        const double lhs = sup_norm(riesz_convolve_with_table(modulus_squared(u), table, p));
        const double rhs = c_hls * std::pow(mass(u), 2.0 - gamma) * std::pow(sup_norm(u), gamma);
        const double ratio = lhs / rhs;
        if (!std::isfinite(ratio) || ratio > 1.0) ++st.violations;
        worst = std::max(worst, ratio);
    }
    st.worst_ratio = worst;
    return st;
}

DispersiveReport verify_dispersive(const std::vector<double>& blocks,
                                   const std::vector<double>& times, const Field& datum,
                                   double fit_t_min) {
    const Field phys = datum.space() == Space::physical ? datum : to_physical(datum);
    const Field hat = to_spectral(phys);
    const double l1 = l1_norm(phys);
    DispersiveReport rep;
    rep.times = times;
    rep.stats.n_samples = long(blocks.size() * times.size());
    double c_lo = std::numeric_limits<double>::infinity(), c_up = -c_lo;

    for (double nblock : blocks) {
        const Field localized = lp_project_inhom(hat, nblock);
        std::vector<double> sups;
        std::vector<double>& ratios = rep.ratios[nblock];
        sups.reserve(times.size());
        for (double t : times) {
            const double sup = sup_norm(half_wave(localized, t));
            sups.push_back(sup);
            const double ratio = sup * bracket(t) / (nblock * nblock * l1);
            ratios.push_back(ratio);
            if (!std::isfinite(ratio)) ++rep.stats.violations;
            rep.stats.worst_ratio = std::max(rep.stats.worst_ratio, ratio);
        }
        const DecayFit fit = fit_decay(times, sups, fit_t_min, times.back() + 1.0);
        rep.exponents[nblock] = fit.exponent;
        c_lo = std::min(c_lo, fit.exponent);
        c_up = std::max(c_up, fit.exponent);
        if (!(fit.exponent >= -1.15 && fit.exponent <= -0.85)) ++rep.stats.violations;
    }
    rep.stats.c_lower = c_lo;
    rep.stats.c_upper = c_up;
    return rep;
}

DispersiveReport verify_dispersive_default() {
    auto grid = make_grid(1024, 192.0);
    Field datum(grid, Space::physical);
    const double inv2w2 = 1.0 / (2.0 * 0.5 * 0.5);
    for (std::size_t i = 0; i < datum.size(); ++i)
        datum[i] = std::exp(-norm2(grid->coord_at(i)) * inv2w2);
    std::vector<double> times;
    for (int t = 1; t <= 64; ++t) times.push_back(double(t));
    return verify_dispersive({1.0, 2.0, 4.0, 8.0}, times, datum, 16.0);
}

// ---------------------------------------------------------------------------
// C(m) estimation
// ---------------------------------------------------------------------------

namespace {

std::mutex& cm_plan_mutex() {
    static std::mutex m;
    return m;
}

/// In-place centered 2D DFT on an n x n slab:
///   out[l] = delta^2 * (-1)^(l1+l2) * sum_j (-1)^(j1+j2) in[j] e^{+2pi i l.j / n}
/// which equals sum_j in[j] e^{+i x_l . a_j} delta^2 for the centered
/// lattices a_j = (j - n/2) delta, x_l = (l - n/2) * 2pi/(n delta).
/// Requires even n.
class CenteredDft2D {
public:
    explicit CenteredDft2D(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(cm_plan_mutex());
        std::vector<cplx> a(std::size_t(n) * std::size_t(n)), b(a.size());
        plan_ = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~CenteredDft2D() {
        std::lock_guard<std::mutex> lock(cm_plan_mutex());
        fftw_destroy_plan(plan_);
    }
    CenteredDft2D(const CenteredDft2D&) = delete;

    void apply(cplx* slab, double delta) const {
        const std::size_t n = std::size_t(n_);
        const double vol = delta * delta;
        for (std::size_t j2 = 0; j2 < n; ++j2)
            for (std::size_t j1 = 0; j1 < n; ++j1)
                if ((j1 + j2) & 1) slab[j2 * n + j1] = -slab[j2 * n + j1];
        fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(slab),
                         reinterpret_cast<fftw_complex*>(slab));
        for (std::size_t l2 = 0; l2 < n; ++l2)
            for (std::size_t l1 = 0; l1 < n; ++l1) {
                const double s = ((l1 + l2) & 1) ? -vol : vol;
                slab[l2 * n + l1] *= s;
            }
    }

private:
    int n_;
    fftw_plan plan_;
};

Vec2 centered_point(int idx, int n, double half) {
    const double delta = 2.0 * half / n;
    const int i1 = idx % n, i2 = idx / n;
    return {(i1 - n / 2) * delta, (i2 - n / 2) * delta};
}

} // namespace

double estimate_l1_inverse_2d(const std::function<cplx(Vec2)>& symbol, int n, double half) {
    if (n < 2 || (n % 2) != 0) throw ConfigError("estimate_l1_inverse_2d: n must be even >= 2");
    const double delta = 2.0 * half / n;
    std::vector<cplx> slab(std::size_t(n) * std::size_t(n));
    for (int i = 0; i < n * n; ++i) slab[std::size_t(i)] = symbol(centered_point(i, n, half));
    CenteredDft2D dft(n);
    dft.apply(slab.data(), delta);
    const double dxl = 2.0 * M_PI / (n * delta);
    double l1 = 0.0;
    for (const auto& v : slab) l1 += std::abs(v);
    return l1 * dxl * dxl;
}

double estimate_cm_norm(const Symbol4& symbol, const CmGrid& grid) {
    const int na = grid.n_a, nb = grid.n_b;
    if (na < 2 || nb < 2 || (na % 2) || (nb % 2))
        throw ConfigError("estimate_cm_norm: grid sides must be even >= 2");
    const std::size_t pa = std::size_t(na) * std::size_t(na);
    const std::size_t pb = std::size_t(nb) * std::size_t(nb);
    if (pa * pb > (std::size_t(1) << 24))
        throw SizeError("estimate_cm_norm: 4D grid exceeds 2^24 points");

    const double da = 2.0 * grid.half_a / na;
    const double db = 2.0 * grid.half_b / nb;

    // Stage 1: for each b lattice point, transform the a-slab.
    std::vector<cplx> data(pa * pb);
    for (std::size_t kb = 0; kb < pb; ++kb) {
        const Vec2 b = centered_point(int(kb), nb, grid.half_b);
        cplx* slab = data.data() + kb * pa;
        for (std::size_t ka = 0; ka < pa; ++ka)
            slab[ka] = symbol(centered_point(int(ka), na, grid.half_a), b);
    }
    {
        CenteredDft2D dft(na);
        for (std::size_t kb = 0; kb < pb; ++kb) dft.apply(data.data() + kb * pa, da);
    }

    // Stage 2: transpose to [x][b] and transform the b-slabs.
    std::vector<cplx> tr(pa * pb);
    for (std::size_t kb = 0; kb < pb; ++kb)
        for (std::size_t ka = 0; ka < pa; ++ka) tr[ka * pb + kb] = data[kb * pa + ka];
    {
        CenteredDft2D dft(nb);
        for (std::size_t ka = 0; ka < pa; ++ka) dft.apply(tr.data() + ka * pb, db);
    }

    const double dxl = 2.0 * M_PI / (na * da);
    const double dyl = 2.0 * M_PI / (nb * db);
    double l1 = 0.0;
    for (const auto& v : tr) l1 += std::abs(v);
    return l1 * dxl * dxl * dyl * dyl;
}

cplx m1_dyadic_symbol(Vec2 eta, Vec2 sigma, double L, double n1, double n2) {
    const double cut = lp_bump::chi_band(eta, L) * lp_bump::rho(eta + sigma, n1) *
                       lp_bump::rho(sigma, n2);
    if (cut == 0.0) return 0.0;

    // div_sigma(m * div_sigma m) = s^2 + m . grad s, with s = div_sigma m;
    // first and second derivatives of m by central differences.
    const double h = fd_step(eta, sigma, 2);
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    auto m = [&](Vec2 sg) { return multiplier_raw(eta, sg); };

    const Vec2 m0 = m(sigma);
    const Vec2 mxp = m(sigma + ex), mxm = m(sigma - ex);
    const Vec2 myp = m(sigma + ey), mym = m(sigma - ey);

    const double s = (mxp.x - mxm.x) / (2.0 * h) + (myp.y - mym.y) / (2.0 * h);

    // grad s = (d/dx + d/dy applied to div m): needs second derivatives.
    const Vec2 dxx = (1.0 / (h * h)) * (mxp - 2.0 * m0 + mxm);
    const Vec2 dyy = (1.0 / (h * h)) * (myp - 2.0 * m0 + mym);
    const Vec2 dxy = (0.25 / (h * h)) * ((m(sigma + ex + ey) - m(sigma - ex + ey)) -
                                         (m(sigma + ex - ey) - m(sigma - ex - ey)));
    const double ds_dx = dxx.x + dxy.y; // d/dx (dm1/dx + dm2/dy)
    const double ds_dy = dxy.x + dyy.y;

    const double div_ms = s * s + m0.x * ds_dx + m0.y * ds_dy;
    return cut * div_ms;
}

} // namespace relhartree::analysis
