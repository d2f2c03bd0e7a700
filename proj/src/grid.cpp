// Copyright 2026 The sqlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqlsim/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqlsim {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<cdouble> tw;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        tw.resize(len / 2);
        for (std::size_t j = 0; j < len / 2; ++j) tw[j] = std::polar(1.0, ang * static_cast<double>(j));
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cdouble u = a[i + j];
                const cdouble v = a[i + j + len / 2] * tw[j];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

// Wavenumber of FFT bin j for box length L.
double bin_wavenumber(std::size_t j, std::size_t n, double length) {
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    auto idx = static_cast<std::ptrdiff_t>(j);
    if (idx >= half) idx -= static_cast<std::ptrdiff_t>(n);
    return 2.0 * kPi * static_cast<double>(idx) / length;
}

// Fraction of |psi|^2 mass on points where pred(q_j) holds.
template <typename Pred>
double mass_fraction(const GridState& gs, Pred&& pred) {
    const Grid& g = gs.grid();
    double inside = 0.0, total = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double w = std::norm(gs.amplitudes()[j]);
        total += w;
        if (pred(g.point(j))) inside += w;
    }
    return total > 0.0 ? inside / total : 0.0;
}

// Mass fraction in the outer 10% of the wavenumber band: interpolation and
// spectral phases are unreliable for states that chirp up to the band edge.
double band_edge_mass(const std::vector<cdouble>& spectrum, const Grid& g) {
    double total = 0.0, edge = 0.0;
    const double k_max = kPi / g.spacing();
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double w = std::norm(spectrum[j]);
        total += w;
        if (std::abs(bin_wavenumber(j, g.n_points, g.length())) > 0.9 * k_max) edge += w;
    }
    return total > 0.0 ? edge / total : 0.0;
}

GridState resample_scaled(const GridState& gs, double lambda, double amp_log) {
    const Grid& g = gs.grid();
    // Source mass outside lambda * box maps outside the output window and is
    // dropped; reject when it is not negligible.
    const double lost = mass_fraction(gs, [&](double q) {
        return q < lambda * g.q_min || q >= lambda * (g.q_min + g.length());
    });
    if (lost > 1e-6) throw std::domain_error("resample: dilatation pushes support off-grid");
    {
        std::vector<cdouble> spec(gs.amplitudes().begin(), gs.amplitudes().end());
        fft_inplace(spec, false);
        if (band_edge_mass(spec, g) > 1e-8)
            throw std::domain_error("resample: state is not resolved by this grid "
                                    "(spectral mass at the band edge); refine the grid");
    }
    std::vector<cdouble> out(g.n_points);
    const double amp = std::sqrt(lambda) * std::exp(amp_log);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double target = lambda * g.point(j);
        if (target < g.q_min || target >= g.q_min + g.length())
            out[j] = 0.0;
        else
            out[j] = amp * gs.evaluate(target);
    }
    return GridState(g, std::move(out));
}

GridState shift_spectral(const GridState& gs, double dq) {
    const Grid& g = gs.grid();
    // Mass within |dq| of the receding edge would wrap around periodically.
    const double lost = mass_fraction(gs, [&](double q) {
        return dq > 0.0 ? q >= g.q_min + g.length() - dq : q < g.q_min - dq;
    });
    if (lost > 1e-6) throw std::domain_error("shift: translation pushes support off-grid");
    std::vector<cdouble> a(gs.amplitudes().begin(), gs.amplitudes().end());
    fft_inplace(a, false);
    if (band_edge_mass(a, g) > 1e-8)
        throw std::domain_error("shift: state is not resolved by this grid "
                                "(spectral mass at the band edge); refine the grid");
    for (std::size_t j = 0; j < g.n_points; ++j)
        a[j] *= std::exp(cdouble(0.0, -bin_wavenumber(j, g.n_points, g.length()) * dq));
    fft_inplace(a, true);
    return GridState(g, std::move(a));
}

std::vector<double> weights_trapezoid(std::size_t n, double spacing) {
    std::vector<double> w(n, spacing);
    w.front() = 0.5 * spacing;
    w.back() = 0.5 * spacing;
    return w;
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void Grid::validate() const {
    if (!(q_max > q_min)) throw std::invalid_argument("Grid: q_max must exceed q_min");
    if (n_points < 256 || !is_power_of_two(n_points))
        throw std::invalid_argument("Grid: n_points must be a power of two, at least 256");
}

Grid Grid::covering(std::span<const GaussianState> states, double span_sigmas, std::size_t n_points,
                    double extra_margin) {
    if (states.empty()) throw std::invalid_argument("Grid::covering: need at least one state");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const GaussianState& s : states) {
        const double sigma = std::sqrt(1.0 / (4.0 * s.exponent().real()));
        lo = std::min(lo, s.mean_position() - span_sigmas * sigma);
        hi = std::max(hi, s.mean_position() + span_sigmas * sigma);
    }
    Grid g{lo - extra_margin, hi + extra_margin, n_points};
    g.validate();
    return g;
}

GridState::GridState(Grid grid, std::vector<cdouble> amplitudes) : grid_(grid), amp_(std::move(amplitudes)) {
    grid_.validate();
    if (amp_.size() != grid_.n_points) throw std::invalid_argument("GridState: amplitude count must match the grid");
}

double GridState::squared_norm() const {
    double s = 0.0;
    for (const cdouble& z : amp_) s += std::norm(z);
    return s * grid_.spacing();
}

GridState GridState::normalized() const {
    const double scale = 1.0 / std::sqrt(squared_norm());
    std::vector<cdouble> a(amp_);
    for (auto& z : a) z *= scale;
    return GridState(grid_, std::move(a));
}

double GridState::boundary_leak() const {
    double peak = 0.0;
    for (const cdouble& z : amp_) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(amp_.front()), std::abs(amp_.back())) / peak;
}

cdouble GridState::evaluate(double q) const {
    const std::size_t n = grid_.n_points;
    const double t = (q - grid_.q_min) / grid_.spacing();
    const double j_near = std::round(t);
    if (std::abs(t - j_near) < 1e-9) {
        auto j = static_cast<long long>(j_near) % static_cast<long long>(n);
        if (j < 0) j += static_cast<long long>(n);
        return amp_[static_cast<std::size_t>(j)];
    }
    // Trigonometric interpolation of the periodic samples:
    //   psi(q) = sin(pi t)/n * sum_j (-1)^j psi_j cot(pi (t - j)/n).
    // Angles advance arithmetically; the rotation recurrence restarts every
    // 256 steps to keep roundoff below ~1e-11 on the dominant terms.
    const double beta = kPi / static_cast<double>(n);
    const cdouble step = std::polar(1.0, -beta);
    cdouble sum = 0.0;
    double sign = 1.0;
    cdouble z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j % 256 == 0) z = std::polar(1.0, beta * (t - static_cast<double>(j)));
        sum += sign * amp_[j] * (z.real() / z.imag());
        z *= step;
        sign = -sign;
    }
    return std::sin(kPi * t) / static_cast<double>(n) * sum;
}

GridState discretize(const GaussianState& s, const Grid& grid, const PhysicalUnits& units) {
    units.validate();
    grid.validate();
    const double sigma = std::sqrt(1.0 / (4.0 * s.exponent().real()));
    if (grid.q_min > s.mean_position() - 12.0 * sigma + 1e-12 ||
        grid.q_max < s.mean_position() + 12.0 * sigma - 1e-12)
        throw std::invalid_argument("discretize: grid must span at least 12 standard deviations around the mean");
    std::vector<cdouble> a(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) a[j] = s.amplitude(grid.point(j));
    GridState gs(grid, std::move(a));
    if (gs.boundary_leak() > 1e-10) throw std::invalid_argument("discretize: state does not fit the box");
    return gs;
}

GridState free_evolve_grid(const GridState& gs, double t, const PhysicalUnits& units) {
    units.validate();
    const Grid& g = gs.grid();
    std::vector<cdouble> a(gs.amplitudes().begin(), gs.amplitudes().end());
    fft_inplace(a, false);
    // Nyquist guard: negligible spectral mass may sit in the outer 10% of the
    // band, otherwise the propagation phase is aliased.
    const double k_max = kPi / g.spacing();
    double total = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double w = std::norm(a[j]);
        total += w;
        if (std::abs(bin_wavenumber(j, g.n_points, g.length())) > 0.9 * k_max) edge += w;
    }
    if (edge > 1e-12 * total)
        throw std::domain_error("free_evolve_grid: momentum content does not fit the Nyquist band");
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double k = bin_wavenumber(j, g.n_points, g.length());
        a[j] *= std::exp(cdouble(0.0, -units.hbar * k * k * t / (2.0 * units.mass)));
    }
    fft_inplace(a, true);
    return GridState(g, std::move(a));
}

GridState apply_reduction_grid(const SchemeDescriptor& scheme, const GridState& gs, double x,
                               const PhysicalUnits& units, double* weight_out) {
    const double norm_in = gs.squared_norm();
    GridState out = gs;
    if (const auto* gl = std::get_if<GordonLouisellScheme>(&scheme)) {
        const double weight = std::norm(gs.evaluate(x)) / norm_in;
        GaussianState target = shift_position(gl->target, x);
        out = discretize(target, gs.grid(), units);
        if (weight_out) *weight_out = weight;
        return out.normalized();
    }
    const GridReduction red = grid_reduction(scheme, x, units);
    if (red.pre_dilate) out = resample_scaled(out, red.pre_dilate->lambda, red.pre_dilate->extra_log_amp);
    {
        std::vector<cdouble> a(out.amplitudes().begin(), out.amplitudes().end());
        for (std::size_t j = 0; j < out.grid().n_points; ++j) a[j] *= red.multiplier(out.grid().point(j));
        out = GridState(out.grid(), std::move(a));
    }
    if (red.post_dilate) out = resample_scaled(out, red.post_dilate->lambda, red.post_dilate->extra_log_amp);
    if (red.post_shift != 0.0) out = shift_spectral(out, red.post_shift);
    const double weight = out.squared_norm() / norm_in;
    if (weight <= 0.0 || !std::isfinite(weight))
        throw std::domain_error("apply_reduction_grid: outcome has vanishing density at x");
    if (weight_out) *weight_out = weight;
    return out.normalized();
}

Moments moments_grid(const GridState& gs, const PhysicalUnits& units) {
    units.validate();
    const Grid& g = gs.grid();
    const auto amps = gs.amplitudes();
    const double nrm = gs.squared_norm();

    Moments m;
    double sq = 0.0, sq2 = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double w = std::norm(amps[j]) * g.spacing();
        sq += w * g.point(j);
        sq2 += w * g.point(j) * g.point(j);
    }
    m.mean_q = sq / nrm;
    m.var_q = sq2 / nrm - m.mean_q * m.mean_q;

    std::vector<cdouble> spec(amps.begin(), amps.end());
    fft_inplace(spec, false);
    double wk = 0.0, sk = 0.0, sk2 = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double k = bin_wavenumber(j, g.n_points, g.length());
        const double w = std::norm(spec[j]);
        wk += w;
        sk += w * k;
        sk2 += w * k * k;
    }
    const double mean_k = sk / wk;
    m.mean_p = units.hbar * mean_k;
    m.var_p = units.hbar * units.hbar * (sk2 / wk - mean_k * mean_k);

    // corr = Re <psi| (q - qbar)(p - pbar) |psi>, with p psi computed spectrally.
    std::vector<cdouble> dpsi(spec);
    for (std::size_t j = 0; j < g.n_points; ++j)
        dpsi[j] *= units.hbar * bin_wavenumber(j, g.n_points, g.length());
    fft_inplace(dpsi, true);
    double corr = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const cdouble dp = dpsi[j] - m.mean_p * amps[j];
        corr += (std::conj(amps[j]) * (g.point(j) - m.mean_q) * dp).real() * g.spacing();
    }
    m.corr = corr / nrm;
    return m;
}

double l2_distance(const GridState& a, const GridState& b) {
    if (a.grid().n_points != b.grid().n_points || a.grid().q_min != b.grid().q_min ||
        a.grid().q_max != b.grid().q_max)
        throw std::invalid_argument("l2_distance: states must share a grid");
    const GridState an = a.normalized();
    const GridState bn = b.normalized();
    cdouble inner = 0.0;
    for (std::size_t j = 0; j < a.grid().n_points; ++j)
        inner += std::conj(an.amplitudes()[j]) * bn.amplitudes()[j];
    inner *= a.grid().spacing();
    const cdouble phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : cdouble(1.0);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < a.grid().n_points; ++j)
        dist2 += std::norm(an.amplitudes()[j] * phase - bn.amplitudes()[j]);
    return std::sqrt(dist2 * a.grid().spacing());
}

double l2_distance(const GridState& gs, const GaussianState& s) {
    std::vector<cdouble> b(gs.grid().n_points);
    for (std::size_t j = 0; j < gs.grid().n_points; ++j) b[j] = s.amplitude(gs.grid().point(j));
    return l2_distance(gs, GridState(gs.grid(), std::move(b)));
}

OutcomeGrid OutcomeGrid::covering(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                                  std::size_t n_points, double pad_widths) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double width = 0.0;
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) {
        const Moments m = moments_grid(gs, units);
        lo = m.mean_q - 10.0 * std::sqrt(m.var_q);
        hi = m.mean_q + 10.0 * std::sqrt(m.var_q);
        width = 0.0;
    } else {
        const SchemeKernels k = *scheme_kernels(scheme, units);
        const auto amps = gs.amplitudes();
        double peak = 0.0;
        for (const cdouble& z : amps) peak = std::max(peak, std::norm(z));
        for (std::size_t j = 0; j < gs.grid().n_points; ++j) {
            if (std::norm(amps[j]) < 1e-16 * peak) continue;
            const double c = k.center(gs.grid().point(j));
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        width = k.width;
    }
    OutcomeGrid og;
    og.x_min = lo - pad_widths * width;
    og.x_max = hi + pad_widths * width;
    og.n_points = n_points;
    if (!(og.x_max > og.x_min)) throw std::invalid_argument("OutcomeGrid::covering: degenerate outcome range");
    return og;
}

double TabulatedDensity::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double dx = x[i + 1] - x[i];
        s += 0.5 * dx * (x[i] * pdf[i] + x[i + 1] * pdf[i + 1]);
    }
    return s;
}

double TabulatedDensity::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double dx = x[i + 1] - x[i];
        const double a = (x[i] - m) * (x[i] - m) * pdf[i];
        const double b = (x[i + 1] - m) * (x[i + 1] - m) * pdf[i + 1];
        s += 0.5 * dx * (a + b);
    }
    return s;
}

double TabulatedDensity::sample(double u01) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u01);
    if (it == cdf.begin()) return x.front();
    if (it == cdf.end()) return x.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double frac = (c1 > c0) ? (u01 - c0) / (c1 - c0) : 0.5;
    return x[i - 1] + frac * (x[i] - x[i - 1]);
}

double TabulatedDensity::density_at(double xq) const {
    if (xq <= x.front() || xq >= x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double frac = (xq - x[i - 1]) / (x[i] - x[i - 1]);
    return pdf[i - 1] + frac * (pdf[i] - pdf[i - 1]);
}

TabulatedDensity distribution_grid(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                                   const OutcomeGrid* outcomes) {
    const OutcomeGrid og = outcomes ? *outcomes : OutcomeGrid::covering(scheme, gs, units);
    const Grid& g = gs.grid();
    const auto amps = gs.amplitudes();
    const double nrm = gs.squared_norm();

    TabulatedDensity d;
    d.x.resize(og.n_points);
    d.pdf.assign(og.n_points, 0.0);
    for (std::size_t i = 0; i < og.n_points; ++i) d.x[i] = og.point(i);

    if (std::holds_alternative<GordonLouisellScheme>(scheme)) {
        for (std::size_t i = 0; i < og.n_points; ++i) d.pdf[i] = std::norm(gs.evaluate(d.x[i])) / nrm;
    } else {
        const SchemeKernels k = *scheme_kernels(scheme, units);
        double peak = 0.0;
        for (const cdouble& z : amps) peak = std::max(peak, std::norm(z));
        for (std::size_t j = 0; j < g.n_points; ++j) {
            const double w = std::norm(amps[j]) * g.spacing() / nrm;
            if (w < 1e-18 * peak) continue;
            const double q = g.point(j);
            for (std::size_t i = 0; i < og.n_points; ++i) d.pdf[i] += w * k.pom(d.x[i], q);
        }
    }

    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < og.n_points; ++i)
        mass += 0.5 * og.spacing() * (d.pdf[i] + d.pdf[i + 1]);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::domain_error("distribution_grid: outcome grid truncates more than 1e-6 of the mass");
    for (auto& p : d.pdf) p /= mass;

    d.cdf.assign(og.n_points, 0.0);
    for (std::size_t i = 1; i < og.n_points; ++i)
        d.cdf[i] = d.cdf[i - 1] + 0.5 * og.spacing() * (d.pdf[i - 1] + d.pdf[i]);
    const double total = d.cdf.back();
    for (auto& c : d.cdf) c /= total;
    return d;
}

namespace {

// Double quadrature of weight(x, q) * G(x, q) * |psi(q)|^2 over the outcome
// and position grids.
template <typename WeightFn>
double kernel_double_integral(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                              const OutcomeGrid* outcomes, WeightFn&& weight) {
    const SchemeKernels k = *scheme_kernels(scheme, units);
    const OutcomeGrid og = outcomes ? *outcomes : OutcomeGrid::covering(scheme, gs, units);
    const Grid& g = gs.grid();
    const auto amps = gs.amplitudes();
    const double nrm = gs.squared_norm();
    const auto wx = weights_trapezoid(og.n_points, og.spacing());
    double peak = 0.0;
    for (const cdouble& z : amps) peak = std::max(peak, std::norm(z));
    double total = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double wq = std::norm(amps[j]) * g.spacing() / nrm;
        if (wq < 1e-18 * peak) continue;
        const double q = g.point(j);
        double inner = 0.0;
        for (std::size_t i = 0; i < og.n_points; ++i) {
            const double x = og.point(i);
            inner += wx[i] * k.pom(x, q) * weight(x, q);
        }
        total += wq * inner;
    }
    return total;
}

}  // namespace

double grid_precision(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                      const OutcomeGrid* outcomes) {
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) return 0.0;
    const double scale = outcome_to_position_scale(scheme);
    return kernel_double_integral(scheme, gs, units, outcomes, [scale](double x, double q) {
        const double e = scale * x - q;
        return e * e;
    });
}

double grid_posterior_deviation(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                                const OutcomeGrid* outcomes) {
    if (const auto* gl = std::get_if<GordonLouisellScheme>(&scheme)) {
        const Grid tgrid = Grid::covering(std::span<const GaussianState>(&gl->target, 1), 14.0, 1024);
        const Moments m = moments_grid(discretize(gl->target, tgrid, units), units);
        return m.var_q;
    }
    const SchemeKernels k = *scheme_kernels(scheme, units);
    const double scale = outcome_to_position_scale(scheme);
    return kernel_double_integral(scheme, gs, units, outcomes, [&k, scale](double x, double q) {
        const double e = k.pull_state * q + k.pull_outcome * x - scale * x;
        return e * e;
    });
}

double completeness_residual(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units,
                             const OutcomeGrid* outcomes) {
    if (std::holds_alternative<GordonLouisellScheme>(scheme)) return 0.0;
    const SchemeKernels k = *scheme_kernels(scheme, units);
    const OutcomeGrid og = outcomes ? *outcomes : OutcomeGrid::covering(scheme, gs, units);
    const Grid& g = gs.grid();
    const auto amps = gs.amplitudes();
    const auto wx = weights_trapezoid(og.n_points, og.spacing());
    double peak = 0.0;
    for (const cdouble& z : amps) peak = std::max(peak, std::norm(z));
    double residual = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (std::norm(amps[j]) < 1e-14 * peak) continue;
        const double q = g.point(j);
        double s = 0.0;
        for (std::size_t i = 0; i < og.n_points; ++i) s += wx[i] * k.pom(og.point(i), q);
        residual = std::max(residual, std::abs(s - 1.0));
    }
    return residual;
}

std::string dump_grid_state(const GridState& gs) {
    std::string out = "q,re_psi,im_psi\n";
    for (std::size_t j = 0; j < gs.grid().n_points; ++j) {
        append_double(out, gs.grid().point(j));
        out.push_back(',');
        append_double(out, gs.amplitudes()[j].real());
        out.push_back(',');
        append_double(out, gs.amplitudes()[j].imag());
        out.push_back('\n');
    }
    return out;
}

}  // namespace sqlsim
