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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sqlsim/gaussian_state.hpp"
#include "sqlsim/schemes.hpp"

namespace sqlsim {

// Uniform position grid q_j = q_min + j (q_max - q_min)/n, j = 0..n-1,
// treated periodically by the spectral machinery.  n must be a power of two,
// at least 256.
struct Grid {
    double q_min = -24.0;
    double q_max = 24.0;
    std::size_t n_points = 4096;

    void validate() const;
    double length() const { return q_max - q_min; }
    double spacing() const { return length() / static_cast<double>(n_points); }
    double point(std::size_t j) const { return q_min + spacing() * static_cast<double>(j); }

    // Box covering every state to span_sigmas standard deviations around its
    // mean, plus an absolute margin for planned shifts/dilatations.
    static Grid covering(std::span<const GaussianState> states, double span_sigmas = 12.0,
                         std::size_t n_points = 4096, double extra_margin = 0.0);
};

// Discretized complex wavefunction.  Amplitudes are copied on write; all
// operations return new values.
class GridState {
  public:
    GridState(Grid grid, std::vector<cdouble> amplitudes);

    const Grid& grid() const { return grid_; }
    std::span<const cdouble> amplitudes() const { return amp_; }

    double squared_norm() const;
    GridState normalized() const;
    // max boundary amplitude magnitude relative to the peak; the state fits
    // the box when this is < 1e-10.
    double boundary_leak() const;

    // Band-limited (trigonometric) interpolation of the periodic samples.
    cdouble evaluate(double q) const;

  private:
    Grid grid_;
    std::vector<cdouble> amp_;
};

// Pointwise evaluation of the closed-form state.  Throws if the grid spans
// fewer than 12 sigma around the mean or the state does not fit the box.
GridState discretize(const GaussianState& s, const Grid& grid, const PhysicalUnits& units = {});

// Spectral free evolution: FFT, multiply by exp(-i hbar k^2 t / 2m), inverse
// FFT.  Throws if the state's momentum content does not fit the Nyquist band.
GridState free_evolve_grid(const GridState& gs, double t, const PhysicalUnits& units = {});

// Apply the reduction operator Omega(x) of the scheme pointwise: multiply,
// dilate by band-limited resampling, shift spectrally.  The pre-normalization
// weight (the outcome density up to the dx measure) is written to weight_out
// when given; the returned state is normalized.
GridState apply_reduction_grid(const SchemeDescriptor& scheme, const GridState& gs, double x,
                               const PhysicalUnits& units = {}, double* weight_out = nullptr);

Moments moments_grid(const GridState& gs, const PhysicalUnits& units = {});

// L2 distance over the grid after normalizing both states and aligning the
// global phase (phase of <grid|analytic> removed).
double l2_distance(const GridState& gs, const GaussianState& s);
double l2_distance(const GridState& a, const GridState& b);

// Outcome grid for the tabulated density of a kernel-backed scheme.
struct OutcomeGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_points = 2048;
    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double point(std::size_t j) const { return x_min + spacing() * static_cast<double>(j); }

    // Covers the kernel centers over the state's support plus pad_widths
    // kernel widths on each side.
    static OutcomeGrid covering(const SchemeDescriptor& scheme, const GridState& gs,
                                const PhysicalUnits& units = {}, std::size_t n_points = 2048,
                                double pad_widths = 10.0);
};

struct TabulatedDensity {
    std::vector<double> x;
    std::vector<double> pdf;  // normalized to unit integral (trapezoid)
    std::vector<double> cdf;

    double mean() const;
    double variance() const;
    double sample(double u01) const;  // inverse CDF, linear within cells
    double density_at(double xq) const;
};

// p(x) = integral over q of G(x, q) |psi(q)|^2 via quadrature; throws if more
// than 1e-6 of the outcome mass falls outside the outcome grid.
TabulatedDensity distribution_grid(const SchemeDescriptor& scheme, const GridState& gs,
                                   const PhysicalUnits& units = {}, const OutcomeGrid* outcomes = nullptr);

// Brute-force noise functionals by double quadrature over (x, q):
//   precision:          integral (scale x - q)^2 G(x,q) |psi(q)|^2
//   posterior deviation:integral (q_post - scale x)^2 G(x,q) |psi(q)|^2,
//                       q_post = pull_state q + pull_outcome x.
double grid_precision(const SchemeDescriptor& scheme, const GridState& gs, const PhysicalUnits& units = {},
                      const OutcomeGrid* outcomes = nullptr);
double grid_posterior_deviation(const SchemeDescriptor& scheme, const GridState& gs,
                                const PhysicalUnits& units = {}, const OutcomeGrid* outcomes = nullptr);

// max over grid q of |integral G(x, q) dx - 1|: instrument completeness.
double completeness_residual(const SchemeDescriptor& scheme, const GridState& gs,
                             const PhysicalUnits& units = {}, const OutcomeGrid* outcomes = nullptr);

// (q, Re psi, Im psi) rows as comma-separated text for plotting.
std::string dump_grid_state(const GridState& gs);

}  // namespace sqlsim
