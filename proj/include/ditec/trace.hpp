#pragma once

// Discrete trace transform: line geometry, functionals evaluated along
// sampled lines, and the contribution-mask analysis of how often each
// pixel is visited by the sampling pattern.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ditec/grid.hpp"

namespace ditec {

enum class PhiRange { Full, Half };           ///< [0, 2π) or [0, π)
enum class RhoRange { Symmetric, Positive };  ///< [−r, r] or [0, r]
enum class Functional { Radon, IF2 };
enum class Interpolation { Bilinear, Nearest };
enum class ChannelId { Y, Cb, Cr };

struct TraceParams {
    int n_phi = 71;
    int n_rho = 71;
    int n_xi = 251;
    PhiRange phi_range = PhiRange::Full;
    RhoRange rho_range = RhoRange::Symmetric;
    Functional functional = Functional::IF2;
    double q = 2.0;
    double r = 0.5;
    Interpolation interpolation = Interpolation::Bilinear;

    /// n_phi ≥ 5, n_rho ≥ 1, n_xi ≥ 2, q > 0, r > 0.
    void validate() const;

    /// Angle of row i on the uniform grid (endpoint of the range excluded).
    double phi_at(int i) const noexcept;
    /// Radius of column j; the grid includes both endpoints of the ρ range.
    double rho_at(int j, std::size_t width, std::size_t height) const noexcept;

    bool operator==(const TraceParams&) const = default;
};

struct Resolutions {
    int n_phi, n_rho, n_xi;
};

/// n_φ = 2π/Δφ, n_ρ = min(W,H)/Δρ, n_ξ = 1/ΔL; each floored, minimum 1.
Resolutions resolutions_from_steps(double delta_phi, double delta_rho, double delta_l,
                                   std::size_t width, std::size_t height);

/// Image-centered coordinates: origin at the raster center, x to the right,
/// y upwards. Pixel (row, col) covers [col − W/2, col + 1 − W/2] × [H/2 − row − 1, H/2 − row].
struct Point {
    double x = 0;
    double y = 0;
};

/// Segment of the line x cos φ + y sin φ = ρ inside [−W/2, W/2] × [−H/2, H/2].
struct Chord {
    Point start;
    double dx = 0, dy = 0;  ///< unit direction (−sin φ, cos φ)
    double length = 0;      ///< 0 when the line misses the rectangle
};

Chord line_chord(double phi, double rho, std::size_t width, std::size_t height) noexcept;

/// n_xi chord midpoints spaced length/n_xi apart, ordered along (−sin φ, cos φ).
/// Empty when the line misses the raster.
std::vector<Point> line_points(double phi, double rho, int n_xi, std::size_t width,
                               std::size_t height);

/// Rectangle rule: Σ samples · dt.
double functional_radon(std::span<const double> samples, double dt);
/// (Σ |sample|^q · dt)^r.
double functional_if2(std::span<const double> samples, double dt, double q, double r);

/// Bilinear read at image-centered (x, y); borders replicate.
double sample_bilinear(const Grid<double>& plane, double x, double y) noexcept;
/// Value of the pixel containing (x, y); coordinates on the outer edge clamp inwards.
double sample_nearest(const Grid<double>& plane, double x, double y) noexcept;

struct Sinogram {
    Grid<double> values;  ///< n_phi rows × n_rho columns
    TraceParams params;
    ChannelId channel = ChannelId::Y;
};

/// Evaluates the configured functional on every (φ_i, ρ_j) line. Rows are
/// independent, so `threads` only affects speed, never the result.
Sinogram trace_transform(const Grid<double>& plane, const TraceParams& params,
                         ChannelId channel = ChannelId::Y, int threads = 1);

struct ContributionMask {
    Grid<std::int64_t> counts;  ///< height × width
};

/// Adds one hit to the nearest pixel of each sample point of a single line.
void accumulate_line(ContributionMask& mask, double phi, double rho, int n_xi);

ContributionMask contribution_mask(const TraceParams& params, std::size_t width,
                                   std::size_t height);

struct MaskMetrics {
    double coverage_pct = 0;
    double mean_repetition = 0;
    double variance = 0;
};

MaskMetrics mask_metrics(const ContributionMask& mask);

struct MaskRow {
    int n_phi, n_rho, n_xi;
    MaskMetrics metrics;
};

/// Fixed-width table with columns n_phi, n_rho, n_xi, % pixels used, Mean, Var.
std::string format_mask_table(std::span<const MaskRow> rows);

/// CSV with one line per φ row, columns in ρ order.
void write_sinogram_csv(std::ostream& out, const Sinogram& sinogram);
/// Binary PGM (P5), values linearly rescaled to [0,255].
void write_sinogram_pgm(std::ostream& out, const Sinogram& sinogram);

std::string to_string(Functional f);
std::string to_string(PhiRange r);
std::string to_string(RhoRange r);
std::string to_string(Interpolation i);
Functional parse_functional(const std::string& s);
PhiRange parse_phi_range(const std::string& s);
RhoRange parse_rho_range(const std::string& s);
Interpolation parse_interpolation(const std::string& s);

}  // namespace ditec
