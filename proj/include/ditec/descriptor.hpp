#pragma once

// Sinogram compression: orthonormal 2D DCT, grouping of coefficients into
// bands perpendicular to the main diagonal, and (mean, kurtosis) summaries
// of each band assembled into a per-image descriptor.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ditec/grid.hpp"
#include "ditec/preproc.hpp"

namespace ditec {

/// Orthonormal DCT-II of a rows × cols matrix (separable, table driven).
Grid<double> dct2(const Grid<double>& input);

/// ceil(√(n_phi² + n_rho²)).
std::size_t diagonal_bin_count(std::size_t n_phi, std::size_t n_rho) noexcept;

/// floor((k1·n_phi + k2·n_rho) / √(n_phi² + n_rho²)).
std::size_t diagonal_bin_index(std::size_t k1, std::size_t k2, std::size_t n_phi,
                               std::size_t n_rho) noexcept;

struct DiagonalBins {
    std::vector<std::vector<double>> bins;  ///< coefficients in row-major visiting order
};

DiagonalBins diagonal_bins(const Grid<double>& dct);

struct MuKurtosis {
    double mu = 0;
    double k = 0;
};

/// Mean and population kurtosis m4/m2². Zero-variance input gives k = 0.
MuKurtosis mu_kurtosis(std::span<const double> values);

/// Interleaved [μ0, k0, μ1, k1, …] over bins in ascending order; empty bins give (0, 0).
std::vector<double> compress_channel(const Grid<double>& dct);

struct KeepCounts {
    std::size_t y = 104, cb = 60, cr = 60;
    bool operator==(const KeepCounts&) const = default;
};

struct ChannelLayout {
    std::string channel;  ///< "Y", "Cb" or "Cr"
    std::size_t kept = 0;
};

struct DescriptorVector {
    std::vector<double> values;
    std::vector<ChannelLayout> layout;
    std::optional<int> label;
};

/// Replaces each channel's DC pair with HSV statistics (Y←V, Cb←H, Cr←S),
/// keeps the leading `keep` values of each channel and concatenates Y‖Cb‖Cr.
/// Keep counts must be even and no larger than the channel length.
DescriptorVector assemble_descriptor(const std::array<std::vector<double>, 3>& channels,
                                     const HsvStats& hsv, const KeepCounts& keep);

/// Attribute names matching assemble_descriptor's layout, e.g. "Y_hsv_v_mu", "Cb_b007_k".
std::vector<std::string> descriptor_attribute_names(const KeepCounts& keep);

/// ceil(√(n_phi² + n_rho²)) · n_c · n_f.
std::size_t full_descriptor_length(std::size_t n_phi, std::size_t n_rho, std::size_t n_c = 3,
                                   std::size_t n_f = 2) noexcept;

/// n_phi·n_rho / (√(n_phi² + n_rho²) · n_f).
double reduction_factor(double n_phi, double n_rho, double n_f);

}  // namespace ditec
