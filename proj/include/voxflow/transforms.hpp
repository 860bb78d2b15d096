#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "voxflow/random.hpp"
#include "voxflow/volume.hpp"

namespace voxflow::transforms {

// Each random transform draws its parameters from the supplied stream and
// delegates to a deterministic counterpart with explicit parameters.
//
// Boundary policy: rotate_small fills with zero outside the source plane;
// every other resampling transform clamps to the nearest edge voxel.

enum class Interpolation { Nearest, Trilinear };

/// Rotation planes for rotate90, named by the two axes that rotate.
enum class Plane { HW = 0, FH = 1, FW = 2 };

enum class Border { Leading = 0, Trailing = 1 };

struct RotateSmallParams {
  double max_deg = 10.0;
};
struct ElasticParams {
  std::size_t grid = 4;
  double sigma = 6.0;
};
struct FlipParams {
  double p_axis = 0.5;
};
struct GridDropoutParams {
  std::size_t cell = 16;
  double ratio = 0.5;
};
struct GaussianNoiseParams {
  double sigma_max = 10.0;
};
struct GammaParams {
  double lo = 0.8;
  double hi = 1.2;
};
struct BorderCropParams {
  double max_frac = 0.1;
};
struct DropPlaneParams {
  double max_frac = 0.1;
};
struct ResizeParams {
  std::array<std::size_t, 3> target{96, 128, 128};
  Interpolation mode = Interpolation::Trilinear;
};

// ---------------------------------------------------------------------------
// Deterministic forms

/// Rotates every (H,W) plane by `degrees` about the plane center, bilinear, zero fill.
Volume rotate_plane(const Volume& v, double degrees);

/// Resamples through a displacement lattice of shape (grid,grid,grid,3) given in
/// voxels, ordered (frame, row, col) per node. The lattice is spread over the
/// volume with node i of n at coordinate i*(extent-1)/(n-1).
Volume elastic_with_lattice(const Volume& v, std::size_t grid, std::span<const double> lattice);

/// Rotation by k*90 degrees in the given plane (numpy.rot90 convention, first axis of the plane
/// rotating toward the second).
Volume rotate90(const Volume& v, Plane plane, int k);

/// Reverses the volume along every axis whose flag is set (indexed by Axis).
Volume flip_axes(const Volume& v, std::array<bool, 3> axes);

/// Zeroes voxels whose position p on every axis satisfies ((p - offset) mod cell) < round(ratio*cell).
Volume grid_dropout_at(const Volume& v, std::size_t cell, double ratio, std::array<std::size_t, 3> offset);

/// Adds N(0, sigma^2) per voxel and channel using draws from rng.
Volume add_gaussian_noise(const Volume& v, double sigma, RandomStream& rng);

/// x -> 255*(x/255)^gamma for uint8; min-max normalised power for float32.
/// A constant float32 volume is returned unchanged.
Volume apply_gamma(const Volume& v, double gamma);

/// Removes n planes from one border of an axis.
Volume crop_border(const Volume& v, Axis axis, Border border, std::size_t n);

/// Removes the listed interior planes (never the first or last) of an axis.
Volume drop_planes(const Volume& v, Axis axis, std::vector<std::size_t> indices);

/// Resamples to target (F,H,W). Output coordinate x maps to (x+0.5)*scale-0.5, edge-clamped.
Volume resize(const Volume& v, std::array<std::size_t, 3> target, Interpolation mode);

// ---------------------------------------------------------------------------
// Random forms

Volume rotate_small(const Volume& v, RandomStream& rng, const RotateSmallParams& p = {});
Volume elastic(const Volume& v, RandomStream& rng, const ElasticParams& p = {});
Volume rotate90(const Volume& v, RandomStream& rng);
Volume flip(const Volume& v, RandomStream& rng, const FlipParams& p = {});
Volume grid_dropout(const Volume& v, RandomStream& rng, const GridDropoutParams& p = {});
Volume gaussian_noise(const Volume& v, RandomStream& rng, const GaussianNoiseParams& p = {});
Volume random_gamma(const Volume& v, RandomStream& rng, const GammaParams& p = {});
Volume crop_from_borders(const Volume& v, RandomStream& rng, const BorderCropParams& p = {});
Volume drop_plane(const Volume& v, RandomStream& rng, const DropPlaneParams& p = {});
inline Volume resize(const Volume& v, const ResizeParams& p) { return resize(v, p.target, p.mode); }

}  // namespace voxflow::transforms
