#pragma once

#include "mpdenoise/image.hpp"

namespace mpdn {

// Separable Gaussian blur: 1-D kernel w(i) ~ exp(-i^2/(2 sigma^2)) truncated at
// radius ceil(4 sigma), normalized to unit sum, reflected boundaries,
// horizontal pass then vertical pass.
Image gaussian_filter(const Image& img, double sigma);

// size x size median with reflected boundaries; size must be odd and >= 1.
Image median_filter(const Image& img, int size);

// Non-local means. Weight of candidate j for pixel i is
// exp(-max(d2 - 2*sigma_est^2, 0)/h^2) with d2 the mean squared difference of
// the (2*patch_radius+1)^2 patches; the self weight is the maximum weight of
// the other candidates. sigma_est comes from nlm_noise_sigma(img).
Image nlm_filter(const Image& img, double h, int patch_radius, int search_radius);

// Immerkaer's Laplacian-residual noise estimate, used by nlm_filter.
double nlm_noise_sigma(const Image& img);

// Anscombe variance stabilization. The raw transform is
// a(x) = 2*sqrt(photon_scale*x + 3/8); image-level forward rescales it into
// [0,1] with the affine map (a - a(0)) / (a(1) - a(0)), and the inverse is the
// exact algebraic inverse of the composition, clamped into range.
double anscombe_value(double x, double photon_scale);
Image anscombe(const Image& img, double photon_scale);
Image anscombe_inverse(const Image& img, double photon_scale);

} // namespace mpdn
