#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "oscflow/field.hpp"

namespace oscflow {

// FFT helpers on GridSpec lattices (row-major, last axis halved in the
// complex representation). Backward transforms are normalized, so
// backward(forward(x)) == x up to roundoff.
size_t spectral_size(const GridSpec& spec);
std::vector<std::complex<double>> fft_forward(const GridSpec& spec, const std::vector<double>& data);
std::vector<double> fft_backward(const GridSpec& spec, const std::vector<std::complex<double>>& hat);

// Wavenumber attached to index k on an axis: pi * f_k / half_width with
// f_k the signed frequency.
double wavenumber(const GridSpec& spec, int k);

GridField spectral_derivative(const GridField& g, int axis);

// Zero-mean solution of -Lap f = rhs on the periodic box, componentwise.
GridField poisson_periodic(const GridField& rhs);

// Divergence-free spectral projection; the zero mode passes through.
GridField leray_periodic(const GridField& u);

// Zero padding to the doubled box [-2L, 2L)^n at the same spacing, and its
// inverse restriction. Used to emulate free-space solves: on the doubled box
// periodic images sit at distance 4L and their smooth contamination is
// absorbed by the anchoring normalizations downstream.
GridField pad_double(const GridField& g);
GridField restrict_half(const GridField& g, const GridSpec& target);

// Circular convolution (a * k)(x) = h^n sum_y a(y) k(x - y) on a's lattice;
// the kernel is sampled at lattice offsets around the origin.
GridField convolve(const GridField& a, const std::function<double(const Vec&)>& kernel);

}  // namespace oscflow
