#pragma once

#include <span>

#include "odt/grid.hpp"

namespace odt::fft {

enum class Direction { forward, backward };

/// Unnormalised in-order 1D DFT of length in.size() (FFTW sign convention).
/// Plans are cached per length; safe to call from several threads.
void dft1(std::span<const cdouble> in, std::span<cdouble> out, Direction dir);

/// Unnormalised 3D DFT over a z-major nz x ny x nx array.
void dft3(std::span<const cdouble> in, std::span<cdouble> out, int nz, int ny, int nx,
          Direction dir);

}  // namespace odt::fft
