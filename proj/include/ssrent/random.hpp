#pragma once

#include <cstdint>
#include <random>

#include "ssrent/fock.hpp"

namespace ssrent {

using Rng = std::mt19937_64;

cplx complex_gaussian(Rng& rng);
CMatrix gaussian_matrix(Rng& rng, int rows, int cols);
// rows >= cols; Haar-distributed columns
CMatrix random_isometry(Rng& rng, int rows, int cols);
CMatrix random_unitary(Rng& rng, int n);

SectoredPureState random_pure_state(Rng& rng, const LocalSpace& alice, const LocalSpace& bob, int total);
// superposition over several totals (no SSR constraint)
GeneralPureState random_general_state(Rng& rng, const LocalSpace& alice, const LocalSpace& bob);
BlockDensityMatrix random_density(Rng& rng, const LocalSpace& alice, const LocalSpace& bob, int rank);

// complete SSR-compatible Kraus set; with `shifted`, operators alternate between
// shift 0 and shift +1 and map into a space one level larger
LocalKrausSet random_kraus_set(Rng& rng, const LocalSpace& space, int outcomes, bool shifted = false);

}  // namespace ssrent
