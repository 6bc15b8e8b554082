#pragma once

#include "nfs/jones.hpp"
#include "nfs/nuclear_data.hpp"

namespace nfs {

/// Transverse polarization basis for a beam direction. The lab default is
/// sigma = x, pi = z for a beam along y.
struct PolarizationBasis {
    Vec3 sigma = axis::x;
    Vec3 pi = axis::z;
};

struct LineCoupling {
    PolVector current{};
    Matrix2c matrix{};
};

/// M1 coupling of one hyperfine line in the (sigma, pi) basis.
///
/// The photon's magnetic polarization h_a = k x e_a is projected on the
/// spherical unit vector of rank dM about the field axis and weighted by the
/// squared Clebsch-Gordan coefficient. The result is scaled by 3 f_lm/(2 I_e + 1)
/// so the lines of an unsplit target sum to f_lm times the identity. For Fe-57
/// this gives each Delta M = 0 line the amplitude f_lm/2 in transverse geometry.
///
/// Throws ConfigError for non-unit directions or a non-transverse basis.
LineCoupling coupling_matrix(const TransitionLine &line, const Vec3 &field_direction,
                             const Vec3 &beam_direction, double spin_excited, double f_lm,
                             const PolarizationBasis &basis = {});

}  // namespace nfs
