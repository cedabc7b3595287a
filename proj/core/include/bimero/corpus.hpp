#pragma once

#include <string_view>

#include "bimero/surface_map.hpp"

namespace bimero {

/// Parses a homogeneous polynomial such as "y*z + y^2 - 3/2*z^2 - 1/4*i*x*z".
/// Terms are products of integers, fractions a/b, the unit i and the variables
/// x, y, z (with optional ^k). Throws ParseError (line 1) on malformed input and
/// InvalidArgument if the terms are not of one degree.
HomogeneousPolynomial parse_polynomial(std::string_view text);

namespace corpus {

/// Standard Cremona involution [yz : xz : xy].
RationalSurfaceMap cremona();
/// Henon-type map [yz : y^2 + c z^2 - delta x z : z^2] with its inverse.
RationalSurfaceMap henon(const GaussianRational& c = GaussianRational(mpq_class(-3, 2)),
                         const GaussianRational& delta = GaussianRational(mpq_class(1, 4)));
/// Invertible linear map [x + 2y - z : y + 3z : 2x - y + z].
RationalSurfaceMap linear();
/// L o sigma for the linear map above.
RationalSurfaceMap lsigma();
/// Diagonal map [4x : y : 2z]; in the chart z = 1 it is diag(2, 1/2) at the origin.
RationalSurfaceMap diagonal();
/// Unitary permutation-with-phase map [y : i z : x].
RationalSurfaceMap unitary();

}  // namespace corpus
}  // namespace bimero
