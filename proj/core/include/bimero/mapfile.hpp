#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "bimero/cohomology.hpp"
#include "bimero/surface_map.hpp"

namespace bimero {

/// On-disk description of a map: JSON with exact coefficients
///   {"name": ..., "degree": d,
///    "forward": [[[i, j, k, re_num, re_den, im_num, im_den], ...] x3],
///    "inverse": optional, same shape,
///    "lattice": optional {"rank", "Q", "Mf", "Mfinv", "curve_classes", "beta_class"}}
/// Integers may be written as decimal strings when they exceed 64 bits.
struct MapFile {
  std::string name;
  int degree = 0;
  PolyTriple forward;
  std::optional<PolyTriple> inverse;
  std::optional<CohomologyLattice> lattice;

  RationalSurfaceMap to_map() const;
};

/// Throws ParseError carrying the line and column of the offending value.
MapFile parse_map_file(std::string_view text);
/// Throws InvalidArgument when the file cannot be read, ParseError otherwise.
MapFile load_map_file(const std::filesystem::path& path);

MapFile to_map_file(const RationalSurfaceMap& f, std::optional<CohomologyLattice> lattice = std::nullopt);
/// Deterministic text form, one term per line; parse_map_file round-trips it.
std::string serialize_map_file(const MapFile& file);

}  // namespace bimero
