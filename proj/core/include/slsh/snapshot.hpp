#pragma once

#include <string>
#include <variant>

#include "slsh/center_euclidean.hpp"
#include "slsh/structures.hpp"

namespace slsh {

/// Every index the CLI can build, in one persistable sum type.
using AnyStructure =
    std::variant<RepeatStructure<HyperplaneBase>, RepeatStructure<BitSampleBase>,
                 RepeatStructure<MinHashBase>, ExhaustiveStructure<HyperplaneBase>,
                 ExhaustiveStructure<BitSampleBase>, ExhaustiveStructure<MinHashBase>,
                 CentroidStructure, AvgEuclidStructure, EllipsoidStructure,
                 CenterStructure>;

inline constexpr char kSnapshotMagic[4] = {'S', 'L', 'S', 'H'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Writes a structure to disk: magic, version, kind tag, parameters, stored
/// points, table payload, and a checksum over everything after the magic.
void save_snapshot(const AnyStructure& structure, const std::string& path);

/// Loads a snapshot; derived parameters are recomputed from the stored
/// configuration and the table payload is reused verbatim, so a loaded index
/// answers queries bit-identically to the one that was saved.
AnyStructure load_snapshot(const std::string& path);

}  // namespace slsh
