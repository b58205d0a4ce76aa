#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slsh/types.hpp"

namespace slsh {

enum class ElementKind { Dense, Bits, Tokens };
enum class DatasetFormat { Csv, Fvecs };

/// A parsed dataset file. Exactly one payload vector is populated,
/// matching `kind`.
struct Dataset {
    ElementKind kind = ElementKind::Dense;
    std::size_t dim = 0;        // dense / bits
    std::uint64_t universe = 0;  // tokens
    std::vector<Point> dense;
    std::vector<BitVector> bits;
    std::vector<TokenSet> tokens;

    std::size_t size() const {
        switch (kind) {
            case ElementKind::Dense: return dense.size();
            case ElementKind::Bits: return bits.size();
            case ElementKind::Tokens: return tokens.size();
        }
        return 0;
    }
};

/// Reads a dataset.
///
/// CSV: one element per line. Dense rows are comma-separated decimals. An
/// optional leading header selects other element kinds:
///   # kind=bits dim=8          rows like 10110100
///   # kind=tokens universe=64  rows of comma-separated token ids
/// Binary (fvecs style): per vector, a 32-bit little-endian count d followed
/// by d little-endian IEEE-754 floats.
///
/// Malformed rows, inconsistent dimensions and non-finite values raise
/// DataError with the offending line or offset.
Dataset parse_dataset(const std::string& path,
                      std::optional<DatasetFormat> format = std::nullopt);

}  // namespace slsh
