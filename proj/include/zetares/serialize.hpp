#pragma once

// JSON documents for constructions and chain reports. Every real number is a
// decimal string so documents compare byte-for-byte across platforms.

#include <optional>

#include "json.hpp"

#include "zetares/gcd_sums.hpp"
#include "zetares/resonator.hpp"

namespace zr {

using json = nlohmann::ordered_json;

struct Construction {
  std::optional<double> alpha;
  MultiplicativeSet B;
  std::optional<RepresentativeSet> D;
};

json construction_to_json(const MultiplicativeSet& B, const RepresentativeSet* D = nullptr,
                          std::optional<double> alpha = std::nullopt);
// Rebuilds B and D from the document and checks every stored value
// against the recomputed one (InvalidArgument on mismatch).
Construction construction_from_json(const json& doc);

json to_json(const ChainReport& c);

}  // namespace zr
