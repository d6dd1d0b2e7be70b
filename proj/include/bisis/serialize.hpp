#ifndef BISIS_SERIALIZE_HPP
#define BISIS_SERIALIZE_HPP

#include "bisis/bounds.hpp"

#include <json.hpp>

namespace bisis {

nlohmann::json regime_to_json(const RegimeReport& r);
nlohmann::json equilibria_to_json(const EquilibriumSet& set, const RegimeReport& r,
                                  const Graph& gA);
nlohmann::json bounds_to_json(const BoundsReport& b);

}  // namespace bisis

#endif
