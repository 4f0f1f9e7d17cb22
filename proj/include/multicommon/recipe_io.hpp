#pragma once

#include <string>

#include "multicommon/multiplicity.hpp"

namespace mc {

// JSON round-trip for counterexample recipes.  The format is stable: a
// reloaded recipe re-evaluates to the same margin within 1e-12.
std::string recipe_to_json(const CounterexampleRecipe& recipe);
CounterexampleRecipe recipe_from_json(const std::string& text);

} // namespace mc
