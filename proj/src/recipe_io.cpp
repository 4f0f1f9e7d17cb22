#include "multicommon/recipe_io.hpp"

#include <json.hpp>

namespace mc {

using nlohmann::json;

std::string recipe_to_json(const CounterexampleRecipe& recipe) {
    json j;
    j["schema"] = "multicommon-recipe/1";
    j["mode"] = recipe.mode == Mode::vector_space ? "vector" : "cyclic";
    j["p"] = recipe.p;
    j["n"] = recipe.n;
    j["alpha"] = recipe.alpha;
    j["beta"] = recipe.beta;
    j["directional"] = {{"values", recipe.directional.values()},
                        {"lo", recipe.directional.lo()},
                        {"hi", recipe.directional.hi()}};
    json atoms = json::array();
    for (const auto& a : recipe.atoms)
        atoms.push_back({{"weight", a.weight}, {"lambda", a.lambda}, {"q", a.q}});
    j["atoms"] = atoms;
    return j.dump(2) + "\n";
}

CounterexampleRecipe recipe_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("schema", "") != "multicommon-recipe/1")
        throw std::invalid_argument("unknown recipe schema");
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "vector" && mode != "cyclic") throw std::invalid_argument("bad recipe mode");
    const auto p = j.at("p").get<std::int64_t>();
    const auto dir = j.at("directional");
    DensityTable table(GroupSpec({p}), dir.at("values").get<std::vector<double>>(),
                       dir.at("lo").get<double>(), dir.at("hi").get<double>());
    std::vector<PhaseAtom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back(PhaseAtom{a.at("weight").get<double>(), a.at("lambda").get<std::int64_t>(),
                                  a.at("q").get<std::int64_t>()});
    CounterexampleRecipe r{mode == "vector" ? Mode::vector_space : Mode::cyclic,
                           p,
                           j.at("n").get<std::size_t>(),
                           std::move(table),
                           std::move(atoms),
                           j.at("alpha").get<double>(),
                           j.at("beta").get<double>()};
    r.validate();
    return r;
}

} // namespace mc
