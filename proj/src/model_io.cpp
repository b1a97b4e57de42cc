#include "parrep/model_io.hpp"

#include <nlohmann/json.hpp>

#include "parrep/errors.hpp"
#include "json_util.hpp"

namespace parrep {

using nlohmann::json;
using namespace jsonu;

namespace {

json stoich_to_json(const State& s) {
    json a = json::array();
    for (int i = 0; i < s.size(); ++i) a.push_back(s[i]);
    return a;
}

json propensity_to_json(const PropensityKind& p) {
    json j;
    if (const auto* ma = std::get_if<MassActionProduct>(&p)) {
        j["kind"] = "mass-action";
        j["params"] = ma->param_indices;
        j["prefactor"] = ma->const_prefactor;
        j["ff"] = ma->ff_exponents;
        j["volume_power"] = ma->volume_power;
    } else if (const auto* ha = std::get_if<HillActivation>(&p)) {
        j["kind"] = "hill-activation";
        j["base"] = ha->base_idx;
        j["max"] = ha->max_idx;
        j["dissoc"] = ha->dissoc_idx;
        j["sensor"] = ha->sensor_species;
        j["gate"] = ha->gate_species;
    } else {
        const auto& hd = std::get<HillDeactivation>(p);
        j["kind"] = "hill-deactivation";
        j["base"] = hd.base_idx;
        j["max"] = hd.max_idx;
        j["dissoc"] = hd.dissoc_idx;
        j["sensor"] = hd.sensor_species;
        j["gate"] = hd.gate_species;
    }
    return j;
}

PropensityKind parse_propensity(const json& j, const std::string& path) {
    const std::string kind = as_string(require(j, "kind", path), path + ".kind");
    if (kind == "mass-action") {
        reject_unknown(j, {"kind", "params", "prefactor", "ff", "volume_power"}, path);
        MassActionProduct ma;
        ma.param_indices = as_int_list(require(j, "params", path), path + ".params");
        ma.const_prefactor = as_number(require(j, "prefactor", path), path + ".prefactor");
        ma.ff_exponents = as_int_list(require(j, "ff", path), path + ".ff");
        ma.volume_power = as_int(require(j, "volume_power", path), path + ".volume_power");
        return ma;
    }
    if (kind == "hill-activation" || kind == "hill-deactivation") {
        reject_unknown(j, {"kind", "base", "max", "dissoc", "sensor", "gate"}, path);
        const int base = as_int(require(j, "base", path), path + ".base");
        const int max = as_int(require(j, "max", path), path + ".max");
        const int dissoc = as_int(require(j, "dissoc", path), path + ".dissoc");
        const int sensor = as_int(require(j, "sensor", path), path + ".sensor");
        const int gate = as_int(require(j, "gate", path), path + ".gate");
        if (kind == "hill-activation") return HillActivation{base, max, dissoc, sensor, gate};
        return HillDeactivation{base, max, dissoc, sensor, gate};
    }
    throw SchemaError(path + ".kind", "unknown propensity kind '" + kind + "'");
}

}  // namespace

std::string export_network(const ReactionNetwork& net) {
    json j;
    j["name"] = net.name;
    j["species"] = net.species_names;
    j["volume"] = net.volume;
    json params = json::array();
    for (int k = 0; k < net.params.size(); ++k)
        params.push_back({{"name", net.params.names[k]}, {"value", net.params.values[k]}});
    j["parameters"] = params;
    json reactions = json::array();
    for (const Reaction& r : net.reactions)
        reactions.push_back(
            {{"stoich", stoich_to_json(r.stoich)}, {"propensity", propensity_to_json(r.propensity)}});
    j["reactions"] = reactions;
    json sums = json::array();
    for (const ConservedSum& cs : net.conserved_sums)
        sums.push_back({{"species", cs.species}, {"total", cs.total}});
    j["conserved_sums"] = sums;
    return j.dump(2) + "\n";
}

ReactionNetwork parse_network(const std::string& text) {
    const json j = parse_document(text);
    reject_unknown(j, {"name", "species", "volume", "parameters", "reactions", "conserved_sums"},
                   "$");

    ReactionNetwork net;
    net.name = as_string(require(j, "name", "$"), "$.name");
    const json& species = require(j, "species", "$");
    if (!species.is_array()) throw SchemaError("$.species", "expected a list of names");
    for (std::size_t i = 0; i < species.size(); ++i)
        net.species_names.push_back(
            as_string(species[i], "$.species[" + std::to_string(i) + "]"));
    net.volume = as_number(require(j, "volume", "$"), "$.volume");

    const json& params = require(j, "parameters", "$");
    if (!params.is_array()) throw SchemaError("$.parameters", "expected a list");
    net.params.values.resize(static_cast<long>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) {
        const std::string path = "$.parameters[" + std::to_string(k) + "]";
        reject_unknown(params[k], {"name", "value"}, path);
        net.params.names.push_back(as_string(require(params[k], "name", path), path + ".name"));
        net.params.values[static_cast<long>(k)] =
            as_number(require(params[k], "value", path), path + ".value");
    }

    const json& reactions = require(j, "reactions", "$");
    if (!reactions.is_array()) throw SchemaError("$.reactions", "expected a list");
    for (std::size_t r = 0; r < reactions.size(); ++r) {
        const std::string path = "$.reactions[" + std::to_string(r) + "]";
        reject_unknown(reactions[r], {"stoich", "propensity"}, path);
        Reaction rx;
        const std::vector<int> stoich =
            as_int_list(require(reactions[r], "stoich", path), path + ".stoich");
        if (stoich.size() != net.species_names.size())
            throw SchemaError(path + ".stoich", "length does not match the species list");
        rx.stoich = Eigen::Map<const Eigen::VectorXi>(stoich.data(),
                                                      static_cast<long>(stoich.size()));
        rx.propensity =
            parse_propensity(require(reactions[r], "propensity", path), path + ".propensity");
        net.reactions.push_back(std::move(rx));
    }

    const json& sums = require(j, "conserved_sums", "$");
    if (!sums.is_array()) throw SchemaError("$.conserved_sums", "expected a list");
    for (std::size_t s = 0; s < sums.size(); ++s) {
        const std::string path = "$.conserved_sums[" + std::to_string(s) + "]";
        reject_unknown(sums[s], {"species", "total"}, path);
        ConservedSum cs;
        cs.species = as_int_list(require(sums[s], "species", path), path + ".species");
        cs.total = as_int(require(sums[s], "total", path), path + ".total");
        net.conserved_sums.push_back(std::move(cs));
    }

    try {
        validate(net);
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError("$", e.what());
    }
    return net;
}

bool networks_identical(const ReactionNetwork& a, const ReactionNetwork& b) {
    if (a.name != b.name || a.species_names != b.species_names || a.volume != b.volume)
        return false;
    if (a.params.names != b.params.names || a.params.values.size() != b.params.values.size() ||
        !(a.params.values.array() == b.params.values.array()).all())
        return false;
    if (a.reactions.size() != b.reactions.size()) return false;
    for (std::size_t r = 0; r < a.reactions.size(); ++r) {
        if (a.reactions[r].stoich.size() != b.reactions[r].stoich.size() ||
            !(a.reactions[r].stoich.array() == b.reactions[r].stoich.array()).all())
            return false;
        const PropensityKind& pa = a.reactions[r].propensity;
        const PropensityKind& pb = b.reactions[r].propensity;
        if (pa.index() != pb.index()) return false;
        if (const auto* ma = std::get_if<MassActionProduct>(&pa)) {
            const auto& mb = std::get<MassActionProduct>(pb);
            if (ma->param_indices != mb.param_indices ||
                ma->const_prefactor != mb.const_prefactor ||
                ma->ff_exponents != mb.ff_exponents || ma->volume_power != mb.volume_power)
                return false;
        } else if (const auto* ha = std::get_if<HillActivation>(&pa)) {
            const auto& hb = std::get<HillActivation>(pb);
            if (ha->base_idx != hb.base_idx || ha->max_idx != hb.max_idx ||
                ha->dissoc_idx != hb.dissoc_idx || ha->sensor_species != hb.sensor_species ||
                ha->gate_species != hb.gate_species)
                return false;
        } else {
            const auto& ga = std::get<HillDeactivation>(pa);
            const auto& gb = std::get<HillDeactivation>(pb);
            if (ga.base_idx != gb.base_idx || ga.max_idx != gb.max_idx ||
                ga.dissoc_idx != gb.dissoc_idx || ga.sensor_species != gb.sensor_species ||
                ga.gate_species != gb.gate_species)
                return false;
        }
    }
    if (a.conserved_sums.size() != b.conserved_sums.size()) return false;
    for (std::size_t s = 0; s < a.conserved_sums.size(); ++s) {
        if (a.conserved_sums[s].species != b.conserved_sums[s].species ||
            a.conserved_sums[s].total != b.conserved_sums[s].total)
            return false;
    }
    return true;
}

}  // namespace parrep
