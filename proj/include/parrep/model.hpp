#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace parrep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Population state of a reaction network (one entry per species).
using State = Eigen::VectorXi;

/// Ordered, strictly positive rate constants and model constants.
struct ParameterVector {
    std::vector<std::string> names;
    Vector values;

    int size() const { return static_cast<int>(values.size()); }
    int index_of(const std::string& name) const;  // -1 if absent
};

/// lambda = const_prefactor * prod(params) * prod_i ff(x_i, order_i) * V^{-volume_power}
/// where ff is the falling factorial x(x-1)...(x-k+1), zero when x < k.
struct MassActionProduct {
    std::vector<int> param_indices;  // gradient-bearing factors, each enters linearly
    double const_prefactor = 1.0;
    std::vector<int> ff_exponents;   // per-species falling-factorial orders
    int volume_power = 0;
};

/// lambda = gate_count * [k_base + (k_max - k_base) * h],  h = x_s^2 / (x_s^2 + D^2)
struct HillActivation {
    int base_idx = 0;
    int max_idx = 0;
    int dissoc_idx = 0;
    int sensor_species = 0;
    int gate_species = 0;
};

/// lambda = gate_count * [k_max - (k_max - k_base) * h]
struct HillDeactivation {
    int base_idx = 0;
    int max_idx = 0;
    int dissoc_idx = 0;
    int sensor_species = 0;
    int gate_species = 0;
};

using PropensityKind = std::variant<MassActionProduct, HillActivation, HillDeactivation>;

struct Reaction {
    State stoich;
    PropensityKind propensity;
};

struct ConservedSum {
    std::vector<int> species;
    long total = 0;
};

struct ReactionNetwork {
    std::string name;
    std::vector<std::string> species_names;
    std::vector<Reaction> reactions;
    double volume = 1.0;
    ParameterVector params;
    std::vector<ConservedSum> conserved_sums;

    int n_species() const { return static_cast<int>(species_names.size()); }
    int n_reactions() const { return static_cast<int>(reactions.size()); }
    int n_params() const { return params.size(); }
    int species_index(const std::string& name) const;  // -1 if absent
};

/// Throws Error when indices are out of range, a parameter is nonpositive,
/// a stoichiometry could drive a fireable state negative, or a conserved sum
/// is broken by some reaction.
void validate(const ReactionNetwork& net);

double evaluate_propensity(const ReactionNetwork& net, int reaction, const State& x);

/// (lambda_1(x,c), ..., lambda_m(x,c)); entries finite and >= 0.
Vector evaluate_propensities(const ReactionNetwork& net, const State& x);

/// m x l matrix; row j is the analytic gradient of lambda_j with respect to c.
Matrix propensity_gradients(const ReactionNetwork& net, const State& x);

inline void apply_reaction(const ReactionNetwork& net, int reaction, State& x) {
    x += net.reactions[reaction].stoich;
}

bool conserved_sums_hold(const ReactionNetwork& net, const State& x);

/// Bistable Schlogl model: one species, four channels, V = 25,
/// a = 1, b = 2, c = (3, 0.6, 0.25, 2.95).
ReactionNetwork builtin_schlogl();

/// Genetic switch with positive feedback and explicit mRNA noise:
/// species (DNA_act, DNA_in, mRNA, Protein), six channels, V = ab = 2400,
/// parameters ordered (a, b, gamma, k0_min, k0_max, k1_min, k1_max, D).
ReactionNetwork builtin_genetic_switch();

/// Resolves a built-in by name ("schlogl" or "genetic-switch").
std::optional<ReactionNetwork> builtin_network(const std::string& name);

}  // namespace parrep
