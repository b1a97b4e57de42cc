#include "parrep/model.hpp"

#include <algorithm>
#include <cmath>

#include "parrep/errors.hpp"

namespace parrep {

int ParameterVector::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int ReactionNetwork::species_index(const std::string& name) const {
    auto it = std::find(species_names.begin(), species_names.end(), name);
    return it == species_names.end() ? -1 : static_cast<int>(it - species_names.begin());
}

namespace {

double falling_factorial(int x, int order) {
    if (x < order) return 0.0;
    double v = 1.0;
    for (int k = 0; k < order; ++k) v *= static_cast<double>(x - k);
    return v;
}

double hill_fraction(double xs, double d) {
    const double xs2 = xs * xs;
    return xs2 / (xs2 + d * d);
}

struct PropensityEval {
    const ReactionNetwork& net;
    const State& x;

    double operator()(const MassActionProduct& p) const {
        double v = p.const_prefactor;
        for (int idx : p.param_indices) v *= net.params.values[idx];
        for (int i = 0; i < static_cast<int>(p.ff_exponents.size()); ++i) {
            if (p.ff_exponents[i] > 0) v *= falling_factorial(x[i], p.ff_exponents[i]);
        }
        if (p.volume_power != 0) v *= std::pow(net.volume, -p.volume_power);
        return v;
    }
    double operator()(const HillActivation& p) const {
        const double gate = static_cast<double>(x[p.gate_species]);
        if (gate == 0.0) return 0.0;
        const double kb = net.params.values[p.base_idx];
        const double km = net.params.values[p.max_idx];
        const double h = hill_fraction(x[p.sensor_species], net.params.values[p.dissoc_idx]);
        return gate * (kb + (km - kb) * h);
    }
    double operator()(const HillDeactivation& p) const {
        const double gate = static_cast<double>(x[p.gate_species]);
        if (gate == 0.0) return 0.0;
        const double kb = net.params.values[p.base_idx];
        const double km = net.params.values[p.max_idx];
        const double h = hill_fraction(x[p.sensor_species], net.params.values[p.dissoc_idx]);
        return gate * (km - (km - kb) * h);
    }
};

struct GradientEval {
    const ReactionNetwork& net;
    const State& x;
    Eigen::RowVectorXd row;  // zero-initialized, length l

    void operator()(const MassActionProduct& p) {
        PropensityEval eval{net, x};
        const double lambda = eval(p);
        if (lambda == 0.0) return;
        for (int idx : p.param_indices) row[idx] += lambda / net.params.values[idx];
    }
    void operator()(const HillActivation& p) {
        const double gate = static_cast<double>(x[p.gate_species]);
        if (gate == 0.0) return;
        const double kb = net.params.values[p.base_idx];
        const double km = net.params.values[p.max_idx];
        const double d = net.params.values[p.dissoc_idx];
        const double xs2 = static_cast<double>(x[p.sensor_species]) * x[p.sensor_species];
        const double denom = xs2 + d * d;
        const double h = xs2 / denom;
        row[p.base_idx] += gate * (1.0 - h);
        row[p.max_idx] += gate * h;
        row[p.dissoc_idx] += -gate * (km - kb) * 2.0 * d * xs2 / (denom * denom);
    }
    void operator()(const HillDeactivation& p) {
        const double gate = static_cast<double>(x[p.gate_species]);
        if (gate == 0.0) return;
        const double kb = net.params.values[p.base_idx];
        const double km = net.params.values[p.max_idx];
        const double d = net.params.values[p.dissoc_idx];
        const double xs2 = static_cast<double>(x[p.sensor_species]) * x[p.sensor_species];
        const double denom = xs2 + d * d;
        const double h = xs2 / denom;
        row[p.base_idx] += gate * h;
        row[p.max_idx] += gate * (1.0 - h);
        row[p.dissoc_idx] += gate * (km - kb) * 2.0 * d * xs2 / (denom * denom);
    }
};

}  // namespace

double evaluate_propensity(const ReactionNetwork& net, int reaction, const State& x) {
    return std::visit(PropensityEval{net, x}, net.reactions[reaction].propensity);
}

Vector evaluate_propensities(const ReactionNetwork& net, const State& x) {
    Vector lambda(net.n_reactions());
    for (int j = 0; j < net.n_reactions(); ++j) lambda[j] = evaluate_propensity(net, j, x);
    return lambda;
}

Matrix propensity_gradients(const ReactionNetwork& net, const State& x) {
    Matrix grad = Matrix::Zero(net.n_reactions(), net.n_params());
    for (int j = 0; j < net.n_reactions(); ++j) {
        GradientEval eval{net, x, Eigen::RowVectorXd::Zero(net.n_params())};
        std::visit(eval, net.reactions[j].propensity);
        grad.row(j) = eval.row;
    }
    return grad;
}

bool conserved_sums_hold(const ReactionNetwork& net, const State& x) {
    for (const auto& cs : net.conserved_sums) {
        long sum = 0;
        for (int i : cs.species) sum += x[i];
        if (sum != cs.total) return false;
    }
    return true;
}

namespace {

struct ValidateKind {
    const ReactionNetwork& net;
    const Reaction& rxn;

    void check_param(int idx) const {
        if (idx < 0 || idx >= net.params.size())
            throw Error("parameter index out of range in " + net.name);
    }
    void check_species(int idx) const {
        if (idx < 0 || idx >= net.n_species())
            throw Error("species index out of range in " + net.name);
    }

    void operator()(const MassActionProduct& p) const {
        for (int idx : p.param_indices) check_param(idx);
        if (static_cast<int>(p.ff_exponents.size()) != net.n_species())
            throw Error("falling-factorial order list size mismatch in " + net.name);
        // a fireable state has x_i >= order_i; the jump must keep it nonnegative
        for (int i = 0; i < net.n_species(); ++i) {
            if (rxn.stoich[i] < 0 && p.ff_exponents[i] < -rxn.stoich[i])
                throw Error("reaction can drive species " + net.species_names[i] +
                            " negative in " + net.name);
        }
    }
    void check_hill(int base, int max, int dissoc, int sensor, int gate) const {
        check_param(base);
        check_param(max);
        check_param(dissoc);
        check_species(sensor);
        check_species(gate);
        if (net.params.values[base] > net.params.values[max])
            throw Error("Hill base rate exceeds max rate in " + net.name);
        if (rxn.stoich[gate] < -1) throw Error("Hill gate consumed faster than its count");
    }
    void operator()(const HillActivation& p) {
        check_hill(p.base_idx, p.max_idx, p.dissoc_idx, p.sensor_species, p.gate_species);
    }
    void operator()(const HillDeactivation& p) const {
        check_hill(p.base_idx, p.max_idx, p.dissoc_idx, p.sensor_species, p.gate_species);
    }
};

}  // namespace

void validate(const ReactionNetwork& net) {
    if (net.params.size() < 1) throw Error("network needs at least one parameter");
    if (static_cast<int>(net.params.names.size()) != net.params.size())
        throw Error("parameter name/value length mismatch");
    for (int k = 0; k < net.params.size(); ++k) {
        if (!(net.params.values[k] > 0.0))
            throw Error("parameter " + net.params.names[k] + " must be strictly positive");
        for (int k2 = k + 1; k2 < net.params.size(); ++k2) {
            if (net.params.names[k] == net.params.names[k2])
                throw Error("duplicate parameter name " + net.params.names[k]);
        }
    }
    if (!(net.volume > 0.0)) throw Error("volume must be positive");
    for (const auto& rxn : net.reactions) {
        if (rxn.stoich.size() != net.n_species()) throw Error("stoichiometry size mismatch");
        if (rxn.stoich.isZero()) throw Error("zero stoichiometric vector");
        std::visit(ValidateKind{net, rxn}, rxn.propensity);
    }
    for (const auto& cs : net.conserved_sums) {
        for (int i : cs.species) {
            if (i < 0 || i >= net.n_species()) throw Error("conserved-sum species out of range");
        }
        for (const auto& rxn : net.reactions) {
            long delta = 0;
            for (int i : cs.species) delta += rxn.stoich[i];
            if (delta != 0) throw Error("reaction breaks a declared conserved sum");
        }
    }
}

ReactionNetwork builtin_schlogl() {
    ReactionNetwork net;
    net.name = "schlogl";
    net.species_names = {"X"};
    net.volume = 25.0;
    net.params.names = {"c1", "c2", "c3", "c4"};
    net.params.values = (Vector(4) << 3.0, 0.6, 0.25, 2.95).finished();

    const double a = 1.0;
    const double b = 2.0;
    auto stoich = [](int v) { return (State(1) << v).finished(); };

    // A + 2S -> 3S : c1 a x(x-1)/V
    net.reactions.push_back({stoich(+1), MassActionProduct{{0}, a, {2}, 1}});
    // 3S -> A + 2S : c2 x(x-1)(x-2)/V^2
    net.reactions.push_back({stoich(-1), MassActionProduct{{1}, 1.0, {3}, 2}});
    // B -> S : c3 b V
    net.reactions.push_back({stoich(+1), MassActionProduct{{2}, b, {0}, -1}});
    // S -> B : c4 x
    net.reactions.push_back({stoich(-1), MassActionProduct{{3}, 1.0, {1}, 0}});

    validate(net);
    return net;
}

ReactionNetwork builtin_genetic_switch() {
    ReactionNetwork net;
    net.name = "genetic-switch";
    net.species_names = {"DNA_act", "DNA_in", "mRNA", "Protein"};

    const double b = 22.5;
    const double a = 2400.0 / b;
    const double gamma = 50.0;
    const double k_min = 24.0 / b;
    const double k_max = 2400.0 / b;
    const double d = 1000.0;
    net.volume = a * b;  // 2400

    net.params.names = {"a", "b", "gamma", "k0_min", "k0_max", "k1_min", "k1_max", "D"};
    net.params.values = (Vector(8) << a, b, gamma, k_min, k_max, k_min, k_max, d).finished();

    auto stoich = [](int act, int in, int m, int p) {
        return (State(4) << act, in, m, p).finished();
    };

    // DNA_in -> DNA_act : (1 - xi) F(x2)
    net.reactions.push_back({stoich(+1, -1, 0, 0), HillActivation{3, 4, 7, 3, 1}});
    // DNA_act -> DNA_in : xi G(x2)
    net.reactions.push_back({stoich(-1, +1, 0, 0), HillDeactivation{5, 6, 7, 3, 0}});
    // DNA_act -> DNA_act + mRNA : a xi
    net.reactions.push_back({stoich(0, 0, +1, 0), MassActionProduct{{0}, 1.0, {1, 0, 0, 0}, 0}});
    // mRNA -> 0 : gamma x1
    net.reactions.push_back({stoich(0, 0, -1, 0), MassActionProduct{{2}, 1.0, {0, 0, 1, 0}, 0}});
    // mRNA -> mRNA + Protein : gamma b x1
    net.reactions.push_back({stoich(0, 0, 0, +1), MassActionProduct{{2, 1}, 1.0, {0, 0, 1, 0}, 0}});
    // Protein -> 0 : x2
    net.reactions.push_back({stoich(0, 0, 0, -1), MassActionProduct{{}, 1.0, {0, 0, 0, 1}, 0}});

    net.conserved_sums.push_back({{0, 1}, 1});
    validate(net);
    return net;
}

std::optional<ReactionNetwork> builtin_network(const std::string& name) {
    if (name == "schlogl") return builtin_schlogl();
    if (name == "genetic-switch") return builtin_genetic_switch();
    return std::nullopt;
}

}  // namespace parrep
