#pragma once

#include <memory>
#include <optional>

#include "parrep/accumulator.hpp"
#include "parrep/errors.hpp"
#include "parrep/model.hpp"
#include "parrep/rng.hpp"

namespace parrep {

/// The chain cannot move: total propensity is zero.  Carries the stuck state
/// and, for run_ssa, the partial accumulator collected up to that point.
class AbsorbingStateError : public Error {
public:
    AbsorbingStateError(State state, std::optional<TrajectoryAccumulator> partial)
        : Error("absorbing state reached: total propensity is zero"),
          state(std::move(state)),
          partial(std::move(partial)) {}
    State state;
    std::optional<TrajectoryAccumulator> partial;
};

struct Jump {
    double tau;
    int channel;
};

/// Gillespie direct-method draw: exponential holding time at rate
/// lambda_0(x) and categorical channel choice.  Consumes exactly two
/// uniforms from the stream.
Jump draw_jump(const ReactionNetwork& net, const State& x, RngStream& rng);

/// Embedded-chain step used during dephasing: categorical channel only,
/// one uniform consumed.
int embedded_step(const ReactionNetwork& net, const State& x, RngStream& rng);

/// Channel choice from precomputed propensities and a uniform in [0,1).
int pick_channel(const Vector& lambda, double total, double u);

struct SsaOptions {
    HistogramSpec histogram;
    std::optional<SamplingWindow> window;
    bool collect_fim = false;
    double sample_stride = 0.0;
};

/// Serial SSA until the clock reaches t_end exactly; the final holding
/// interval is truncated so that the integral of the constant observable 1
/// equals t_end.
TrajectoryAccumulator run_ssa(const ReactionNetwork& net, const State& x0, double t_end,
                              const std::vector<Observable>& observables, RngStream& rng,
                              const SsaOptions& opts = {});

}  // namespace parrep
