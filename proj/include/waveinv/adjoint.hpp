#pragma once

#include "waveinv/fields.hpp"
#include "waveinv/forward.hpp"

namespace waveinv {

/// Time weight z(t) that fades the data misfit to zero over the last
/// `window` time units before T.
struct CutoffSpec {
  double window = 0.0;
};

/// 1 for t <= T - w, quintic smoothstep down to 0 on [T - w, T] (C2 at both
/// ends), exactly 0 at T.
double cutoff(const CutoffSpec& spec, double t, double final_time);

/// (u - data)(k, i) * z(t_k) on the front face. Throws Error{TraceMismatch}
/// when the traces disagree in shape or time step.
BoundaryTrace make_residual(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                            const CutoffSpec& spec);

/// Backward sweep for the adjoint field lambda, driven by the residual as a
/// boundary load on the front face, with lambda(T) = lambda_t(T) = 0.
///
/// Each update lambda^{k-1} from (lambda^k, lambda^{k+1}) reuses the forward
/// leapfrog step with time reversed; absorbing faces carry the damping of the
/// forward updates that touched those levels, so the sweep is the exact
/// transpose of the forward recursion.
WaveHistory adjoint_solve(const CoefficientField& c, const BoundaryTrace& residual,
                          const WaveProblem& problem);

}  // namespace waveinv
