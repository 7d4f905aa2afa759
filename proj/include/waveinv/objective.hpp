#pragma once

#include <optional>
#include <vector>

#include "waveinv/adjoint.hpp"
#include "waveinv/fields.hpp"
#include "waveinv/forward.hpp"

namespace waveinv {

/// gamma = delta^(2 nu) with nu in (0, 1/4).
struct GammaRule {
  double delta = 0.0;
  double nu = 0.0;
};

struct TikhonovSpec {
  double gamma = 0.01;
  CoefficientField c0;
  CutoffSpec cutoff;
  std::optional<GammaRule> gamma_rule;

  /// gamma, or delta^(2 nu) when a rule is set. Validates both.
  double effective_gamma() const;
};

/// Per-cell gradient density; zero outside the inner region.
struct GradientField {
  GridPtr grid;
  std::vector<double> values;

  double l2_norm() const;
  double max_abs() const;
  /// Cell-volume weighted inner product sum(g * v) h^3.
  double dot(std::span<const double> v) const;
};

struct FunctionalTerms {
  double misfit = 0.0;
  double regularization = 0.0;
  double total() const noexcept { return misfit + regularization; }
};

/// Discrete Tikhonov functional
///   1/2 sum_k sum_i w_k tau z(t_k) A_i (u - data)^2 + gamma/2 sum_cells (c - c0)^2 h^3
/// with trapezoidal weights w_k and lumped face areas A_i. Throws
/// Error{TraceMismatch} for misaligned traces.
FunctionalTerms functional_terms(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                                 const CoefficientField& c, const TikhonovSpec& spec);
double functional(const BoundaryTrace& u_trace, const BoundaryTrace& data,
                  const CoefficientField& c, const TikhonovSpec& spec);

/// g = sum_k w_k tau (grad u . grad lambda)_cell + gamma (c - c0), inner cells only.
/// Throws Error{HistoryMismatch} when the histories disagree.
GradientField gradient(const WaveHistory& u_hist, const WaveHistory& lambda_hist,
                       const CoefficientField& c, const TikhonovSpec& spec);

/// Clamp to [1, upper]; cells outside the inner region are reset to 1.
CoefficientField project(const CoefficientField& c, double upper);

/// Keep values above P * (max over the inner region), set the rest to 1.
CoefficientField postprocess(const CoefficientField& c, double P);
std::vector<double> postprocess_values(std::span<const double> values, double P);

struct ErrorBound {
  double lhs = 0.0;  // ||c - c*||
  double rhs = 0.0;  // 2 / delta^(2 nu) ||g|| + xi ||c0 - c*||
};

/// Diagnostic a-posteriori bound comparing the distance to the exact
/// coefficient with the gradient norm; L2 norms over cells.
ErrorBound theorem3_bound(const GradientField& g, const CoefficientField& c,
                          const CoefficientField& c0, double delta, double nu, double xi,
                          const CoefficientField& c_star);
ErrorBound theorem3_bound(const WaveHistory& u_hist, const WaveHistory& lambda_hist,
                          const CoefficientField& c, const TikhonovSpec& spec, double delta,
                          double nu, double xi, const CoefficientField& c_star);

/// Forward model, data and regularization of one inversion.
struct InverseProblem {
  WaveProblem wave;
  BoundaryTrace data;
  TikhonovSpec tikhonov;
};

struct Evaluation {
  FunctionalTerms terms;
  std::optional<GradientField> gradient;
};

/// J(c) from one forward solve.
Evaluation evaluate(const InverseProblem& problem, const CoefficientField& c);
/// J(c) and its gradient from one forward and one adjoint solve.
Evaluation evaluate_with_gradient(const InverseProblem& problem, const CoefficientField& c);

}  // namespace waveinv
