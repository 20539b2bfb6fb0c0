#pragma once

// Entropy functionals, dissipation, flux reconstruction and per-step audits.

#include "mstefan/fields.hpp"
#include "mstefan/grid.hpp"
#include "mstefan/mixture.hpp"
#include "mstefan/stepper.hpp"

#include <string>
#include <vector>

namespace mstefan {

struct DiagnosticsRecord {
  double time = 0.0;
  /// Step size that produced this state (0 for the initial record).
  double tau = 0.0;
  double entropy = 0.0;
  double relative_entropy = 0.0;
  /// sum over faces of |grad sqrt(c)|^2 h, all N+1 species.
  double dissipation_sqrt = 0.0;
  /// sum over faces of grad w : B grad w h.
  double dissipation_raw = 0.0;
  /// sum over cells of (|L w|^2 + |w|^2) h.
  double regularization = 0.0;
  Vector masses;
  /// Integral of each entropy variable.
  Vector w_integrals;
  /// Integral of each production rate, all N+1 species.
  Vector production_integrals;
  double min_c = 0.0;
  int picard_iterations = 0;
};

/// Accepted state plus its diagnostics.
struct StepState {
  ConcentrationField c;
  EntropyField w;
  DiagnosticsRecord record;
};

double entropy_functional(const Grid1D& grid, const ConcentrationField& c);

/// sum_i int c_i log(c_i / ref_i). Throws BadReference.
double relative_entropy(const Grid1D& grid, const ConcentrationField& c, const Vector& reference);

struct Dissipation {
  double raw = 0.0;
  double sqrt_form = 0.0;
};

/// Throws InconsistentFields if c differs from w_to_c(w) by more than 1e-10.
Dissipation dissipation(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c,
                        const EntropyField& w);

/// sum over cells of (|L w|^2 + |w|^2) h.
double regularization_norm(const Grid1D& grid, const EntropyField& w);

struct FluxReconstruction {
  /// (M+1) x (N+1) molar fluxes, zero on boundary faces.
  FaceArray fluxes;
  /// Face gradients of all N+1 species; the last one is -sum of the others.
  FaceArray gradients;
  /// max |grad c_i + sum_{j != i} (c_j J_i - c_i J_j) / D_ij| over faces and species.
  double residual = 0.0;
  /// max |grad c_i|, the scale the residual is compared against.
  double gradient_scale = 0.0;
  /// Round-off level of a difference quotient of values in [0, 1].
  double noise_floor = 0.0;

  double relative_residual() const { return gradient_scale > 0.0 ? residual / gradient_scale : residual; }
};

/// J' = -A0^{-1}(c_face) grad c' at faces, c_face the arithmetic mean. Throws NotStrictlyAdmissible.
FluxReconstruction reconstruct_fluxes(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c);

struct UphillEvent {
  int face = -1;
  int species = -1;
  /// J_i * grad c_i at that face.
  double strength = 0.0;
};

/// Strongest face/species with J_i grad c_i > 0, if any (face == -1 otherwise).
/// Gradients at or below noise_floor are ignored, as are events weaker than
/// rel_threshold times the largest |J_i grad c_i|.
UphillEvent strongest_uphill(const FluxReconstruction& flux, double rel_threshold = 0.0);

/// Per-species L1 distance to a spatially constant reference.
Vector l1_distance(const Grid1D& grid, const ConcentrationField& c, const Vector& reference);

/// Evaluates the per-state functionals. `reference` is the mean initial composition.
DiagnosticsRecord make_record(const MixtureSpec& spec, const Grid1D& grid, const ConcentrationField& c,
                              const EntropyField& w, const Vector& reference, double time);

struct DecayFit {
  double lambda = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares slope of log relative_entropy over records with t0 <= time <= t1.
/// Throws InsufficientData (< 10 records) and NonPositiveEntropy.
DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records, double t0, double t1);

/// Second half of [first time, last time].
DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records);

struct AuditCheck {
  std::string name;
  bool passed = true;
  /// Slack left in the inequality; negative means violated.
  double margin = 0.0;
};

struct AuditVerdict {
  double time = 0.0;
  std::vector<AuditCheck> checks;

  bool passed() const;
  const AuditCheck* find(const std::string& name) const;
};

/// Checks one accepted step: entropy inequality, mass drift, bounds,
/// dissipation contract and Maxwell-Stefan flux consistency.
AuditVerdict audit_step(const MixtureSpec& spec, const Grid1D& grid, const SchemeParams& params,
                        const StepState& prev, const StepState& next);

}  // namespace mstefan
