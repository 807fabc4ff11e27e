#pragma once

#include <string>
#include <vector>

#include "qngc/fock.hpp"
#include "qngc/measures.hpp"

namespace qngc {

enum class LossReading { OneMinusEta, Eta };

// First-order loss and thermal model around (|m> + |n>)/sqrt(2).
struct NoisyStateModel {
    CoherenceMeasureId id;
    double loss = 0.0;  // gamma = 1 - eta
    double nbar = 0.0;
    LossReading reading = LossReading::OneMinusEta;
    bool override_validity = false;

    static constexpr double kMaxLoss = 0.3;
    static constexpr double kMaxNbar = 0.15;

    bool perturbative_valid() const { return loss <= kMaxLoss && nbar <= kMaxNbar; }
    // Coefficient multiplying a rho a^dag.
    double loss_coefficient() const { return reading == LossReading::OneMinusEta ? loss : 1.0 - loss; }
};

struct PerturbedState {
    DensityMatrix rho;
    double clipped_weight = 0.0;  // negative eigenvalue weight removed
};

PerturbedState perturbed_state(const NoisyStateModel& model, int dim_report);

// Thermal attenuator with transmission eta and environment occupation
// nbar_env: amplifier(G) after pure loss(eta / G), G = 1 + (1 - eta) nbar_env.
DensityMatrix exact_channel(const DensityMatrix& rho, double eta, double nbar_env);

// Same composition with explicit loss transmission tau and gain G >= 1.
DensityMatrix loss_amplifier_channel(const DensityMatrix& rho, double tau, double gain);

// Channel whose first-order expansion carries the model's loss and
// thermal terms (with the loss anticommutator the model omits).
DensityMatrix model_channel(const DensityMatrix& rho, double loss, double nbar);

enum class DepthKind { Loss, Thermal };

struct DepthResult {
    DepthKind kind = DepthKind::Loss;
    double value = 0.0;
    double threshold = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
    bool perturbative_valid = true;
    double coherence_at_value = 0.0;
};

struct DepthOptions {
    LossReading reading = LossReading::OneMinusEta;
    double bracket = 1e-6;
    int dim_report = 0;  // 0 selects n + 4
};

double model_coherence(const CoherenceMeasureId& id, double loss, double nbar, const DepthOptions& opt = {});

DepthResult loss_depth(const CoherenceMeasureId& id, double threshold, const DepthOptions& opt = {});
DepthResult thermal_depth(const CoherenceMeasureId& id, double threshold, const DepthOptions& opt = {});

struct BoundaryPoint {
    double nbar = 0.0;
    double loss = 0.0;  // largest tolerable 1 - eta at this nbar
};

// Sweeps nbar from 0 up to the thermal depth and bisects the tolerable loss.
std::vector<BoundaryPoint> depth_boundary(const CoherenceMeasureId& id, double threshold, int points,
                                          const DepthOptions& opt = {});

std::string depth_kind_name(DepthKind k);

}  // namespace qngc
