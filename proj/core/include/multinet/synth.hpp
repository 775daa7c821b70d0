#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multinet/multiplex.hpp"

namespace multinet {

struct SynthLayerConfig {
    std::string name;
    int active = 0;                       // exact active-node count to realize
    double tail_alpha = 2.3;              // degree-tail CCDF exponent target
    double volume_share = 0.0;            // fraction of total_volume
    double degree_strength_spearman = 0.8;
    /// Whether this layer counts toward the cross-layer Jaccard calibration
    /// (the small secured segments are excluded in the default).
    bool overlap_target = true;
};

struct SynthConfig {
    int n = 533;
    std::vector<SynthLayerConfig> layers;
    /// Target mean pairwise Jaccard of the overlap_target layers.
    double kappa = 0.17;
    double total_volume = 220000.0; // millions of currency
    std::uint64_t seed = 1;

    /// Five-layer interbank default: one large overnight segment, short- and
    /// long-term unsecured segments, and two small secured segments.
    static SynthConfig paper_default();
    static SynthConfig from_json(const std::string& text);
    std::string to_json() const;
};

/// Throws validation_error naming the offending field.
void validate_config(const SynthConfig& cfg);

struct SynthInfo {
    /// Probability a layer edge is copied from the shared backbone pool,
    /// derived from kappa.
    double copy_probability = 0.0;
    std::map<std::string, double> gamma; // fitted weight exponent per layer
    std::map<std::string, double> measured_spearman;
    std::vector<std::string> notes;
};

/// Deterministic generator: a shared scale-free backbone supplies the
/// cross-layer edge overlap, per-layer configuration wiring supplies the
/// rest, weights follow w = d_out^gamma * lognormal noise with gamma tuned
/// by bisection to the Spearman target, and each layer's total weight is
/// rescaled to its volume share.
Multiplex generate_multiplex(const SynthConfig& cfg, SynthInfo* info = nullptr);

struct CalibrationRow {
    std::string layer; // empty for multiplex-wide rows
    std::string field;
    double target = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool measurable = false;
    bool pass = false;
    std::string note;
};

struct CalibrationReport {
    std::vector<CalibrationRow> rows;
    bool all_pass = false; // over measurable rows only
    std::string to_json() const;
};

/// Measures every SynthConfig target on an actual multiplex. Rows whose
/// statistic is undefined on the data (a tail fit on 40 samples, say) are
/// flagged unmeasurable and excluded from all_pass.
CalibrationReport calibration_report(const Multiplex& m, const SynthConfig& cfg);

} // namespace multinet
