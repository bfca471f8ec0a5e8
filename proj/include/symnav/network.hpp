#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symnav {

enum class SymmetricDepth { FirstLayerOnly, AllLayers };

std::string_view to_string(SymmetricDepth depth);
SymmetricDepth symmetric_depth_from_string(std::string_view text);

/// Layer widths, inputs first and the two steering outputs last.
struct NetworkSpec {
    std::vector<int> layer_sizes;
    bool symmetric = true;
    SymmetricDepth symmetric_depth = SymmetricDepth::AllLayers;

    /// Throws std::invalid_argument: needs >= 1 hidden layer, 2 outputs,
    /// positive widths.
    void validate() const;

    int inputs() const { return layer_sizes.front(); }
    int weight_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

    /// Whether neurons of weight layer `layer` (0 = input->first hidden)
    /// carry the odd-symmetric weight constraint.
    bool constrained(int layer) const {
        return symmetric && (symmetric_depth == SymmetricDepth::AllLayers || layer == 0);
    }

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Single-hidden-layer spec [inputs, hidden, 2]; hidden defaults to inputs.
NetworkSpec default_network(int inputs, bool symmetric, int hidden = 0,
                            SymmetricDepth depth = SymmetricDepth::AllLayers);

/// Number of free genes. A constrained neuron stores floor(fan_in / 2)
/// genes; an unconstrained one stores fan_in.
std::size_t genome_length(const NetworkSpec& spec);

struct Chromosome {
    std::vector<double> genes;
    NetworkSpec spec;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// Dense incoming weights of one layer, row-major [fan_out][fan_in].
struct WeightLayer {
    int fan_in = 0;
    int fan_out = 0;
    bool constrained = false;
    std::vector<double> weights;

    std::span<const double> row(int neuron) const {
        return {weights.data() + static_cast<std::size_t>(neuron) * fan_in,
                static_cast<std::size_t>(fan_in)};
    }
};

struct WeightMatrices {
    std::vector<WeightLayer> layers;

    int inputs() const { return layers.front().fan_in; }
};

/// Odd sigmoid: 1 / (1 + e^-x) - 0.5, evaluated on |x| so that
/// activation(-x) == -activation(x) holds bit-exactly.
double activation(double x);

/// Expands genes layer by layer, each neuron's incoming weights
/// consecutive. Constrained rows are [g0..g(h-1), (0 if odd), -g(h-1)..-g0].
/// Throws std::invalid_argument on a length mismatch.
WeightMatrices decode(const Chromosome& chromosome);

/// Reads the free genes back out of decoded weights (inverse of decode).
std::vector<double> encode(const WeightMatrices& weights);

struct NetworkOutput {
    double left = 0.0;
    double right = 0.0;
};

/// Bias-free dense forward pass with the odd activation on every hidden and
/// output neuron. Constrained neurons accumulate w[k] * (x[k] - x[n-1-k]),
/// which makes reversed inputs produce exactly negated outputs.
NetworkOutput forward(const WeightMatrices& weights, std::span<const double> inputs);

/// (left - right) scaled so a full +/-0.5 difference maps to +/-max_steer,
/// clamped. Positive turns left.
double steering_command(double out_left, double out_right, double max_steer);

/// Two-line text form: header with layer sizes and symmetry flags, then
/// the genes in shortest round-trip notation.
std::string save_chromosome(const Chromosome& chromosome);
Chromosome load_chromosome(std::string_view text);
void save_chromosome_file(const Chromosome& chromosome, const std::string& path);
Chromosome load_chromosome_file(const std::string& path);

}  // namespace symnav
