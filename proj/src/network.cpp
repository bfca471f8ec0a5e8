#include "symnav/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "symnav/number_format.hpp"

namespace symnav {

std::string_view to_string(SymmetricDepth depth) {
    return depth == SymmetricDepth::AllLayers ? "all" : "first";
}

SymmetricDepth symmetric_depth_from_string(std::string_view text) {
    if (text == "all" || text == "AllLayers") return SymmetricDepth::AllLayers;
    if (text == "first" || text == "FirstLayerOnly") return SymmetricDepth::FirstLayerOnly;
    throw std::invalid_argument("unknown symmetric_depth '" + std::string(text) + "'");
}

void NetworkSpec::validate() const {
    if (layer_sizes.size() < 3) {
        throw std::invalid_argument("network needs an input, at least one hidden, and an output layer");
    }
    if (layer_sizes.back() != 2) {
        throw std::invalid_argument("network output layer must have 2 neurons (left, right)");
    }
    for (int n : layer_sizes) {
        if (n < 1) {
            throw std::invalid_argument("network layer sizes must be positive");
        }
    }
}

NetworkSpec default_network(int inputs, bool symmetric, int hidden, SymmetricDepth depth) {
    NetworkSpec spec{{inputs, hidden > 0 ? hidden : inputs, 2}, symmetric, depth};
    spec.validate();
    return spec;
}

std::size_t genome_length(const NetworkSpec& spec) {
    std::size_t total = 0;
    for (int l = 0; l < spec.weight_layers(); ++l) {
        const auto fan_in = static_cast<std::size_t>(spec.layer_sizes[l]);
        const auto fan_out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        total += fan_out * (spec.constrained(l) ? fan_in / 2 : fan_in);
    }
    return total;
}

double activation(double x) {
    const double mag = 1.0 / (1.0 + std::exp(-std::abs(x))) - 0.5;
    return std::signbit(x) ? -mag : mag;
}

WeightMatrices decode(const Chromosome& chromosome) {
    const NetworkSpec& spec = chromosome.spec;
    spec.validate();
    if (chromosome.genes.size() != genome_length(spec)) {
        throw std::invalid_argument("chromosome has " + std::to_string(chromosome.genes.size()) +
                                    " genes, network expects " +
                                    std::to_string(genome_length(spec)));
    }
    WeightMatrices out;
    std::size_t g = 0;
    for (int l = 0; l < spec.weight_layers(); ++l) {
        WeightLayer layer;
        layer.fan_in = spec.layer_sizes[l];
        layer.fan_out = spec.layer_sizes[l + 1];
        layer.constrained = spec.constrained(l);
        layer.weights.assign(static_cast<std::size_t>(layer.fan_in) * layer.fan_out, 0.0);
        for (int j = 0; j < layer.fan_out; ++j) {
            double* row = layer.weights.data() + static_cast<std::size_t>(j) * layer.fan_in;
            if (layer.constrained) {
                const int half = layer.fan_in / 2;
                for (int k = 0; k < half; ++k) {
                    row[k] = chromosome.genes[g];
                    row[layer.fan_in - 1 - k] = -chromosome.genes[g];
                    ++g;
                }
            } else {
                for (int k = 0; k < layer.fan_in; ++k) {
                    row[k] = chromosome.genes[g++];
                }
            }
        }
        out.layers.push_back(std::move(layer));
    }
    return out;
}

std::vector<double> encode(const WeightMatrices& weights) {
    std::vector<double> genes;
    for (const WeightLayer& layer : weights.layers) {
        const int stored = layer.constrained ? layer.fan_in / 2 : layer.fan_in;
        for (int j = 0; j < layer.fan_out; ++j) {
            auto row = layer.row(j);
            genes.insert(genes.end(), row.begin(), row.begin() + stored);
        }
    }
    return genes;
}

NetworkOutput forward(const WeightMatrices& weights, std::span<const double> inputs) {
    if (weights.layers.empty() || static_cast<int>(inputs.size()) != weights.inputs()) {
        throw std::invalid_argument("network expects " +
                                    std::to_string(weights.layers.empty() ? 0 : weights.inputs()) +
                                    " inputs, got " + std::to_string(inputs.size()));
    }
    std::vector<double> current(inputs.begin(), inputs.end());
    std::vector<double> next;
    for (const WeightLayer& layer : weights.layers) {
        next.assign(static_cast<std::size_t>(layer.fan_out), 0.0);
        const int n = layer.fan_in;
        for (int j = 0; j < layer.fan_out; ++j) {
            auto row = layer.row(j);
            double sum = 0.0;
            if (layer.constrained) {
                for (int k = 0; k < n / 2; ++k) {
                    sum += row[k] * (current[k] - current[n - 1 - k]);
                }
            } else {
                for (int k = 0; k < n; ++k) {
                    sum += row[k] * current[k];
                }
            }
            next[j] = activation(sum);
        }
        current.swap(next);
    }
    return {current[0], current[1]};
}

double steering_command(double out_left, double out_right, double max_steer) {
    const double command = (out_left - out_right) * (max_steer / 0.5);
    return std::clamp(command, -max_steer, max_steer);
}

std::string save_chromosome(const Chromosome& chromosome) {
    std::string text = "layers";
    for (int n : chromosome.spec.layer_sizes) {
        text += ' ' + std::to_string(n);
    }
    text += chromosome.spec.symmetric ? " symmetric 1" : " symmetric 0";
    text += " depth ";
    text += to_string(chromosome.spec.symmetric_depth);
    text += '\n';
    for (std::size_t i = 0; i < chromosome.genes.size(); ++i) {
        if (i > 0) text += ' ';
        text += format_number(chromosome.genes[i]);
    }
    text += '\n';
    return text;
}

Chromosome load_chromosome(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    std::string genes_line;
    if (!std::getline(in, header)) {
        throw std::invalid_argument("chromosome file: missing header line");
    }
    std::getline(in, genes_line);

    std::istringstream hs(header);
    std::string word;
    hs >> word;
    if (word != "layers") {
        throw std::invalid_argument("chromosome file: header must start with 'layers'");
    }
    Chromosome c;
    while (hs >> word && word != "symmetric") {
        c.spec.layer_sizes.push_back(std::stoi(word));
    }
    if (word != "symmetric") {
        throw std::invalid_argument("chromosome file: missing 'symmetric' flag");
    }
    int flag = 0;
    hs >> flag;
    c.spec.symmetric = flag != 0;
    if (hs >> word) {
        if (word != "depth" || !(hs >> word)) {
            throw std::invalid_argument("chromosome file: malformed depth field");
        }
        c.spec.symmetric_depth = symmetric_depth_from_string(word);
    }
    c.spec.validate();

    std::istringstream gs(genes_line);
    while (gs >> word) {
        const double v = parse_number(word);
        if (!std::isfinite(v)) {
            throw std::invalid_argument("chromosome file: non-finite gene");
        }
        c.genes.push_back(v);
    }
    if (c.genes.size() != genome_length(c.spec)) {
        throw std::invalid_argument("chromosome file: " + std::to_string(c.genes.size()) +
                                    " genes, layout expects " +
                                    std::to_string(genome_length(c.spec)));
    }
    return c;
}

void save_chromosome_file(const Chromosome& chromosome, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << save_chromosome(chromosome);
}

Chromosome load_chromosome_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_chromosome(ss.str());
}

}  // namespace symnav
