#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "statdec/matrix.hpp"
#include "statdec/rng.hpp"

namespace statdec {

enum class Activation { kRelu, kIdentity };

struct AffineLayer {
    Matrix weight;             // in x out
    std::vector<double> bias;  // out
    Activation activation = Activation::kRelu;
};

// Fully-connected network. Consecutive layers chain:
// layers[k].weight.cols == layers[k+1].weight.rows.
struct MlpNetwork {
    std::vector<AffineLayer> layers;
    std::vector<std::size_t> topology;  // layer widths, layers.size() + 1 entries

    std::size_t input_width() const { return topology.front(); }
    std::size_t output_width() const { return topology.back(); }
    std::size_t depth() const { return layers.size(); }
};

// A differentiable transform spliced between two layers (the statistics
// pooling layer implements this). forward() may cache whatever backward()
// needs; backward() maps dL/d(output) to dL/d(input) and accumulates its own
// parameter gradients internally.
class LayerTransform {
public:
    virtual ~LayerTransform() = default;
    virtual Matrix forward(const Matrix& h) = 0;
    virtual Matrix backward(const Matrix& grad_output) = 0;
};

// Everything the backward pass needs about one forward pass.
struct ForwardTrace {
    std::vector<Matrix> inputs;  // inputs[l] = batch fed into layer l
    std::vector<Matrix> pre;     // pre-activation output of layer l
    Matrix output;               // final activations
    std::vector<Matrix> masks;   // inverted-dropout masks per hidden layer; empty when dropout is off
    int hook_site = -1;          // hidden layer whose activations went through the transform
};

struct LayerGrads {
    Matrix weight;
    std::vector<double> bias;
};

struct NetworkGrads {
    std::vector<LayerGrads> layers;
};

struct Autoencoder {
    MlpNetwork encoder;
    MlpNetwork decoder;
};

// Builds a network with the given layer widths. Hidden layers use ReLU; the
// output layer is linear. Weights are Glorot-initialized, biases zero.
MlpNetwork build_mlp(const std::vector<std::size_t>& widths, Rng& rng);

// Encoder d_x-hidden...-embed and mirrored decoder embed-reversed(hidden)-d_x.
Autoencoder build_autoencoder(std::size_t input_width, const std::vector<std::size_t>& hidden,
                              std::size_t embed_width, Rng& rng);

// Forward pass through the encoder. dropout_rate > 0 applies inverted dropout
// to every hidden activation (pretraining mode); the embedding layer is never
// dropped.
std::pair<Matrix, ForwardTrace> encode(const MlpNetwork& net, const Matrix& x, double dropout_rate = 0.0,
                                       Rng* rng = nullptr);

// Forward pass through the decoder. When hook is given it is applied to the
// activations of the decoder's second hidden layer (or the last hidden layer
// of shallower decoders) before the next affine layer.
std::pair<Matrix, ForwardTrace> decode(const MlpNetwork& net, const Matrix& z, LayerTransform* hook = nullptr);

// Mean squared reconstruction error over the batch.
double reconstruction_loss(const Matrix& x, const Matrix& x_rec);

// Reverse-mode pass through one network. grad_output is dL/d(output).
// Returns per-layer parameter gradients and dL/d(input). The hook, when
// given, must be the one used in the forward pass.
std::pair<NetworkGrads, Matrix> backward_through(const MlpNetwork& net, const ForwardTrace& trace,
                                                 const Matrix& grad_output, LayerTransform* hook = nullptr);

struct AutoencoderGrads {
    NetworkGrads encoder;
    NetworkGrads decoder;
};

// Gradients of the mean reconstruction loss through decoder then encoder.
AutoencoderGrads backward_reconstruction(const MlpNetwork& encoder, const MlpNetwork& decoder,
                                         const ForwardTrace& enc_trace, const ForwardTrace& dec_trace,
                                         const Matrix& x, const Matrix& x_rec,
                                         LayerTransform* decoder_hook = nullptr);

// In-place SGD step: w -= eta * grad.
void sgd_step(MlpNetwork& net, const NetworkGrads& grads, double eta);

struct PretrainConfig {
    std::vector<std::size_t> hidden = {500, 500, 1000};
    std::size_t embed_dim = 10;
    double dropout = 0.2;
    std::size_t iters_per_layer = 100000;
    std::size_t finetune_iters = 200000;
    std::size_t batch = 256;
    double eta0 = 0.01;
    std::size_t lr_decay_every = 20000;
    double lr_decay_factor = 10.0;
    std::size_t scale = 1;  // divides both iteration counts and the decay period
};

// Greedy layer-wise pretraining with dropout noising, then end-to-end
// fine-tuning without dropout.
Autoencoder pretrain(const PretrainConfig& config, const Matrix& x, Rng& rng);

}  // namespace statdec
