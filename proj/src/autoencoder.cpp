#include "statdec/autoencoder.hpp"

#include <algorithm>
#include <cmath>

#include "statdec/batch.hpp"
#include "statdec/errors.hpp"

namespace statdec {

namespace {

Matrix affine(const Matrix& x, const AffineLayer& layer) {
    Matrix out = matmul(x, layer.weight);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += layer.bias[j];
    }
    return out;
}

Matrix activate(const Matrix& pre, Activation act) {
    if (act == Activation::kIdentity) return pre;
    Matrix out = pre;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::max(0.0, out.data()[i]);
    return out;
}

// Entries are 0 or 1/(1-rate), so the expected activation is unchanged.
Matrix dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
    const double keep_scale = 1.0 / (1.0 - rate);
    Matrix mask(rows, cols);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask.data()[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    }
    return mask;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.data()[i];
    return out;
}

int hook_site_for(const MlpNetwork& net) {
    // Second hidden layer when the decoder is deep enough, else the last
    // hidden layer; shallower nets have no hidden layer to host the hook.
    if (net.depth() < 2) return -1;
    return static_cast<int>(std::min<std::size_t>(1, net.depth() - 2));
}

std::pair<Matrix, ForwardTrace> run_forward(const MlpNetwork& net, const Matrix& x, double dropout_rate, Rng* rng,
                                            LayerTransform* hook) {
    if (x.cols() != net.input_width()) {
        throw ShapeError("forward: input width " + std::to_string(x.cols()) + " does not match network width " +
                         std::to_string(net.input_width()));
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ParameterError("forward: dropout rate must be in [0, 1)");
    }
    if (dropout_rate > 0.0 && rng == nullptr) {
        throw ParameterError("forward: dropout requires an Rng");
    }
    ForwardTrace trace;
    const std::size_t depth = net.depth();
    trace.inputs.reserve(depth);
    trace.pre.reserve(depth);
    if (dropout_rate > 0.0) trace.masks.reserve(depth > 0 ? depth - 1 : 0);
    trace.hook_site = hook != nullptr ? hook_site_for(net) : -1;

    Matrix h = x;
    for (std::size_t l = 0; l < depth; ++l) {
        trace.inputs.push_back(h);
        Matrix pre = affine(h, net.layers[l]);
        h = activate(pre, net.layers[l].activation);
        trace.pre.push_back(std::move(pre));
        const bool hidden = l + 1 < depth;
        if (hidden && dropout_rate > 0.0) {
            trace.masks.push_back(dropout_mask(h.rows(), h.cols(), dropout_rate, *rng));
            h = hadamard(h, trace.masks.back());
        }
        if (static_cast<int>(l) == trace.hook_site) {
            h = hook->forward(h);
        }
    }
    trace.output = h;
    return {std::move(h), std::move(trace)};
}

Matrix relu_backward(const Matrix& grad, const Matrix& pre) {
    Matrix out = grad;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (pre.data()[i] <= 0.0) out.data()[i] = 0.0;
    }
    return out;
}

}  // namespace

MlpNetwork build_mlp(const std::vector<std::size_t>& widths, Rng& rng) {
    if (widths.size() < 2) throw ParameterError("build_mlp: need at least two layer widths");
    MlpNetwork net;
    net.topology = widths;
    net.layers.reserve(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        AffineLayer layer;
        layer.weight = glorot_init(rng, widths[l], widths[l + 1]);
        layer.bias.assign(widths[l + 1], 0.0);
        layer.activation = l + 2 < widths.size() ? Activation::kRelu : Activation::kIdentity;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Autoencoder build_autoencoder(std::size_t input_width, const std::vector<std::size_t>& hidden,
                              std::size_t embed_width, Rng& rng) {
    std::vector<std::size_t> enc_widths;
    enc_widths.push_back(input_width);
    enc_widths.insert(enc_widths.end(), hidden.begin(), hidden.end());
    enc_widths.push_back(embed_width);
    std::vector<std::size_t> dec_widths(enc_widths.rbegin(), enc_widths.rend());
    Autoencoder ae;
    ae.encoder = build_mlp(enc_widths, rng);
    ae.decoder = build_mlp(dec_widths, rng);
    return ae;
}

std::pair<Matrix, ForwardTrace> encode(const MlpNetwork& net, const Matrix& x, double dropout_rate, Rng* rng) {
    return run_forward(net, x, dropout_rate, rng, nullptr);
}

std::pair<Matrix, ForwardTrace> decode(const MlpNetwork& net, const Matrix& z, LayerTransform* hook) {
    return run_forward(net, z, 0.0, nullptr, hook);
}

double reconstruction_loss(const Matrix& x, const Matrix& x_rec) {
    if (x.rows() != x_rec.rows() || x.cols() != x_rec.cols()) {
        throw ShapeError("reconstruction_loss: shapes differ, x is " + shape_str(x) + ", x_rec is " +
                         shape_str(x_rec));
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.data()[i] - x_rec.data()[i];
        sse += d * d;
    }
    return x.rows() == 0 ? 0.0 : sse / static_cast<double>(x.rows());
}

std::pair<NetworkGrads, Matrix> backward_through(const MlpNetwork& net, const ForwardTrace& trace,
                                                 const Matrix& grad_output, LayerTransform* hook) {
    const std::size_t depth = net.depth();
    if (trace.inputs.size() != depth || trace.pre.size() != depth) {
        throw TraceMismatchError("backward_through: trace depth " + std::to_string(trace.inputs.size()) +
                                 " does not match network depth " + std::to_string(depth));
    }
    if (grad_output.rows() != trace.output.rows() || grad_output.cols() != trace.output.cols()) {
        throw TraceMismatchError("backward_through: gradient is " + shape_str(grad_output) +
                                 " but the forward output was " + shape_str(trace.output));
    }
    if (trace.hook_site >= 0 && hook == nullptr) {
        throw TraceMismatchError("backward_through: forward pass used a layer transform, none given");
    }

    NetworkGrads grads;
    grads.layers.resize(depth);
    Matrix g = grad_output;
    for (std::size_t li = depth; li-- > 0;) {
        if (static_cast<int>(li) == trace.hook_site) {
            g = hook->backward(g);
        }
        const bool hidden = li + 1 < depth;
        if (hidden && !trace.masks.empty()) {
            g = hadamard(g, trace.masks[li]);
        }
        const AffineLayer& layer = net.layers[li];
        if (trace.pre[li].rows() != g.rows() || trace.pre[li].cols() != g.cols()) {
            throw TraceMismatchError("backward_through: trace shape drift at layer " + std::to_string(li));
        }
        Matrix delta = layer.activation == Activation::kRelu ? relu_backward(g, trace.pre[li]) : std::move(g);
        grads.layers[li].weight = matmul(transpose(trace.inputs[li]), delta);
        grads.layers[li].bias = col_sum(delta);
        g = matmul(delta, transpose(layer.weight));
    }
    return {std::move(grads), std::move(g)};
}

AutoencoderGrads backward_reconstruction(const MlpNetwork& encoder, const MlpNetwork& decoder,
                                         const ForwardTrace& enc_trace, const ForwardTrace& dec_trace,
                                         const Matrix& x, const Matrix& x_rec, LayerTransform* decoder_hook) {
    if (x.rows() != x_rec.rows() || x.cols() != x_rec.cols()) {
        throw ShapeError("backward_reconstruction: x is " + shape_str(x) + ", x_rec is " + shape_str(x_rec));
    }
    const double inv_n = x.rows() == 0 ? 0.0 : 1.0 / static_cast<double>(x.rows());
    Matrix grad_rec(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        grad_rec.data()[i] = 2.0 * inv_n * (x_rec.data()[i] - x.data()[i]);
    }
    AutoencoderGrads grads;
    auto [dec_grads, grad_z] = backward_through(decoder, dec_trace, grad_rec, decoder_hook);
    auto [enc_grads, grad_x] = backward_through(encoder, enc_trace, grad_z);
    (void)grad_x;
    grads.decoder = std::move(dec_grads);
    grads.encoder = std::move(enc_grads);
    return grads;
}

void sgd_step(MlpNetwork& net, const NetworkGrads& grads, double eta) {
    if (grads.layers.size() != net.depth()) {
        throw TraceMismatchError("sgd_step: gradient depth does not match network depth");
    }
    for (std::size_t l = 0; l < net.depth(); ++l) {
        AffineLayer& layer = net.layers[l];
        const LayerGrads& g = grads.layers[l];
        for (std::size_t i = 0; i < layer.weight.size(); ++i) {
            layer.weight.data()[i] -= eta * g.weight.data()[i];
        }
        for (std::size_t j = 0; j < layer.bias.size(); ++j) {
            layer.bias[j] -= eta * g.bias[j];
        }
    }
}

namespace {

double pretrain_lr(std::size_t iteration, const PretrainConfig& config) {
    const std::size_t scale = std::max<std::size_t>(1, config.scale);
    const std::size_t period = std::max<std::size_t>(1, config.lr_decay_every / scale);
    return config.eta0 / std::pow(config.lr_decay_factor, static_cast<double>(iteration / period));
}

// One denoising step on an encoder/decoder layer pair, expressed as a
// two-layer network.
void train_pair(MlpNetwork& pair, const Matrix& rep, const PretrainConfig& config, std::size_t iters, Rng& rng) {
    BatchSampler sampler(rep.rows(), config.batch, rng);
    for (std::size_t it = 0; it < iters; ++it) {
        const auto idx = sampler.next();
        const Matrix clean = take_rows(rep, idx);
        Matrix corrupted = clean;
        if (config.dropout > 0.0) {
            corrupted = hadamard(clean, dropout_mask(clean.rows(), clean.cols(), config.dropout, rng));
        }
        auto [rec, trace] = encode(pair, corrupted, config.dropout, &rng);
        const double inv_n = 1.0 / static_cast<double>(clean.rows());
        Matrix grad(rec.rows(), rec.cols());
        for (std::size_t i = 0; i < rec.size(); ++i) {
            grad.data()[i] = 2.0 * inv_n * (rec.data()[i] - clean.data()[i]);
        }
        auto [grads, grad_in] = backward_through(pair, trace, grad);
        (void)grad_in;
        sgd_step(pair, grads, pretrain_lr(it, config));
    }
}

}  // namespace

Autoencoder pretrain(const PretrainConfig& config, const Matrix& x, Rng& rng) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw ParameterError("pretrain: dataset is empty");
    }
    Autoencoder ae = build_autoencoder(x.cols(), config.hidden, config.embed_dim, rng);
    const std::size_t depth = ae.encoder.depth();
    const std::size_t scale = std::max<std::size_t>(1, config.scale);
    const std::size_t pair_iters = config.iters_per_layer / scale;
    const std::size_t finetune_iters = config.finetune_iters / scale;

    // Greedy phase: pair k is encoder layer k plus its mirror decoder layer,
    // trained to reconstruct the representation entering layer k.
    for (std::size_t k = 0; k < depth && pair_iters > 0; ++k) {
        Matrix rep = x;
        for (std::size_t l = 0; l < k; ++l) {
            MlpNetwork partial;
            partial.layers = {ae.encoder.layers[l]};
            partial.topology = {ae.encoder.topology[l], ae.encoder.topology[l + 1]};
            rep = encode(partial, rep).first;
        }
        const std::size_t mirror = depth - 1 - k;
        MlpNetwork pair;
        pair.layers = {ae.encoder.layers[k], ae.decoder.layers[mirror]};
        pair.topology = {ae.encoder.topology[k], ae.encoder.topology[k + 1], ae.encoder.topology[k]};
        train_pair(pair, rep, config, pair_iters, rng);
        ae.encoder.layers[k] = pair.layers[0];
        ae.decoder.layers[mirror] = pair.layers[1];
    }

    // End-to-end fine-tuning without dropout.
    BatchSampler sampler(x.rows(), config.batch, rng);
    for (std::size_t it = 0; it < finetune_iters; ++it) {
        const auto idx = sampler.next();
        const Matrix batch = take_rows(x, idx);
        auto [z, enc_trace] = encode(ae.encoder, batch);
        auto [rec, dec_trace] = decode(ae.decoder, z);
        const AutoencoderGrads grads =
            backward_reconstruction(ae.encoder, ae.decoder, enc_trace, dec_trace, batch, rec);
        const double eta = pretrain_lr(it, config);
        sgd_step(ae.encoder, grads.encoder, eta);
        sgd_step(ae.decoder, grads.decoder, eta);
    }
    return ae;
}

}  // namespace statdec
