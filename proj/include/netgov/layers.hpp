#pragma once

#include <vector>

#include "netgov/matrix.hpp"
#include "netgov/rng.hpp"

namespace netgov::nn {

enum class Activation { Identity, Relu };

/// Registry of (value, gradient) pairs so optimizers and checkpoints can walk
/// a model without knowing its structure. Order is the layer declaration
/// order and is part of the checkpoint contract.
struct ParamRef {
    Vector* value;
    Vector* grad;
};
using ParamList = std::vector<ParamRef>;

void zero_grads(const ParamList& params);
std::size_t param_count(const ParamList& params);

/// Fully connected layer, y = act(W x + b). Gradients accumulate into
/// gw/gb until zero_grads is called.
struct DenseLayer {
    Matrix w;
    Vector b;
    Matrix gw;
    Vector gb;
    Activation act = Activation::Relu;

    void collect_params(ParamList& out);
};

struct DenseCache {
    Vector input;
    Vector pre;
};

DenseLayer make_dense(int in_dim, int out_dim, Activation act, Rng& rng);
Vector dense_forward(const DenseLayer& layer, std::span<const double> x, DenseCache& cache);
Vector dense_backward(DenseLayer& layer, const DenseCache& cache, std::span<const double> dout);

/// Mean-aggregation message-passing layer over all nodes of a graph:
/// h'_u = act(W_self h_u + W_neigh mean_{v in N(u)} h_v + b).
/// Nodes without neighbors use a zero aggregate.
struct GnnLayer {
    Matrix w_self;
    Matrix w_neigh;
    Vector b;
    Matrix gw_self;
    Matrix gw_neigh;
    Vector gb;
    Activation act = Activation::Relu;

    void collect_params(ParamList& out);
};

struct GnnLayerCache {
    Matrix input;       // n x d_in
    Matrix neigh_mean;  // n x d_in
    Matrix pre;         // n x d_out
};

using AdjList = std::vector<std::vector<int>>;

GnnLayer make_gnn_layer(int in_dim, int out_dim, Activation act, Rng& rng);
Matrix gnn_layer_forward(const GnnLayer& layer, const Matrix& h, const AdjList& nbrs,
                         GnnLayerCache& cache);
Matrix gnn_layer_backward(GnnLayer& layer, const GnnLayerCache& cache, const AdjList& nbrs,
                          const Matrix& dout);

/// Two message-passing layers; the standard encoder depth everywhere in this
/// project.
struct GnnEncoder {
    GnnLayer l1;
    GnnLayer l2;

    void collect_params(ParamList& out);
};

struct GnnEncoderCache {
    GnnLayerCache c1;
    GnnLayerCache c2;
};

/// Concatenation readout: per-node rows in index order, dim = n * cols.
Vector readout_concat(const Matrix& h);

GnnEncoder make_gnn_encoder(int in_dim, int hidden_dim, Rng& rng);
Matrix encode_graph(const GnnEncoder& enc, const Matrix& features, const AdjList& nbrs,
                    GnnEncoderCache& cache);
Matrix encode_graph_backward(GnnEncoder& enc, const GnnEncoderCache& cache, const AdjList& nbrs,
                             const Matrix& dout);

/// Dense stack; hidden layers ReLU, final layer linear.
struct Mlp {
    std::vector<DenseLayer> layers;

    void collect_params(ParamList& out);
};

struct MlpCache {
    std::vector<DenseCache> caches;
};

Mlp make_mlp(const std::vector<int>& dims, Rng& rng);
Vector mlp_forward(const Mlp& mlp, std::span<const double> x, MlpCache& cache);
Vector mlp_backward(Mlp& mlp, const MlpCache& cache, std::span<const double> dout);

}  // namespace netgov::nn
