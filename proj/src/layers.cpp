#include "netgov/layers.hpp"

#include <cmath>

namespace netgov::nn {

namespace {

void he_uniform_fill(Vector& v, int fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / fan_in);
    for (double& x : v) x = (2.0 * rng.uniform() - 1.0) * limit;
}

void apply_activation(Activation act, std::span<const double> pre, std::span<double> out) {
    if (act == Activation::Relu) {
        for (std::size_t i = 0; i < pre.size(); ++i) out[i] = pre[i] > 0.0 ? pre[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < pre.size(); ++i) out[i] = pre[i];
    }
}

// dpre = dout * act'(pre)
void activation_backward(Activation act, std::span<const double> pre,
                         std::span<const double> dout, std::span<double> dpre) {
    if (act == Activation::Relu) {
        for (std::size_t i = 0; i < pre.size(); ++i) dpre[i] = pre[i] > 0.0 ? dout[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < pre.size(); ++i) dpre[i] = dout[i];
    }
}

}  // namespace

void zero_grads(const ParamList& params) {
    for (const ParamRef& p : params) p.grad->assign(p.grad->size(), 0.0);
}

std::size_t param_count(const ParamList& params) {
    std::size_t total = 0;
    for (const ParamRef& p : params) total += p.value->size();
    return total;
}

void DenseLayer::collect_params(ParamList& out) {
    out.push_back({&w.data, &gw.data});
    out.push_back({&b, &gb});
}

DenseLayer make_dense(int in_dim, int out_dim, Activation act, Rng& rng) {
    DenseLayer layer;
    layer.w = Matrix(out_dim, in_dim);
    layer.b.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.gw = Matrix(out_dim, in_dim);
    layer.gb.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.act = act;
    he_uniform_fill(layer.w.data, in_dim, rng);
    return layer;
}

Vector dense_forward(const DenseLayer& layer, std::span<const double> x, DenseCache& cache) {
    cache.input.assign(x.begin(), x.end());
    cache.pre.assign(layer.b.begin(), layer.b.end());
    matvec_accum(layer.w, x, cache.pre);
    Vector out(cache.pre.size());
    apply_activation(layer.act, cache.pre, out);
    return out;
}

Vector dense_backward(DenseLayer& layer, const DenseCache& cache, std::span<const double> dout) {
    Vector dpre(cache.pre.size());
    activation_backward(layer.act, cache.pre, dout, dpre);
    axpy(1.0, dpre, layer.gb);
    outer_accum(layer.gw, dpre, cache.input);
    Vector dx(cache.input.size(), 0.0);
    matvec_transposed_accum(layer.w, dpre, dx);
    return dx;
}

void GnnLayer::collect_params(ParamList& out) {
    out.push_back({&w_self.data, &gw_self.data});
    out.push_back({&w_neigh.data, &gw_neigh.data});
    out.push_back({&b, &gb});
}

GnnLayer make_gnn_layer(int in_dim, int out_dim, Activation act, Rng& rng) {
    GnnLayer layer;
    layer.w_self = Matrix(out_dim, in_dim);
    layer.w_neigh = Matrix(out_dim, in_dim);
    layer.b.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.gw_self = Matrix(out_dim, in_dim);
    layer.gw_neigh = Matrix(out_dim, in_dim);
    layer.gb.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.act = act;
    he_uniform_fill(layer.w_self.data, in_dim, rng);
    he_uniform_fill(layer.w_neigh.data, in_dim, rng);
    return layer;
}

namespace {

// Mean of the neighbor rows, each dimension summed in ascending value order.
// The sum then depends only on the multiset of values, which makes
// encode_graph exactly equivariant under node relabeling (plain
// neighbor-order summation would differ in final ulps).
void canonical_neighbor_mean(const Matrix& h, const std::vector<int>& nbrs,
                             std::span<double> mean) {
    if (nbrs.empty()) return;  // empty-neighborhood convention: zero vector
    const std::size_t deg = nbrs.size();
    const double inv = 1.0 / static_cast<double>(deg);
    double stack_buf[64];
    std::vector<double> heap_buf;
    double* vals = stack_buf;
    if (deg > 64) {
        heap_buf.resize(deg);
        vals = heap_buf.data();
    }
    for (int d = 0; d < h.cols; ++d) {
        for (std::size_t i = 0; i < deg; ++i) vals[i] = h(nbrs[i], d);
        for (std::size_t i = 1; i < deg; ++i) {
            const double x = vals[i];
            std::size_t j = i;
            for (; j > 0 && vals[j - 1] > x; --j) vals[j] = vals[j - 1];
            vals[j] = x;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < deg; ++i) acc += vals[i];
        mean[static_cast<std::size_t>(d)] = acc * inv;
    }
}

}  // namespace

Matrix gnn_layer_forward(const GnnLayer& layer, const Matrix& h, const AdjList& nbrs,
                         GnnLayerCache& cache) {
    const int n = h.rows;
    const int d_out = layer.w_self.rows;
    cache.input = h;
    cache.neigh_mean = Matrix(n, h.cols);
    cache.pre = Matrix(n, d_out);
    Matrix out(n, d_out);
    for (int u = 0; u < n; ++u) {
        auto mean = cache.neigh_mean.row(u);
        canonical_neighbor_mean(h, nbrs[static_cast<std::size_t>(u)], mean);
        auto pre = cache.pre.row(u);
        for (int j = 0; j < d_out; ++j) pre[static_cast<std::size_t>(j)] = layer.b[static_cast<std::size_t>(j)];
        matvec_accum(layer.w_self, h.row(u), pre);
        matvec_accum(layer.w_neigh, mean, pre);
        apply_activation(layer.act, pre, out.row(u));
    }
    return out;
}

Matrix gnn_layer_backward(GnnLayer& layer, const GnnLayerCache& cache, const AdjList& nbrs,
                          const Matrix& dout) {
    const int n = cache.input.rows;
    const int d_in = cache.input.cols;
    Matrix dpre(n, dout.cols);
    for (int u = 0; u < n; ++u)
        activation_backward(layer.act, cache.pre.row(u), dout.row(u), dpre.row(u));

    Matrix dh(n, d_in);
    Vector scatter(static_cast<std::size_t>(d_in));
    for (int u = 0; u < n; ++u) {
        auto dp = dpre.row(u);
        axpy(1.0, dp, layer.gb);
        outer_accum(layer.gw_self, dp, cache.input.row(u));
        outer_accum(layer.gw_neigh, dp, cache.neigh_mean.row(u));
        matvec_transposed_accum(layer.w_self, dp, dh.row(u));
        if (!nbrs[static_cast<std::size_t>(u)].empty()) {
            scatter.assign(scatter.size(), 0.0);
            matvec_transposed_accum(layer.w_neigh, dp, scatter);
            const double inv = 1.0 / static_cast<double>(nbrs[static_cast<std::size_t>(u)].size());
            for (int v : nbrs[static_cast<std::size_t>(u)]) axpy(inv, scatter, dh.row(v));
        }
    }
    return dh;
}

Vector readout_concat(const Matrix& h) { return h.data; }

void GnnEncoder::collect_params(ParamList& out) {
    l1.collect_params(out);
    l2.collect_params(out);
}

GnnEncoder make_gnn_encoder(int in_dim, int hidden_dim, Rng& rng) {
    GnnEncoder enc;
    enc.l1 = make_gnn_layer(in_dim, hidden_dim, Activation::Relu, rng);
    enc.l2 = make_gnn_layer(hidden_dim, hidden_dim, Activation::Relu, rng);
    return enc;
}

Matrix encode_graph(const GnnEncoder& enc, const Matrix& features, const AdjList& nbrs,
                    GnnEncoderCache& cache) {
    Matrix h1 = gnn_layer_forward(enc.l1, features, nbrs, cache.c1);
    return gnn_layer_forward(enc.l2, h1, nbrs, cache.c2);
}

Matrix encode_graph_backward(GnnEncoder& enc, const GnnEncoderCache& cache, const AdjList& nbrs,
                             const Matrix& dout) {
    Matrix dh1 = gnn_layer_backward(enc.l2, cache.c2, nbrs, dout);
    return gnn_layer_backward(enc.l1, cache.c1, nbrs, dh1);
}

void Mlp::collect_params(ParamList& out) {
    for (DenseLayer& layer : layers) layer.collect_params(out);
}

Mlp make_mlp(const std::vector<int>& dims, Rng& rng) {
    Mlp mlp;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const bool last = i + 2 == dims.size();
        mlp.layers.push_back(
            make_dense(dims[i], dims[i + 1], last ? Activation::Identity : Activation::Relu, rng));
    }
    return mlp;
}

Vector mlp_forward(const Mlp& mlp, std::span<const double> x, MlpCache& cache) {
    cache.caches.resize(mlp.layers.size());
    Vector h(x.begin(), x.end());
    for (std::size_t i = 0; i < mlp.layers.size(); ++i)
        h = dense_forward(mlp.layers[i], h, cache.caches[i]);
    return h;
}

Vector mlp_backward(Mlp& mlp, const MlpCache& cache, std::span<const double> dout) {
    Vector g(dout.begin(), dout.end());
    for (std::size_t i = mlp.layers.size(); i-- > 0;)
        g = dense_backward(mlp.layers[i], cache.caches[i], g);
    return g;
}

}  // namespace netgov::nn
