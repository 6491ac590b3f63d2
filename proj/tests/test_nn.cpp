#include <cmath>
#include <cstdio>

#include <doctest.h>

#include "netgov/adam.hpp"
#include "netgov/checkpoint.hpp"
#include "netgov/errors.hpp"
#include "netgov/layers.hpp"

using namespace netgov;
using nn::Matrix;
using nn::Vector;

namespace {

constexpr double kFdEps = 1e-5;
constexpr double kFdTol = 1e-4;

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Central finite differences over every parameter against the analytic
// gradients currently stored in the registry. loss_fn must recompute the
// full forward loss from the (possibly perturbed) parameters.
template <typename LossFn>
void check_param_grads(const nn::ParamList& params, LossFn&& loss_fn) {
    for (const nn::ParamRef& p : params) {
        for (std::size_t i = 0; i < p.value->size(); ++i) {
            const double saved = (*p.value)[i];
            (*p.value)[i] = saved + kFdEps;
            const double lo_plus = loss_fn();
            (*p.value)[i] = saved - kFdEps;
            const double lo_minus = loss_fn();
            (*p.value)[i] = saved;
            const double fd = (lo_plus - lo_minus) / (2.0 * kFdEps);
            CHECK(rel_err(fd, (*p.grad)[i]) <= kFdTol);
        }
    }
}

nn::AdjList path_adj(int n) {
    nn::AdjList nbrs(static_cast<std::size_t>(n));
    for (int u = 0; u + 1 < n; ++u) {
        nbrs[static_cast<std::size_t>(u)].push_back(u + 1);
        nbrs[static_cast<std::size_t>(u + 1)].push_back(u);
    }
    return nbrs;
}

Matrix random_features(int n, int d, Rng& rng) {
    Matrix f(n, d);
    for (double& x : f.data) x = 2.0 * rng.uniform() - 1.0;
    return f;
}

}  // namespace

TEST_CASE("dense_forward hand examples") {
    Rng rng(0);
    nn::DenseLayer identity = nn::make_dense(2, 2, nn::Activation::Identity, rng);
    identity.w.fill(0.0);
    identity.w(0, 0) = 1.0;
    identity.w(1, 1) = 1.0;
    nn::DenseCache cache;
    CHECK(nn::dense_forward(identity, Vector{1.0, 2.0}, cache) == Vector{1.0, 2.0});

    identity.act = nn::Activation::Relu;
    CHECK(nn::dense_forward(identity, Vector{-1.0, 2.0}, cache) == Vector{0.0, 2.0});

    nn::DenseLayer sum = nn::make_dense(2, 1, nn::Activation::Identity, rng);
    sum.w(0, 0) = 1.0;
    sum.w(0, 1) = 1.0;
    sum.b[0] = 0.5;
    CHECK(nn::dense_forward(sum, Vector{1.0, 2.0}, cache) == Vector{3.5});
}

TEST_CASE("dense_backward hand derivative: loss = output^2") {
    Rng rng(1);
    nn::DenseLayer layer = nn::make_dense(1, 1, nn::Activation::Identity, rng);
    layer.w(0, 0) = 0.7;
    layer.b[0] = 0.0;
    nn::DenseCache cache;
    const Vector out = nn::dense_forward(layer, Vector{3.0}, cache);
    CHECK(out[0] == doctest::Approx(2.1));
    // dL/dW = 2 * (W*3) * 3
    const Vector dx = nn::dense_backward(layer, cache, Vector{2.0 * out[0]});
    CHECK(layer.gw(0, 0) == doctest::Approx(2.0 * 2.1 * 3.0));
    CHECK(layer.gb[0] == doctest::Approx(2.0 * 2.1));
    CHECK(dx[0] == doctest::Approx(2.0 * 2.1 * 0.7));
}

TEST_CASE("zero upstream gradient gives zero parameter gradients") {
    Rng rng(2);
    nn::DenseLayer layer = nn::make_dense(3, 2, nn::Activation::Relu, rng);
    nn::DenseCache cache;
    nn::dense_forward(layer, Vector{0.3, -0.4, 0.9}, cache);
    nn::dense_backward(layer, cache, Vector{0.0, 0.0});
    for (double g : layer.gw.data) CHECK(g == 0.0);
    for (double g : layer.gb) CHECK(g == 0.0);
}

TEST_CASE("dense layer gradients match finite differences") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const int in = 2 + static_cast<int>(rng.uniform_int(4));
        const int out = 1 + static_cast<int>(rng.uniform_int(4));
        nn::DenseLayer layer =
            nn::make_dense(in, out, seed % 2 ? nn::Activation::Relu : nn::Activation::Identity, rng);
        Vector x(static_cast<std::size_t>(in));
        for (double& v : x) v = 2.0 * rng.uniform() - 1.0;
        Vector target(static_cast<std::size_t>(out));
        for (double& v : target) v = 2.0 * rng.uniform() - 1.0;

        auto loss_of = [&]() {
            nn::DenseCache c;
            const Vector y = nn::dense_forward(layer, x, c);
            double loss = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                loss += (y[i] - target[i]) * (y[i] - target[i]);
            return loss;
        };

        nn::ParamList params;
        layer.collect_params(params);
        nn::zero_grads(params);
        nn::DenseCache cache;
        const Vector y = nn::dense_forward(layer, x, cache);
        Vector dout(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) dout[i] = 2.0 * (y[i] - target[i]);
        nn::dense_backward(layer, cache, dout);
        check_param_grads(params, loss_of);
    }
}

TEST_CASE("gnn layer forward conventions") {
    Rng rng(3);
    nn::GnnLayer layer = nn::make_gnn_layer(3, 4, nn::Activation::Relu, rng);
    nn::GnnLayerCache cache;

    // All-zero features with b=0 give all-zero output.
    Matrix zero(3, 3);
    const Matrix out = nn::gnn_layer_forward(layer, zero, path_adj(3), cache);
    for (double v : out.data) CHECK(v == 0.0);

    // Isolated nodes: empty-neighborhood mean is zero, so only W_self acts.
    nn::AdjList isolated(2);
    Matrix h = random_features(2, 3, rng);
    const Matrix iso = nn::gnn_layer_forward(layer, h, isolated, cache);
    for (int u = 0; u < 2; ++u) {
        Vector pre(layer.b);
        nn::matvec_accum(layer.w_self, h.row(u), pre);
        for (int j = 0; j < 4; ++j)
            CHECK(iso(u, j) == (pre[static_cast<std::size_t>(j)] > 0.0
                                    ? pre[static_cast<std::size_t>(j)]
                                    : 0.0));
    }

    // Triangle with identical features: identical embeddings.
    nn::AdjList tri{{1, 2}, {0, 2}, {0, 1}};
    Matrix same(3, 3);
    for (int u = 0; u < 3; ++u)
        for (int d = 0; d < 3; ++d) same(u, d) = 0.1 * (d + 1);
    const Matrix sym = nn::gnn_layer_forward(layer, same, tri, cache);
    for (int j = 0; j < 4; ++j) {
        CHECK(sym(0, j) == sym(1, j));
        CHECK(sym(1, j) == sym(2, j));
    }
}

TEST_CASE("gnn layer gradients match finite differences (params and inputs)") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed + 40);
        const int n = 5;
        nn::GnnLayer layer = nn::make_gnn_layer(3, 3, nn::Activation::Relu, rng);
        nn::AdjList nbrs{{1, 2}, {0, 2, 3}, {0, 1}, {1, 4}, {3}};
        Matrix h = random_features(n, 3, rng);
        Matrix target = random_features(n, 3, rng);

        auto loss_of = [&]() {
            nn::GnnLayerCache c;
            const Matrix y = nn::gnn_layer_forward(layer, h, nbrs, c);
            double loss = 0.0;
            for (std::size_t i = 0; i < y.data.size(); ++i)
                loss += (y.data[i] - target.data[i]) * (y.data[i] - target.data[i]);
            return loss;
        };

        nn::ParamList params;
        layer.collect_params(params);
        nn::zero_grads(params);
        nn::GnnLayerCache cache;
        const Matrix y = nn::gnn_layer_forward(layer, h, nbrs, cache);
        Matrix dout(n, 3);
        for (std::size_t i = 0; i < y.data.size(); ++i)
            dout.data[i] = 2.0 * (y.data[i] - target.data[i]);
        const Matrix dh = nn::gnn_layer_backward(layer, cache, nbrs, dout);
        check_param_grads(params, loss_of);

        // Input gradients through the mean-aggregation fan-out.
        for (std::size_t i = 0; i < h.data.size(); ++i) {
            const double saved = h.data[i];
            h.data[i] = saved + kFdEps;
            const double lp = loss_of();
            h.data[i] = saved - kFdEps;
            const double lm = loss_of();
            h.data[i] = saved;
            CHECK(rel_err((lp - lm) / (2.0 * kFdEps), dh.data[i]) <= kFdTol);
        }
    }
}

TEST_CASE("encode_graph: permutation equivariance is exact") {
    Rng rng(50);
    const int n = 6;
    nn::GnnEncoder enc = nn::make_gnn_encoder(4, 8, rng);
    nn::AdjList nbrs{{1, 2, 5}, {0, 3}, {0, 3, 4}, {1, 2}, {2, 5}, {0, 4}};
    const Matrix h = random_features(n, 4, rng);
    nn::GnnEncoderCache cache;
    const Matrix base = nn::encode_graph(enc, h, nbrs, cache);

    // Relabel via the permutation sigma(u) = (u + 2) mod n.
    auto sigma = [n](int u) { return (u + 2) % n; };
    nn::AdjList perm_nbrs(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        for (int v : nbrs[static_cast<std::size_t>(u)])
            perm_nbrs[static_cast<std::size_t>(sigma(u))].push_back(sigma(v));
    }
    for (auto& list : perm_nbrs) std::sort(list.begin(), list.end());
    Matrix perm_h(n, 4);
    for (int u = 0; u < n; ++u)
        for (int d = 0; d < 4; ++d) perm_h(sigma(u), d) = h(u, d);

    const Matrix perm_out = nn::encode_graph(enc, perm_h, perm_nbrs, cache);
    for (int u = 0; u < n; ++u)
        for (int d = 0; d < 8; ++d) CHECK(perm_out(sigma(u), d) == base(u, d));
}

TEST_CASE("encode_graph: two layers see exactly the 2-hop neighborhood") {
    Rng rng(51);
    // Path 0-1-2-3-4: node 0's 2-hop ball is {0,1,2}; nodes 3 and 4 are outside it.
    nn::GnnEncoder enc = nn::make_gnn_encoder(2, 6, rng);
    const nn::AdjList nbrs = path_adj(5);
    Matrix h = random_features(5, 2, rng);
    nn::GnnEncoderCache cache;
    const Matrix base = nn::encode_graph(enc, h, nbrs, cache);

    Matrix poked = h;
    poked(3, 0) += 0.5;
    poked(4, 1) -= 0.25;
    const Matrix out = nn::encode_graph(enc, poked, nbrs, cache);
    for (int d = 0; d < 6; ++d) CHECK(out(0, d) == base(0, d));
    // ...while node 2 (adjacent to 3) does change.
    bool changed = false;
    for (int d = 0; d < 6; ++d) changed = changed || out(2, d) != base(2, d);
    CHECK(changed);
}

TEST_CASE("encode_graph: zero weights give zero embeddings") {
    Rng rng(52);
    nn::GnnEncoder enc = nn::make_gnn_encoder(3, 4, rng);
    nn::ParamList params;
    enc.collect_params(params);
    for (const nn::ParamRef& p : params) p.value->assign(p.value->size(), 0.0);
    nn::GnnEncoderCache cache;
    const Matrix out = nn::encode_graph(enc, random_features(4, 3, rng), path_adj(4), cache);
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("readout_concat") {
    Matrix h(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = 2.0;
    h(1, 0) = 3.0;
    h(1, 1) = 4.0;
    CHECK(nn::readout_concat(h) == Vector{1.0, 2.0, 3.0, 4.0});

    Matrix single(1, 3);
    single(0, 0) = 5.0;
    single(0, 2) = -1.0;
    CHECK(nn::readout_concat(single) == Vector{5.0, 0.0, -1.0});

    Matrix swapped(2, 2);
    swapped.row(0)[0] = h(1, 0);
    swapped.row(0)[1] = h(1, 1);
    swapped.row(1)[0] = h(0, 0);
    swapped.row(1)[1] = h(0, 1);
    CHECK(nn::readout_concat(swapped) == Vector{3.0, 4.0, 1.0, 2.0});
}

TEST_CASE("mlp gradients match finite differences") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(seed + 60);
        nn::Mlp mlp = nn::make_mlp({3, 5, 2}, rng);
        Vector x{0.4, -0.2, 0.8};
        Vector target{0.1, -0.3};

        auto loss_of = [&]() {
            nn::MlpCache c;
            const Vector y = nn::mlp_forward(mlp, x, c);
            double loss = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                loss += (y[i] - target[i]) * (y[i] - target[i]);
            return loss;
        };

        nn::ParamList params;
        mlp.collect_params(params);
        nn::zero_grads(params);
        nn::MlpCache cache;
        const Vector y = nn::mlp_forward(mlp, x, cache);
        Vector dout(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) dout[i] = 2.0 * (y[i] - target[i]);
        nn::mlp_backward(mlp, cache, dout);
        check_param_grads(params, loss_of);
    }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
    Rng rng(70);
    nn::Mlp mlp = nn::make_mlp({2, 3, 1}, rng);
    nn::ParamList params;
    mlp.collect_params(params);
    const nlohmann::json before = nn::tensors_to_json(params);
    nn::zero_grads(params);
    nn::Adam opt(params, 1e-3);
    opt.step(params);
    CHECK(nn::tensors_to_json(params) == before);
}

TEST_CASE("adam: first-step magnitude is about lr per coordinate") {
    Rng rng(71);
    nn::DenseLayer layer = nn::make_dense(2, 2, nn::Activation::Identity, rng);
    nn::ParamList params;
    layer.collect_params(params);
    const Vector before = layer.w.data;
    nn::zero_grads(params);
    for (double& g : layer.gw.data) g = 0.37;  // constant gradient
    for (double& g : layer.gb) g = -2.0;
    nn::Adam opt(params, 1e-3);
    opt.step(params);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(layer.w.data[i] == doctest::Approx(before[i] - 1e-3).epsilon(1e-6));
    for (double b : layer.b) CHECK(b == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("adam: identical runs from cloned state are identical") {
    Rng rng(72);
    nn::DenseLayer a = nn::make_dense(3, 3, nn::Activation::Identity, rng);
    nn::DenseLayer b = a;
    nn::ParamList pa, pb;
    a.collect_params(pa);
    b.collect_params(pb);
    nn::Adam oa(pa, 1e-2), ob(pb, 1e-2);
    Rng grad_rng(5);
    for (int step = 0; step < 20; ++step) {
        for (std::size_t i = 0; i < a.gw.data.size(); ++i)
            a.gw.data[i] = b.gw.data[i] = grad_rng.uniform() - 0.5;
        for (std::size_t i = 0; i < a.gb.size(); ++i)
            a.gb[i] = b.gb[i] = grad_rng.uniform() - 0.5;
        oa.step(pa);
        ob.step(pb);
    }
    CHECK(a.w == b.w);
    CHECK(a.b == b.b);
}

TEST_CASE("adam: non-finite gradients abort with NumericError") {
    Rng rng(73);
    nn::DenseLayer layer = nn::make_dense(2, 2, nn::Activation::Identity, rng);
    nn::ParamList params;
    layer.collect_params(params);
    nn::Adam opt(params, 1e-3);
    nn::zero_grads(params);
    layer.gw(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(opt.step(params), NumericError);
    layer.gw(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(opt.step(params), NumericError);
}

TEST_CASE("checkpoint: float64-exact round trip through a file") {
    Rng rng(80);
    nn::Mlp mlp = nn::make_mlp({4, 7, 3}, rng);
    // Include values whose decimal forms stress the round trip.
    mlp.layers[0].w(0, 0) = 0.1;
    mlp.layers[0].w(0, 1) = 1.0 / 3.0;
    mlp.layers[0].b[0] = -1e-17;
    mlp.layers[1].w(0, 0) = 123456789.123456789;
    nn::ParamList params;
    mlp.collect_params(params);

    const std::string path = "nn_checkpoint_roundtrip_tmp.json";
    nn::write_json_file(path, nn::tensors_to_json(params));

    nn::Mlp copy = mlp;
    nn::ParamList copy_params;
    copy.collect_params(copy_params);
    for (const nn::ParamRef& p : copy_params) p.value->assign(p.value->size(), 0.0);
    nn::tensors_from_json(nn::read_json_file(path), copy_params);
    std::remove(path.c_str());

    for (std::size_t i = 0; i < params.size(); ++i) CHECK(*params[i].value == *copy_params[i].value);
}

TEST_CASE("checkpoint: tensor count and size mismatches throw") {
    Rng rng(81);
    nn::Mlp mlp = nn::make_mlp({2, 3, 1}, rng);
    nn::ParamList params;
    mlp.collect_params(params);
    nlohmann::json doc = nn::tensors_to_json(params);

    nlohmann::json truncated = doc;
    truncated.erase(truncated.size() - 1);
    CHECK_THROWS_AS(nn::tensors_from_json(truncated, params), ShapeError);

    nlohmann::json resized = doc;
    resized[0].push_back(0.0);
    CHECK_THROWS_AS(nn::tensors_from_json(resized, params), ShapeError);
}

TEST_CASE("forward and backward stay finite on random inputs") {
    Rng rng(90);
    for (int trial = 0; trial < 10; ++trial) {
        nn::GnnEncoder enc = nn::make_gnn_encoder(4, 16, rng);
        const Matrix h = random_features(6, 4, rng);
        nn::AdjList nbrs = path_adj(6);
        nn::GnnEncoderCache cache;
        const Matrix out = nn::encode_graph(enc, h, nbrs, cache);
        CHECK(nn::all_finite(out.data));
        Matrix dout(6, 16);
        for (double& v : dout.data) v = rng.uniform() - 0.5;
        const Matrix dh = nn::encode_graph_backward(enc, cache, nbrs, dout);
        CHECK(nn::all_finite(dh.data));
    }
}
