#include "sentinel/forecast/lstm.hpp"

#include "sentinel/error.hpp"
#include "sentinel/forecast/adam.hpp"
#include "sentinel/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sentinel::forecast {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using MatMap = Eigen::Map<MatrixXd>;
using ConstMatMap = Eigen::Map<const MatrixXd>;

struct Offsets {
    Index w, u, b, v, c, end;
};

Offsets offsets_for(std::size_t f, std::size_t h, std::size_t out) {
    const auto F = static_cast<Index>(f), H = static_cast<Index>(h), O = static_cast<Index>(out);
    Offsets o{};
    o.w = 0;
    o.u = o.w + 4 * H * F;
    o.b = o.u + 4 * H * H;
    o.v = o.b + 4 * H;
    o.c = o.v + O * H;
    o.end = o.c + O;
    return o;
}

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) { return 1.0 / (1.0 + (-z).exp()); }

// Activations cached for backpropagation, one entry per timestep.
struct Trace {
    std::vector<MatrixXd> x, i, f, g, o, c, h;  // c and h have T+1 entries (index 0 = initial zeros)
};

}  // namespace

LstmNetwork::LstmNetwork(std::size_t n_features, std::size_t hidden, std::size_t horizon)
    : features_(n_features), hidden_(hidden), horizon_(horizon),
      params_(Eigen::VectorXd::Zero(static_cast<Index>(parameter_count(n_features, hidden, horizon)))) {}

std::size_t LstmNetwork::parameter_count(std::size_t n_features, std::size_t hidden, std::size_t horizon) {
    return static_cast<std::size_t>(offsets_for(n_features, hidden, horizon).end);
}

void LstmNetwork::initialize(std::uint64_t seed) {
    auto rng = make_rng(seed);
    const auto off = offsets_for(features_, hidden_, horizon_);
    const double s_gate = 1.0 / std::sqrt(static_cast<double>(features_ + hidden_));
    const double s_out = 1.0 / std::sqrt(static_cast<double>(hidden_));
    std::uniform_real_distribution<double> gate(-s_gate, s_gate);
    std::uniform_real_distribution<double> out(-s_out, s_out);
    params_.setZero();
    for (Index k = off.w; k < off.b; ++k) params_[k] = gate(rng);
    for (Index k = off.v; k < off.c; ++k) params_[k] = out(rng);
}

namespace {

MatrixXd run_forward(const Eigen::VectorXd& p, std::size_t f, std::size_t hid, std::size_t out,
                     const MatrixXd& inputs, std::size_t window, const MatrixXd* mask, Trace* trace) {
    const auto off = offsets_for(f, hid, out);
    const auto F = static_cast<Index>(f), H = static_cast<Index>(hid), O = static_cast<Index>(out);
    const Index B = inputs.rows();
    if (inputs.cols() != static_cast<Index>(window * f))
        throw ArgumentError("LSTM input width " + std::to_string(inputs.cols()) + " does not match window " +
                            std::to_string(window) + " × " + std::to_string(f) + " features");
    if (mask && (mask->rows() != H || mask->cols() != B)) throw ArgumentError("dropout mask shape mismatch");
    const ConstMatMap W(p.data() + off.w, 4 * H, F);
    const ConstMatMap U(p.data() + off.u, 4 * H, H);
    const Eigen::Map<const Eigen::VectorXd> b(p.data() + off.b, 4 * H);
    const ConstMatMap V(p.data() + off.v, O, H);
    const Eigen::Map<const Eigen::VectorXd> c_out(p.data() + off.c, O);

    MatrixXd h = MatrixXd::Zero(H, B);
    MatrixXd c = MatrixXd::Zero(H, B);
    if (trace) {
        trace->c.assign(1, c);
        trace->h.assign(1, h);
        trace->x.clear();
        trace->i.clear();
        trace->f.clear();
        trace->g.clear();
        trace->o.clear();
    }
    for (std::size_t t = 0; t < window; ++t) {
        const MatrixXd x = inputs.middleCols(static_cast<Index>(t) * F, F).transpose();
        MatrixXd z = W * x + U * h;
        z.colwise() += b;
        const MatrixXd ig = sigmoid(z.topRows(H).array()).matrix();
        const MatrixXd fg = sigmoid(z.middleRows(H, H).array()).matrix();
        const MatrixXd gg = z.middleRows(2 * H, H).array().tanh().matrix();
        const MatrixXd og = sigmoid(z.bottomRows(H).array()).matrix();
        c = (fg.array() * c.array() + ig.array() * gg.array()).matrix();
        h = (og.array() * c.array().tanh()).matrix();
        if (trace) {
            trace->x.push_back(x);
            trace->i.push_back(ig);
            trace->f.push_back(fg);
            trace->g.push_back(gg);
            trace->o.push_back(og);
            trace->c.push_back(c);
            trace->h.push_back(h);
        }
    }
    const MatrixXd d = mask ? MatrixXd(h.cwiseProduct(*mask)) : h;
    MatrixXd y = V * d;
    y.colwise() += c_out;
    return y.transpose();  // B × O
}

}  // namespace

MatrixXd LstmNetwork::forward(const MatrixXd& inputs, std::size_t window, const MatrixXd* mask) const {
    return run_forward(params_, features_, hidden_, horizon_, inputs, window, mask, nullptr);
}

double LstmNetwork::loss(const MatrixXd& inputs, const MatrixXd& targets, std::size_t window,
                         const MatrixXd* mask) const {
    const MatrixXd y = forward(inputs, window, mask);
    return (y - targets).cwiseAbs().mean();
}

double LstmNetwork::loss_and_gradient(const MatrixXd& inputs, const MatrixXd& targets, std::size_t window,
                                      Eigen::VectorXd& gradient, const MatrixXd* mask) const {
    Trace tr;
    const MatrixXd y = run_forward(params_, features_, hidden_, horizon_, inputs, window, mask, &tr);
    if (targets.rows() != y.rows() || targets.cols() != y.cols()) throw ArgumentError("LSTM target shape mismatch");
    const auto off = offsets_for(features_, hidden_, horizon_);
    const auto F = static_cast<Index>(features_), H = static_cast<Index>(hidden_), O = static_cast<Index>(horizon_);
    const Index B = inputs.rows();
    const double loss = (y - targets).cwiseAbs().mean();

    gradient = Eigen::VectorXd::Zero(params_.size());
    MatMap dW(gradient.data() + off.w, 4 * H, F);
    MatMap dU(gradient.data() + off.u, 4 * H, H);
    Eigen::Map<Eigen::VectorXd> db(gradient.data() + off.b, 4 * H);
    MatMap dV(gradient.data() + off.v, O, H);
    Eigen::Map<Eigen::VectorXd> dc_out(gradient.data() + off.c, O);
    const ConstMatMap U(params_.data() + off.u, 4 * H, H);
    const ConstMatMap V(params_.data() + off.v, O, H);

    const double scale = 1.0 / static_cast<double>(B * O);
    const MatrixXd dy = ((y - targets).array().sign() * scale).matrix().transpose();  // O × B
    const MatrixXd& h_last = tr.h.back();
    const MatrixXd d = mask ? MatrixXd(h_last.cwiseProduct(*mask)) : h_last;
    dV = dy * d.transpose();
    dc_out = dy.rowwise().sum();
    MatrixXd dh = V.transpose() * dy;
    if (mask) dh = dh.cwiseProduct(*mask);
    MatrixXd dc_next = MatrixXd::Zero(H, B);
    MatrixXd dz(4 * H, B);
    for (std::size_t step = window; step-- > 0;) {
        const auto& ig = tr.i[step];
        const auto& fg = tr.f[step];
        const auto& gg = tr.g[step];
        const auto& og = tr.o[step];
        const auto& c_prev = tr.c[step];
        const Eigen::ArrayXXd tc = tr.c[step + 1].array().tanh();
        const Eigen::ArrayXXd dct = dc_next.array() + dh.array() * og.array() * (1.0 - tc.square());
        dz.topRows(H) = (dct * gg.array() * ig.array() * (1.0 - ig.array())).matrix();
        dz.middleRows(H, H) = (dct * c_prev.array() * fg.array() * (1.0 - fg.array())).matrix();
        dz.middleRows(2 * H, H) = (dct * ig.array() * (1.0 - gg.array().square())).matrix();
        dz.bottomRows(H) = (dh.array() * tc * og.array() * (1.0 - og.array())).matrix();
        dc_next = (dct * fg.array()).matrix();
        dW.noalias() += dz * tr.x[step].transpose();
        dU.noalias() += dz * tr.h[step].transpose();
        db += dz.rowwise().sum();
        dh = U.transpose() * dz;
    }
    return loss;
}

MatrixXd dropout_mask(std::size_t rows, std::size_t cols, double rate, std::uint64_t seed) {
    MatrixXd mask = MatrixXd::Ones(static_cast<Index>(rows), static_cast<Index>(cols));
    if (rate <= 0.0) return mask;
    auto rng = make_rng(seed);
    std::bernoulli_distribution keep(1.0 - rate);
    const double scale = 1.0 / (1.0 - rate);
    for (Index k = 0; k < mask.size(); ++k) mask.data()[k] = keep(rng) ? scale : 0.0;
    return mask;
}

LstmNetwork train_lstm(const core::WindowedDataset& train, const ForecasterConfig& config) {
    const auto& rc = config.rnn;
    LstmNetwork net(train.n_features, rc.hidden_units, config.horizon);
    net.initialize(stage_seed(config.seed, "rnn.init"));
    auto rng = make_rng(stage_seed(config.seed, "rnn.batches"));
    Adam adam(net.parameters().size(), rc.learning_rate);

    const std::size_t n = train.n_samples();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd grad;
    for (std::size_t epoch = 0; epoch < rc.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += rc.batch_size) {
            const std::size_t end = std::min(n, start + rc.batch_size);
            const auto bsz = static_cast<Index>(end - start);
            MatrixXd xb(bsz, train.inputs.cols());
            MatrixXd yb(bsz, train.targets.cols());
            for (Index r = 0; r < bsz; ++r) {
                xb.row(r) = train.inputs.row(static_cast<Index>(order[start + static_cast<std::size_t>(r)]));
                yb.row(r) = train.targets.row(static_cast<Index>(order[start + static_cast<std::size_t>(r)]));
            }
            double batch_loss = 0.0;
            if (rc.dropout_rate > 0.0) {
                const MatrixXd mask = dropout_mask(rc.hidden_units, static_cast<std::size_t>(bsz), rc.dropout_rate, rng());
                batch_loss = net.loss_and_gradient(xb, yb, train.window, grad, &mask);
            } else {
                batch_loss = net.loss_and_gradient(xb, yb, train.window, grad);
            }
            if (!std::isfinite(batch_loss) || !grad.allFinite())
                throw DivergenceError("rnn training diverged at epoch " + std::to_string(epoch + 1));
            epoch_loss += batch_loss * static_cast<double>(bsz);
            adam.step(net.parameters(), grad);
        }
        if (!std::isfinite(epoch_loss) || !net.parameters().allFinite())
            throw DivergenceError("rnn training diverged at epoch " + std::to_string(epoch + 1));
    }
    return net;
}

double gradient_check(const LstmNetwork& network, const core::WindowedDataset& data, const GradientHook& hook) {
    Eigen::VectorXd analytic;
    network.loss_and_gradient(data.inputs, data.targets, data.window, analytic);
    if (hook) hook(analytic);
    LstmNetwork probe = network;
    const double step = 1e-5;
    double worst = 0.0;
    for (Index k = 0; k < probe.parameters().size(); ++k) {
        const double saved = probe.parameters()[k];
        probe.parameters()[k] = saved + step;
        const double up = probe.loss(data.inputs, data.targets, data.window);
        probe.parameters()[k] = saved - step;
        const double down = probe.loss(data.inputs, data.targets, data.window);
        probe.parameters()[k] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
    }
    return worst;
}

double gradient_check(const ForecasterConfig& config, const core::WindowedDataset& data, const GradientHook& hook) {
    if (config.rnn.hidden_units > 8 || data.window > 5)
        throw ArgumentError("gradient_check expects a tiny network (<= 8 hidden units, <= 5 timesteps)");
    LstmNetwork net(data.n_features, config.rnn.hidden_units, config.horizon);
    net.initialize(stage_seed(config.seed, "rnn.init"));
    return gradient_check(net, data, hook);
}

}  // namespace sentinel::forecast
