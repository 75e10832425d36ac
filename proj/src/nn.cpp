#include "crashlab/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace crashlab {

Mlp::Mlp(std::vector<int> dims, Rng& init_rng) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("network needs >= 2 layer dims");
    const size_t layers = dims_.size() - 1;
    weights_.resize(layers);
    biases_.resize(layers);
    m_w_.resize(layers);
    v_w_.resize(layers);
    m_b_.resize(layers);
    v_b_.resize(layers);
    for (size_t l = 0; l < layers; ++l) {
        const int fan_in = dims_[l];
        const int fan_out = dims_[l + 1];
        weights_[l].resize(static_cast<size_t>(fan_in) * fan_out);
        const double scale = std::sqrt(2.0 / fan_in);
        for (auto& w : weights_[l]) w = init_rng.next_gaussian() * scale;
        biases_[l].assign(static_cast<size_t>(fan_out), 0.0);
        m_w_[l].assign(weights_[l].size(), 0.0);
        v_w_[l].assign(weights_[l].size(), 0.0);
        m_b_[l].assign(biases_[l].size(), 0.0);
        v_b_[l].assign(biases_[l].size(), 0.0);
    }
}

Mlp::ForwardTrace Mlp::forward_trace(const double* x) const {
    ForwardTrace tr;
    const size_t layers = weights_.size();
    tr.pre.resize(layers);
    tr.post.resize(layers + 1);
    tr.post[0].assign(x, x + dims_[0]);
    for (size_t l = 0; l < layers; ++l) {
        const int in = dims_[l], out = dims_[l + 1];
        tr.pre[l].assign(static_cast<size_t>(out), 0.0);
        for (int o = 0; o < out; ++o) {
            double acc = biases_[l][static_cast<size_t>(o)];
            const double* row = &weights_[l][static_cast<size_t>(o) * in];
            for (int i = 0; i < in; ++i) acc += row[i] * tr.post[l][static_cast<size_t>(i)];
            tr.pre[l][static_cast<size_t>(o)] = acc;
        }
        tr.post[l + 1] = tr.pre[l];
        if (l + 1 < layers)
            for (auto& v : tr.post[l + 1]) v = v > 0.0 ? v : 0.0;
    }
    return tr;
}

std::vector<double> Mlp::forward(const double* x) const {
    return forward_trace(x).post.back();
}

double Mlp::loss(const std::vector<QExample>& batch) const {
    double acc = 0.0;
    for (const auto& ex : batch) {
        const auto q = forward(ex.x);
        const double diff = ex.target - q[static_cast<size_t>(ex.action)];
        acc += diff * diff;
    }
    return acc / static_cast<double>(batch.size());
}

void Mlp::accumulate_gradients(const std::vector<QExample>& batch,
                               std::vector<std::vector<double>>& gw,
                               std::vector<std::vector<double>>& gb, double* out_loss) const {
    const size_t layers = weights_.size();
    gw.resize(layers);
    gb.resize(layers);
    for (size_t l = 0; l < layers; ++l) {
        gw[l].assign(weights_[l].size(), 0.0);
        gb[l].assign(biases_[l].size(), 0.0);
    }
    double loss_acc = 0.0;
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    for (const auto& ex : batch) {
        const ForwardTrace tr = forward_trace(ex.x);
        const double q = tr.post.back()[static_cast<size_t>(ex.action)];
        const double diff = ex.target - q;
        loss_acc += diff * diff;

        // dL/dq_a for this example; other outputs carry zero gradient.
        std::vector<double> delta(static_cast<size_t>(dims_.back()), 0.0);
        delta[static_cast<size_t>(ex.action)] = -2.0 * diff * inv_b;

        for (size_t l = layers; l-- > 0;) {
            const int in = dims_[l], out = dims_[l + 1];
            for (int o = 0; o < out; ++o) {
                const double d = delta[static_cast<size_t>(o)];
                if (d == 0.0) continue;
                gb[l][static_cast<size_t>(o)] += d;
                double* grow = &gw[l][static_cast<size_t>(o) * in];
                const auto& input = tr.post[l];
                for (int i = 0; i < in; ++i) grow[i] += d * input[static_cast<size_t>(i)];
            }
            if (l == 0) break;
            std::vector<double> prev(static_cast<size_t>(in), 0.0);
            for (int i = 0; i < in; ++i) {
                if (tr.pre[l - 1][static_cast<size_t>(i)] <= 0.0) continue;  // ReLU gate
                double acc = 0.0;
                for (int o = 0; o < out; ++o)
                    acc += delta[static_cast<size_t>(o)] * weights_[l][static_cast<size_t>(o) * in + i];
                prev[static_cast<size_t>(i)] = acc;
            }
            delta.swap(prev);
        }
    }
    if (out_loss) *out_loss = loss_acc * inv_b;
}

std::vector<double> Mlp::gradients(const std::vector<QExample>& batch) const {
    std::vector<std::vector<double>> gw, gb;
    accumulate_gradients(batch, gw, gb, nullptr);
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (size_t l = 0; l < gw.size(); ++l) {
        flat.insert(flat.end(), gw[l].begin(), gw[l].end());
        flat.insert(flat.end(), gb[l].begin(), gb[l].end());
    }
    return flat;
}

double Mlp::train_step(const std::vector<QExample>& batch, const AdamConfig& cfg) {
    std::vector<std::vector<double>> gw, gb;
    double loss_value = 0.0;
    accumulate_gradients(batch, gw, gb, &loss_value);
    if (!std::isfinite(loss_value)) throw std::runtime_error("nonfinite training loss");

    adam_t_ += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam_t_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam_t_));
    const auto update = [&](std::vector<double>& p, std::vector<double>& m, std::vector<double>& v,
                            const std::vector<double>& g) {
        for (size_t i = 0; i < p.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    };
    for (size_t l = 0; l < weights_.size(); ++l) {
        update(weights_[l], m_w_[l], v_w_[l], gw[l]);
        update(biases_[l], m_b_[l], v_b_[l], gb[l]);
    }
    return loss_value;
}

std::vector<double> Mlp::flat_parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (size_t l = 0; l < weights_.size(); ++l) {
        flat.insert(flat.end(), weights_[l].begin(), weights_[l].end());
        flat.insert(flat.end(), biases_[l].begin(), biases_[l].end());
    }
    return flat;
}

void Mlp::set_flat_parameters(const std::vector<double>& flat) {
    size_t pos = 0;
    for (size_t l = 0; l < weights_.size(); ++l) {
        for (auto& w : weights_[l]) w = flat.at(pos++);
        for (auto& b : biases_[l]) b = flat.at(pos++);
    }
    if (pos != flat.size()) throw std::invalid_argument("parameter vector size mismatch");
}

size_t Mlp::parameter_count() const {
    size_t n = 0;
    for (size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
    return n;
}

bool Mlp::operator==(const Mlp& other) const {
    return dims_ == other.dims_ && weights_ == other.weights_ && biases_ == other.biases_;
}

void Mlp::serialize(ByteWriter& out) const {
    out.u32(static_cast<uint32_t>(dims_.size()));
    for (const int d : dims_) out.i32(d);
    const auto dump = [&](const std::vector<std::vector<double>>& vv) {
        for (const auto& v : vv)
            for (const double x : v) out.f64(x);
    };
    dump(weights_);
    dump(biases_);
    dump(m_w_);
    dump(v_w_);
    dump(m_b_);
    dump(v_b_);
    out.u64(static_cast<uint64_t>(adam_t_));
}

Mlp Mlp::deserialize(ByteReader& in) {
    const uint32_t n_dims = in.u32();
    if (n_dims < 2 || n_dims > 64) throw DecodeError("bad layer count");
    std::vector<int> dims(n_dims);
    for (auto& d : dims) d = in.i32();
    Rng throwaway(0);
    Mlp net(dims, throwaway);
    const auto load = [&](std::vector<std::vector<double>>& vv) {
        for (auto& v : vv)
            for (auto& x : v) x = in.f64();
    };
    load(net.weights_);
    load(net.biases_);
    load(net.m_w_);
    load(net.v_w_);
    load(net.m_b_);
    load(net.v_b_);
    net.adam_t_ = static_cast<int64_t>(in.u64());
    return net;
}

int argmax_lowest(const std::vector<double>& values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<size_t>(i)] > values[static_cast<size_t>(best)]) best = i;
    return best;
}

}  // namespace crashlab
