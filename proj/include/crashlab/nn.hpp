#pragma once

#include <cstdint>
#include <vector>

#include "crashlab/hash.hpp"
#include "crashlab/rng.hpp"

namespace crashlab {

struct AdamConfig {
    double lr{1e-3};
    double beta1{0.9};
    double beta2{0.999};
    double eps{1e-8};
};

// Training example for the Q regression: input vector, the action whose
// output is regressed, and its TD target.
struct QExample {
    const double* x{nullptr};
    int action{0};
    double target{0.0};
};

// Fully-connected network with ReLU hidden activations and a linear output
// layer, trained by Adam on a mean-squared error over selected outputs.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> dims, Rng& init_rng);

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }

    std::vector<double> forward(const double* x) const;
    std::vector<double> forward(const std::vector<double>& x) const { return forward(x.data()); }

    // Mean squared error of the batch without touching parameters.
    double loss(const std::vector<QExample>& batch) const;

    // Gradient of loss() with respect to the flat parameter vector.
    std::vector<double> gradients(const std::vector<QExample>& batch) const;

    // One backprop + Adam step; returns the pre-update loss.
    double train_step(const std::vector<QExample>& batch, const AdamConfig& cfg = {});

    // Flat parameter access, layer by layer (weights row-major, then biases).
    std::vector<double> flat_parameters() const;
    void set_flat_parameters(const std::vector<double>& flat);
    size_t parameter_count() const;

    int64_t adam_step_count() const { return adam_t_; }

    bool operator==(const Mlp& other) const;

    void serialize(ByteWriter& out) const;
    static Mlp deserialize(ByteReader& in);

private:
    std::vector<int> dims_;
    // Per layer l: weights_[l] is (dims[l+1] x dims[l]) row-major.
    std::vector<std::vector<double>> weights_, biases_;
    std::vector<std::vector<double>> m_w_, v_w_, m_b_, v_b_;
    int64_t adam_t_{0};

    struct ForwardTrace {
        std::vector<std::vector<double>> pre;   // pre-activation per layer
        std::vector<std::vector<double>> post;  // post-activation (input first)
    };
    ForwardTrace forward_trace(const double* x) const;
    void accumulate_gradients(const std::vector<QExample>& batch,
                              std::vector<std::vector<double>>& gw,
                              std::vector<std::vector<double>>& gb, double* out_loss) const;
};

int argmax_lowest(const std::vector<double>& values);

}  // namespace crashlab
