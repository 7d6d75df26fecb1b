#include "igpm/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace igpm {

namespace {

struct ForwardTrace {
    std::array<double, 2> in;
    std::array<double, 4> z1, h1;  // pre/post activation, layer 1
    std::array<double, 4> z2, h2;
    std::array<double, 2> out;
};

ForwardTrace forward_trace(const QNetwork& n, const Observation& obs) {
    ForwardTrace t;
    t.in = {obs.density, obs.affected_fraction};
    for (int i = 0; i < 4; ++i) {
        double z = n.b1[i];
        for (int j = 0; j < 2; ++j) z += n.w1[i * 2 + j] * t.in[j];
        t.z1[i] = z;
        t.h1[i] = z > 0 ? z : 0;
    }
    for (int i = 0; i < 4; ++i) {
        double z = n.b2[i];
        for (int j = 0; j < 4; ++j) z += n.w2[i * 4 + j] * t.h1[j];
        t.z2[i] = z;
        t.h2[i] = z > 0 ? z : 0;
    }
    for (int i = 0; i < 2; ++i) {
        double z = n.b3[i];
        for (int j = 0; j < 4; ++j) z += n.w3[i * 4 + j] * t.h2[j];
        t.out[i] = z;
    }
    return t;
}

}  // namespace

std::array<double, 2> QNetwork::forward(const Observation& obs) const {
    return forward_trace(*this, obs).out;
}

QNetwork QNetwork::random_init(Rng& rng) {
    QNetwork n;
    auto fill = [&rng](auto& arr, double fan_in) {
        double bound = 0.5 / std::sqrt(fan_in);
        for (double& w : arr) w = rng.uniform(-bound, bound);
    };
    fill(n.w1, 2.0);
    fill(n.w2, 4.0);
    fill(n.w3, 4.0);
    return n;  // biases stay zero
}

double QNetwork::param(std::size_t i) const {
    return const_cast<QNetwork*>(this)->param(i);
}

double& QNetwork::param(std::size_t i) {
    if (i < 8) return w1[i];
    i -= 8;
    if (i < 4) return b1[i];
    i -= 4;
    if (i < 16) return w2[i];
    i -= 16;
    if (i < 4) return b2[i];
    i -= 4;
    if (i < 8) return w3[i];
    i -= 8;
    if (i < 2) return b3[i];
    throw std::out_of_range("QNetwork::param");
}

Action select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng) {
    if (epsilon < 0 || epsilon > 1) throw std::invalid_argument("select_action: bad epsilon");
    if (rng.unit() < epsilon) return static_cast<Action>(rng.below(2));
    auto q = net.forward(obs);
    return q[1] > q[0] ? Action::Increment : Action::Decrement;
}

double train_step(QNetwork& net, const QNetwork& target, std::span<const Transition> batch,
                  double gamma, double lr) {
    if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    QNetwork grad{};  // zero-initialized accumulator
    double loss = 0;
    for (const Transition& tr : batch) {
        ForwardTrace t = forward_trace(net, tr.obs);
        auto qn = target.forward(tr.next);
        double y = tr.reward + gamma * std::max(qn[0], qn[1]);
        int a = static_cast<int>(tr.action);
        double err = t.out[a] - y;
        loss += err * err * inv_b;

        // backprop of (err^2)/B through the selected head
        double d_out = 2.0 * err * inv_b;
        std::array<double, 4> d_h2{};
        for (int j = 0; j < 4; ++j) {
            grad.w3[a * 4 + j] += d_out * t.h2[j];
            d_h2[j] = d_out * net.w3[a * 4 + j];
        }
        grad.b3[a] += d_out;

        std::array<double, 4> d_h1{};
        for (int i = 0; i < 4; ++i) {
            double dz = t.z2[i] > 0 ? d_h2[i] : 0.0;
            for (int j = 0; j < 4; ++j) {
                grad.w2[i * 4 + j] += dz * t.h1[j];
                d_h1[j] += dz * net.w2[i * 4 + j];
            }
            grad.b2[i] += dz;
        }
        for (int i = 0; i < 4; ++i) {
            double dz = t.z1[i] > 0 ? d_h1[i] : 0.0;
            for (int j = 0; j < 2; ++j) grad.w1[i * 2 + j] += dz * t.in[j];
            grad.b1[i] += dz;
        }
    }
    if (!std::isfinite(loss)) return loss;  // abort: leave parameters untouched
    for (std::size_t i = 0; i < QNetwork::kParamCount; ++i) net.param(i) -= lr * grad.param(i);
    return loss;
}

int apply_action(int c, Action action, int c_min, int c_max) {
    int next = action == Action::Decrement ? c - 1 : c + 1;
    return std::clamp(next, c_min, c_max);
}

DqnAgent::DqnAgent(AgentConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
    net_ = cfg_.zero_init ? QNetwork{} : QNetwork::random_init(rng_);
    target_ = net_;
    replay_.reserve(cfg_.replay_capacity);
}

Observation DqnAgent::normalize(const Observation& obs) {
    if (!cfg_.normalize_obs) return obs;
    max_density_seen_ = std::max(max_density_seen_, obs.density);
    Observation out = obs;
    out.density = obs.density / max_density_seen_;
    out.affected_fraction = std::clamp(obs.affected_fraction, 0.0, 1.0);
    return out;
}

Action DqnAgent::step(const Observation& raw_obs, double reward) {
    Observation obs = normalize(raw_obs);
    if (has_prev_) {
        Transition tr{prev_obs_, prev_action_, std::min(reward, cfg_.reward_cap), obs};
        if (replay_.size() < cfg_.replay_capacity) {
            replay_.push_back(tr);
        } else {
            replay_[replay_next_] = tr;
            replay_next_ = (replay_next_ + 1) % cfg_.replay_capacity;
        }
        if (replay_.size() >= cfg_.batch_size) {
            std::vector<Transition> batch(cfg_.batch_size);
            for (auto& slot : batch) slot = replay_[rng_.below(replay_.size())];
            double loss = train_step(net_, target_, batch, cfg_.gamma, cfg_.lr);
            if (std::isfinite(loss)) {
                last_loss_ = loss;
                ++train_steps_;
                if (cfg_.target_sync_every > 0 &&
                    train_steps_ % static_cast<std::uint64_t>(cfg_.target_sync_every) == 0)
                    target_ = net_;
            } else {
                ++aborted_steps_;
            }
        }
    }
    Action act = select_action(net_, obs, cfg_.epsilon, rng_);
    prev_obs_ = obs;
    prev_action_ = act;
    has_prev_ = true;
    return act;
}

namespace {
constexpr const char* kSnapshotHeader = "igpm-dqn v1";

void write_params(std::ofstream& out, const QNetwork& n) {
    out.precision(17);
    for (std::size_t i = 0; i < QNetwork::kParamCount; ++i) out << n.param(i) << "\n";
}

void read_params(std::ifstream& in, QNetwork& n) {
    for (std::size_t i = 0; i < QNetwork::kParamCount; ++i)
        if (!(in >> n.param(i))) throw std::runtime_error("dqn snapshot: truncated parameters");
}
}  // namespace

void DqnAgent::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dqn snapshot: cannot write " + path);
    out << kSnapshotHeader << "\n";
    out << QNetwork::kParamCount << " " << max_density_seen_ << "\n";
    write_params(out, net_);
    write_params(out, target_);
}

void DqnAgent::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("dqn snapshot: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != kSnapshotHeader)
        throw std::runtime_error("dqn snapshot: unsupported header '" + header + "'");
    std::size_t count = 0;
    in >> count >> max_density_seen_;
    if (count != QNetwork::kParamCount)
        throw std::runtime_error("dqn snapshot: parameter count mismatch");
    read_params(in, net_);
    read_params(in, target_);
}

}  // namespace igpm
