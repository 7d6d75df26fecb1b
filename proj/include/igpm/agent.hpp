#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igpm/rng.hpp"

namespace igpm {

struct Observation {
    double density = 0;           // edges per vertex
    double affected_fraction = 0; // fraction of communities containing updated vertices
};

// Fully connected 2-4-4-2 network, rectifier hidden units, linear output.
// Output 0 scores the decrement action, output 1 the increment action.
struct QNetwork {
    std::array<double, 8> w1{};   // 4x2
    std::array<double, 4> b1{};
    std::array<double, 16> w2{};  // 4x4
    std::array<double, 4> b2{};
    std::array<double, 8> w3{};   // 2x4
    std::array<double, 2> b3{};

    static constexpr std::size_t kParamCount = 8 + 4 + 16 + 4 + 8 + 2;

    static QNetwork random_init(Rng& rng);  // uniform +-0.5/sqrt(fan_in)

    std::array<double, 2> forward(const Observation& obs) const;

    double param(std::size_t i) const;
    double& param(std::size_t i);
};

enum class Action : int { Decrement = 0, Increment = 1 };

struct Transition {
    Observation obs;
    Action action = Action::Decrement;
    double reward = 0;
    Observation next;
};

// Epsilon-greedy: argmax with probability 1-epsilon, uniform otherwise.
// Greedy ties go to Decrement.
Action select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng);

// One SGD step on the mean squared TD error with targets
// r + gamma * max_a Q_target(next, a). Returns the pre-update loss; a
// non-finite loss aborts the step and leaves the net untouched.
double train_step(QNetwork& net, const QNetwork& target, std::span<const Transition> batch,
                  double gamma, double lr);

// c +- 1, clamped to [c_min, c_max].
int apply_action(int c, Action action, int c_min, int c_max);

struct AgentConfig {
    double gamma = 0.95;
    double lr = 1e-3;
    double epsilon = 0.5;
    std::size_t replay_capacity = 512;
    std::size_t batch_size = 16;
    int target_sync_every = 32;
    double reward_cap = 1e6;
    bool normalize_obs = true;  // density divided by its running max
    bool zero_init = false;     // start from an all-zero network (diagnostics)
};

// Replay buffer + target network + epsilon-greedy policy, advanced once per
// orchestrator step.
class DqnAgent {
public:
    DqnAgent(AgentConfig cfg, std::uint64_t seed);

    // Records the transition closing the previous action (if any), trains,
    // and picks the next action for `obs`.
    Action step(const Observation& obs, double reward);

    const QNetwork& net() const { return net_; }
    QNetwork& mutable_net() { return net_; }
    double last_loss() const { return last_loss_; }
    std::size_t aborted_steps() const { return aborted_steps_; }
    std::size_t replay_size() const { return replay_.size(); }

    void save(const std::string& path) const;
    void load(const std::string& path);

private:
    Observation normalize(const Observation& obs);

    AgentConfig cfg_;
    Rng rng_;
    QNetwork net_;
    QNetwork target_;
    std::vector<Transition> replay_;  // ring buffer
    std::size_t replay_next_ = 0;
    std::uint64_t train_steps_ = 0;
    double last_loss_ = 0;
    std::size_t aborted_steps_ = 0;
    double max_density_seen_ = 1.0;
    bool has_prev_ = false;
    Observation prev_obs_;
    Action prev_action_ = Action::Decrement;
};

}  // namespace igpm
