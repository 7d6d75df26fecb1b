#include <doctest.h>

#include <cmath>

#include "igpm/agent.hpp"

using namespace igpm;

namespace {

// gradient of the TD loss via a zero-lr loss probe and central differences
double fd_gradient(QNetwork net, const QNetwork& target, const Transition& tr, double gamma,
                   std::size_t param, double h) {
    std::span<const Transition> batch(&tr, 1);
    net.param(param) += h;
    double up = train_step(net, target, batch, gamma, 0.0);
    net.param(param) -= 2 * h;
    double down = train_step(net, target, batch, gamma, 0.0);
    return (up - down) / (2 * h);
}

}  // namespace

TEST_CASE("forward pass of the zero network is zero") {
    QNetwork n{};
    auto q = n.forward({0.7, 0.3});
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);
}

TEST_CASE("forward pass matches the hand-computed value") {
    QNetwork n{};
    // layer 1 rows: (1,0), (-1,0), (0.5,0), (0,2); biases .1, .2, 0, -.3
    n.w1 = {1, 0, -1, 0, 0.5, 0, 0, 2};
    n.b1 = {0.1, 0.2, 0, -0.3};
    // layer 2 = identity, bias (0,0,0,0.7)
    n.w2 = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    n.b2 = {0, 0, 0, 0.7};
    // out0 sums all hidden, bias -1; out1 = (0.5,1,-1,0), bias 0.25
    n.w3 = {1, 1, 1, 1, 0.5, 1, -1, 0};
    n.b3 = {-1, 0.25};

    // obs (1,0): h1 = (1.1, 0, 0.5, 0); h2 = (1.1, 0, 0.5, 0.7)
    // out0 = 1.1+0.5+0.7-1 = 1.3; out1 = 0.55-0.5+0.25 = 0.3
    auto q = n.forward({1.0, 0.0});
    CHECK(q[0] == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.3).epsilon(1e-12));

    auto q2 = n.forward({1.0, 0.0});
    CHECK(q[0] == q2[0]);  // same net, same obs, same output
    CHECK(q[1] == q2[1]);
}

TEST_CASE("select_action: pure greedy picks the larger head") {
    QNetwork n{};
    n.b3 = {0.2, 0.9};
    Rng rng(1);
    for (int i = 0; i < 50; ++i)
        CHECK(select_action(n, {0, 0}, 0.0, rng) == Action::Increment);

    n.b3 = {0.4, 0.4};  // tie goes to Decrement
    CHECK(select_action(n, {0, 0}, 0.0, rng) == Action::Decrement);
}

TEST_CASE("select_action frequencies at epsilon 1, 0.5 and 0") {
    QNetwork n{};
    n.b3 = {0.2, 0.9};  // greedy = Increment

    SUBCASE("epsilon 1: uniform, each side within 6 sigma of one half") {
        Rng rng(77);
        int inc = 0;
        for (int i = 0; i < 10000; ++i)
            if (select_action(n, {0, 0}, 1.0, rng) == Action::Increment) ++inc;
        double f = inc / 10000.0;
        CHECK(f >= 0.47);
        CHECK(f <= 0.53);
    }
    SUBCASE("epsilon 0.5: greedy frequency near 1 - eps/2 = 0.75") {
        Rng rng(78);
        int inc = 0;
        for (int i = 0; i < 10000; ++i)
            if (select_action(n, {0, 0}, 0.5, rng) == Action::Increment) ++inc;
        double f = inc / 10000.0;
        CHECK(std::abs(f - 0.75) <= 0.026);  // 6 sigma = 6*sqrt(.75*.25/1e4)
    }
    SUBCASE("epsilon 0 is deterministic") {
        Rng rng(79);
        for (int i = 0; i < 100; ++i)
            CHECK(select_action(n, {0, 0}, 0.0, rng) == Action::Increment);
    }
}

TEST_CASE("train_step with targets already met leaves the net unchanged") {
    QNetwork net{};
    QNetwork target{};
    Transition tr{{0.1, 0.2}, Action::Decrement, 0.0, {0.2, 0.1}};
    std::span<const Transition> batch(&tr, 1);
    double loss = train_step(net, target, batch, 0.95, 0.05);
    CHECK(loss == 0.0);
    for (std::size_t i = 0; i < QNetwork::kParamCount; ++i) CHECK(net.param(i) == 0.0);
}

TEST_CASE("train_step reproduces the hand-computed Bellman update") {
    // nets whose outputs are the output biases: q(s) = (0.5, 0.2),
    // q_target(next) = (0.3, 0.4)
    QNetwork net{};
    net.b3 = {0.5, 0.2};
    QNetwork target{};
    target.b3 = {0.3, 0.4};

    Transition tr{{0.0, 0.0}, Action::Decrement, 1.0, {0.0, 0.0}};
    std::span<const Transition> batch(&tr, 1);
    // y = 1 + 0.95*max(0.3,0.4) = 1.38; err = 0.5-1.38 = -0.88
    // loss = 0.7744; d b3[0] = 2*err = -1.76; b3[0] <- 0.5 - 0.1*(-1.76)
    double loss = train_step(net, target, batch, 0.95, 0.1);
    CHECK(loss == doctest::Approx(0.7744).epsilon(1e-12));
    CHECK(net.b3[0] == doctest::Approx(0.676).epsilon(1e-12));
    CHECK(net.b3[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("analytic TD gradients match central finite differences") {
    Rng rng(4242);
    double worst = 0;
    for (int trial = 0; trial < 30; ++trial) {
        QNetwork net = QNetwork::random_init(rng);
        for (auto& b : net.b1) b = rng.uniform(-0.3, 0.3);
        for (auto& b : net.b2) b = rng.uniform(-0.3, 0.3);
        for (auto& b : net.b3) b = rng.uniform(-0.3, 0.3);
        QNetwork target = QNetwork::random_init(rng);
        Transition tr{{rng.uniform(0, 2), rng.unit()},
                      static_cast<Action>(rng.below(2)),
                      rng.uniform(0, 3),
                      {rng.uniform(0, 2), rng.unit()}};
        std::span<const Transition> batch(&tr, 1);

        // analytic gradient recovered from one SGD step
        const double lr = 1e-3;
        QNetwork stepped = net;
        train_step(stepped, target, batch, 0.95, lr);
        for (std::size_t p = 0; p < QNetwork::kParamCount; ++p) {
            double analytic = (net.param(p) - stepped.param(p)) / lr;
            double fd = fd_gradient(net, target, tr, 0.95, p, 1e-6);
            double scale = std::max({std::abs(analytic), std::abs(fd), 1e-6});
            worst = std::max(worst, std::abs(analytic - fd) / scale);
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("apply_action adjusts and clamps the threshold") {
    CHECK(apply_action(5, Action::Increment, 2, 100) == 6);
    CHECK(apply_action(5, Action::Decrement, 2, 100) == 4);
    CHECK(apply_action(2, Action::Decrement, 2, 100) == 2);   // clamp at c_min
    CHECK(apply_action(100, Action::Increment, 2, 100) == 100);
}

TEST_CASE("identical transition streams give identical weight trajectories") {
    AgentConfig cfg;
    cfg.batch_size = 4;
    DqnAgent a(cfg, 99);
    DqnAgent b(cfg, 99);
    Rng stream(5);
    for (int i = 0; i < 120; ++i) {
        Observation obs{stream.uniform(0, 3), stream.unit()};
        double reward = stream.uniform(0, 10);
        Action ra = a.step(obs, reward);
        Action rb = b.step(obs, reward);
        CHECK(ra == rb);
    }
    for (std::size_t p = 0; p < QNetwork::kParamCount; ++p)
        CHECK(a.net().param(p) == b.net().param(p));
    CHECK(a.replay_size() == b.replay_size());
}

TEST_CASE("c stays inside its bounds over any action sequence") {
    AgentConfig cfg;
    cfg.epsilon = 1.0;  // fully random actions
    DqnAgent agent(cfg, 3);
    int c = 5;
    for (int i = 0; i < 300; ++i) {
        Action a = agent.step({1.0, 0.5}, 1.0);
        c = apply_action(c, a, 2, 9);
        CHECK(c >= 2);
        CHECK(c <= 9);
    }
}

TEST_CASE("snapshot save/load round-trips the parameters") {
    AgentConfig cfg;
    cfg.batch_size = 4;
    DqnAgent a(cfg, 7);
    Rng stream(11);
    for (int i = 0; i < 40; ++i) a.step({stream.unit(), stream.unit()}, stream.uniform(0, 5));
    a.save("dqn_tmp.snapshot");

    DqnAgent b(cfg, 8);  // different seed, then overwritten by load
    b.load("dqn_tmp.snapshot");
    for (std::size_t p = 0; p < QNetwork::kParamCount; ++p)
        CHECK(a.net().param(p) == b.net().param(p));
    std::remove("dqn_tmp.snapshot");

    CHECK_THROWS(b.load("missing_file.snapshot"));
}
