#include "netcon/protocols.hpp"

#include <cmath>

#include "netcon/errors.hpp"

namespace netcon {

const char* to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::FirstOrderNonlinear: return "first_order_nonlinear";
        case ProtocolKind::SecondOrderNonlinear: return "second_order_nonlinear";
        case ProtocolKind::SecondOrderDamped: return "second_order_damped";
        case ProtocolKind::PiSingle: return "pi_single";
        case ProtocolKind::PiDouble: return "pi_double";
    }
    return "unknown";
}

namespace {

// Range over which constructor-time assumption checks sample the functions.
constexpr double kCheckRange = 10.0;
constexpr std::size_t kCheckSamples = 201;

}  // namespace

void ProtocolSpec::validate_functions() const {
    const std::size_t n = graph_.vertex_count();
    const std::size_t m = graph_.edge_count();
    if (!gains_.empty() && gains_.size() != n)
        throw InputError("protocol: gain count must equal vertex count");
    if (!inter_a_.empty() && inter_a_.size() != m)
        throw InputError("protocol: interaction count must equal edge count");
    if (!inter_b_.empty() && inter_b_.size() != m)
        throw InputError("protocol: interaction-b count must equal edge count");
    for (const auto& g : gains_) {
        const auto rep = validate_gain(g, -kCheckRange, kCheckRange, kCheckSamples);
        if (!rep.ok) throw InputError("protocol: gain fails the positivity assumption");
    }
    for (const auto* list : {&inter_a_, &inter_b_}) {
        for (const auto& f : *list) {
            const auto rep = validate_interaction(f, -kCheckRange, kCheckRange, kCheckSamples);
            if (!rep.odd_ok || !rep.sign_ok)
                throw InputError("protocol: interaction fails the odd/sign-preserving assumption");
        }
    }
}

ProtocolSpec ProtocolSpec::first_order(Graph g, std::vector<ScalarFn> gains,
                                       std::vector<ScalarFn> interactions_a) {
    ProtocolSpec s(ProtocolKind::FirstOrderNonlinear, std::move(g));
    s.gains_ = std::move(gains);
    s.inter_a_ = std::move(interactions_a);
    s.disturbance_.assign(s.agent_count(), 0.0);
    s.validate_functions();
    return s;
}

ProtocolSpec ProtocolSpec::second_order(Graph g, std::vector<ScalarFn> gains,
                                        std::vector<ScalarFn> interactions_a,
                                        std::vector<ScalarFn> interactions_b) {
    ProtocolSpec s(ProtocolKind::SecondOrderNonlinear, std::move(g));
    s.gains_ = std::move(gains);
    s.inter_a_ = std::move(interactions_a);
    s.inter_b_ = std::move(interactions_b);
    s.disturbance_.assign(s.agent_count(), 0.0);
    s.validate_functions();
    return s;
}

ProtocolSpec ProtocolSpec::second_order_damped(Graph g, std::vector<ScalarFn> dampings,
                                               std::vector<ScalarFn> interactions_a) {
    ProtocolSpec s(ProtocolKind::SecondOrderDamped, std::move(g));
    s.gains_ = std::move(dampings);
    s.inter_a_ = std::move(interactions_a);
    s.disturbance_.assign(s.agent_count(), 0.0);
    s.validate_functions();
    return s;
}

ProtocolSpec ProtocolSpec::pi_single(Graph g, double a, double b, double delta, Vec disturbance,
                                     Vec x_anchor) {
    if (a < 0.0 || !(b > 0.0) || delta < 0.0)
        throw InputError("pi_single: need a >= 0, b > 0, delta >= 0");
    ProtocolSpec s(ProtocolKind::PiSingle, std::move(g));
    const std::size_t n = s.agent_count();
    s.pi_ = {a, b, delta, 0.0};
    s.disturbance_ = disturbance.empty() ? Vec(n, 0.0) : std::move(disturbance);
    s.x_anchor_ = x_anchor.empty() ? Vec(n, 0.0) : std::move(x_anchor);
    if (s.disturbance_.size() != n || s.x_anchor_.size() != n)
        throw InputError("pi_single: disturbance/anchor dimension mismatch");
    return s;
}

ProtocolSpec ProtocolSpec::pi_double(Graph g, double a, double b, double gamma, double delta,
                                     Vec disturbance, Vec x_anchor) {
    if (a < 0.0 || !(b > 0.0) || !(gamma > 0.0) || delta < 0.0)
        throw InputError("pi_double: need a >= 0, b > 0, gamma > 0, delta >= 0");
    ProtocolSpec s(ProtocolKind::PiDouble, std::move(g));
    const std::size_t n = s.agent_count();
    s.pi_ = {a, b, delta, gamma};
    s.disturbance_ = disturbance.empty() ? Vec(n, 0.0) : std::move(disturbance);
    s.x_anchor_ = x_anchor.empty() ? Vec(n, 0.0) : std::move(x_anchor);
    if (s.disturbance_.size() != n || s.x_anchor_.size() != n)
        throw InputError("pi_double: disturbance/anchor dimension mismatch");
    return s;
}

bool ProtocolSpec::has_velocity() const {
    return kind_ == ProtocolKind::SecondOrderNonlinear || kind_ == ProtocolKind::SecondOrderDamped ||
           kind_ == ProtocolKind::PiDouble;
}

bool ProtocolSpec::has_integral() const {
    return kind_ == ProtocolKind::PiSingle || kind_ == ProtocolKind::PiDouble;
}

std::size_t ProtocolSpec::state_size() const {
    const std::size_t n = agent_count();
    return n * (1 + (has_velocity() ? 1 : 0) + (has_integral() ? 1 : 0));
}

std::size_t ProtocolSpec::z_offset() const { return 0; }
std::size_t ProtocolSpec::x_offset() const { return has_integral() ? agent_count() : 0; }
std::size_t ProtocolSpec::v_offset() const { return x_offset() + agent_count(); }

Vec ProtocolSpec::pack(const AgentState& s) const {
    const std::size_t n = agent_count();
    if (s.x.size() != n) throw InputError("pack: x dimension mismatch");
    if (has_velocity() && s.v.size() != n) throw InputError("pack: v dimension mismatch");
    Vec flat(state_size(), 0.0);
    if (has_integral()) {
        if (!s.z.empty()) {
            if (s.z.size() != n) throw InputError("pack: z dimension mismatch");
            std::copy(s.z.begin(), s.z.end(), flat.begin() + z_offset());
        }
    }
    std::copy(s.x.begin(), s.x.end(), flat.begin() + x_offset());
    if (has_velocity()) std::copy(s.v.begin(), s.v.end(), flat.begin() + v_offset());
    return flat;
}

AgentState ProtocolSpec::unpack(const Vec& flat) const {
    const std::size_t n = agent_count();
    AgentState s;
    s.x.assign(flat.begin() + x_offset(), flat.begin() + x_offset() + n);
    if (has_velocity()) s.v.assign(flat.begin() + v_offset(), flat.begin() + v_offset() + n);
    if (has_integral()) s.z.assign(flat.begin() + z_offset(), flat.begin() + z_offset() + n);
    return s;
}

Vec interaction_flow(const Graph& g, const std::vector<ScalarFn>& per_edge, const Vec& x) {
    Vec acc(g.vertex_count(), 0.0);
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        const auto [i1, j1] = g.edges()[k];
        const std::size_t i = i1 - 1, j = j1 - 1;
        const double f = per_edge[k](x[i] - x[j]);
        acc[i] += f;
        acc[j] -= f;
    }
    return acc;
}

Vec laplacian_apply(const Graph& g, const Vec& x) {
    Vec acc(g.vertex_count(), 0.0);
    for (const auto& [i1, j1] : g.edges()) {
        const std::size_t i = i1 - 1, j = j1 - 1;
        const double diff = x[i] - x[j];
        acc[i] += diff;
        acc[j] -= diff;
    }
    return acc;
}

Vec rhs_first_order_nonlinear(const ProtocolSpec& spec, const Vec& x) {
    if (spec.kind() != ProtocolKind::FirstOrderNonlinear)
        throw InputError("rhs_first_order_nonlinear: wrong protocol kind");
    Vec flow = interaction_flow(spec.graph(), spec.interactions_a(), x);
    for (std::size_t i = 0; i < x.size(); ++i) flow[i] *= -spec.gains()[i](x[i]);
    return flow;
}

void rhs_second_order_nonlinear(const ProtocolSpec& spec, const Vec& x, const Vec& v, Vec& xdot,
                                Vec& vdot) {
    if (spec.kind() != ProtocolKind::SecondOrderNonlinear)
        throw InputError("rhs_second_order_nonlinear: wrong protocol kind");
    xdot = v;
    const Vec fa = interaction_flow(spec.graph(), spec.interactions_a(), x);
    const Vec fb = interaction_flow(spec.graph(), spec.interactions_b(), v);
    vdot.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        vdot[i] = -spec.gains()[i](v[i]) * (fa[i] + fb[i]);
}

void rhs_second_order_damped(const ProtocolSpec& spec, const Vec& x, const Vec& v, Vec& xdot,
                             Vec& vdot) {
    if (spec.kind() != ProtocolKind::SecondOrderDamped)
        throw InputError("rhs_second_order_damped: wrong protocol kind");
    xdot = v;
    const Vec fa = interaction_flow(spec.graph(), spec.interactions_a(), x);
    vdot.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        vdot[i] = -spec.gains()[i](x[i]) * v[i] - fa[i];
}

void rhs_pi_single(const ProtocolSpec& spec, const Vec& z, const Vec& x, Vec& zdot, Vec& xdot) {
    if (spec.kind() != ProtocolKind::PiSingle) throw InputError("rhs_pi_single: wrong protocol kind");
    const auto& pi = spec.pi();
    zdot = x;
    const Vec lz = laplacian_apply(spec.graph(), z);
    const Vec lx = laplacian_apply(spec.graph(), x);
    xdot.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        xdot[i] = spec.disturbance()[i] - pi.a * lz[i] - pi.b * lx[i] -
                  pi.delta * (x[i] - spec.x_anchor()[i]);
}

void rhs_pi_double(const ProtocolSpec& spec, const Vec& z, const Vec& x, const Vec& v, Vec& zdot,
                   Vec& xdot, Vec& vdot) {
    if (spec.kind() != ProtocolKind::PiDouble) throw InputError("rhs_pi_double: wrong protocol kind");
    const auto& pi = spec.pi();
    zdot = x;
    xdot = v;
    const Vec lz = laplacian_apply(spec.graph(), z);
    const Vec lx = laplacian_apply(spec.graph(), x);
    vdot.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        vdot[i] = spec.disturbance()[i] - pi.a * lz[i] - pi.b * lx[i] - pi.gamma * v[i] -
                  pi.delta * (x[i] - spec.x_anchor()[i]);
}

void ProtocolSpec::rhs(double /*t*/, const Vec& flat, Vec& dflat) const {
    const std::size_t n = agent_count();
    dflat.resize(flat.size());
    switch (kind_) {
        case ProtocolKind::FirstOrderNonlinear: {
            Vec flow = interaction_flow(graph_, inter_a_, flat);
            for (std::size_t i = 0; i < n; ++i) dflat[i] = -gains_[i](flat[i]) * flow[i];
            return;
        }
        case ProtocolKind::SecondOrderNonlinear: {
            const double* x = flat.data();
            const double* v = flat.data() + n;
            Vec xs(x, x + n), vs(v, v + n);
            const Vec fa = interaction_flow(graph_, inter_a_, xs);
            const Vec fb = interaction_flow(graph_, inter_b_, vs);
            for (std::size_t i = 0; i < n; ++i) {
                dflat[i] = v[i];
                dflat[n + i] = -gains_[i](v[i]) * (fa[i] + fb[i]);
            }
            return;
        }
        case ProtocolKind::SecondOrderDamped: {
            const double* x = flat.data();
            const double* v = flat.data() + n;
            Vec xs(x, x + n);
            const Vec fa = interaction_flow(graph_, inter_a_, xs);
            for (std::size_t i = 0; i < n; ++i) {
                dflat[i] = v[i];
                dflat[n + i] = -gains_[i](x[i]) * v[i] - fa[i];
            }
            return;
        }
        case ProtocolKind::PiSingle: {
            Vec z(flat.begin(), flat.begin() + n);
            Vec x(flat.begin() + n, flat.begin() + 2 * n);
            const Vec lz = laplacian_apply(graph_, z);
            const Vec lx = laplacian_apply(graph_, x);
            for (std::size_t i = 0; i < n; ++i) {
                dflat[i] = x[i];
                dflat[n + i] = disturbance_[i] - pi_.a * lz[i] - pi_.b * lx[i] -
                               pi_.delta * (x[i] - x_anchor_[i]);
            }
            return;
        }
        case ProtocolKind::PiDouble: {
            Vec z(flat.begin(), flat.begin() + n);
            Vec x(flat.begin() + n, flat.begin() + 2 * n);
            const double* v = flat.data() + 2 * n;
            const Vec lz = laplacian_apply(graph_, z);
            const Vec lx = laplacian_apply(graph_, x);
            for (std::size_t i = 0; i < n; ++i) {
                dflat[i] = x[i];
                dflat[n + i] = v[i];
                dflat[2 * n + i] = disturbance_[i] - pi_.a * lz[i] - pi_.b * lx[i] -
                                   pi_.gamma * v[i] - pi_.delta * (x[i] - x_anchor_[i]);
            }
            return;
        }
    }
}

}  // namespace netcon
