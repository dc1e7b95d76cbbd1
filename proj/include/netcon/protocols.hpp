#pragma once

#include <optional>
#include <vector>

#include "netcon/functions.hpp"
#include "netcon/graph.hpp"
#include "netcon/ode.hpp"

namespace netcon {

enum class ProtocolKind {
    FirstOrderNonlinear,   // xdot_i = -gamma_i(x_i) * sum_j a_ij(x_i - x_j)
    SecondOrderNonlinear,  // vdot_i = -gamma_i(v_i) * sum_j [a_ij(dx) + b_ij(dv)]
    SecondOrderDamped,     // vdot_i = -kappa_i(x_i) v_i - sum_j a_ij(dx)
    PiSingle,              // xdot = d - a L z - b L x - delta (x - x0), zdot = x
    PiDouble,              // vdot = d - a L z - b L x - gamma v - delta (x - x0)
};

const char* to_string(ProtocolKind k);

struct PiGains {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

struct AgentState {
    Vec x;
    Vec v;  // empty unless second-order
    Vec z;  // empty unless PI
};

/// Immutable protocol description bound to a graph. Per-edge interaction
/// functions are stored once; the reverse direction follows from oddness
/// (a_ji(y) = a_ij(y) under Assumption-2 symmetry), so pairwise flows cancel
/// by construction.
class ProtocolSpec {
public:
    static ProtocolSpec first_order(Graph g, std::vector<ScalarFn> gains,
                                    std::vector<ScalarFn> interactions_a);
    static ProtocolSpec second_order(Graph g, std::vector<ScalarFn> gains,
                                     std::vector<ScalarFn> interactions_a,
                                     std::vector<ScalarFn> interactions_b);
    static ProtocolSpec second_order_damped(Graph g, std::vector<ScalarFn> dampings,
                                            std::vector<ScalarFn> interactions_a);
    static ProtocolSpec pi_single(Graph g, double a, double b, double delta, Vec disturbance,
                                  Vec x_anchor);
    static ProtocolSpec pi_double(Graph g, double a, double b, double gamma, double delta,
                                  Vec disturbance, Vec x_anchor);

    ProtocolKind kind() const { return kind_; }
    const Graph& graph() const { return graph_; }
    std::size_t agent_count() const { return graph_.vertex_count(); }
    const std::vector<ScalarFn>& gains() const { return gains_; }
    const std::vector<ScalarFn>& interactions_a() const { return inter_a_; }
    const std::vector<ScalarFn>& interactions_b() const { return inter_b_; }
    const PiGains& pi() const { return pi_; }
    const Vec& disturbance() const { return disturbance_; }
    const Vec& x_anchor() const { return x_anchor_; }

    bool has_velocity() const;
    bool has_integral() const;

    /// Flat state layout: [z | x | v] with absent blocks skipped.
    std::size_t state_size() const;
    std::size_t x_offset() const;
    std::size_t v_offset() const;  // only when has_velocity()
    std::size_t z_offset() const;  // only when has_integral()

    Vec pack(const AgentState& s) const;
    AgentState unpack(const Vec& flat) const;

    /// Right-hand side on the flat layout, suitable for integrate_ode.
    void rhs(double t, const Vec& flat, Vec& dflat) const;

private:
    ProtocolSpec(ProtocolKind kind, Graph g) : kind_(kind), graph_(std::move(g)) {}
    void validate_functions() const;

    ProtocolKind kind_;
    Graph graph_;
    std::vector<ScalarFn> gains_;
    std::vector<ScalarFn> inter_a_;
    std::vector<ScalarFn> inter_b_;
    PiGains pi_;
    Vec disturbance_;
    Vec x_anchor_;
};

// Per-operation forms mirroring the protocol definitions; `rhs` above
// dispatches to these.
Vec rhs_first_order_nonlinear(const ProtocolSpec& spec, const Vec& x);
void rhs_second_order_nonlinear(const ProtocolSpec& spec, const Vec& x, const Vec& v, Vec& xdot,
                                Vec& vdot);
void rhs_second_order_damped(const ProtocolSpec& spec, const Vec& x, const Vec& v, Vec& xdot,
                             Vec& vdot);
void rhs_pi_single(const ProtocolSpec& spec, const Vec& z, const Vec& x, Vec& zdot, Vec& xdot);
void rhs_pi_double(const ProtocolSpec& spec, const Vec& z, const Vec& x, const Vec& v, Vec& zdot,
                   Vec& xdot, Vec& vdot);

/// Sum of a_e(x_i - x_j) over edges incident to each vertex (the nonlinear
/// analogue of L*x; equals L*x for Linear(1) interactions).
Vec interaction_flow(const Graph& g, const std::vector<ScalarFn>& per_edge, const Vec& x);

/// Unweighted Laplacian action computed edge-wise.
Vec laplacian_apply(const Graph& g, const Vec& x);

}  // namespace netcon
