#pragma once

// Inter-patch coupling: every patch edge value is a Lagrange interpolant of
// macroscale samples. Away from the double patch the stencil is centred
// (2 gamma + 1 nodes); stencils never cross the shock and are truncated with
// constant bandwidth at the shock nodes and at the Dirichlet boundaries,
// which act as extra interpolation nodes.

#include "dpatch/mesh.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dpatch {

struct MacroSample {
    std::vector<double> positions;
    std::vector<NodeRole> roles;
    std::vector<double> values;

    /// Positions strictly increasing, sizes match, values finite.
    void validate() const;
};

struct EdgePair {
    double left = 0.0;
    double right = 0.0;
};

using EdgeValues = std::vector<EdgePair>;

/// Interpolation stencil over the anchored node list
/// [x_lo, macro nodes..., x_hi].
struct Stencil {
    std::vector<std::size_t> nodes;
    double target = 0.0;
    std::vector<double> weights;
};

/// w_i = prod_{k != i} (target - X_k) / (X_i - X_k). Throws ConfigError on
/// fewer than two nodes or on coincident nodes.
std::vector<double> lagrange_weights(std::span<const double> nodes, double target);

/// Stencils depend on geometry only, so they are built once per layout.
class CouplingPlan {
public:
    explicit CouplingPlan(const PatchLayout& layout);

    std::size_t patch_count() const noexcept { return left_.size(); }
    const Stencil& left_stencil(std::size_t patch) const { return left_.at(patch); }
    const Stencil& right_stencil(std::size_t patch) const { return right_.at(patch); }

    /// Anchored node positions: left boundary, macro nodes, right boundary.
    const std::vector<double>& anchors() const noexcept { return anchors_; }

    /// `macro_values` is ordered like PatchLayout::macro_nodes().
    void apply(std::span<const double> macro_values, double bc_left, double bc_right,
               std::span<EdgePair> out) const;
    EdgeValues apply(std::span<const double> macro_values, double bc_left,
                     double bc_right) const;

    /// One row per stencil entry: patch,side,target,node_position,weight
    void write_csv(std::ostream& os) const;

private:
    std::vector<double> anchors_;
    std::vector<Stencil> left_;
    std::vector<Stencil> right_;
};

/// Edge values for every patch of `layout` from the sampled macro field.
EdgeValues compute_edge_values(const MacroSample& samples, const PatchLayout& layout,
                               double bc_left, double bc_right);

} // namespace dpatch
