#pragma once

// Patch geometry: standard patches, the double patch that hosts a shock,
// and the ordered set of macroscale nodes they expose.

#include "dpatch/model.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace dpatch {

/// Shock-node placement inside a double patch, counted in micro spacings
/// inward from the patch's left and right edges.
struct ShockOffsets {
    int left_steps = 1;
    int right_steps = 1;
};

class Patch {
public:
    /// 2n+1 micro points with spacing dx centred on `centre`.
    Patch(double centre, int n, double dx, std::optional<ShockOffsets> shock = std::nullopt);

    /// Convenience: `points` must be odd (2n+1), width = 2 n dx.
    static Patch standard(double centre, double width, int points);
    static Patch double_patch(double centre, double width, int points, ShockOffsets offsets = {});

    double centre() const noexcept { return centre_; }
    int n() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double half_width() const noexcept { return n_ * dx_; }
    int point_count() const noexcept { return 2 * n_ + 1; }

    /// x_{j,i} for i in [-n, n].
    double point(int i) const noexcept { return centre_ + dx_ * i; }
    double left_edge() const noexcept { return point(-n_); }
    double right_edge() const noexcept { return point(n_); }

    bool is_double() const noexcept { return shock_.has_value(); }
    const std::optional<ShockOffsets>& shock_offsets() const noexcept { return shock_; }

    /// Micro indices (in [-n, n]) of the shock nodes; only for double patches.
    int shock_left_index() const;
    int shock_right_index() const;

private:
    double centre_;
    int n_;
    double dx_;
    std::optional<ShockOffsets> shock_;
};

enum class NodeRole { centre, shock_left, shock_right };

std::string_view to_string(NodeRole role) noexcept;
NodeRole parse_node_role(std::string_view name);

struct MacroNode {
    double position;
    NodeRole role;
    std::size_t patch;  ///< owning patch
    int micro_index;    ///< micro point in the owning patch sampled for this node
};

class PatchLayout {
public:
    /// Validates ordering, overlap, containment in [x_lo, x_hi], the single
    /// double patch rule and gamma >= 1. Throws ConfigError.
    PatchLayout(double x_lo, double x_hi, std::vector<Patch> patches, int gamma);

    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }
    const std::vector<Patch>& patches() const noexcept { return patches_; }
    int gamma() const noexcept { return gamma_; }
    std::optional<std::size_t> double_index() const noexcept { return double_index_; }

    /// Sorted by position: one node per standard patch, two for the double patch.
    const std::vector<MacroNode>& macro_nodes() const noexcept { return nodes_; }

    std::size_t total_points() const noexcept;

    /// Sum of patch widths over the domain length.
    double simulated_fraction() const noexcept;

    /// Same geometry with the double patch turned into a standard patch
    /// (the unmodified patch scheme).
    PatchLayout without_double_patch() const;

    PatchLayout with_gamma(int gamma) const;

private:
    double x_lo_;
    double x_hi_;
    std::vector<Patch> patches_;
    int gamma_;
    std::optional<std::size_t> double_index_;
    std::vector<MacroNode> nodes_;
};

/// Free-function form of PatchLayout::macro_nodes.
std::vector<MacroNode> macro_nodes(const PatchLayout& layout);

/// `count` equispaced centres strictly between a and b.
std::vector<double> equispaced_between(double a, double b, int count);

/// The published patch configurations of the four archetypes.
PatchLayout archetype_layout(ArchetypeId id);

/// Distance from the shock centre at which a shock node keeps the inner
/// layer's influence below the H^(2 gamma) consistency error:
/// (7 - 2 gamma ln H) eps.
double recommend_shock_offset(double eps, double H, int gamma);

} // namespace dpatch
