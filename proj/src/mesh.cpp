#include "dpatch/mesh.hpp"

#include "dpatch/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dpatch {

namespace {

constexpr double geometry_tol = 1e-12;

std::string patch_label(std::size_t j) { return "patch " + std::to_string(j); }

} // namespace

Patch::Patch(double centre, int n, double dx, std::optional<ShockOffsets> shock)
    : centre_(centre), n_(n), dx_(dx), shock_(shock) {
    if (n < 2) throw ConfigError("patch: need n >= 2 (at least 5 micro points)");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("patch: micro spacing must be positive");
    if (!std::isfinite(centre)) throw ConfigError("patch: centre must be finite");
    if (shock_) {
        const int width = 2 * n;
        if (shock_->left_steps <= 0 || shock_->left_steps >= width ||
            shock_->right_steps <= 0 || shock_->right_steps >= width)
            throw ConfigError("double patch: shock nodes must be strictly interior");
        if (shock_left_index() >= shock_right_index())
            throw ConfigError("double patch: left shock node must lie left of the right one");
    }
}

Patch Patch::standard(double centre, double width, int points) {
    if (points < 5 || points % 2 == 0)
        throw ConfigError("patch: micro point count must be odd and >= 5, got " +
                          std::to_string(points));
    if (!(width > 0.0)) throw ConfigError("patch: width must be positive");
    return Patch(centre, (points - 1) / 2, width / (points - 1));
}

Patch Patch::double_patch(double centre, double width, int points, ShockOffsets offsets) {
    auto p = standard(centre, width, points);
    return Patch(p.centre(), p.n(), p.dx(), offsets);
}

int Patch::shock_left_index() const {
    if (!shock_) throw ConfigError("patch: not a double patch");
    return -n_ + shock_->left_steps;
}

int Patch::shock_right_index() const {
    if (!shock_) throw ConfigError("patch: not a double patch");
    return n_ - shock_->right_steps;
}

std::string_view to_string(NodeRole role) noexcept {
    switch (role) {
    case NodeRole::centre: return "centre";
    case NodeRole::shock_left: return "shock_left";
    case NodeRole::shock_right: return "shock_right";
    }
    return "centre";
}

NodeRole parse_node_role(std::string_view name) {
    if (name == "centre") return NodeRole::centre;
    if (name == "shock_left") return NodeRole::shock_left;
    if (name == "shock_right") return NodeRole::shock_right;
    throw ConfigError("unknown node role '" + std::string(name) + "'");
}

PatchLayout::PatchLayout(double x_lo, double x_hi, std::vector<Patch> patches, int gamma)
    : x_lo_(x_lo), x_hi_(x_hi), patches_(std::move(patches)), gamma_(gamma) {
    if (!(x_lo < x_hi)) throw ConfigError("layout: domain must satisfy x_lo < x_hi");
    if (gamma < 1) throw ConfigError("layout: coupling order gamma must be >= 1");
    if (patches_.empty()) throw ConfigError("layout: at least one patch is required");

    for (std::size_t j = 0; j < patches_.size(); ++j) {
        const auto& p = patches_[j];
        if (p.left_edge() < x_lo_ - geometry_tol || p.right_edge() > x_hi_ + geometry_tol)
            throw ConfigError("layout: " + patch_label(j) + " extends outside the domain");
        if (j > 0) {
            const auto& q = patches_[j - 1];
            if (!(q.centre() < p.centre()))
                throw ConfigError("layout: patches must be sorted by centre (" + patch_label(j) + ")");
            if (q.right_edge() > p.left_edge() + geometry_tol)
                throw ConfigError("layout: " + patch_label(j - 1) + " overlaps " + patch_label(j));
        }
        if (p.is_double()) {
            if (double_index_)
                throw ConfigError("layout: at most one double patch is supported");
            double_index_ = j;
        }
    }
    if (double_index_ && (*double_index_ == 0 || *double_index_ + 1 == patches_.size()))
        throw ConfigError("layout: the double patch needs a standard patch on each side");

    for (std::size_t j = 0; j < patches_.size(); ++j) {
        const auto& p = patches_[j];
        if (p.is_double()) {
            nodes_.push_back({p.point(p.shock_left_index()), NodeRole::shock_left, j,
                              p.shock_left_index()});
            nodes_.push_back({p.point(p.shock_right_index()), NodeRole::shock_right, j,
                              p.shock_right_index()});
        } else {
            nodes_.push_back({p.centre(), NodeRole::centre, j, 0});
        }
    }
}

std::size_t PatchLayout::total_points() const noexcept {
    std::size_t total = 0;
    for (const auto& p : patches_) total += static_cast<std::size_t>(p.point_count());
    return total;
}

double PatchLayout::simulated_fraction() const noexcept {
    double covered = 0.0;
    for (const auto& p : patches_) covered += 2.0 * p.half_width();
    return covered / (x_hi_ - x_lo_);
}

PatchLayout PatchLayout::without_double_patch() const {
    std::vector<Patch> plain;
    plain.reserve(patches_.size());
    for (const auto& p : patches_) plain.emplace_back(p.centre(), p.n(), p.dx());
    return PatchLayout(x_lo_, x_hi_, std::move(plain), gamma_);
}

PatchLayout PatchLayout::with_gamma(int gamma) const {
    return PatchLayout(x_lo_, x_hi_, patches_, gamma);
}

std::vector<MacroNode> macro_nodes(const PatchLayout& layout) { return layout.macro_nodes(); }

std::vector<double> equispaced_between(double a, double b, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double step = (b - a) / (count + 1);
    for (int k = 1; k <= count; ++k) out.push_back(a + step * k);
    return out;
}

PatchLayout archetype_layout(ArchetypeId id) {
    using std::numbers::pi;

    struct Config {
        double double_width;
        int double_points;
        int per_side;
        double width;
        int points;
        int gamma;
    };
    // Even published point counts are rounded up to the symmetric 2n+1 mesh.
    Config c{};
    switch (id) {
    case ArchetypeId::M1: c = {0.05, 25, 2, 0.01, 5, 1}; break;
    case ArchetypeId::M2: c = {0.2, 101, 17, 0.01, 5, 3}; break;
    case ArchetypeId::M3: c = {0.6, 181, 2, 0.02, 5, 1}; break;
    case ArchetypeId::M4: c = {0.6, 181, 17, 0.02, 5, 3}; break;
    }

    // Few patches: anchored at thirds of each half-domain. Many patches:
    // equispaced between the boundary and the double-patch edge.
    const bool few = c.per_side == 2;
    const double inner = few ? 0.0 : 0.5 * c.double_width;
    const auto left = equispaced_between(-pi, -inner, c.per_side);

    std::vector<Patch> patches;
    for (double x : left) patches.push_back(Patch::standard(x, c.width, c.points));
    patches.push_back(Patch::double_patch(0.0, c.double_width, c.double_points));
    for (auto it = left.rbegin(); it != left.rend(); ++it)
        patches.push_back(Patch::standard(-*it, c.width, c.points));
    return PatchLayout(-pi, pi, std::move(patches), c.gamma);
}

double recommend_shock_offset(double eps, double H, int gamma) {
    if (!(eps > 0.0)) throw ConfigError("recommend_shock_offset: eps must be positive");
    if (!(H > 0.0)) throw ConfigError("recommend_shock_offset: H must be positive");
    if (gamma < 1) throw ConfigError("recommend_shock_offset: gamma must be >= 1");
    const double offset = (7.0 - 2.0 * gamma * std::log(H)) * eps;
    if (!(offset > 0.0))
        throw ConfigError("recommend_shock_offset: non-positive recommendation for H = " +
                          std::to_string(H));
    return offset;
}

} // namespace dpatch
