#include "dpatch/coupling.hpp"

#include "dpatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace dpatch {

void MacroSample::validate() const {
    if (positions.size() != values.size() || positions.size() != roles.size())
        throw ConfigError("macro sample: positions, roles and values differ in length");
    for (std::size_t k = 0; k < positions.size(); ++k) {
        if (!std::isfinite(positions[k]) || !std::isfinite(values[k]))
            throw ConfigError("macro sample: non-finite entry at node " + std::to_string(k));
        if (k > 0 && !(positions[k - 1] < positions[k]))
            throw ConfigError("macro sample: positions must be strictly increasing");
    }
}

std::vector<double> lagrange_weights(std::span<const double> nodes, double target) {
    const std::size_t m = nodes.size();
    if (m < 2) throw ConfigError("lagrange_weights: degenerate stencil with fewer than two nodes");
    std::vector<double> w(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            if (k == i) continue;
            const double gap = nodes[i] - nodes[k];
            if (gap == 0.0)
                throw ConfigError("lagrange_weights: degenerate stencil with coincident nodes");
            w[i] *= (target - nodes[k]) / gap;
        }
    }
    return w;
}

namespace {

Stencil make_stencil(const std::vector<double>& anchors, std::size_t first, std::size_t last,
                     double target, std::size_t patch) {
    if (last <= first)
        throw ConfigError("coupling: patch " + std::to_string(patch) +
                          " has a stencil with fewer than two nodes");
    Stencil s;
    s.target = target;
    std::vector<double> xs;
    for (std::size_t k = first; k <= last; ++k) {
        s.nodes.push_back(k);
        xs.push_back(anchors[k]);
    }
    s.weights = lagrange_weights(xs, target);
    return s;
}

} // namespace

CouplingPlan::CouplingPlan(const PatchLayout& layout) {
    const auto& nodes = layout.macro_nodes();
    const auto& patches = layout.patches();
    const auto gamma = static_cast<std::size_t>(layout.gamma());

    anchors_.reserve(nodes.size() + 2);
    anchors_.push_back(layout.x_lo());
    for (const auto& n : nodes) anchors_.push_back(n.position);
    anchors_.push_back(layout.x_hi());
    const std::size_t last_anchor = anchors_.size() - 1;

    // Macro-domains: [0, split] and [split + 1, last_anchor] when a double
    // patch separates them, otherwise a single domain.
    std::size_t split = last_anchor;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (nodes[k].role == NodeRole::shock_left) split = k + 1;

    auto domain_of = [&](std::size_t anchor) {
        return anchor <= split ? std::pair<std::size_t, std::size_t>{0, split}
                               : std::pair<std::size_t, std::size_t>{split + 1, last_anchor};
    };
    auto clipped = [&](std::size_t centre, std::size_t lo, std::size_t hi) {
        const std::size_t first = centre >= lo + gamma ? centre - gamma : lo;
        const std::size_t last = std::min(hi, centre + gamma);
        return std::pair{first, last};
    };

    left_.reserve(patches.size());
    right_.reserve(patches.size());
    std::size_t anchor = 1;
    for (std::size_t j = 0; j < patches.size(); ++j) {
        const auto& p = patches[j];
        if (p.is_double()) {
            const std::size_t l = anchor, r = anchor + 1;
            const auto [llo, lhi] = domain_of(l);
            const auto [rlo, rhi] = domain_of(r);
            const auto lspan = clipped(l, llo, lhi);
            const auto rspan = clipped(r, rlo, rhi);
            left_.push_back(make_stencil(anchors_, lspan.first, l, p.left_edge(), j));
            right_.push_back(make_stencil(anchors_, r, rspan.second, p.right_edge(), j));
            anchor += 2;
        } else {
            const auto [lo, hi] = domain_of(anchor);
            const auto [first, last] = clipped(anchor, lo, hi);
            left_.push_back(make_stencil(anchors_, first, last, p.left_edge(), j));
            right_.push_back(make_stencil(anchors_, first, last, p.right_edge(), j));
            anchor += 1;
        }
    }
}

void CouplingPlan::apply(std::span<const double> macro_values, double bc_left, double bc_right,
                         std::span<EdgePair> out) const {
    if (macro_values.size() + 2 != anchors_.size())
        throw ConfigError("coupling: macro sample does not match the layout's node count");
    if (out.size() != left_.size())
        throw ConfigError("coupling: output span does not match the patch count");
    const std::size_t last = anchors_.size() - 1;
    auto value = [&](std::size_t k) {
        if (k == 0) return bc_left;
        if (k == last) return bc_right;
        return macro_values[k - 1];
    };
    auto eval = [&](const Stencil& s) {
        double acc = 0.0;
        for (std::size_t m = 0; m < s.nodes.size(); ++m) acc += s.weights[m] * value(s.nodes[m]);
        return acc;
    };
    for (std::size_t j = 0; j < left_.size(); ++j) out[j] = {eval(left_[j]), eval(right_[j])};
}

EdgeValues CouplingPlan::apply(std::span<const double> macro_values, double bc_left,
                               double bc_right) const {
    EdgeValues out(left_.size());
    apply(macro_values, bc_left, bc_right, out);
    return out;
}

void CouplingPlan::write_csv(std::ostream& os) const {
    os << "patch,side,target,node_position,weight\n";
    const auto old = os.precision(12);
    auto rows = [&](std::size_t j, const char* side, const Stencil& s) {
        for (std::size_t m = 0; m < s.nodes.size(); ++m)
            os << j << ',' << side << ',' << s.target << ',' << anchors_[s.nodes[m]] << ','
               << s.weights[m] << '\n';
    };
    for (std::size_t j = 0; j < left_.size(); ++j) {
        rows(j, "left", left_[j]);
        rows(j, "right", right_[j]);
    }
    os.precision(old);
}

EdgeValues compute_edge_values(const MacroSample& samples, const PatchLayout& layout,
                               double bc_left, double bc_right) {
    samples.validate();
    const auto& nodes = layout.macro_nodes();
    if (samples.positions.size() != nodes.size())
        throw ConfigError("coupling: sample count does not match the layout's macro nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (std::abs(samples.positions[k] - nodes[k].position) > 1e-12 ||
            samples.roles[k] != nodes[k].role)
            throw ConfigError("coupling: sample node " + std::to_string(k) +
                              " disagrees with the layout");
    return CouplingPlan(layout).apply(samples.values, bc_left, bc_right);
}

} // namespace dpatch
