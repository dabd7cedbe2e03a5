#include "foliation/transport.hpp"

#include "foliation/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace foliation {

namespace {

void check_exponent(double p) {
    if (!std::isfinite(p) || p < 1.0) throw InvalidInput("exponent p must be finite and >= 1");
}

double raise(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

double root(double c, double p) {
    c = std::max(c, 0.0);
    if (p == 1.0) return c;
    if (p == 2.0) return std::sqrt(c);
    return std::pow(c, 1.0 / p);
}

/// Supplies and demands with equal totals.
struct Marginals {
    std::vector<double> supply;
    std::vector<double> demand;
};

Marginals balanced_marginals(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    const double gap = mu.mass() - nu.mass();
    if (std::abs(gap) > kMassBalanceTolerance)
        throw InvalidInput("unbalanced masses: " + format_real(mu.mass()) + " vs " +
                           format_real(nu.mass()));
    Marginals m{mu.weights(), nu.weights()};
    if (gap > 0.0) {
        const double scale = mu.mass() / nu.mass();
        for (double& w : m.demand) w *= scale;
    } else if (gap < 0.0) {
        const double scale = nu.mass() / mu.mass();
        for (double& w : m.supply) w *= scale;
    }
    return m;
}

/// Primal transportation simplex over spanning-tree bases.
///
/// Nodes 0..rows-1 are sources, rows..rows+cols-1 are sinks. Every basis holds
/// exactly rows+cols-1 cells; zero-flow basic cells stay in the basis and are
/// tracked by `in_basis_`.
class TransportSimplex {
public:
    TransportSimplex(const Marginals& marginals, std::vector<double> cost, std::size_t rows,
                     std::size_t cols)
        : rows_(rows), cols_(cols), nodes_(rows + cols), cost_(std::move(cost)),
          in_basis_(rows * cols, 0), adjacency_(nodes_), potential_(nodes_),
          parent_edge_(nodes_), depth_(nodes_) {
        north_west_corner(marginals);
        double largest = 0.0;
        for (double c : cost_) largest = std::max(largest, c);
        reduced_cost_tolerance_ = 1e-12 * largest;
        block_size_ = std::max<std::size_t>(
            64, static_cast<std::size_t>(std::sqrt(static_cast<double>(rows * cols))));
    }

    void solve() {
        const std::size_t budget = 1000 + 50 * rows_ * cols_ + 50 * nodes_ * nodes_;
        std::size_t degenerate_run = 0;
        const std::size_t bland_threshold = 20 * nodes_;
        for (std::size_t iter = 0; iter < budget; ++iter) {
            compute_potentials();
            const std::size_t entering = bland_ ? first_improving_cell() : block_search_cell();
            if (entering == kNone) return;
            const double step = pivot(entering);
            degenerate_run = step == 0.0 ? degenerate_run + 1 : 0;
            if (degenerate_run > bland_threshold) bland_ = true;
        }
        throw NumericalFailure("transport simplex exceeded its pivot budget");
    }

    TransportPlan plan() const {
        TransportPlan plan;
        plan.rows = rows_;
        plan.cols = cols_;
        for (const Edge& e : basis_) {
            if (e.flow > 0.0) {
                plan.entries.push_back({e.row, e.col, e.flow});
                plan.cost += e.flow * cost_[e.row * cols_ + e.col];
            }
        }
        std::sort(plan.entries.begin(), plan.entries.end(), [](const auto& a, const auto& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        return plan;
    }

    double cost() const {
        double total = 0.0;
        for (const Edge& e : basis_) total += e.flow * cost_[e.row * cols_ + e.col];
        return total;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    struct Edge {
        std::size_t row;
        std::size_t col;
        double flow;
    };

    std::size_t cell(const Edge& e) const { return e.row * cols_ + e.col; }
    std::size_t sink(std::size_t col) const { return rows_ + col; }

    std::size_t other_end(std::size_t edge, std::size_t node) const {
        const Edge& e = basis_[edge];
        return node == e.row ? sink(e.col) : e.row;
    }

    void add_edge(std::size_t row, std::size_t col, double flow) {
        const std::size_t k = basis_.size();
        basis_.push_back({row, col, flow});
        in_basis_[row * cols_ + col] = 1;
        adjacency_[row].push_back(k);
        adjacency_[sink(col)].push_back(k);
    }

    void north_west_corner(const Marginals& m) {
        basis_.reserve(nodes_ - 1);
        std::size_t i = 0, j = 0;
        double supply = m.supply[0], demand = m.demand[0];
        while (true) {
            const double flow = std::min(supply, demand);
            add_edge(i, j, flow);
            supply -= flow;
            demand -= flow;
            if (i + 1 == rows_ && j + 1 == cols_) break;
            const bool advance_row = j + 1 == cols_ || (i + 1 < rows_ && supply <= demand);
            if (advance_row) {
                supply = m.supply[++i];
            } else {
                demand = m.demand[++j];
            }
        }
    }

    void compute_potentials() {
        static constexpr std::size_t kRoot = 0;
        std::fill(depth_.begin(), depth_.end(), kNone);
        stack_.clear();
        stack_.push_back(kRoot);
        potential_[kRoot] = 0.0;
        depth_[kRoot] = 0;
        parent_edge_[kRoot] = kNone;
        while (!stack_.empty()) {
            const std::size_t node = stack_.back();
            stack_.pop_back();
            for (std::size_t edge : adjacency_[node]) {
                if (edge == parent_edge_[node]) continue;
                const std::size_t next = other_end(edge, node);
                const double c = cost_[cell(basis_[edge])];
                potential_[next] = c - potential_[node];
                depth_[next] = depth_[node] + 1;
                parent_edge_[next] = edge;
                stack_.push_back(next);
            }
        }
    }

    double reduced_cost(std::size_t c) const {
        const std::size_t i = c / cols_, j = c % cols_;
        return cost_[c] - potential_[i] - potential_[sink(j)];
    }

    std::size_t first_improving_cell() const {
        for (std::size_t c = 0; c < cost_.size(); ++c)
            if (!in_basis_[c] && reduced_cost(c) < -reduced_cost_tolerance_) return c;
        return kNone;
    }

    std::size_t block_search_cell() {
        const std::size_t total = cost_.size();
        std::size_t best = kNone;
        double best_value = -reduced_cost_tolerance_;
        std::size_t scanned_in_block = 0;
        for (std::size_t k = 0; k < total; ++k) {
            const std::size_t c = (cursor_ + k) % total;
            if (!in_basis_[c]) {
                const double r = reduced_cost(c);
                if (r < best_value) {
                    best_value = r;
                    best = c;
                }
            }
            if (++scanned_in_block == block_size_) {
                if (best != kNone) {
                    cursor_ = (c + 1) % total;
                    return best;
                }
                scanned_in_block = 0;
            }
        }
        return best;
    }

    /// Pushes flow around the cycle closed by `entering`; returns the step.
    double pivot(std::size_t entering) {
        const std::size_t row = entering / cols_, col = entering % cols_;
        std::size_t a = row, b = sink(col);
        up_from_source_.clear();
        up_from_sink_.clear();
        while (depth_[a] > depth_[b]) {
            up_from_source_.push_back(parent_edge_[a]);
            a = other_end(parent_edge_[a], a);
        }
        while (depth_[b] > depth_[a]) {
            up_from_sink_.push_back(parent_edge_[b]);
            b = other_end(parent_edge_[b], b);
        }
        while (a != b) {
            up_from_source_.push_back(parent_edge_[a]);
            a = other_end(parent_edge_[a], a);
            up_from_sink_.push_back(parent_edge_[b]);
            b = other_end(parent_edge_[b], b);
        }
        // Cycle order from the entering sink back to the entering source.
        cycle_.assign(up_from_sink_.begin(), up_from_sink_.end());
        cycle_.insert(cycle_.end(), up_from_source_.rbegin(), up_from_source_.rend());

        std::size_t leaving = kNone;
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cycle_.size(); k += 2) {
            const Edge& e = basis_[cycle_[k]];
            if (e.flow < step || (e.flow == step && cell(e) < cell(basis_[leaving]))) {
                step = e.flow;
                leaving = cycle_[k];
            }
        }
        for (std::size_t k = 0; k < cycle_.size(); ++k) {
            Edge& e = basis_[cycle_[k]];
            e.flow = (k % 2 == 0) ? e.flow - step : e.flow + step;
        }

        Edge& out = basis_[leaving];
        in_basis_[cell(out)] = 0;
        erase_from(adjacency_[out.row], leaving);
        erase_from(adjacency_[sink(out.col)], leaving);
        out = {row, col, step};
        in_basis_[entering] = 1;
        adjacency_[row].push_back(leaving);
        adjacency_[sink(col)].push_back(leaving);
        return step;
    }

    static void erase_from(std::vector<std::size_t>& list, std::size_t edge) {
        auto it = std::find(list.begin(), list.end(), edge);
        *it = list.back();
        list.pop_back();
    }

    std::size_t rows_, cols_, nodes_;
    std::vector<double> cost_;
    std::vector<Edge> basis_;
    std::vector<char> in_basis_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<double> potential_;
    std::vector<std::size_t> parent_edge_;
    std::vector<std::size_t> depth_;
    std::vector<std::size_t> stack_, up_from_source_, up_from_sink_, cycle_;
    double reduced_cost_tolerance_ = 0.0;
    std::size_t block_size_ = 64;
    std::size_t cursor_ = 0;
    bool bland_ = false;
};

std::vector<double> cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                                const Metric& metric) {
    std::vector<double> cost;
    cost.reserve(mu.size() * nu.size());
    for (const Atom& a : mu.atoms())
        for (const Atom& b : nu.atoms()) cost.push_back(raise(metric(a.location, b.location), p));
    return cost;
}

TransportSimplex solved(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                        const Metric& metric) {
    check_exponent(p);
    TransportSimplex simplex(balanced_marginals(mu, nu), cost_matrix(mu, nu, p, metric),
                             mu.size(), nu.size());
    simplex.solve();
    return simplex;
}

}  // namespace

WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                              const Metric& metric) {
    const TransportSimplex simplex = solved(mu, nu, p, metric);
    WassersteinResult result;
    result.plan = simplex.plan();
    result.value = root(result.plan.cost, p);
    return result;
}

double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            const Metric& metric) {
    return root(solved(mu, nu, p, metric).cost(), p);
}

namespace {

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
    std::vector<std::size_t> parent;
};

}  // namespace

double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                               const Metric& metric) {
    check_exponent(p);
    const std::size_t rows = mu.size(), cols = nu.size();
    if (rows > 3 || cols > 3) throw InvalidInput("brute force oracle handles at most 3x3");
    const Marginals m = balanced_marginals(mu, nu);
    const std::size_t cells = rows * cols;
    const std::size_t tree_size = rows + cols - 1;
    const double slack = 1e-12 * std::max(mu.mass(), nu.mass());

    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != tree_size) continue;
        DisjointSets sets(rows + cols);
        bool acyclic = true;
        std::vector<std::size_t> edges;
        for (std::size_t c = 0; c < cells && acyclic; ++c) {
            if (!(mask & (1u << c))) continue;
            edges.push_back(c);
            acyclic = sets.unite(c / cols, rows + c % cols);
        }
        if (!acyclic) continue;

        // Leaf elimination: a node with one open edge fixes that edge's flow.
        std::vector<double> residual(m.supply);
        residual.insert(residual.end(), m.demand.begin(), m.demand.end());
        std::vector<double> flow(edges.size(), 0.0);
        std::vector<char> open(edges.size(), 1);
        for (std::size_t solved = 0; solved < edges.size(); ++solved) {
            for (std::size_t node = 0; node < rows + cols; ++node) {
                std::size_t count = 0, last = 0;
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    const bool touches = node < rows ? edges[e] / cols == node
                                                     : edges[e] % cols == node - rows;
                    if (open[e] && touches) {
                        ++count;
                        last = e;
                    }
                }
                if (count != 1) continue;
                flow[last] = residual[node];
                open[last] = 0;
                residual[edges[last] / cols] -= flow[last];
                residual[rows + edges[last] % cols] -= flow[last];
                break;
            }
        }
        if (std::any_of(flow.begin(), flow.end(), [&](double f) { return f < -slack; })) continue;

        double total = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const std::size_t i = edges[e] / cols, j = edges[e] % cols;
            total += std::max(flow[e], 0.0) *
                     std::pow(metric(mu.atoms()[i].location, nu.atoms()[j].location), p);
        }
        best = std::min(best, total);
    }
    if (!std::isfinite(best)) throw NumericalFailure("no feasible spanning tree");
    return std::pow(std::max(best, 0.0), 1.0 / p);
}

double plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                 double p, const Metric& metric) {
    if (plan.rows != mu.size() || plan.cols != nu.size())
        throw InvalidInput("plan dimensions do not match the measures");
    double total = 0.0;
    for (const PlanEntry& e : plan.entries)
        total += e.flow * std::pow(metric(mu.atoms()[e.row].location, nu.atoms()[e.col].location), p);
    return total;
}

std::string format_plan_csv(const TransportPlan& plan) {
    std::string out = "i,j,flow\n";
    for (const PlanEntry& e : plan.entries)
        out += std::to_string(e.row) + ',' + std::to_string(e.col) + ',' + format_real(e.flow) + '\n';
    return out;
}

}  // namespace foliation
