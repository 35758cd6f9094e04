#include "uvplan/criticality.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace uvplan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double edge_weight(const Edge &e, WalkWeighting weighting) {
    return weighting == WalkWeighting::Uniform ? 1.0 : 1.0 / e.length;
}

bool kept(std::span<const char> keep, EdgeId e) { return keep.empty() || keep[e]; }

bool connected(const RoadNetwork &network, std::span<const char> keep) {
    const std::size_t n = network.vertex_count();
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (const auto &adj : network.neighbors(v)) {
            if (!kept(keep, adj.edge) || seen[adj.neighbor]) continue;
            seen[adj.neighbor] = 1;
            ++count;
            stack.push_back(adj.neighbor);
        }
    }
    return count == n;
}

Eigen::MatrixXd laplacian(const RoadNetwork &network, WalkWeighting weighting) {
    const auto n = static_cast<Eigen::Index>(network.vertex_count());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto &e : network.edges()) {
        const double w = edge_weight(e, weighting);
        lap(e.u, e.u) += w;
        lap(e.v, e.v) += w;
        lap(e.u, e.v) -= w;
        lap(e.v, e.u) -= w;
    }
    return lap;
}

CriticalityTable dense_criticalities(const RoadNetwork &network, WalkWeighting weighting,
                                     const std::vector<char> &bridges) {
    std::vector<double> values(network.edge_count(), kInf);
    std::vector<char> keep(network.edge_count(), 1);
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        if (bridges[e]) continue;
        keep[e] = 0;
        values[e] = kemeny_constant(network, keep, weighting);
        keep[e] = 1;
    }
    return CriticalityTable(std::move(values));
}

// With Gamma = L^+ and degree vector d (S = sum d), the Kemeny constant of a
// reversible walk is sum_ij d_i d_j R_ij / (2S) = sum_i d_i Gamma_ii - d'Gamma d / S.
// Removing edge (a, b) of weight w is a rank-one change of L, so Gamma, d and
// S of the reduced graph follow from Sherman-Morrison in O(n).
CriticalityTable rank_one_criticalities(const RoadNetwork &network, WalkWeighting weighting,
                                        const std::vector<char> &bridges) {
    const auto n = static_cast<Eigen::Index>(network.vertex_count());
    const Eigen::MatrixXd lap = laplacian(network, weighting);
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd shifted = lap.array() + inv_n;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) throw GraphError("Laplacian factorization failed");
    Eigen::MatrixXd gamma = llt.solve(Eigen::MatrixXd::Identity(n, n));
    gamma.array() -= inv_n;

    Eigen::VectorXd d = lap.diagonal();
    const double total = d.sum();
    const Eigen::VectorXd g = gamma * d;
    const Eigen::VectorXd diag = gamma.diagonal();
    const double a1 = d.dot(diag);
    const double q = d.dot(g);

    std::vector<double> values(network.edge_count(), kInf);
    Eigen::VectorXd u(n);
    for (EdgeId id = 0; id < network.edge_count(); ++id) {
        if (bridges[id]) continue;
        const auto &e = network.edge(id);
        const Eigen::Index a = e.u;
        const Eigen::Index b = e.v;
        const double w = edge_weight(e, weighting);
        const double resistance = gamma(a, a) + gamma(b, b) - 2.0 * gamma(a, b);
        const double c = w / (1.0 - w * resistance);

        u = gamma.col(a) - gamma.col(b);
        const double du2 = (d.array() * u.array().square()).sum() - w * (u(a) * u(a) + u(b) * u(b));
        const double ud = (g(a) - g(b)) - w * (u(a) + u(b));

        const double total2 = total - 2.0 * w;
        const double a1_2 = a1 - w * (diag(a) + diag(b)) + c * du2;
        const double q2 = q - 2.0 * w * (g(a) + g(b)) + w * w * (diag(a) + diag(b) + 2.0 * gamma(a, b)) + c * ud * ud;
        values[id] = a1_2 - q2 / total2;
    }
    return CriticalityTable(std::move(values));
}

const char *weighting_name(WalkWeighting weighting) {
    return weighting == WalkWeighting::Uniform ? "uniform" : "inverse-length";
}

}  // namespace

double kemeny_constant(const RoadNetwork &network, std::span<const char> keep, WalkWeighting weighting) {
    const auto n = static_cast<Eigen::Index>(network.vertex_count());
    if (n < 2) throw GraphError("Kemeny constant needs at least two vertices");
    if (!keep.empty() && keep.size() != network.edge_count()) throw std::invalid_argument("edge mask size mismatch");
    if (!connected(network, keep)) throw GraphError("Kemeny constant of a disconnected graph");

    Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
    for (EdgeId id = 0; id < network.edge_count(); ++id) {
        if (!kept(keep, id)) continue;
        const auto &e = network.edge(id);
        const double w = edge_weight(e, weighting);
        transition(e.u, e.v) += w;
        transition(e.v, e.u) += w;
    }
    const Eigen::VectorXd degree = transition.rowwise().sum();
    const Eigen::VectorXd stationary = degree / degree.sum();
    for (Eigen::Index i = 0; i < n; ++i) transition.row(i) /= degree(i);

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - transition;
    system.rowwise() += stationary.transpose();
    const Eigen::MatrixXd fundamental = system.partialPivLu().inverse();
    return fundamental.trace() - 1.0;
}

std::vector<char> find_bridges(const RoadNetwork &network) {
    const std::size_t n = network.vertex_count();
    std::vector<char> bridge(network.edge_count(), 0);
    std::vector<std::size_t> order(n, 0), low(n, 0);
    std::vector<char> visited(n, 0);
    std::size_t timer = 0;

    struct Frame {
        VertexId vertex;
        EdgeId via;
        std::size_t next;
    };
    constexpr EdgeId kRoot = std::numeric_limits<EdgeId>::max();
    for (VertexId root = 0; root < n; ++root) {
        if (visited[root]) continue;
        std::vector<Frame> stack{{root, kRoot, 0}};
        visited[root] = 1;
        order[root] = low[root] = timer++;
        while (!stack.empty()) {
            auto &top = stack.back();
            const auto adj = network.neighbors(top.vertex);
            if (top.next < adj.size()) {
                const auto next = adj[top.next++];
                if (next.edge == top.via) continue;
                if (visited[next.neighbor]) {
                    low[top.vertex] = std::min(low[top.vertex], order[next.neighbor]);
                } else {
                    visited[next.neighbor] = 1;
                    order[next.neighbor] = low[next.neighbor] = timer++;
                    stack.push_back({next.neighbor, next.edge, 0});
                }
                continue;
            }
            const Frame done = top;
            stack.pop_back();
            if (!stack.empty()) {
                auto &parent = stack.back();
                low[parent.vertex] = std::min(low[parent.vertex], low[done.vertex]);
                if (low[done.vertex] > order[parent.vertex]) bridge[done.via] = 1;
            }
        }
    }
    return bridge;
}

CriticalityTable edge_criticalities(const RoadNetwork &network, CriticalityOptions options) {
    if (network.vertex_count() < 2) throw GraphError("Kemeny constant needs at least two vertices");
    const auto bridges = find_bridges(network);
    if (options.method == CriticalityMethod::DenseSolve) return dense_criticalities(network, options.weighting, bridges);
    return rank_one_criticalities(network, options.weighting, bridges);
}

std::optional<EdgeId> most_critical_uninspected(const CriticalityTable &table, const Path &path,
                                                const BeliefGraph &belief) {
    std::optional<EdgeId> best;
    double best_value = -kInf;
    for (const EdgeId e : path.edges(belief.network())) {
        if (!belief.uninspected(e)) continue;
        if (!best || table[e] > best_value) {
            best = e;
            best_value = table[e];
        }
    }
    return best;
}

void save_criticality_cache(const std::string &path, const RoadNetwork &network, const CriticalityTable &table,
                            WalkWeighting weighting) {
    nlohmann::json doc;
    std::ostringstream hash;
    hash << std::hex << network.content_hash();
    doc["graph_hash"] = hash.str();
    doc["weighting"] = weighting_name(weighting);
    auto &values = doc["values"] = nlohmann::json::array();
    for (double v : table.values()) {
        if (std::isinf(v)) {
            values.push_back(nullptr);
        } else {
            values.push_back(v);
        }
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write criticality cache " + path);
    out << doc.dump() << '\n';
}

std::optional<CriticalityTable> load_criticality_cache(const std::string &path, const RoadNetwork &network,
                                                       WalkWeighting weighting) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        std::ostringstream hash;
        hash << std::hex << network.content_hash();
        if (doc.at("graph_hash").get<std::string>() != hash.str()) return std::nullopt;
        if (doc.at("weighting").get<std::string>() != weighting_name(weighting)) return std::nullopt;
        const auto &values = doc.at("values");
        if (values.size() != network.edge_count()) return std::nullopt;
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto &v : values) out.push_back(v.is_null() ? kInf : v.get<double>());
        return CriticalityTable(std::move(out));
    } catch (const nlohmann::json::exception &) {
        return std::nullopt;
    }
}

}  // namespace uvplan
