#include "sdot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sdot {

DiscreteSource discretize_source(const SourceMeasure& measure) {
    DiscreteSource src;
    size_t n = measure.grid.cells.size();
    src.points.reserve(n);
    src.masses.reserve(n);
    for (size_t j = 0; j < n; j++) {
        src.points.push_back(measure.grid.cells[j].center);
        src.masses.push_back(measure.cell_mass(static_cast<int>(j)));
    }
    return src;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost flow on the bipartite transport graph plus an artificial root that
// hosts the initial (Big-M) basis. Strong feasibility is maintained by always
// dropping the last blocking arc along the pivot cycle, counted from the apex
// in the direction of the entering arc.
class NetworkSimplex {
  public:
    NetworkSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                   const std::vector<double>& cost)
        : N_(static_cast<int>(supply.size())),
          K_(static_cast<int>(demand.size())),
          cost_(cost) {
        int nodes = N_ + K_ + 1;
        root_ = N_ + K_;
        balance_.assign(nodes, 0.0);
        for (int s = 0; s < N_; s++) balance_[s] = supply[s];
        for (int t = 0; t < K_; t++) balance_[N_ + t] = -demand[t];

        double cmax = 0;
        for (double c : cost_) cmax = std::max(cmax, std::abs(c));
        big_m_ = 1.0 + (N_ + K_) * (cmax + 1.0);
        tol_ = 1e-10 * (1.0 + cmax);

        int arcs = N_ * K_ + N_ + K_;
        tail_.resize(arcs);
        head_.resize(arcs);
        arc_cost_.resize(arcs);
        for (int s = 0; s < N_; s++)
            for (int t = 0; t < K_; t++) {
                int a = s * K_ + t;
                tail_[a] = s;
                head_[a] = N_ + t;
                arc_cost_[a] = cost_[a];
            }
        for (int s = 0; s < N_; s++) {
            int a = N_ * K_ + s;
            tail_[a] = s;
            head_[a] = root_;
            arc_cost_[a] = big_m_;
        }
        for (int t = 0; t < K_; t++) {
            int a = N_ * K_ + N_ + t;
            tail_[a] = root_;
            head_[a] = N_ + t;
            arc_cost_[a] = big_m_;
        }

        basic_.assign(arcs, false);
        flow_.assign(arcs, 0.0);
        adj_.assign(nodes, {});
        for (int s = 0; s < N_; s++) {
            int a = N_ * K_ + s;
            basic_[a] = true;
            flow_[a] = supply[s];
            adj_[s].push_back(a);
            adj_[root_].push_back(a);
        }
        for (int t = 0; t < K_; t++) {
            int a = N_ * K_ + N_ + t;
            basic_[a] = true;
            flow_[a] = demand[t];
            adj_[N_ + t].push_back(a);
            adj_[root_].push_back(a);
        }
        parent_.assign(nodes, -1);
        parent_arc_.assign(nodes, -1);
        depth_.assign(nodes, 0);
        pi_.assign(nodes, 0.0);
        order_.reserve(nodes);
        rebuild();
    }

    void run() {
        long long cap = 200LL * (N_ + K_) + 1000;
        int cursor = 0;
        for (long long it = 0; it < cap; it++) {
            int e = find_entering(cursor);
            if (e < 0) {
                finalize();
                return;
            }
            pivot(e);
        }
        throw OracleError("network simplex exceeded its pivot cap");
    }

    const std::vector<double>& flows() const { return flow_; }
    const std::vector<double>& potentials() const { return pi_; }
    double big_m() const { return big_m_; }

  private:
    void rebuild() {
        order_.clear();
        order_.push_back(root_);
        parent_[root_] = -1;
        parent_arc_[root_] = -1;
        depth_[root_] = 0;
        pi_[root_] = 0.0;
        std::vector<bool> seen(balance_.size(), false);
        seen[root_] = true;
        for (size_t q = 0; q < order_.size(); q++) {
            int v = order_[q];
            for (int a : adj_[v]) {
                int other = tail_[a] == v ? head_[a] : tail_[a];
                if (seen[other]) continue;
                seen[other] = true;
                parent_[other] = v;
                parent_arc_[other] = a;
                depth_[other] = depth_[v] + 1;
                // Basic arcs have zero reduced cost c - pi[tail] + pi[head].
                if (tail_[a] == other)
                    pi_[other] = arc_cost_[a] + pi_[v];
                else
                    pi_[other] = pi_[v] - arc_cost_[a];
                order_.push_back(other);
            }
        }
        if (order_.size() != balance_.size())
            throw OracleError("internal: basis does not span the network");
    }

    double reduced(int a) const { return arc_cost_[a] - pi_[tail_[a]] + pi_[head_[a]]; }

    int find_entering(int& cursor) {
        int total = N_ * K_;
        int block = std::max(64, total / 16);
        int scanned = 0;
        while (scanned < total) {
            int best = -1;
            double best_r = -tol_;
            int hi = std::min(block, total - scanned);
            for (int k = 0; k < hi; k++) {
                int a = cursor;
                cursor = cursor + 1 == total ? 0 : cursor + 1;
                if (basic_[a]) continue;
                double r = reduced(a);
                if (r < best_r) {
                    best_r = r;
                    best = a;
                }
            }
            scanned += hi;
            if (best >= 0) return best;
        }
        return -1;
    }

    struct Step {
        int arc;
        bool forward;  // oriented along the cycle direction
    };

    void pivot(int e) {
        int u = tail_[e], w = head_[e];
        int x = u, y = w;
        while (depth_[x] > depth_[y]) x = parent_[x];
        while (depth_[y] > depth_[x]) y = parent_[y];
        while (x != y) {
            x = parent_[x];
            y = parent_[y];
        }
        int apex = x;

        // Cycle in entering direction: apex -> u -> (e) -> w -> apex.
        cycle_.clear();
        size_t ustart = cycle_.size();
        for (int v = u; v != apex; v = parent_[v])
            cycle_.push_back({parent_arc_[v], tail_[parent_arc_[v]] == parent_[v]});
        std::reverse(cycle_.begin() + ustart, cycle_.end());
        cycle_.push_back({e, true});
        for (int v = w; v != apex; v = parent_[v])
            cycle_.push_back({parent_arc_[v], tail_[parent_arc_[v]] == v});

        double theta = kInf;
        int leave = -1;
        for (const Step& st : cycle_) {
            if (st.forward) continue;
            if (flow_[st.arc] <= theta) {  // last attaining block wins
                theta = flow_[st.arc];
                leave = st.arc;
            }
        }
        if (leave < 0) throw OracleError("internal: unbounded pivot cycle");

        for (const Step& st : cycle_) flow_[st.arc] += st.forward ? theta : -theta;
        basic_[e] = true;
        basic_[leave] = false;
        flow_[leave] = 0.0;
        detach(adj_[tail_[leave]], leave);
        detach(adj_[head_[leave]], leave);
        adj_[tail_[e]].push_back(e);
        adj_[head_[e]].push_back(e);
        rebuild();
    }

    static void detach(std::vector<int>& list, int arc) {
        list.erase(std::find(list.begin(), list.end(), arc));
    }

    // Recompute basic flows exactly from subtree balances (deepest first).
    void finalize() {
        std::vector<double> acc = balance_;
        for (size_t q = order_.size(); q-- > 1;) {
            int v = order_[q];
            int a = parent_arc_[v];
            double f = tail_[a] == v ? acc[v] : -acc[v];
            if (f < -1e-9) throw OracleError("internal: negative basic flow after finalize");
            flow_[a] = std::max(f, 0.0);
            acc[parent_[v]] += acc[v];
        }
        for (size_t a = 0; a < flow_.size(); a++)
            if (!basic_[a]) flow_[a] = 0.0;
    }

    int N_, K_, root_;
    std::vector<double> cost_;
    std::vector<double> balance_;
    std::vector<int> tail_, head_;
    std::vector<double> arc_cost_;
    std::vector<bool> basic_;
    std::vector<double> flow_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_, parent_arc_, depth_, order_;
    std::vector<double> pi_;
    std::vector<Step> cycle_;
    double big_m_ = 0, tol_ = 0;
};

std::vector<double> transport_costs(const CostModel& cost, const DiscreteSource& source,
                                    const TargetSpec& targets) {
    int N = static_cast<int>(source.points.size());
    int K = targets.K();
    std::vector<double> c(static_cast<size_t>(N) * K);
    for (int s = 0; s < N; s++)
        for (int t = 0; t < K; t++)
            c[static_cast<size_t>(s) * K + t] = cost.evaluate(source.points[s], targets.points[t]);
    return c;
}

void check_inputs(const DiscreteSource& source, const TargetSpec& targets) {
    validate_targets(targets);
    if (source.points.empty() || source.points.size() != source.masses.size())
        throw OracleError("discrete source must have matching nonempty points and masses");
    for (double m : source.masses)
        if (!(m > 0)) throw OracleError("atom masses must be positive");
    long long pairs = static_cast<long long>(source.points.size()) * targets.K();
    if (pairs > 1000000)
        throw OracleError("transport LP capped at 1000000 source-target pairs, got " +
                          std::to_string(pairs) + "; use at most " +
                          std::to_string(1000000 / targets.K()) + " atoms for " +
                          std::to_string(targets.K()) + " targets");
}

void certify(const DiscretePlan& plan, const std::vector<double>& cost,
             const DiscreteSource& source, const std::vector<double>& demand) {
    int N = plan.sources, K = plan.targets;
    std::vector<double> row(N, 0.0), col(K, 0.0);
    for (const auto& e : plan.entries) {
        if (e.mass < -1e-12) throw OracleError("plan certification failed: negative flow");
        row[e.source] += e.mass;
        col[e.target] += e.mass;
    }
    for (int s = 0; s < N; s++)
        if (std::abs(row[s] - source.masses[s]) > 1e-10)
            throw OracleError("plan certification failed: source marginal mismatch");
    for (int t = 0; t < K; t++)
        if (std::abs(col[t] - demand[t]) > 1e-10)
            throw OracleError("plan certification failed: target marginal mismatch");
    if (!plan.potential_source.empty()) {
        for (int s = 0; s < N; s++)
            for (int t = 0; t < K; t++) {
                double r = cost[static_cast<size_t>(s) * K + t] - plan.potential_source[s] -
                           plan.potential_target[t];
                if (r < -1e-9)
                    throw OracleError("plan certification failed: negative reduced cost");
            }
        for (const auto& e : plan.entries) {
            double r = cost[static_cast<size_t>(e.source) * K + e.target] -
                       plan.potential_source[e.source] - plan.potential_target[e.target];
            if (std::abs(r) > 1e-9 && e.mass > 1e-12)
                throw OracleError("plan certification failed: complementary slackness");
        }
    }
}

}  // namespace

DiscretePlan solve_exact(const CostModel& cost, const DiscreteSource& source,
                         const TargetSpec& targets) {
    check_inputs(source, targets);
    int N = static_cast<int>(source.points.size());
    int K = targets.K();
    std::vector<double> c = transport_costs(cost, source, targets);

    // Balance demands against the atomized supply (rounding-level fixup).
    std::vector<double> demand = targets.masses;
    double sa = std::accumulate(source.masses.begin(), source.masses.end(), 0.0);
    double sd = std::accumulate(demand.begin(), demand.end(), 0.0);
    int imax = static_cast<int>(std::max_element(demand.begin(), demand.end()) - demand.begin());
    demand[imax] += sa - sd;

    DiscretePlan plan;
    plan.sources = N;
    plan.targets = K;

    if (K == 1) {
        plan.potential_source.assign(N, 0.0);
        plan.potential_target.assign(1, 0.0);
        double tot = 0;
        for (int s = 0; s < N; s++) {
            plan.entries.push_back({s, 0, source.masses[s]});
            tot += source.masses[s] * c[s];
            plan.potential_source[s] = c[s];
        }
        plan.total_cost = tot;
        certify(plan, c, source, demand);
        return plan;
    }

    NetworkSimplex simplex(source.masses, demand, c);
    simplex.run();
    const std::vector<double>& flow = simplex.flows();
    const std::vector<double>& pi = simplex.potentials();

    for (int s = 0; s < N; s++) {
        if (std::abs(flow[static_cast<size_t>(N) * K + s]) > 1e-10)
            throw OracleError("network simplex left flow on an artificial arc");
    }
    for (int t = 0; t < K; t++)
        if (std::abs(flow[static_cast<size_t>(N) * K + N + t]) > 1e-10)
            throw OracleError("network simplex left flow on an artificial arc");

    double tot = 0;
    for (int s = 0; s < N; s++)
        for (int t = 0; t < K; t++) {
            double f = flow[static_cast<size_t>(s) * K + t];
            if (f > 1e-15) {
                plan.entries.push_back({s, t, f});
                tot += f * c[static_cast<size_t>(s) * K + t];
            }
        }
    plan.total_cost = tot;
    plan.potential_source.resize(N);
    plan.potential_target.resize(K);
    for (int s = 0; s < N; s++) plan.potential_source[s] = pi[s];
    for (int t = 0; t < K; t++) plan.potential_target[t] = -pi[N + t];
    certify(plan, c, source, demand);
    return plan;
}

DiscretePlan solve_bruteforce(const CostModel& cost, const DiscreteSource& source,
                              const TargetSpec& targets) {
    check_inputs(source, targets);
    int N = static_cast<int>(source.points.size());
    int K = targets.K();
    if (N * K > 64) throw OracleError("brute force limited to N * K <= 64");
    if (K > 8) throw OracleError("brute force limited to K <= 8");
    double unit = 1.0 / N;
    for (double m : source.masses)
        if (std::abs(m - unit) > 1e-9 * unit)
            throw OracleError("brute force requires equal atom masses 1/N");
    std::vector<int> counts(K);
    int total = 0;
    for (int t = 0; t < K; t++) {
        double scaled = targets.masses[t] * N;
        counts[t] = static_cast<int>(std::llround(scaled));
        if (std::abs(scaled - counts[t]) > 1e-6)
            throw OracleError("brute force requires demands that are multiples of 1/N");
        total += counts[t];
    }
    if (total != N) throw OracleError("brute force demands do not add up to the supply");

    std::vector<double> c = transport_costs(cost, source, targets);
    std::vector<int> stride(K);
    int states = 1;
    for (int t = 0; t < K; t++) {
        stride[t] = states;
        states *= counts[t] + 1;
    }
    // dp[j][state]: cheapest assignment of atoms j..N-1 given remaining counts.
    std::vector<std::vector<double>> dp(N + 1, std::vector<double>(states, kInf));
    std::vector<std::vector<int>> choice(N, std::vector<int>(states, -1));
    dp[N][0] = 0.0;
    for (int j = N - 1; j >= 0; j--) {
        for (int s = 0; s < states; s++) {
            // Decode digit per target; prune states whose total is wrong.
            int sum = 0;
            std::array<int, 8> digit{};
            for (int t = 0; t < K; t++) {
                digit[t] = (s / stride[t]) % (counts[t] + 1);
                sum += digit[t];
            }
            if (sum != N - j) continue;
            for (int t = 0; t < K; t++) {
                if (digit[t] == 0) continue;
                double v = c[static_cast<size_t>(j) * K + t] + dp[j + 1][s - stride[t]];
                if (v < dp[j][s]) {
                    dp[j][s] = v;
                    choice[j][s] = t;
                }
            }
        }
    }
    int full = 0;
    for (int t = 0; t < K; t++) full += counts[t] * stride[t];
    if (!(dp[0][full] < kInf)) throw OracleError("brute force found no feasible assignment");

    DiscretePlan plan;
    plan.sources = N;
    plan.targets = K;
    int s = full;
    double tot = 0;
    for (int j = 0; j < N; j++) {
        int t = choice[j][s];
        plan.entries.push_back({j, t, unit});
        tot += unit * c[static_cast<size_t>(j) * K + t];
        s -= stride[t];
    }
    plan.total_cost = tot;
    return plan;
}

namespace {

std::vector<int> dominant_targets(const DiscretePlan& plan) {
    std::vector<int> dom(plan.sources, -1);
    std::vector<double> best(plan.sources, -1.0);
    for (const auto& e : plan.entries)
        if (e.mass > best[e.source]) {
            best[e.source] = e.mass;
            dom[e.source] = e.target;
        }
    return dom;
}

}  // namespace

MonotonicityReport check_c_monotonicity(const DiscretePlan& plan, const CostModel& cost,
                                        const DiscreteSource& source, const TargetSpec& targets,
                                        int pair_samples, Rng& rng) {
    std::vector<int> dom = dominant_targets(plan);
    MonotonicityReport rep;
    int attempts = 0;
    while (rep.checked < pair_samples && attempts < 100 * pair_samples) {
        attempts++;
        int a = rng.uniform_int(plan.sources);
        int b = rng.uniform_int(plan.sources);
        int i = dom[a], j = dom[b];
        if (a == b || i < 0 || j < 0 || i == j) continue;
        double direct = cost.evaluate(source.points[a], targets.points[i]) +
                        cost.evaluate(source.points[b], targets.points[j]);
        double swapped = cost.evaluate(source.points[a], targets.points[j]) +
                         cost.evaluate(source.points[b], targets.points[i]);
        rep.checked++;
        if (direct > swapped + 1e-9) rep.violations++;
    }
    return rep;
}

CompareReport compare_with_scheme(const DiscretePlan& plan, const PartitionResult& partition,
                                  const SourceMeasure& measure, const CostModel& cost,
                                  const TargetSpec& targets) {
    if (static_cast<size_t>(plan.sources) != partition.assignment.size() ||
        static_cast<size_t>(plan.sources) != measure.grid.cells.size())
        throw OracleError("compare: plan, partition and measure sizes do not match");

    CompareReport rep;
    rep.atoms = plan.sources;
    rep.lp_cost = plan.total_cost;

    double lip = 0;
    for (int j = 0; j < plan.sources; j++) {
        const Vec& x = measure.grid.cells[j].center;
        double mass = measure.cell_mass(j);
        rep.scheme_cost += mass * cost.evaluate(x, targets.points[partition.assignment[j]]);
        for (int t = 0; t < targets.K(); t++)
            lip = std::max(lip, norm(cost.grad_source(x, targets.points[t])));
    }
    rep.cost_gap = rep.scheme_cost - rep.lp_cost;
    rep.relative_gap = rep.cost_gap / std::max(std::abs(rep.lp_cost), 1e-300);
    rep.margin_band = 2.0 * lip * measure.grid.spacing();

    std::vector<int> dom = dominant_targets(plan);
    std::vector<int> entry_count(plan.sources, 0);
    for (const auto& e : plan.entries)
        if (e.mass > 1e-12) entry_count[e.source]++;
    for (int j = 0; j < plan.sources; j++) {
        if (entry_count[j] > 1) rep.split_atoms++;
        if (dom[j] != partition.assignment[j]) {
            rep.disagreeing++;
            rep.disagreement_mass += measure.cell_mass(j);
            rep.max_margin_disagreeing =
                std::max(rep.max_margin_disagreeing, partition.margins[j]);
        }
    }
    return rep;
}

}  // namespace sdot
