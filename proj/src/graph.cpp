#include "dynbt/graph.hpp"

#include <algorithm>
#include <cmath>

#include "dynbt/data.hpp"

namespace dynbt {

namespace {

// Tarjan's SCC over the thresholded adjacency, iterative to keep the stack
// bounded for large team counts. Returns the SCC id per vertex and the count.
struct SccResult {
  std::vector<int> component;
  int count = 0;
};

SccResult tarjan_scc(const Eigen::MatrixXd& counts, double eps) {
  const int n = static_cast<int>(counts.rows());
  SccResult result;
  result.component.assign(n, -1);
  std::vector<int> index(n, -1);
  std::vector<int> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  stack.reserve(n);

  struct Frame {
    int vertex;
    int next_child;
  };
  std::vector<Frame> call_stack;
  int next_index = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call_stack.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const int v = frame.vertex;
      bool descended = false;
      while (frame.next_child < n) {
        const int w = frame.next_child++;
        if (w == v || !(counts(v, w) > eps)) continue;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          result.component[w] = result.count;
          if (w == v) break;
        }
        ++result.count;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const int parent = call_stack.back().vertex;
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
    }
  }
  return result;
}

}  // namespace

bool condition1_holds(const Eigen::MatrixXd& counts, double eps) {
  if (counts.rows() != counts.cols()) throw DomainError("matrix must be square");
  if (counts.rows() < 2) throw DomainError("need at least 2 teams");
  return tarjan_scc(counts, eps).count == 1;
}

bool condition1_holds(const CountMatrix& counts, double eps) {
  return condition1_holds(counts.matrix(), eps);
}

std::vector<int> connectivity_witness(const Eigen::MatrixXd& counts, double eps) {
  const SccResult scc = tarjan_scc(counts, eps);
  if (scc.count <= 1) return {};
  const int n = static_cast<int>(counts.rows());
  // A component without outgoing cross edges always exists; its vertex set
  // has no wins against the complement.
  std::vector<bool> has_out(scc.count, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && counts(i, j) > eps && scc.component[i] != scc.component[j]) {
        has_out[scc.component[i]] = true;
      }
    }
  }
  int sink = 0;
  while (sink < scc.count && has_out[sink]) ++sink;
  std::vector<int> witness;
  for (int i = 0; i < n; ++i) {
    if (scc.component[i] == sink) witness.push_back(i);
  }
  return witness;
}

double connectivity_probability_bound(int team_count, double games_per_pair,
                                      double p_min) {
  if (team_count < 2) throw DomainError("team_count must be >= 2");
  if (!(games_per_pair > 0.0)) throw DomainError("games_per_pair must be positive");
  if (!(p_min > 0.0 && p_min <= 1.0)) throw DomainError("p_min must lie in (0, 1]");
  const double n = static_cast<double>(team_count);
  const double bound = 1.0 - 4.0 * n * std::exp(-0.5 * n * games_per_pair * p_min);
  return std::max(0.0, bound);
}

double condition1_frequency(const Dataset& dataset, FrequencyMode mode) {
  const auto& times = dataset.distinct_times();
  if (times.empty()) throw EmptyDataError("dataset has no records");
  long holds = 0;
  for (double t : times) {
    if (condition1_holds(raw_count_matrix(dataset, t), 0.0)) ++holds;
  }
  if (mode == FrequencyMode::kAllTimes) {
    return holds == static_cast<long>(times.size()) ? 1.0 : 0.0;
  }
  return static_cast<double>(holds) / static_cast<double>(times.size());
}

}  // namespace dynbt
