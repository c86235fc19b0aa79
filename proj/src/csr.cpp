#include "cmspress/csr.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace cmspress {

CsrGraph make_csr(const std::vector<std::vector<std::uint32_t>>& succ) {
  CsrGraph g;
  g.row_ptr.assign(succ.size() + 1, 0);
  for (std::size_t u = 0; u < succ.size(); ++u) g.row_ptr[u + 1] = g.row_ptr[u] + succ[u].size();
  g.cols.reserve(g.row_ptr.back());
  for (const auto& row : succ) g.cols.insert(g.cols.end(), row.begin(), row.end());
  return g;
}

CsrGraph transpose(CsrView g) {
  const std::size_t n = g.size();
  CsrGraph t;
  t.row_ptr.assign(n + 1, 0);
  for (auto v : g.cols) ++t.row_ptr[v + 1];
  for (std::size_t v = 0; v < n; ++v) t.row_ptr[v + 1] += t.row_ptr[v];
  t.cols.resize(g.cols.size());
  std::vector<std::size_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  // Rows are visited in increasing u, so each predecessor list comes out sorted.
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : g.row(u)) t.cols[fill[v]++] = static_cast<std::uint32_t>(u);
  return t;
}

Components strongly_connected_components(CsrView g) {
  const std::size_t n = g.size();
  constexpr auto unvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  Components out;
  out.component.assign(n, 0);
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, g.row_ptr[root]});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::uint32_t v = f.v;
      if (f.edge < g.row_ptr[v + 1]) {
        const std::uint32_t w = g.cols[f.edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, g.row_ptr[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component[w] = static_cast<std::uint32_t>(out.count);
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return out;
}

bool component_has_cycle(CsrView g, const Components& c, std::uint32_t id) {
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (c.component[u] != id) continue;
    for (auto v : g.row(u))
      if (c.component[v] == id) return true;
  }
  return false;
}

std::size_t component_period(CsrView g, const Components& c, std::uint32_t id) {
  const std::size_t n = g.size();
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> level(n, unset);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (c.component[u] == id) {
      level[u] = 0;
      queue.push_back(u);
      break;
    }
  }
  std::size_t period = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto u = queue[head];
    for (auto v : g.row(u)) {
      if (c.component[v] != id) continue;
      if (level[v] == unset) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        period = std::gcd(period, static_cast<std::size_t>(diff < 0 ? -diff : diff));
      }
    }
  }
  return period;
}

}  // namespace cmspress
