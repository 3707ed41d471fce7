#include "specwig/nc_comb.hpp"

#include <algorithm>
#include <cmath>

#include "specwig/errors.hpp"

namespace specwig {

std::uint64_t catalan(int m) {
  if (m < 0) throw ConfigError("catalan needs m >= 0");
  std::vector<std::uint64_t> c(m + 1, 0);
  c[0] = 1;
  for (int i = 1; i <= m; ++i)
    for (int j = 0; j < i; ++j) c[i] += c[j] * c[i - 1 - j];
  return c[m];
}

namespace {

void rec_enumerate(std::vector<int>& points,
                   std::vector<std::pair<int, int>>& acc,
                   std::vector<PairPartition>& out, int m) {
  if (points.empty()) {
    PairPartition p;
    p.m = m;
    p.pairs = acc;
    std::sort(p.pairs.begin(), p.pairs.end());
    out.push_back(std::move(p));
    return;
  }
  const int a = points.front();
  // Partner must leave an even count strictly inside the arc.
  for (std::size_t idx = 1; idx < points.size(); idx += 2) {
    const int b = points[idx];
    std::vector<int> inside(points.begin() + 1, points.begin() + idx);
    std::vector<int> outside(points.begin() + idx + 1, points.end());
    acc.emplace_back(a, b);
    if (inside.empty()) {
      rec_enumerate(outside, acc, out, m);
    } else {
      // enumerate inside then splice every completion of the outside
      std::vector<PairPartition> inner;
      std::vector<std::pair<int, int>> inner_acc;
      rec_enumerate(inside, inner_acc, inner, m);
      for (const PairPartition& ip : inner) {
        std::size_t base = acc.size();
        acc.insert(acc.end(), ip.pairs.begin(), ip.pairs.end());
        rec_enumerate(outside, acc, out, m);
        acc.resize(base);
      }
    }
    acc.pop_back();
  }
}

}  // namespace

std::vector<PairPartition> enumerate_nc2(int m) {
  if (m < 1 || m > 6) throw ConfigError("enumerate_nc2 supports 1 <= m <= 6");
  std::vector<int> points(2 * m);
  for (int i = 0; i < 2 * m; ++i) points[i] = i + 1;
  std::vector<PairPartition> out;
  std::vector<std::pair<int, int>> acc;
  rec_enumerate(points, acc, out, m);
  return out;
}

KrewerasBlocks kreweras(const PairPartition& p) {
  const int n = 2 * p.m;
  std::vector<int> sigma(n + 1, 0);
  for (auto [u, v] : p.pairs) {
    sigma[u] = v;
    sigma[v] = u;
  }
  // complement as the cycles of sigma applied after the long cycle i -> i+1
  std::vector<int> next(n + 1, 0);
  for (int i = 1; i <= n; ++i) next[i] = sigma[i % n + 1];

  KrewerasBlocks out;
  std::vector<char> seen(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    if (seen[i]) continue;
    std::vector<int> block;
    for (int j = i; !seen[j]; j = next[j]) {
      seen[j] = 1;
      block.push_back(j);
    }
    std::sort(block.begin(), block.end());
    out.blocks.push_back(std::move(block));
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.back() < b.back();
            });
  out.t_map.assign(n, 0);
  for (std::size_t b = 0; b < out.blocks.size(); ++b)
    for (int e : out.blocks[b]) out.t_map[e - 1] = static_cast<int>(b) + 1;
  return out;
}

namespace {

// Zero-sum assignments for one block inside [-bound, bound]^size.
std::vector<std::vector<int>> block_solutions(int size, int bound) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(size, -bound);
  if (size == 1) {
    out.push_back({0});
    return out;
  }
  while (true) {
    int sum = 0;
    for (int i = 0; i < size - 1; ++i) sum += k[i];
    if (std::abs(sum) <= bound) {
      k[size - 1] = -sum;
      out.push_back(k);
    }
    int pos = size - 2;
    while (pos >= 0 && k[pos] == bound) k[pos--] = -bound;
    if (pos < 0) break;
    ++k[pos];
  }
  return out;
}

}  // namespace

void enumerate_s_tuples(
    const PairPartition& p, int bound,
    const std::function<void(const std::vector<int>&)>& visit) {
  if (bound < 0) throw ConfigError("enumerate_s_tuples needs bound >= 0");
  const KrewerasBlocks kb = kreweras(p);
  const std::size_t nblocks = kb.blocks.size();
  std::vector<std::vector<std::vector<int>>> sols(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    sols[b] = block_solutions(static_cast<int>(kb.blocks[b].size()), bound);
    if (sols[b].empty()) return;
  }
  std::vector<std::size_t> pick(nblocks, 0);
  std::vector<int> tuple(2 * p.m, 0);
  while (true) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      const auto& block = kb.blocks[b];
      const auto& vals = sols[b][pick[b]];
      for (std::size_t i = 0; i < block.size(); ++i)
        tuple[block[i] - 1] = vals[i];
    }
    visit(tuple);
    std::size_t b = 0;
    while (b < nblocks && ++pick[b] == sols[b].size()) pick[b++] = 0;
    if (b == nblocks) break;
  }
}

double beta_moment(const FourierTable& t, int m) {
  if (m < 1 || m > 4) throw ConfigError("beta_moment supports 1 <= m <= 4");
  const int n = t.truncation();
  const int bound = 2 * n;
  const int w = 2 * bound + 1;
  std::vector<double> fhat(static_cast<std::size_t>(w) * w);
  for (int u = -bound; u <= bound; ++u)
    for (int v = -bound; v <= bound; ++v)
      fhat[static_cast<std::size_t>(u + bound) * w + (v + bound)] =
          truncated_autocovariance(t, u, v);
  auto fh = [&](int u, int v) {
    return fhat[static_cast<std::size_t>(u + bound) * w + (v + bound)];
  };

  double total = 0.0;
  for (const PairPartition& sigma : enumerate_nc2(m)) {
    double sub = 0.0;
    enumerate_s_tuples(sigma, bound, [&](const std::vector<int>& k) {
      double prod = 1.0;
      for (auto [u, v] : sigma.pairs) {
        double term = fh(k[u - 1], -k[v - 1]) + fh(k[v - 1], -k[u - 1]);
        if (term == 0.0) {
          prod = 0.0;
          break;
        }
        prod *= term;
      }
      sub += prod;
    });
    total += sub;
  }
  return total;
}

double l_sigma_integral(const SpectralDensity& f, const PairPartition& p) {
  const int m = p.m;
  if (m < 1 || m > 3)
    throw ConfigError("l_sigma_integral supports m <= 3 (cost grows too fast)");
  const int grid = m <= 2 ? 64 : 32;
  const double h = 2.0 * kPi / grid;

  std::vector<double> x(grid);
  for (int i = 0; i < grid; ++i) x[i] = -kPi + (i + 0.5) * h;

  // G[i][j] = f(x_i, -x_j) + f(-x_j, x_i)
  std::vector<double> g(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      g[static_cast<std::size_t>(i) * grid + j] =
          f(x[i], -x[j]) + f(-x[j], x[i]);

  const KrewerasBlocks kb = kreweras(p);
  const int dims = m + 1;
  std::vector<int> idx(dims, 0);
  double total = 0.0;
  while (true) {
    double prod = 1.0;
    for (auto [u, v] : p.pairs) {
      int iu = idx[kb.t_map[u - 1] - 1];
      int iv = idx[kb.t_map[v - 1] - 1];
      prod *= g[static_cast<std::size_t>(iu) * grid + iv];
      if (prod == 0.0) break;
    }
    total += prod;
    int d = 0;
    while (d < dims && ++idx[d] == grid) idx[d++] = 0;
    if (d == dims) break;
  }
  return total * std::pow(h, dims);
}

double partition_integral_moment(const SpectralDensity& f, int m) {
  if (m < 1 || m > 3) throw ConfigError("partition_integral_moment supports m <= 3");
  double sum = 0.0;
  for (const PairPartition& sigma : enumerate_nc2(m))
    sum += l_sigma_integral(f, sigma);
  return std::pow(2.0 * kPi, m - 1) * sum;
}

}  // namespace specwig
