#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "relcay/coset_graph.hpp"
#include "relcay/spec_file.hpp"

namespace fixture {

  inline std::string path(std::string const& name) {
    return std::string(RELCAY_FIXTURES) + "/" + name;
  }

  // A group with one chosen subgroup ("1" for the trivial one).
  struct Pair {
    std::unique_ptr<relcay::GroupModel> model;
    std::unique_ptr<relcay::Subgroup>   subgroup;

    relcay::Word word(std::string const& text) const {
      return relcay::parse_word(text, model->alphabet());
    }
    relcay::CosetBall ball(std::size_t radius) const {
      return relcay::build_ball(*subgroup, radius);
    }
  };

  inline Pair load(std::string const& file, std::string const& subgroup = "1") {
    relcay::SpecFile spec = relcay::read_spec_file(path(file));
    relcay::require_valid(spec);
    Pair p;
    p.model = std::make_unique<relcay::GroupModel>(*spec.group);
    relcay::SubgroupSpec s = subgroup == "1" ? relcay::trivial_subgroup_spec(*p.model)
                                             : spec.subgroup(subgroup)->spec;
    p.subgroup = std::make_unique<relcay::Subgroup>(*p.model, s);
    return p;
  }

  inline Pair from_text(std::string const& text, std::string const& subgroup = "1") {
    relcay::SpecFile spec = relcay::parse_spec(text);
    relcay::require_valid(spec);
    Pair p;
    p.model = std::make_unique<relcay::GroupModel>(*spec.group);
    relcay::SubgroupSpec s = subgroup == "1" ? relcay::trivial_subgroup_spec(*p.model)
                                             : spec.subgroup(subgroup)->spec;
    p.subgroup = std::make_unique<relcay::Subgroup>(*p.model, s);
    return p;
  }

}  // namespace fixture

// Oracles below use plain strings: lowercase letters, uppercase inverses.
namespace oracle {

  inline char inv(char c) {
    return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c))
                                                        : static_cast<char>(std::tolower(c));
  }

  inline std::string free_reduce(std::string const& w) {
    std::string out;
    for (char c : w) {
      if (!out.empty() && out.back() == inv(c)) {
        out.pop_back();
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  // Every word of length at most n over the letters.
  inline std::vector<std::string> all_words(std::string const& letters, std::size_t n) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].size() == n) {
        continue;
      }
      for (char c : letters) {
        out.push_back(out[i] + c);
      }
    }
    return out;
  }

  // Simple undirected graph of a ball, loops dropped.
  inline std::vector<std::vector<std::size_t>> adjacency(relcay::CosetBall const& ball) {
    std::vector<std::set<std::size_t>> nb(ball.size());
    for (auto const& e : ball.edges()) {
      if (e.src != e.dst) {
        nb[e.src].insert(e.dst);
        nb[e.dst].insert(e.src);
      }
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto const& s : nb) {
      out.emplace_back(s.begin(), s.end());
    }
    return out;
  }

  inline std::vector<std::vector<int>> all_pairs(relcay::CosetBall const& ball) {
    auto const                    adj = adjacency(ball);
    std::size_t const             n   = ball.size();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> q{s};
      d[s][s] = 0;
      for (std::size_t h = 0; h < q.size(); ++h) {
        for (std::size_t u : adj[q[h]]) {
          if (d[s][u] < 0) {
            d[s][u] = d[s][q[h]] + 1;
            q.push_back(u);
          }
        }
      }
    }
    return d;
  }

  inline bool window(relcay::CosetBall const& ball, std::size_t u, std::size_t v, int d) {
    return ball.closed()
           || static_cast<std::size_t>(d) <= 2 * ball.radius() - ball.depth(u) - ball.depth(v);
  }

  // All geodesic vertex paths from x to y by exhaustive DFS.
  inline std::vector<std::vector<std::size_t>> all_geodesics(
      std::vector<std::vector<std::size_t>> const& adj, std::vector<std::vector<int>> const& d,
      std::size_t x, std::size_t y) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t>              path{x};
    auto dfs = [&](auto&& self, std::size_t v) -> void {
      if (v == y) {
        out.push_back(path);
        return;
      }
      for (std::size_t u : adj[v]) {
        if (d[u][y] == d[v][y] - 1) {
          path.push_back(u);
          self(self, u);
          path.pop_back();
        }
      }
    };
    dfs(dfs, x);
    return out;
  }

  // Max over certified pairs and over geodesic pairs of the one-sided vertex
  // distance, by brute force.
  inline int bigon_delta(relcay::CosetBall const& ball) {
    auto const adj   = adjacency(ball);
    auto const d     = all_pairs(ball);
    int        worst = 0;
    for (std::size_t x = 0; x < ball.size(); ++x) {
      for (std::size_t y = x + 1; y < ball.size(); ++y) {
        if (!window(ball, x, y, d[x][y])) {
          continue;
        }
        auto gs = all_geodesics(adj, d, x, y);
        for (auto const& a : gs) {
          for (auto const& b : gs) {
            for (std::size_t p : a) {
              int m = 1 << 30;
              for (std::size_t q : b) {
                m = std::min(m, d[p][q]);
              }
              worst = std::max(worst, m);
            }
          }
        }
      }
    }
    return worst;
  }

  // Greedy least-letter geodesic using the ball's labelled edges.
  inline std::vector<std::size_t> least_geodesic(relcay::CosetBall const& ball,
                                                 std::vector<std::vector<int>> const& d,
                                                 std::size_t u, std::size_t v) {
    std::vector<std::size_t> path{u};
    while (path.back() != v) {
      std::size_t p = path.back();
      // Neighbour by letter code: 2a forward along a, 2a+1 backward.
      std::size_t best = static_cast<std::size_t>(-1);
      for (std::uint32_t code = 0; code < 2 * ball.k() && best == static_cast<std::size_t>(-1);
           ++code) {
        for (auto const& e : ball.edges()) {
          std::size_t q = static_cast<std::size_t>(-1);
          if (code % 2 == 0 && e.letter == code / 2 && e.src == p) {
            q = e.dst;
          } else if (code % 2 == 1 && e.letter == code / 2 && e.dst == p) {
            q = e.src;
          }
          if (q != static_cast<std::size_t>(-1) && d[q][v] == d[p][v] - 1) {
            best = q;
            break;
          }
        }
      }
      path.push_back(best);
    }
    return path;
  }

  // Doubled distance between points at doubled offsets along two paths.
  inline int point_dist(std::vector<std::vector<int>> const& d, std::vector<std::size_t> const& a,
                        int ta, std::vector<std::size_t> const& b, int tb) {
    // Subdivide: candidate endpoints and their extra half-steps.
    auto ends = [](std::vector<std::size_t> const& p, int t) {
      std::vector<std::pair<std::size_t, int>> out;
      if (t % 2 == 0) {
        out.emplace_back(p[t / 2], 0);
      } else {
        out.emplace_back(p[(t - 1) / 2], 1);
        out.emplace_back(p[(t + 1) / 2], 1);
      }
      return out;
    };
    auto ea = ends(a, ta), eb = ends(b, tb);
    if (ea.size() == 2 && eb.size() == 2) {
      std::set<std::size_t> s1{ea[0].first, ea[1].first}, s2{eb[0].first, eb[1].first};
      if (s1 == s2) {
        return 0;
      }
    }
    int best = 1 << 30;
    for (auto [u, hu] : ea) {
      for (auto [v, hv] : eb) {
        best = std::min(best, 2 * d[u][v] + hu + hv);
      }
    }
    return best;
  }

  inline std::vector<std::size_t> reversed(std::vector<std::size_t> p) {
    std::reverse(p.begin(), p.end());
    return p;
  }

  // Doubled trim value of the triangle with least-letter sides.
  inline int triangle_trim(relcay::CosetBall const& ball, std::vector<std::vector<int>> const& d,
                           std::size_t x, std::size_t y, std::size_t z) {
    auto a1 = least_geodesic(ball, d, z, x), a2 = least_geodesic(ball, d, z, y),
         a3 = least_geodesic(ball, d, x, y);
    int  gz = d[z][x] + d[z][y] - d[x][y], gx = d[x][z] + d[x][y] - d[y][z],
        gy = d[y][z] + d[y][x] - d[x][z];
    int  worst = 0;
    for (int t = 0; t <= gz; ++t) {
      worst = std::max(worst, point_dist(d, a1, t, a2, t));
    }
    auto r1 = reversed(a1), r2 = reversed(a2), r3 = reversed(a3);
    for (int t = 0; t <= gx; ++t) {
      worst = std::max(worst, point_dist(d, r1, t, a3, t));
    }
    for (int t = 0; t <= gy; ++t) {
      worst = std::max(worst, point_dist(d, r2, t, r3, t));
    }
    return worst;
  }

}  // namespace oracle
