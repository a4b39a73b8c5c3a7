#include <algorithm>
#include <unordered_map>

#include "relcay/coset_graph.hpp"
#include "relcay/errors.hpp"
#include "relcay/subgroup.hpp"

namespace relcay {

  namespace {

    struct GroupWindow {
      CosetBall                ball;
      std::vector<std::size_t> members;  // vertices lying in H
      bool                     certified = true;
    };

    GroupWindow group_window(Subgroup const& subgroup, std::size_t radius,
                             std::size_t budget) {
      GroupModel const& model = subgroup.model();
      Subgroup          one(model, trivial_subgroup_spec(model), budget);
      GroupWindow       w{build_ball(one, radius, budget), {}, true};
      for (CosetVertex const& v : w.ball.vertices()) {
        auto verdict = subgroup.contains(v.rep);
        if (verdict.inside()) {
          w.members.push_back(v.id);
        } else if (verdict.answer == Answer::Unknown) {
          w.certified = false;
        }
      }
      return w;
    }

  }  // namespace

  QuasiconvexityReport estimate_E(Subgroup const& subgroup, std::size_t radius,
                                  std::size_t budget) {
    if (radius < 1) {
      throw ValidationError("estimate_E needs a radius of at least 1");
    }
    GroupWindow          w = group_window(subgroup, radius, budget);
    CosetBall const&     ball = w.ball;
    QuasiconvexityReport report;
    report.radius_scanned = radius;
    report.certified      = w.certified && ball.certified();

    // Distance to the nearest member inside the window.
    std::vector<std::uint32_t> to_h(ball.size(), kNoVertex);
    std::vector<std::uint32_t> queue;
    for (std::size_t h : w.members) {
      to_h[h] = 0;
      queue.push_back(static_cast<std::uint32_t>(h));
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t v = queue[head];
      for (std::uint32_t u : ball.neighbours(v)) {
        if (to_h[u] == kNoVertex) {
          to_h[u] = to_h[v] + 1;
          queue.push_back(u);
        }
      }
    }

    std::vector<std::vector<std::uint32_t>> rows;
    for (std::size_t h : w.members) {
      rows.push_back(ball.distances_from(h));
    }
    bool have_witness = false;
    for (std::size_t i = 0; i < w.members.size(); ++i) {
      for (std::size_t j = i; j < w.members.size(); ++j) {
        std::size_t const h1 = w.members[i], h2 = w.members[j];
        std::uint32_t     d  = rows[i][h2];
        if (!ball.certifies(h1, h2, d)) {
          continue;
        }
        ++report.pairs_scanned;
        // Vertices on some geodesic are exactly the interval I(h1, h2).
        for (std::size_t p = 0; p < ball.size(); ++p) {
          if (rows[i][p] + rows[j][p] == d
              && (!have_witness || to_h[p] > report.E_emp)) {
            have_witness          = true;
            report.E_emp          = to_h[p];
            report.witness_source = ball.vertices()[h1].rep;
            report.witness_target = ball.vertices()[h2].rep;
            report.witness_vertex = ball.vertices()[p].rep;
          }
        }
      }
    }
    return report;
  }

  DefectReport estimate_K(Subgroup const& subgroup, std::size_t radius, std::size_t budget) {
    if (radius < 1) {
      throw ValidationError("estimate_K needs a radius of at least 1");
    }
    GroupModel const& model = subgroup.model();
    GroupWindow       w     = group_window(subgroup, radius, budget);
    CosetBall         y     = build_ball(subgroup, radius, budget);
    DefectReport      report;
    report.radius_scanned = radius;
    report.certified      = w.certified && y.certified();

    std::vector<std::size_t> minimal;
    for (CosetVertex const& g : w.ball.vertices()) {
      auto c = y.locate(g.rep);
      if (c && y.depth(*c) == g.depth) {
        minimal.push_back(g.id);
      }
    }

    std::unordered_map<Word, std::size_t, WordHash> memo;
    auto length = [&](Word const& u) {
      Word key = model.reduce(u);
      auto it  = memo.find(key);
      if (it != memo.end()) {
        return it->second;
      }
      std::size_t l = model.geodesic_length(u, budget);
      memo.emplace(std::move(key), l);
      return l;
    };
    auto prefixes = [](Word const& base, Word const& w) {
      std::vector<Word> out;
      Word              p = base;
      out.push_back(p);
      for (Letter x : w) {
        p.push_back(x);
        out.push_back(p);
      }
      return out;
    };
    auto one_sided = [&](std::vector<Word> const& from, std::vector<Word> const& to) {
      std::size_t worst = 0;
      for (Word const& p : from) {
        std::size_t best = static_cast<std::size_t>(-1);
        Word        pi   = inverse(p);
        for (Word const& q : to) {
          best = std::min(best, length(concat(pi, q)));
          if (best == 0) {
            break;
          }
        }
        worst = std::max(worst, best);
      }
      return worst;
    };

    for (std::size_t h : w.members) {
      Word const& hw = w.ball.vertices()[h].rep;
      for (std::size_t g : minimal) {
        Word const& gw = w.ball.vertices()[g].rep;
        Word        hg = concat(hw, gw);
        ++report.pairs_scanned;
        std::size_t lhg = length(hg);
        std::size_t sum = hw.size() + gw.size();
        if (sum > lhg && sum - lhg > report.K_emp) {
          report.K_emp     = sum - lhg;
          report.witness_h = hw;
          report.witness_g = gw;
        }
        std::vector<Word> broken = prefixes({}, hw);
        std::vector<Word> tail   = prefixes(hw, gw);
        broken.insert(broken.end(), tail.begin() + 1, tail.end());
        std::vector<Word> direct = prefixes({}, model.geodesic_word(hg, budget));
        report.hausdorff_emp
            = std::max({report.hausdorff_emp, one_sided(broken, direct), one_sided(direct, broken)});
      }
    }
    return report;
  }

}  // namespace relcay
