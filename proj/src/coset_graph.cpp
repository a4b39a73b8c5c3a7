#include "relcay/coset_graph.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "relcay/errors.hpp"

namespace relcay {

  CosetBall::CosetBall(Alphabet alphabet, std::size_t radius, bool certified,
                       std::vector<CosetVertex> vertices, std::vector<LabeledEdge> edges)
      : _alphabet(std::move(alphabet)),
        _radius(radius),
        _certified(certified),
        _vertices(std::move(vertices)),
        _edges(std::move(edges)) {
    std::size_t const n = _vertices.size();
    std::size_t const w = 2 * k();
    _half.assign(n * w, kNoVertex);
    _neighbours.assign(n, {});
    for (LabeledEdge const& e : _edges) {
      if (e.src >= n || e.dst >= n || e.letter >= k()) {
        throw ValidationError("edge refers to a missing vertex or letter");
      }
      _half[e.src * w + 2 * e.letter]     = static_cast<std::uint32_t>(e.dst);
      _half[e.dst * w + 2 * e.letter + 1] = static_cast<std::uint32_t>(e.src);
      if (e.src != e.dst) {
        _neighbours[e.src].push_back(static_cast<std::uint32_t>(e.dst));
        _neighbours[e.dst].push_back(static_cast<std::uint32_t>(e.src));
      }
    }
    for (auto& nb : _neighbours) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (_vertices[v].depth == _radius) {
        _frontier.push_back(v);
      }
    }
  }

  std::optional<std::size_t> CosetBall::locate(std::span<Letter const> w) const {
    std::size_t v = 0;
    for (Letter x : w) {
      if (x.generator() >= k()) {
        return std::nullopt;
      }
      std::uint32_t u = step(v, x.code());
      if (u == kNoVertex) {
        return std::nullopt;
      }
      v = u;
    }
    return v;
  }

  std::vector<std::uint32_t> CosetBall::distances_from(std::size_t source) const {
    std::vector<std::uint32_t> dist(size(), kNoVertex);
    std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(source)};
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t v = queue[head];
      for (std::uint32_t u : _neighbours[v]) {
        if (dist[u] == kNoVertex) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return dist;
  }

  bool CosetBall::certifies(std::size_t u, std::size_t v, std::size_t d) const {
    return _certified && within_window(u, v, d);
  }

  bool CosetBall::within_window(std::size_t u, std::size_t v, std::size_t d) const {
    if (closed()) {
      return true;
    }
    return d <= (_radius - depth(u)) + (_radius - depth(v));
  }

  std::pair<std::size_t, bool> CosetBall::distance(std::size_t u, std::size_t v) const {
    std::uint32_t d = distances_from(u).at(v);
    if (d == kNoVertex) {
      return {static_cast<std::size_t>(-1), false};
    }
    return {d, certifies(u, v, d)};
  }

  CosetBall CosetBall::restrict(std::size_t radius) const {
    std::vector<CosetVertex> vertices;
    for (CosetVertex const& v : _vertices) {
      if (v.depth <= radius) {
        vertices.push_back(v);
      }
    }
    std::vector<LabeledEdge> edges;
    for (LabeledEdge const& e : _edges) {
      if (_vertices[e.src].depth <= radius && _vertices[e.dst].depth <= radius) {
        edges.push_back(e);
      }
    }
    // BFS order makes the kept vertices a prefix, so ids are unchanged.
    return CosetBall(_alphabet, std::min(radius, _radius), _certified, std::move(vertices),
                     std::move(edges));
  }

  SubgroupSpec trivial_subgroup_spec(GroupModel const& model) {
    SubgroupSpec spec;
    if (model.backend() == Backend::FreeReduction) {
      spec.mode = MembershipMode::StallingsFolding;
    } else {
      spec.mode  = MembershipMode::BoundedSearch;
      spec.limit = 1;
    }
    return spec;
  }

  CosetBall build_ball(Subgroup const& subgroup, std::size_t radius, std::size_t budget) {
    GroupModel const&        model = subgroup.model();
    std::vector<Word> const& steps = model.steps();
    std::size_t const        k     = model.k();
    std::vector<Word>        inverses;
    for (Word const& s : steps) {
      inverses.push_back(inverse(s));
    }
    model.reduce(Word{});  // surfaces DehnNotApplicable before any work

    CosetIndex                 index(subgroup);
    std::vector<Word>          forms{Word{}};
    std::vector<CosetVertex>   vertices{CosetVertex{0, {}, 0}};
    std::vector<std::uint32_t> positive;  // positive[v * k + a]
    index.insert(forms[0], 0);

    for (std::size_t head = 0; head < vertices.size(); ++head) {
      bool const interior = vertices[head].depth < radius;
      positive.resize((head + 1) * k, kNoVertex);
      for (std::uint32_t code = 0; code < 2 * k; ++code) {
        Letter x = Letter::from_code(code);
        if (!interior && x.inverted()) {
          continue;
        }
        Word const& step = x.inverted() ? inverses[x.generator()] : steps[x.generator()];
        Word        next = model.solver().reduce(concat(forms[head], step));
        auto        id   = index.find(next);
        if (!id && interior) {
          if (vertices.size() >= budget) {
            throw BallExhausted("coset ball exceeded the budget of " + std::to_string(budget)
                                + " vertices");
          }
          id      = vertices.size();
          Word rep = vertices[head].rep;
          rep.push_back(x);
          index.insert(next, *id);
          forms.push_back(std::move(next));
          vertices.push_back(CosetVertex{*id, std::move(rep), vertices[head].depth + 1});
        }
        if (id && !x.inverted()) {
          positive[head * k + x.generator()] = static_cast<std::uint32_t>(*id);
        }
      }
    }

    std::vector<LabeledEdge> edges;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      for (std::uint32_t a = 0; a < k; ++a) {
        if (positive[v * k + a] != kNoVertex) {
          edges.push_back(LabeledEdge{v, positive[v * k + a], a});
        }
      }
    }
    return CosetBall(model.alphabet(), radius, index.certified(), std::move(vertices),
                     std::move(edges));
  }

  std::vector<std::size_t> canonical_geodesic(CosetBall const&                  ball,
                                              std::vector<std::uint32_t> const& dist_to_v,
                                              std::size_t u, std::size_t v) {
    std::vector<std::size_t> path{u};
    std::size_t              p = u;
    while (p != v) {
      std::size_t next = kNoVertex;
      for (std::uint32_t code = 0; code < 2 * ball.k(); ++code) {
        std::uint32_t q = ball.step(p, code);
        if (q != kNoVertex && dist_to_v[q] + 1 == dist_to_v[p]) {
          next = q;
          break;
        }
      }
      if (next == kNoVertex) {
        throw Error("no geodesic step found; distance row is inconsistent");
      }
      path.push_back(next);
      p = next;
    }
    return path;
  }

  GeodesicList geodesics(CosetBall const& ball, std::size_t u, std::size_t v,
                         std::size_t cap) {
    auto dist = ball.distances_from(v);
    if (dist[u] == kNoVertex || !ball.certifies(u, v, dist[u])) {
      throw Uncertified("distance between vertices " + std::to_string(u) + " and "
                        + std::to_string(v) + " is not certified");
    }
    GeodesicList             out;
    std::vector<std::size_t> path{u};
    // Depth-first in least-label order; a vertex's least code decides order.
    auto next_steps = [&](std::size_t p) {
      std::vector<std::size_t> next;
      for (std::uint32_t code = 0; code < 2 * ball.k(); ++code) {
        std::uint32_t q = ball.step(p, code);
        if (q != kNoVertex && dist[q] + 1 == dist[p]
            && std::find(next.begin(), next.end(), q) == next.end()) {
          next.push_back(q);
        }
      }
      return next;
    };
    auto dfs = [&](auto&& self, std::size_t p) -> void {
      if (out.capped) {
        return;
      }
      if (p == v) {
        if (out.paths.size() == cap) {
          out.capped = true;
          return;
        }
        out.paths.push_back(path);
        return;
      }
      for (std::size_t q : next_steps(p)) {
        path.push_back(q);
        self(self, q);
        path.pop_back();
        if (out.capped) {
          return;
        }
      }
    };
    dfs(dfs, u);
    return out;
  }

  Word path_label(CosetBall const& ball, std::span<std::size_t const> path) {
    Word label;
    for (std::size_t i = 1; i < path.size(); ++i) {
      for (std::uint32_t code = 0; code < 2 * ball.k(); ++code) {
        if (ball.step(path[i - 1], code) == path[i]) {
          label.push_back(Letter::from_code(code));
          break;
        }
      }
    }
    return label;
  }

  ProjectionCheck quotient_projection_check(CosetBall const& group_ball,
                                            CosetBall const& coset_ball,
                                            std::size_t samples, std::uint64_t seed) {
    ProjectionCheck          result;
    std::size_t const        n = group_ball.size();
    std::vector<std::size_t> image(n);
    for (std::size_t g = 0; g < n; ++g) {
      auto c = coset_ball.locate(group_ball.vertices()[g].rep);
      if (!c) {
        throw BallTooSmall("coset ball does not contain the image of group vertex "
                           + std::to_string(g));
      }
      image[g] = *c;
    }
    auto check = [&](std::size_t g1, std::vector<std::uint32_t> const& dx,
                     std::vector<std::uint32_t> const& dy, std::size_t g2) {
      if (!group_ball.certifies(g1, g2, dx[g2])
          || !coset_ball.certifies(image[g1], image[g2], dy[image[g2]])) {
        return;
      }
      ++result.pairs_checked;
      if (dy[image[g2]] > dx[g2]) {
        ++result.violations;
      }
    };
    if (samples == 0) {
      for (std::size_t g1 = 0; g1 < n; ++g1) {
        auto dx = group_ball.distances_from(g1);
        auto dy = coset_ball.distances_from(image[g1]);
        for (std::size_t g2 = 0; g2 < n; ++g2) {
          check(g1, dx, dy, g2);
        }
      }
    } else {
      std::mt19937_64                            rng(seed);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t s = 0; s < samples; ++s) {
        std::size_t g1 = pick(rng), g2 = pick(rng);
        check(g1, group_ball.distances_from(g1), coset_ball.distances_from(image[g1]), g2);
      }
    }
    result.ok = result.violations == 0;
    return result;
  }

  CosetMetric::CosetMetric(Subgroup const& subgroup, std::size_t radius, std::size_t budget)
      : _subgroup(&subgroup) {
    if (subgroup.core() && subgroup.model().identity_marking()) {
      return;
    }
    _ball  = build_ball(subgroup, radius, budget);
    _index = std::make_shared<CosetIndex>(subgroup);
    for (CosetVertex const& v : _ball->vertices()) {
      _index->insert(subgroup.model().reduce(v.rep), v.id);
    }
  }

  CosetMetric::Point CosetMetric::point(std::span<Letter const> w) const {
    Word g = _subgroup->model().reduce(w);
    if (!_ball) {
      auto t = _subgroup->core()->trace(g);
      return {t.vertex, Word(g.begin() + static_cast<long>(t.consumed), g.end())};
    }
    auto id = _index->find(g);
    if (!id) {
      throw BallTooSmall("coset of " + to_string(w, _subgroup->model().alphabet())
                         + " is outside the radius-" + std::to_string(_ball->radius())
                         + " ball");
    }
    return {*id, {}};
  }

  std::size_t CosetMetric::distance(std::span<Letter const> u, std::span<Letter const> v) const {
    Point p = point(u), q = point(v);
    if (!_ball) {
      FoldedGraph const& core = *_subgroup->core();
      if (p.vertex == q.vertex) {
        std::size_t lcp = 0;
        while (lcp < p.suffix.size() && lcp < q.suffix.size()
               && p.suffix[lcp] == q.suffix[lcp]) {
          ++lcp;
        }
        return p.suffix.size() + q.suffix.size() - 2 * lcp;
      }
      return p.suffix.size() + core.distance(p.vertex, q.vertex) + q.suffix.size();
    }
    auto [d, certified] = _ball->distance(p.vertex, q.vertex);
    if (!certified) {
      throw Uncertified("in-ball coset distance is not certified; enlarge the ball");
    }
    return d;
  }

  std::size_t CosetMetric::depth(std::span<Letter const> w) const {
    return distance(Word{}, w);
  }

  nlohmann::ordered_json to_json(CosetBall const& ball) {
    nlohmann::ordered_json j;
    j["radius"]    = ball.radius();
    j["k"]         = ball.k();
    j["certified"] = ball.certified();
    nlohmann::ordered_json alphabet = nlohmann::ordered_json::array();
    for (char c : ball.alphabet().symbols()) {
      alphabet.push_back(std::string(1, c));
    }
    j["alphabet"] = alphabet;
    nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
    for (CosetVertex const& v : ball.vertices()) {
      vertices.push_back({{"id", v.id}, {"rep", to_string(v.rep, ball.alphabet())},
                          {"depth", v.depth}});
    }
    j["vertices"] = vertices;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (LabeledEdge const& e : ball.edges()) {
      edges.push_back({{"src", e.src},
                       {"dst", e.dst},
                       {"letter", std::string(1, ball.alphabet().symbol(e.letter))}});
    }
    j["edges"] = edges;
    return j;
  }

  CosetBall ball_from_json(nlohmann::json const& j) {
    try {
      Alphabet alphabet;
      for (auto const& s : j.at("alphabet")) {
        std::string sym = s.get<std::string>();
        if (sym.size() != 1) {
          throw ValidationError("alphabet symbols must be single letters");
        }
        alphabet.push_back(sym[0]);
      }
      if (j.at("k").get<std::size_t>() != alphabet.size()) {
        throw ValidationError("k does not match the alphabet size");
      }
      std::vector<CosetVertex> vertices;
      for (auto const& v : j.at("vertices")) {
        CosetVertex cv;
        cv.id    = v.at("id").get<std::size_t>();
        cv.rep   = parse_word(v.at("rep").get<std::string>(), alphabet);
        cv.depth = v.at("depth").get<std::size_t>();
        if (cv.id != vertices.size()) {
          throw ValidationError("vertex ids must be dense and in order");
        }
        vertices.push_back(std::move(cv));
      }
      if (vertices.empty() || vertices[0].depth != 0) {
        throw ValidationError("vertex 0 must be the base coset at depth 0");
      }
      std::vector<LabeledEdge> edges;
      for (auto const& e : j.at("edges")) {
        std::string letter = e.at("letter").get<std::string>();
        std::size_t a      = letter.size() == 1 ? alphabet.index_of(letter[0]) : alphabet.size();
        if (a == alphabet.size()) {
          throw ValidationError("edge letter '" + letter + "' is not in the alphabet");
        }
        edges.push_back(LabeledEdge{e.at("src").get<std::size_t>(), e.at("dst").get<std::size_t>(),
                                    static_cast<std::uint32_t>(a)});
      }
      return CosetBall(std::move(alphabet), j.at("radius").get<std::size_t>(),
                       j.at("certified").get<bool>(), std::move(vertices), std::move(edges));
    } catch (nlohmann::json::exception const& e) {
      throw ValidationError(std::string("malformed ball file: ") + e.what());
    }
  }

}  // namespace relcay
