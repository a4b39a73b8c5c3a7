#include "relcay/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "relcay/errors.hpp"

namespace relcay {

  std::string_view to_string(Answer answer) {
    switch (answer) {
      case Answer::Inside:
        return "inside";
      case Answer::Outside:
        return "outside";
      case Answer::Unknown:
        return "unknown";
    }
    return "unknown";
  }

  namespace {

    struct FoldEdge {
      std::size_t   src;
      std::uint32_t generator;
      std::size_t   dst;
      Word          phi;
      bool          alive = true;
    };

    struct Half {
      std::size_t edge;
      bool        at_src;
    };

    Word times(std::span<Letter const> u, std::span<Letter const> v) {
      return free_reduce(concat(u, v));
    }

  }  // namespace

  FoldedGraph::FoldedGraph(std::vector<Word> const& generators, std::size_t rank)
      : _rank(rank) {
    std::vector<FoldEdge> edges;
    std::size_t           vertices = 1;
    for (std::size_t i = 0; i < generators.size(); ++i) {
      Word u = free_reduce(generators[i]);
      if (u.empty()) {
        continue;
      }
      std::size_t prev = 0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        std::size_t next = j + 1 == u.size() ? 0 : vertices++;
        Word        phi;
        if (j == 0) {
          phi.push_back(Letter(static_cast<std::uint32_t>(i), false));
        }
        if (u[j].inverted()) {
          edges.push_back({next, u[j].generator(), prev, inverse(phi)});
        } else {
          edges.push_back({prev, u[j].generator(), next, phi});
        }
        prev = next;
      }
    }

    auto other = [&](Half h) { return h.at_src ? edges[h.edge].dst : edges[h.edge].src; };
    auto phi_out = [&](Half h) {
      return h.at_src ? edges[h.edge].phi : inverse(edges[h.edge].phi);
    };
    auto vertex_of = [&](Half h) { return h.at_src ? edges[h.edge].src : edges[h.edge].dst; };
    auto code_of = [&](Half h) {
      return 2 * edges[h.edge].generator + (h.at_src ? 0 : 1);
    };

    while (true) {
      std::vector<std::vector<std::optional<Half>>> slot(
          vertices, std::vector<std::optional<Half>>(2 * rank));
      std::optional<std::pair<Half, Half>> clash;
      for (std::size_t e = 0; e < edges.size() && !clash; ++e) {
        if (!edges[e].alive) {
          continue;
        }
        for (bool at_src : {true, false}) {
          Half  h{e, at_src};
          auto& s = slot[vertex_of(h)][code_of(h)];
          if (s) {
            clash = std::pair{*s, h};
            break;
          }
          s = h;
        }
      }
      if (!clash) {
        break;
      }
      auto [h1, h2]    = *clash;
      std::size_t keep = other(h1), elim = other(h2);
      Word        p1 = phi_out(h1), p2 = phi_out(h2);
      if (keep != elim) {
        if (elim == 0) {
          std::swap(keep, elim);
          std::swap(p1, p2);
        }
        // Regauge the eliminated vertex so labels stay consistent.
        Word t     = times(inverse(p1), p2);
        Word t_inv = inverse(t);
        for (FoldEdge& e : edges) {
          if (!e.alive) {
            continue;
          }
          if (e.src == elim) {
            e.src = keep;
            e.phi = times(t, e.phi);
          }
          if (e.dst == elim) {
            e.dst = keep;
            e.phi = times(e.phi, t_inv);
          }
        }
      }
      edges[h2.edge].alive = false;
    }

    // Renumber in shortlex BFS order from the base.
    std::vector<std::vector<std::optional<HalfEdge>>> raw(
        vertices, std::vector<std::optional<HalfEdge>>(2 * rank));
    for (FoldEdge const& e : edges) {
      if (e.alive) {
        raw[e.src][2 * e.generator]     = HalfEdge{e.dst, e.phi};
        raw[e.dst][2 * e.generator + 1] = HalfEdge{e.src, inverse(e.phi)};
      }
    }
    constexpr std::size_t    none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> id(vertices, none);
    std::vector<std::size_t> order{0};
    id[0] = 0;
    _path.push_back({});
    for (std::size_t head = 0; head < order.size(); ++head) {
      std::size_t v = order[head];
      for (std::uint32_t code = 0; code < 2 * rank; ++code) {
        if (raw[v][code] && id[raw[v][code]->target] == none) {
          std::size_t u = raw[v][code]->target;
          id[u]         = order.size();
          order.push_back(u);
          Word p = _path[head];
          p.push_back(Letter::from_code(code));
          _path.push_back(std::move(p));
        }
      }
    }
    _next.assign(order.size(), std::vector<std::optional<HalfEdge>>(2 * rank));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::uint32_t code = 0; code < 2 * rank; ++code) {
        if (auto const& h = raw[order[i]][code]) {
          _next[i][code] = HalfEdge{id[h->target], h->phi};
        }
      }
    }

    std::size_t const n = _next.size();
    _distance.assign(n, std::vector<std::size_t>(n, none));
    for (std::size_t s = 0; s < n; ++s) {
      std::deque<std::size_t> queue{s};
      _distance[s][s] = 0;
      while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (auto const& h : _next[v]) {
          if (h && _distance[s][h->target] == none) {
            _distance[s][h->target] = _distance[s][v] + 1;
            queue.push_back(h->target);
          }
        }
      }
    }
  }

  std::size_t FoldedGraph::edge_count() const noexcept {
    std::size_t count = 0;
    for (auto const& row : _next) {
      for (std::size_t code = 0; code < row.size(); code += 2) {
        count += row[code] ? 1 : 0;
      }
    }
    return count;
  }

  FoldedGraph::HalfEdge const* FoldedGraph::step(std::size_t vertex, Letter x) const {
    if (vertex >= _next.size() || x.code() >= 2 * _rank) {
      return nullptr;
    }
    auto const& h = _next[vertex][x.code()];
    return h ? &*h : nullptr;
  }

  FoldedGraph::Trace FoldedGraph::trace(std::span<Letter const> w) const {
    Trace t{0, 0, {}};
    while (t.consumed < w.size()) {
      HalfEdge const* h = step(t.vertex, w[t.consumed]);
      if (h == nullptr) {
        break;
      }
      t.vertex = h->target;
      t.phi.insert(t.phi.end(), h->phi.begin(), h->phi.end());
      ++t.consumed;
    }
    t.phi = free_reduce(t.phi);
    return t;
  }

  std::size_t FoldedGraph::distance(std::size_t u, std::size_t v) const {
    return _distance.at(u).at(v);
  }

  Subgroup::Subgroup(GroupModel const& model, SubgroupSpec spec, std::size_t budget)
      : _model(&model), _spec(std::move(spec)) {
    if (_spec.mode == MembershipMode::StallingsFolding
        && model.backend() != Backend::FreeReduction) {
      throw ModeUnsupported("stallings membership requires the free backend, group '"
                            + model.name() + "' uses "
                            + std::string(to_string(model.backend())));
    }
    if (_spec.mode == MembershipMode::BoundedSearch && _spec.limit < 1) {
      throw ValidationError("bounded membership search needs a limit of at least 1");
    }
    for (Word const& g : _spec.generators) {
      for (Letter x : g) {
        if (x.generator() >= model.k()) {
          throw ValidationError("subgroup generator uses a letter outside the alphabet");
        }
      }
      _basis.push_back(model.reduce(g));
      _trivial = _trivial && model.is_trivial(g);
    }

    std::size_t const      rank = model.generators().size();
    std::size_t const      width = model.invariant_of_generator_word(Word{}).size();
    std::vector<detail::IntVector> rows;
    for (Word const& b : _basis) {
      rows.push_back(model.invariant_of_generator_word(b));
    }
    if (model.parity_invariant()) {
      detail::IntVector two(width, 0);
      two.back() = 2;
      rows.push_back(std::move(two));
    }
    _invariants = detail::Lattice(rows, width);

    if (_spec.mode == MembershipMode::StallingsFolding) {
      _core.emplace(_basis, rank);
      return;
    }
    if (_trivial) {
      return;
    }
    if (model.backend() == Backend::AbelianNormalForm) {
      std::vector<detail::IntVector> exps;
      for (Word const& b : _basis) {
        detail::IntVector e(rank, 0);
        for (Letter x : b) {
          e[x.generator()] += x.sign();
        }
        exps.push_back(std::move(e));
      }
      _exponents = detail::Lattice(exps, rank);
      return;
    }
    if (model.backend() == Backend::FiniteTable) {
      std::size_t order = model.presentation().table->order;
      _table_members.assign(order, std::nullopt);
      _table_members[0] = Word{};
      std::deque<std::uint32_t> queue{0};
      std::vector<std::uint32_t> images, inverse_images;
      for (Word const& b : _basis) {
        images.push_back(model.table_element(b));
        inverse_images.push_back(model.table_element(inverse(b)));
      }
      while (!queue.empty()) {
        std::uint32_t e = queue.front();
        queue.pop_front();
        for (std::uint32_t code = 0; code < 2 * _basis.size(); ++code) {
          Letter        x = Letter::from_code(code);
          std::uint32_t h = x.inverted() ? inverse_images[x.generator()]
                                         : images[x.generator()];
          std::uint32_t f = model.table_multiply(e, h);
          if (!_table_members[f]) {
            Word cert = *_table_members[e];
            cert.push_back(x);
            _table_members[f] = std::move(cert);
            queue.push_back(f);
          }
        }
      }
      return;
    }
    _products = std::make_shared<detail::ElementIndex>(model);
    detail::cayley_bfs(model, _basis, _spec.limit, budget,
                       [&](Word const& cert, Word const& form, std::size_t) {
                         _products->insert(form, _product_certificates.size());
                         _product_certificates.push_back(cert);
                         return true;
                       });
  }

  bool Subgroup::exact() const noexcept {
    return _trivial || _core || _model->backend() == Backend::AbelianNormalForm
           || _model->backend() == Backend::FiniteTable;
  }

  MembershipVerdict Subgroup::contains(std::span<Letter const> w) const {
    return contains_basis(_model->evaluate(w));
  }

  MembershipVerdict Subgroup::contains_basis(std::span<Letter const> generator_word) const {
    GroupModel const& model = *_model;
    Word              g     = model.solver().reduce(generator_word);
    MembershipVerdict v;
    v.search_bound = _spec.mode == MembershipMode::BoundedSearch ? _spec.limit : 0;

    if (_core) {
      auto t = _core->trace(g);
      if (t.consumed == g.size() && t.vertex == 0) {
        v.answer      = Answer::Inside;
        v.certificate = std::move(t.phi);
      } else {
        v.answer = Answer::Outside;
      }
      return v;
    }
    if (_trivial) {
      v.answer = model.solver().is_trivial(g) ? Answer::Inside : Answer::Outside;
      if (v.inside()) {
        v.certificate = Word{};
      }
      return v;
    }
    detail::IntVector inv = _invariants.reduce(model.invariant_of_generator_word(g));
    if (std::any_of(inv.begin(), inv.end(), [](std::int64_t x) { return x != 0; })) {
      v.answer = Answer::Outside;
      return v;
    }
    if (model.backend() == Backend::AbelianNormalForm) {
      detail::IntVector e(model.generators().size(), 0);
      for (Letter x : g) {
        e[x.generator()] += x.sign();
      }
      auto coeff = _exponents.solve(e);
      if (!coeff) {
        v.answer = Answer::Outside;
        return v;
      }
      Word cert;
      for (std::size_t i = 0; i < coeff->size(); ++i) {
        Letter x(static_cast<std::uint32_t>(i), (*coeff)[i] < 0);
        for (std::int64_t j = 0; j < std::abs((*coeff)[i]); ++j) {
          cert.push_back(x);
        }
      }
      v.answer      = Answer::Inside;
      v.certificate = std::move(cert);
      return v;
    }
    if (model.backend() == Backend::FiniteTable) {
      auto const& member = _table_members[model.table_element(g)];
      v.answer           = member ? Answer::Inside : Answer::Outside;
      v.certificate      = member;
      return v;
    }
    if (auto id = _products->find(g)) {
      v.answer      = Answer::Inside;
      v.certificate = _product_certificates[*id];
      return v;
    }
    v.answer = Answer::Unknown;
    return v;
  }

  Word Subgroup::expand(std::span<Letter const> certificate) const {
    Word w;
    for (Letter x : certificate) {
      Word const& g = _spec.generators.at(x.generator());
      Word        part = x.inverted() ? inverse(g) : g;
      w.insert(w.end(), part.begin(), part.end());
    }
    return w;
  }

  std::string Subgroup::certificate_string(std::span<Letter const> certificate) const {
    if (certificate.empty()) {
      return "1";
    }
    std::string s;
    for (Letter x : certificate) {
      s += "(" + to_string(_spec.generators.at(x.generator()), _model->alphabet()) + ")";
      if (x.inverted()) {
        s += "^-1";
      }
    }
    return s;
  }

  detail::IntVector Subgroup::coset_invariant(std::span<Letter const> generator_word) const {
    return _invariants.reduce(_model->invariant_of_generator_word(generator_word));
  }

  std::optional<Word> Subgroup::canonical_key(std::span<Letter const> generator_word) const {
    GroupModel const& model = *_model;
    if (_core) {
      Word g = free_reduce(generator_word);
      auto t = _core->trace(g);
      Word key{Letter::from_code(static_cast<std::uint32_t>(t.vertex))};
      key.insert(key.end(), g.begin() + static_cast<long>(t.consumed), g.end());
      return key;
    }
    if (_trivial) {
      if (!model.canonical_forms()) {
        return std::nullopt;
      }
      return model.solver().reduce(generator_word);
    }
    if (model.backend() == Backend::AbelianNormalForm) {
      std::size_t const rank = model.generators().size();
      detail::IntVector e(rank, 0);
      for (Letter x : generator_word) {
        e[x.generator()] += x.sign();
      }
      e = _exponents.reduce(e);
      Word key;
      for (std::size_t g = 0; g < rank; ++g) {
        Letter x(static_cast<std::uint32_t>(g), e[g] < 0);
        for (std::int64_t j = 0; j < std::abs(e[g]); ++j) {
          key.push_back(x);
        }
      }
      return key;
    }
    if (model.backend() == Backend::FiniteTable) {
      std::uint32_t e    = model.table_element(generator_word);
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      for (std::uint32_t h = 0; h < _table_members.size(); ++h) {
        if (_table_members[h]) {
          best = std::min(best, model.table_multiply(h, e));
        }
      }
      return Word{Letter::from_code(best)};
    }
    return std::nullopt;
  }

  CosetIndex::CosetIndex(Subgroup const& subgroup)
      : _subgroup(&subgroup),
        _canonical(subgroup.canonical_key(Word{}).has_value()) {
    if (!_canonical && subgroup.trivial()) {
      _elements = std::make_unique<detail::ElementIndex>(subgroup.model());
    }
  }

  std::optional<std::size_t> CosetIndex::find(std::span<Letter const> generator_word) {
    if (_canonical) {
      auto it = _by_key.find(*_subgroup->canonical_key(generator_word));
      if (it == _by_key.end()) {
        return std::nullopt;
      }
      return it->second;
    }
    if (_elements) {
      return _elements->find(generator_word);
    }
    auto bucket = _buckets.find(_subgroup->coset_invariant(generator_word));
    if (bucket == _buckets.end()) {
      return std::nullopt;
    }
    for (auto const& [other, id] : bucket->second) {
      auto v = _subgroup->contains_basis(concat(generator_word, inverse(other)));
      if (v.inside()) {
        return id;
      }
      if (v.answer == Answer::Unknown) {
        _certified = false;
      }
    }
    return std::nullopt;
  }

  void CosetIndex::insert(std::span<Letter const> generator_word, std::size_t id) {
    if (_canonical) {
      _by_key.emplace(*_subgroup->canonical_key(generator_word), id);
    } else if (_elements) {
      _elements->insert(generator_word, id);
    } else {
      Word form = _subgroup->model().solver().reduce(generator_word);
      _buckets[_subgroup->coset_invariant(form)].emplace_back(std::move(form), id);
    }
  }

  Word coset_min_rep(Subgroup const& subgroup, std::span<Letter const> w,
                     std::size_t budget) {
    GroupModel const& model = subgroup.model();
    Word              g     = model.reduce(w);
    if (auto const* core = subgroup.core(); core && model.identity_marking()) {
      auto t   = core->trace(g);
      Word rep = core->path_to(t.vertex);
      rep.insert(rep.end(), g.begin() + static_cast<long>(t.consumed), g.end());
      return rep;
    }

    CosetIndex target(subgroup);
    target.insert(g, 0);
    if (target.find(Word{})) {
      return {};
    }
    CosetIndex                 seen(subgroup);
    std::vector<Word>          forms{Word{}};
    std::vector<std::size_t>   parent{0}, depth{0};
    std::vector<Letter>        via{Letter{}};
    std::vector<Word> const&   steps = model.steps();
    std::vector<Word>          inverses;
    for (Word const& s : steps) {
      inverses.push_back(inverse(s));
    }
    seen.insert(forms[0], 0);
    std::size_t const radius = g.size();
    for (std::size_t head = 0; head < forms.size(); ++head) {
      if (depth[head] >= radius) {
        continue;
      }
      for (std::uint32_t code = 0; code < 2 * steps.size(); ++code) {
        Letter      x    = Letter::from_code(code);
        Word const& step = x.inverted() ? inverses[x.generator()] : steps[x.generator()];
        Word        next = model.solver().reduce(concat(forms[head], step));
        if (seen.find(next)) {
          continue;
        }
        if (forms.size() >= budget) {
          throw BallExhausted("coset search exceeded the budget of "
                              + std::to_string(budget) + " cosets");
        }
        std::size_t id = forms.size();
        seen.insert(next, id);
        forms.push_back(next);
        parent.push_back(head);
        via.push_back(x);
        depth.push_back(depth[head] + 1);
        if (target.find(next)) {
          Word rep;
          for (std::size_t v = id; v != 0; v = parent[v]) {
            rep.push_back(via[v]);
          }
          std::reverse(rep.begin(), rep.end());
          return rep;
        }
      }
    }
    throw BallExhausted("no coset representative confirmed within length "
                        + std::to_string(radius));
  }

}  // namespace relcay
