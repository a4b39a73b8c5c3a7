#include "relcay/group_model.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "relcay/errors.hpp"

namespace relcay {

  std::string_view to_string(Backend backend) {
    switch (backend) {
      case Backend::FreeReduction:
        return "free";
      case Backend::DehnAlgorithm:
        return "dehn";
      case Backend::AbelianNormalForm:
        return "abelian";
      case Backend::FiniteTable:
        return "table";
    }
    return "unknown";
  }

  namespace {

    using detail::IntVector;
    using detail::WordProblem;

    class FreeSolver final : public WordProblem {
     public:
      Word reduce(std::span<Letter const> w) const override {
        return free_reduce(w);
      }
      bool canonical() const noexcept override {
        return true;
      }
    };

    class AbelianSolver final : public WordProblem {
     public:
      explicit AbelianSolver(std::size_t rank) : _rank(rank) {}

      Word reduce(std::span<Letter const> w) const override {
        std::vector<long> e(_rank, 0);
        for (Letter x : w) {
          e[x.generator()] += x.sign();
        }
        Word result;
        for (std::size_t g = 0; g < _rank; ++g) {
          Letter x(static_cast<std::uint32_t>(g), e[g] < 0);
          for (long i = 0; i < std::abs(e[g]); ++i) {
            result.push_back(x);
          }
        }
        return result;
      }
      bool canonical() const noexcept override {
        return true;
      }

     private:
      std::size_t _rank;
    };

    class TableSolver final : public WordProblem {
     public:
      TableSolver(MultiplicationTable table, std::size_t rank)
          : _table(std::move(table)) {
        std::size_t const n = _table.order;
        _inverse.assign(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
          for (std::uint32_t j = 0; j < n; ++j) {
            if (mul(i, j) == 0) {
              _inverse[i] = j;
            }
          }
        }
        // Shortlex-least generator word for each element.
        _forms.assign(n, Word{});
        std::vector<bool> seen(n, false);
        seen[0]  = true;
        _reached = 1;
        std::deque<std::uint32_t> queue{0};
        while (!queue.empty()) {
          std::uint32_t v = queue.front();
          queue.pop_front();
          for (std::uint32_t code = 0; code < 2 * rank; ++code) {
            Letter        x = Letter::from_code(code);
            std::uint32_t u = mul(v, letter(x));
            if (!seen[u]) {
              seen[u] = true;
              ++_reached;
              _forms[u] = _forms[v];
              _forms[u].push_back(x);
              queue.push_back(u);
            }
          }
        }
      }

      std::uint32_t mul(std::uint32_t i, std::uint32_t j) const {
        return _table.products[i * _table.order + j];
      }
      std::uint32_t letter(Letter x) const {
        std::uint32_t g = _table.images[x.generator()];
        return x.inverted() ? _inverse[g] : g;
      }
      std::uint32_t evaluate(std::span<Letter const> w) const {
        std::uint32_t e = 0;
        for (Letter x : w) {
          e = mul(e, letter(x));
        }
        return e;
      }

      Word reduce(std::span<Letter const> w) const override {
        return _forms[evaluate(w)];
      }
      bool canonical() const noexcept override {
        return true;
      }
      bool is_trivial(std::span<Letter const> w) const override {
        return evaluate(w) == 0;
      }
      std::size_t reached() const noexcept {
        return _reached;
      }

     private:
      MultiplicationTable        _table;
      std::vector<std::uint32_t> _inverse;
      std::vector<Word>          _forms;
      std::size_t                _reached = 0;
    };

    // Dehn's algorithm: repeatedly replace a subword that is more than half
    // of a cyclic relator by the inverse of the rest of that relator.
    class DehnSolver final : public WordProblem {
     public:
      explicit DehnSolver(std::vector<Word> const& relators) {
        std::set<Word> cycles;
        for (Word const& r : relators) {
          for (Word const& s : {r, inverse(r)}) {
            for (std::size_t i = 0; i < s.size(); ++i) {
              Word c(s.begin() + static_cast<long>(i), s.end());
              c.insert(c.end(), s.begin(), s.begin() + static_cast<long>(i));
              cycles.insert(std::move(c));
            }
          }
        }
        for (Word const& c : cycles) {
          std::uint32_t first = c.front().code();
          if (_by_first.size() <= first) {
            _by_first.resize(first + 1);
          }
          _by_first[first].push_back(c);
        }
      }

      Word reduce(std::span<Letter const> input) const override {
        Word w = free_reduce(input);
        while (replace_once(w)) {
          w = free_reduce(w);
        }
        return w;
      }
      bool canonical() const noexcept override {
        return false;
      }

     private:
      bool replace_once(Word& w) const {
        for (std::size_t i = 0; i < w.size(); ++i) {
          std::uint32_t first = w[i].code();
          if (first >= _by_first.size()) {
            continue;
          }
          for (Word const& c : _by_first[first]) {
            std::size_t const n     = c.size();
            std::size_t const avail = std::min(n, w.size() - i);
            std::size_t       m     = 0;
            while (m < avail && w[i + m] == c[m]) {
              ++m;
            }
            if (2 * m > n) {
              // w[i, i+m) = c[0, m) becomes (c[m, n))^-1.
              Word rest = inverse(std::span<Letter const>(c).subspan(m));
              Word next(w.begin(), w.begin() + static_cast<long>(i));
              next.insert(next.end(), rest.begin(), rest.end());
              next.insert(next.end(), w.begin() + static_cast<long>(i + m), w.end());
              w = std::move(next);
              return true;
            }
          }
        }
        return false;
      }

      std::vector<std::vector<Word>> _by_first;
    };

    bool is_commutator(Word const& r, std::pair<std::uint32_t, std::uint32_t>& pair) {
      if (r.size() != 4) {
        return false;
      }
      if (r[2] != r[0].inverse() || r[3] != r[1].inverse()
          || r[0].generator() == r[1].generator()) {
        return false;
      }
      pair = std::minmax(r[0].generator(), r[1].generator());
      return true;
    }

    Word cyclic_reduce(std::span<Letter const> w) {
      Word r = free_reduce(w);
      std::size_t lo = 0, hi = r.size();
      while (hi - lo >= 2 && r[lo] == r[hi - 1].inverse()) {
        ++lo;
        --hi;
      }
      return Word(r.begin() + static_cast<long>(lo), r.begin() + static_cast<long>(hi));
    }

    void validate_table(Presentation const& p) {
      if (!p.table) {
        throw ValidationError("table backend requires a multiplication table");
      }
      MultiplicationTable const& t = *p.table;
      std::size_t const          n = t.order;
      if (n == 0) {
        throw ValidationError("table order must be positive");
      }
      if (t.products.size() != n * n) {
        throw ValidationError("multiplication table has "
                              + std::to_string(t.products.size())
                              + " entries, expected " + std::to_string(n * n));
      }
      if (t.images.size() != p.generators.size()) {
        throw ValidationError("every generator needs a table image");
      }
      auto at = [&](std::size_t i, std::size_t j) { return t.products[i * n + j]; };
      for (std::uint32_t e : t.products) {
        if (e >= n) {
          throw ValidationError("table entry " + std::to_string(e) + " out of range");
        }
      }
      for (std::uint32_t e : t.images) {
        if (e >= n) {
          throw ValidationError("generator image " + std::to_string(e)
                                + " out of range");
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (at(0, i) != i || at(i, 0) != i) {
          throw ValidationError("element 0 is not the identity of the table");
        }
        bool has_inverse = false;
        for (std::size_t j = 0; j < n; ++j) {
          has_inverse = has_inverse || (at(i, j) == 0 && at(j, i) == 0);
        }
        if (!has_inverse) {
          throw ValidationError("element " + std::to_string(i) + " has no inverse");
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < n; ++k) {
            if (at(at(i, j), k) != at(i, at(j, k))) {
              throw ValidationError("multiplication table is not associative");
            }
          }
        }
      }
    }

  }  // namespace

  GroupModel::GroupModel(Presentation presentation)
      : _presentation(std::move(presentation)) {
    Presentation& p = _presentation;
    std::size_t const rank = p.generators.size();
    for (Word const& r : p.relators) {
      for (Letter x : r) {
        if (x.generator() >= rank) {
          throw ValidationError("relator uses an undeclared generator");
        }
      }
    }

    switch (p.backend) {
      case Backend::FreeReduction:
        if (!p.relators.empty()) {
          throw ValidationError("free backend requires an empty relator list");
        }
        _solver = std::make_shared<FreeSolver>();
        break;
      case Backend::AbelianNormalForm: {
        std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (Word const& r : p.relators) {
          std::pair<std::uint32_t, std::uint32_t> pair;
          if (!is_commutator(cyclic_reduce(r), pair)) {
            throw ValidationError(
                "abelian backend relators must be commutators of generator pairs, got "
                + to_string(r, p.generators));
          }
          if (!pairs.insert(pair).second) {
            throw ValidationError("duplicate commutator relator "
                                  + to_string(r, p.generators));
          }
        }
        if (pairs.size() != rank * (rank - (rank > 0 ? 1 : 0)) / 2) {
          throw ValidationError(
              "abelian backend requires the commutator of every generator pair");
        }
        _solver = std::make_shared<AbelianSolver>(rank);
        break;
      }
      case Backend::DehnAlgorithm:
        for (Word const& r : p.relators) {
          if (r.empty() || !is_cyclically_reduced(r)) {
            throw ValidationError("dehn backend requires cyclically reduced relators, got "
                                  + to_string(r, p.generators));
          }
        }
        _solver = std::make_shared<DehnSolver>(p.relators);
        break;
      case Backend::FiniteTable: {
        validate_table(p);
        auto solver = std::make_shared<TableSolver>(*p.table, rank);
        if (solver->reached() != p.table->order) {
          throw ValidationError("table generator images do not generate the group");
        }
        for (Word const& r : p.relators) {
          if (!solver->is_trivial(r)) {
            throw ValidationError("relator " + to_string(r, p.generators)
                                  + " is not the identity in the table");
          }
        }
        _solver = solver;
        break;
      }
    }

    _alphabet = p.generators;
    for (std::size_t g = 0; g < rank; ++g) {
      _images.push_back({Letter(static_cast<std::uint32_t>(g), false)});
    }
    for (auto const& [symbol, image] : p.marking) {
      if (p.generators.contains(symbol)) {
        throw ValidationError(std::string("marking symbol '") + symbol
                              + "' is already a generator");
      }
      for (Letter x : image) {
        if (x.generator() >= rank) {
          throw ValidationError("marking image uses an undeclared generator");
        }
      }
      _alphabet.push_back(symbol);
      _images.push_back(free_reduce(image));
    }

    // Exponent-sum homomorphisms to Z.
    std::vector<IntVector> rows;
    bool                   even = !p.relators.empty();
    for (Word const& r : p.relators) {
      IntVector row(rank, 0);
      for (Letter x : r) {
        row[x.generator()] += x.sign();
      }
      rows.push_back(std::move(row));
      even = even && free_reduce(r).size() % 2 == 0;
    }
    if (rows.empty()) {
      for (std::size_t g = 0; g < rank; ++g) {
        IntVector f(rank, 0);
        f[g] = 1;
        _functionals.push_back(std::move(f));
      }
    } else {
      _functionals = detail::integer_kernel(rows, rank);
    }
    _parity_invariant = even && p.backend != Backend::FiniteTable;
  }

  std::vector<Word> GroupModel::basis_steps() const {
    return std::vector<Word>(_images.begin(),
                             _images.begin() + static_cast<long>(generators().size()));
  }

  void GroupModel::check_dehn() const {
    if (backend() == Backend::DehnAlgorithm && !_presentation.small_cancellation) {
      throw DehnNotApplicable(
          "group '" + name()
          + "' uses the dehn backend without a small_cancellation declaration");
    }
  }

  bool GroupModel::geodesic_forms() const noexcept {
    return identity_marking() && backend() != Backend::DehnAlgorithm;
  }

  Word GroupModel::evaluate(std::span<Letter const> w) const {
    Word result;
    for (Letter x : w) {
      if (x.generator() >= _images.size()) {
        throw ValidationError("letter outside the marked alphabet");
      }
      Word const& img = _images[x.generator()];
      if (x.inverted()) {
        Word inv = inverse(img);
        result.insert(result.end(), inv.begin(), inv.end());
      } else {
        result.insert(result.end(), img.begin(), img.end());
      }
    }
    return free_reduce(result);
  }

  Word GroupModel::reduce(std::span<Letter const> w) const {
    check_dehn();
    return _solver->reduce(evaluate(w));
  }

  bool GroupModel::is_trivial(std::span<Letter const> w) const {
    check_dehn();
    return _solver->is_trivial(evaluate(w));
  }

  bool GroupModel::equal(std::span<Letter const> u, std::span<Letter const> v) const {
    Word w = concat(u, inverse(v));
    return is_trivial(w);
  }

  namespace {

    // Shortlex-least word over the given steps representing target, by BFS.
    Word least_word(GroupModel const&        model,
                    std::vector<Word> const& steps,
                    Word const&              target_form,
                    std::size_t              radius,
                    std::size_t              budget) {
      detail::ElementIndex target(model);
      target.insert(target_form, 0);
      std::optional<Word> found;
      detail::cayley_bfs(model, steps, radius, budget,
                         [&](Word const& word, Word const& form, std::size_t) {
                           if (target.find(form)) {
                             found = word;
                             return false;
                           }
                           return true;
                         });
      if (!found) {
        throw BallExhausted("element not reached within radius "
                            + std::to_string(radius));
      }
      return *found;
    }

  }  // namespace

  GroupElement GroupModel::element(std::span<Letter const> w, std::size_t budget) const {
    Word form = reduce(w);
    if (canonical_forms()) {
      return GroupElement(std::move(form), *this);
    }
    std::size_t bound = form.size();
    return GroupElement(least_word(*this, basis_steps(), form, bound, budget), *this);
  }

  std::size_t GroupModel::geodesic_length(std::span<Letter const> w,
                                          std::size_t             budget) const {
    if (geodesic_forms()) {
      return reduce(w).size();
    }
    return geodesic_word(w, budget).size();
  }

  Word GroupModel::geodesic_word(std::span<Letter const> w, std::size_t budget) const {
    Word form = reduce(w);
    if (geodesic_forms()) {
      return form;
    }
    // The generators are letters of A, so |form| bounds the length.
    return least_word(*this, _images, form, form.size(), budget);
  }

  std::vector<BallEntry> GroupModel::ball(std::size_t radius, std::size_t budget) const {
    std::vector<BallEntry> entries;
    bool const             basis_is_alphabet = identity_marking();
    detail::cayley_bfs(*this, _images, radius, budget,
                       [&](Word const& word, Word const& form, std::size_t depth) {
                         Word nf;
                         if (canonical_forms()) {
                           nf = form;
                         } else if (basis_is_alphabet) {
                           nf = word;
                         } else {
                           nf = element(form, budget).normal_form();
                         }
                         entries.push_back(
                             BallEntry{GroupElement(std::move(nf), *this), word, depth});
                         return true;
                       });
    std::sort(entries.begin(), entries.end(), [](BallEntry const& x, BallEntry const& y) {
      return shortlex_less(x.element.normal_form(), y.element.normal_form());
    });
    return entries;
  }

  std::vector<std::size_t> GroupModel::sphere_sizes(std::size_t radius,
                                                    std::size_t budget) const {
    std::vector<std::size_t> sizes(radius + 1, 0);
    detail::cayley_bfs(*this, _images, radius, budget,
                       [&](Word const&, Word const&, std::size_t depth) {
                         ++sizes[depth];
                         return true;
                       });
    return sizes;
  }

  IntVector GroupModel::invariant_of_generator_word(std::span<Letter const> w) const {
    std::size_t const rank = generators().size();
    IntVector         e(rank, 0);
    for (Letter x : w) {
      e[x.generator()] += x.sign();
    }
    IntVector result;
    result.reserve(_functionals.size() + 1);
    for (IntVector const& f : _functionals) {
      std::int64_t s = 0;
      for (std::size_t g = 0; g < rank; ++g) {
        s += f[g] * e[g];
      }
      result.push_back(s);
    }
    if (_parity_invariant) {
      result.push_back(static_cast<std::int64_t>(free_reduce(w).size() % 2));
    }
    return result;
  }

  IntVector GroupModel::invariant(std::span<Letter const> w) const {
    return invariant_of_generator_word(evaluate(w));
  }

  std::uint32_t GroupModel::table_element(std::span<Letter const> generator_word) const {
    auto const* table = dynamic_cast<TableSolver const*>(_solver.get());
    if (table == nullptr) {
      throw ModeUnsupported("group '" + name() + "' has no multiplication table");
    }
    return table->evaluate(generator_word);
  }

  std::uint32_t GroupModel::table_multiply(std::uint32_t x, std::uint32_t y) const {
    auto const* table = dynamic_cast<TableSolver const*>(_solver.get());
    if (table == nullptr) {
      throw ModeUnsupported("group '" + name() + "' has no multiplication table");
    }
    return table->mul(x, y);
  }

  namespace detail {

    std::size_t IntVectorHash::operator()(IntVector const& v) const noexcept {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (std::int64_t x : v) {
        h ^= static_cast<std::uint64_t>(x);
        h *= 0x100000001b3ULL;
      }
      return static_cast<std::size_t>(h);
    }

    ElementIndex::ElementIndex(GroupModel const& model) : _model(&model) {}

    std::optional<std::size_t> ElementIndex::find(
        std::span<Letter const> generator_word) const {
      WordProblem const& solver = _model->solver();
      Word               form   = solver.reduce(generator_word);
      if (auto it = _by_form.find(form); it != _by_form.end()) {
        return it->second;
      }
      if (solver.canonical()) {
        return std::nullopt;
      }
      auto bucket = _buckets.find(_model->invariant_of_generator_word(form));
      if (bucket == _buckets.end()) {
        return std::nullopt;
      }
      for (auto const& [other, id] : bucket->second) {
        if (solver.is_trivial(concat(form, inverse(other)))) {
          return id;
        }
      }
      return std::nullopt;
    }

    void ElementIndex::insert(std::span<Letter const> generator_word, std::size_t id) {
      WordProblem const& solver = _model->solver();
      Word               form   = solver.reduce(generator_word);
      if (!solver.canonical()) {
        _buckets[_model->invariant_of_generator_word(form)].emplace_back(form, id);
      }
      _by_form.emplace(std::move(form), id);
      ++_size;
    }

    void cayley_bfs(GroupModel const&        model,
                    std::vector<Word> const& steps,
                    std::size_t              radius,
                    std::size_t              budget,
                    CayleyVisitor const&     visit) {
      if (model.backend() == Backend::DehnAlgorithm) {
        model.reduce(Word{});  // declaration check
      }
      WordProblem const&         solver = model.solver();
      ElementIndex               index(model);
      std::vector<Word>          forms;
      std::vector<std::uint32_t> parent;
      std::vector<Letter>        via;
      std::vector<std::uint32_t> depth;

      auto word_of = [&](std::size_t v) {
        Word w;
        while (v != 0) {
          w.push_back(via[v]);
          v = parent[v];
        }
        std::reverse(w.begin(), w.end());
        return w;
      };

      forms.push_back({});
      parent.push_back(0);
      via.push_back(Letter{});
      depth.push_back(0);
      index.insert(forms[0], 0);
      if (!visit(Word{}, forms[0], 0)) {
        return;
      }
      std::vector<Word> inverses;
      for (Word const& s : steps) {
        inverses.push_back(inverse(s));
      }

      for (std::size_t head = 0; head < forms.size(); ++head) {
        if (depth[head] >= radius) {
          continue;
        }
        for (std::uint32_t code = 0; code < 2 * steps.size(); ++code) {
          Letter      x    = Letter::from_code(code);
          Word const& step = x.inverted() ? inverses[x.generator()] : steps[x.generator()];
          Word        next = solver.reduce(concat(forms[head], step));
          if (index.find(next)) {
            continue;
          }
          if (forms.size() >= budget) {
            throw BallExhausted("ball enumeration exceeded the budget of "
                                + std::to_string(budget) + " elements");
          }
          std::size_t id = forms.size();
          index.insert(next, id);
          forms.push_back(std::move(next));
          parent.push_back(static_cast<std::uint32_t>(head));
          via.push_back(x);
          depth.push_back(depth[head] + 1);
          if (!visit(word_of(id), forms[id], depth[id])) {
            return;
          }
        }
      }
    }

  }  // namespace detail

}  // namespace relcay
