#include <algorithm>
#include <functional>

#include "relcay/errors.hpp"
#include "relcay/random_walk.hpp"

namespace relcay {

  namespace {

    // Reduced words over {a, b} (letters 0 and 1) of length at most radius.
    std::vector<Word> free_ball(std::size_t radius) {
      std::vector<Word> out{Word{}};
      for (std::size_t head = 0; head < out.size(); ++head) {
        if (out[head].size() == radius) {
          continue;
        }
        for (std::uint32_t code = 0; code < 4; ++code) {
          Letter x = Letter::from_code(code);
          if (!out[head].empty() && out[head].back() == x.inverse()) {
            continue;
          }
          Word w = out[head];
          w.push_back(x);
          out.push_back(std::move(w));
        }
      }
      return out;
    }

    std::string ab_string(Word const& f) {
      static Alphabet const ab(std::vector<char>{'a', 'b'});
      return to_string(f, ab);
    }

  }  // namespace

  EmbeddingSpec make_embedding_spec(Subgroup const& subgroup, Word const& c, Word const& h0,
                                    std::size_t budget) {
    GroupModel const& model = subgroup.model();
    if (subgroup.trivial()) {
      throw ValidationError("the embedding needs a nontrivial subgroup");
    }
    if (model.is_trivial(h0)) {
      throw ValidationError("h0 must be nontrivial");
    }
    if (!subgroup.contains(h0).inside()) {
      throw MembershipFailed("h0 is not certified to lie in the subgroup");
    }
    Word const ci = inverse(c);
    Word const u  = model.evaluate(c);
    Word const h  = model.evaluate(h0);
    Word const ui = inverse(u);

    EmbeddingSpec s;
    s.c            = c;
    s.h0           = h0;
    s.a            = model.solver().reduce(concat(concat(u, h), ui));
    s.b            = model.solver().reduce(concat(concat(concat(u, u), h), concat(ui, ui)));
    s.lambda_prime = std::max(model.geodesic_length(s.a, budget), model.geodesic_length(s.b, budget));
    return s;
  }

  EmbeddingReport build_embedding(Subgroup const& subgroup, EmbeddingSpec const& spec,
                                  std::size_t radius, std::size_t budget) {
    std::vector<Word> const fs = free_ball(radius);
    std::vector<Word>       images;
    Word const              ai = inverse(spec.a), bi = inverse(spec.b);
    for (Word const& f : fs) {
      Word w;
      for (Letter x : f) {
        Word const& piece = x.generator() == 0 ? (x.inverted() ? ai : spec.a)
                                               : (x.inverted() ? bi : spec.b);
        w.insert(w.end(), piece.begin(), piece.end());
      }
      images.push_back(free_reduce(w));
    }
    CosetMetric     metric(subgroup, 2 * spec.lambda_prime * std::max<std::size_t>(radius, 1),
                           budget);
    EmbeddingReport r;
    r.radius    = radius;
    r.elements  = fs.size();
    r.uses_core = metric.uses_core();
    bool have   = false;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        std::size_t const dF = free_reduce(concat(inverse(fs[i]), fs[j])).size();
        std::size_t const dY = metric.distance(images[i], images[j]);
        ++r.pairs;
        if (dY > spec.lambda_prime * dF) {
          ++r.violations;
        }
        mpq_class ratio(static_cast<unsigned long>(dY), static_cast<unsigned long>(dF));
        ratio.canonicalize();
        if (!have || ratio < r.lambda_emp) {
          have         = true;
          r.lambda_emp = ratio;
          r.witness_f1 = ab_string(fs[i]);
          r.witness_f2 = ab_string(fs[j]);
        }
      }
    }
    r.injective = !have || r.lambda_emp > 0;
    return r;
  }

  FreeProductCheck free_product_sanity(Subgroup const& subgroup, Word const& c,
                                       std::size_t length_bound, std::size_t budget) {
    GroupModel const& model = subgroup.model();
    if (c.empty() || model.is_trivial(c)) {
      throw ValidationError("c must be nontrivial");
    }
    // Nontrivial elements of H within the bound, by geodesic representative.
    Subgroup const  one(model, trivial_subgroup_spec(model), budget);
    CosetBall const ball = build_ball(one, length_bound, budget);
    std::vector<std::pair<Word, std::size_t>> members;
    for (CosetVertex const& v : ball.vertices()) {
      if (v.depth > 0 && subgroup.contains(v.rep).inside()) {
        members.emplace_back(model.evaluate(v.rep), v.depth);
      }
    }
    Word const        cg = model.evaluate(c);
    Word const        ci = inverse(cg);
    std::size_t const lc = c.size();

    FreeProductCheck out;
    enum class Last { None, H, C };
    std::function<bool(Word const&, std::size_t, Last)> extend
        = [&](Word const& product, std::size_t used, Last last) {
            auto visit = [&](Word next, std::size_t cost, Last kind) {
              ++out.products;
              if (model.solver().is_trivial(next)) {
                out.ok      = false;
                out.witness = std::move(next);
                return false;
              }
              return extend(next, cost, kind);
            };
            if (last != Last::H) {
              for (auto const& [h, len] : members) {
                if (used + len <= length_bound && !visit(concat(product, h), used + len, Last::H)) {
                  return false;
                }
              }
            }
            if (last != Last::C) {
              for (std::size_t e = 1; used + e * lc <= length_bound; ++e) {
                for (Word const* piece : {&cg, &ci}) {
                  Word next = product;
                  for (std::size_t i = 0; i < e; ++i) {
                    next.insert(next.end(), piece->begin(), piece->end());
                  }
                  if (!visit(std::move(next), used + e * lc, Last::C)) {
                    return false;
                  }
                }
              }
            }
            return true;
          };
    extend(Word{}, 0, Last::None);
    return out;
  }

}  // namespace relcay
