#include "doctest.h"
#include "support.hpp"

#include "relcay/errors.hpp"

using namespace relcay;

namespace {

  // <a^2, b>: reduced words whose maximal a-syllables all have even length.
  bool in_a2b(std::string const& reduced) {
    std::size_t run = 0;
    for (char c : reduced + "b") {
      if (c == 'a' || c == 'A') {
        ++run;
      } else {
        if (run % 2 != 0) {
          return false;
        }
        run = 0;
      }
    }
    return true;
  }

}  // namespace

TEST_CASE("stallings membership agrees with the syllable oracle") {
  auto p = fixture::load("f2.grp", "Ha2b");
  for (auto const& w : oracle::all_words("aAbB", 5)) {
    std::string const reduced = oracle::free_reduce(w);
    auto              v       = p.subgroup->contains(p.word(w.empty() ? "1" : w));
    CHECK(v.answer != Answer::Unknown);
    CHECK(v.inside() == in_a2b(reduced));
    if (v.inside() && v.certificate) {
      CHECK(free_reduce(p.subgroup->expand(*v.certificate)) == free_reduce(p.word(w.empty() ? "1" : w)));
    }
  }
  auto v = p.subgroup->contains(p.word("aabaa^-1"));
  REQUIRE(v.inside());
  CHECK(p.subgroup->certificate_string(*v.certificate) == "(aa)(b)");
  auto v2 = p.subgroup->contains(p.word("a^2ba^-2"));
  CHECK(p.subgroup->certificate_string(*v2.certificate) == "(aa)(b)(aa)^-1");
}

TEST_CASE("folded cores") {
  CHECK(fixture::load("f2.grp", "Ha").subgroup->core()->vertex_count() == 1);
  CHECK(fixture::load("f2.grp", "Hab").subgroup->core()->vertex_count() == 2);
  // Index-2 subgroups have a two-vertex covering graph as their core.
  auto idx2 = fixture::load("f2.grp", "Hidx2");
  CHECK(idx2.subgroup->core()->vertex_count() == 2);
  CHECK(idx2.subgroup->core()->edge_count() == 4);
  CHECK(idx2.subgroup->contains(idx2.word("bb")).inside());
  CHECK_FALSE(idx2.subgroup->contains(idx2.word("b")).inside());
}

TEST_CASE("coset-minimal representatives") {
  auto hab = fixture::load("f2.grp", "Hab");
  CHECK(to_string(coset_min_rep(*hab.subgroup, hab.word("a")), hab.model->alphabet()) == "a");
  auto ha = fixture::load("f2.grp", "Ha");
  CHECK(to_string(coset_min_rep(*ha.subgroup, ha.word("aaab")), ha.model->alphabet()) == "b");
}

TEST_CASE("abelian and surface membership") {
  auto z2 = fixture::load("z2.grp", "Ha");
  CHECK(z2.subgroup->contains(z2.word("a^5")).inside());
  CHECK(z2.subgroup->contains(z2.word("baB")).inside());
  CHECK(z2.subgroup->contains(z2.word("b")).answer == Answer::Outside);

  auto s = fixture::load("genus2.grp", "Ha");
  CHECK(s.subgroup->contains(s.word("aaa")).inside());
  // Exponent sums already rule b out.
  CHECK(s.subgroup->contains(s.word("b")).answer == Answer::Outside);
}

TEST_CASE("quasiconvexity estimates") {
  auto ha = fixture::load("f2.grp", "Ha");
  auto E  = estimate_E(*ha.subgroup, 4);
  CHECK(E.E_emp == 0);
  CHECK(E.certified);
  CHECK(E.pairs_scanned > 0);
  // Geodesics between elements of <a> never leave it, and a coset-minimal
  // g has no cancellation against h.
  auto K4 = estimate_K(*ha.subgroup, 4);
  CHECK(K4.K_emp == 0);

  auto hab = fixture::load("f2.grp", "Hab");
  auto Eab = estimate_E(*hab.subgroup, 4);
  CHECK(Eab.E_emp == 1);  // the midpoint a of ab
  // The K estimate stabilises once the radius covers the defect witness.
  auto K3 = estimate_K(*hab.subgroup, 3);
  auto K5 = estimate_K(*hab.subgroup, 4);
  CHECK(K3.K_emp == K5.K_emp);
}

TEST_CASE("membership on the bounded mode reports its bound") {
  auto s = fixture::load("genus2.grp", "Ha");
  auto v = s.subgroup->contains(s.word("bab^-1"));
  CHECK(v.answer != Answer::Inside);
}
