#include <set>

#include "doctest.h"
#include "support.hpp"

#include "relcay/errors.hpp"

using namespace relcay;

TEST_CASE("word parsing and rendering") {
  Alphabet ab(std::vector<char>{'a', 'b'});
  CHECK(to_string(parse_word("ab^-1a^2", ab), ab) == "aBaa");
  CHECK(to_string(parse_word("[a,b]", ab), ab) == "abAB");
  CHECK(to_string(parse_word("(ab)^-2", ab), ab) == "BABA");
  CHECK(to_string(parse_word("1", ab), ab) == "1");
  CHECK_THROWS_AS(parse_word("ac", ab), ParseError);
  CHECK(to_string(free_reduce(parse_word("abBAb", ab)), ab) == "b");
}

TEST_CASE("free group balls match brute-force reduction") {
  auto f2 = fixture::load("f2.grp");
  for (std::size_t r = 0; r <= 4; ++r) {
    std::set<std::string> seen;
    for (auto const& w : oracle::all_words("aAbB", r)) {
      seen.insert(oracle::free_reduce(w));
    }
    CHECK(f2.model->ball(r).size() == seen.size());
  }
  CHECK(f2.model->ball(2).size() == 17);
  auto sizes = f2.model->sphere_sizes(3);
  CHECK(sizes == std::vector<std::size_t>{1, 4, 12, 36});
}

TEST_CASE("free abelian balls match lattice counts") {
  auto z2 = fixture::load("z2.grp");
  for (std::size_t r = 0; r <= 6; ++r) {
    std::size_t points = 0;
    for (int x = -6; x <= 6; ++x) {
      for (int y = -6; y <= 6; ++y) {
        points += static_cast<std::size_t>(std::abs(x) + std::abs(y)) <= r;
      }
    }
    CHECK(z2.model->ball(r).size() == points);
  }
  CHECK(z2.model->equal(z2.word("ab"), z2.word("ba")));
  CHECK(z2.model->geodesic_length(z2.word("aaabbb")) == 6);
  CHECK(z2.model->geodesic_length(z2.word("aBAb")) == 0);
}

TEST_CASE("surface group word problem and growth") {
  auto s = fixture::load("genus2.grp");
  CHECK(s.model->is_trivial(s.word("[a,b][c,d]")));
  CHECK(s.model->is_trivial(s.word("bABcdCDa")));
  CHECK_FALSE(s.model->is_trivial(s.word("abAB")));
  CHECK(s.model->geodesic_length(s.word("abAB")) == 4);
  // Half relators of length 5 shorten to 3.
  CHECK(s.model->geodesic_length(s.word("abABc")) == 3);

  // Below length 4 no relator applies, so spheres count reduced words; at
  // length 4 each split of a length-8 cyclic relator word identifies one pair.
  std::string const rel = "abABcdCD";
  std::string       inv_rel;
  for (auto it = rel.rbegin(); it != rel.rend(); ++it) {
    inv_rel.push_back(oracle::inv(*it));
  }
  std::set<std::set<std::string>> pairs;
  for (std::string const& r : {rel, inv_rel}) {
    for (std::size_t shift = 0; shift < r.size(); ++shift) {
      std::string c = r.substr(shift) + r.substr(0, shift);
      std::string u = c.substr(0, 4), v = c.substr(4);
      std::string vi;
      for (auto it = v.rbegin(); it != v.rend(); ++it) {
        vi.push_back(oracle::inv(*it));
      }
      pairs.insert({u, vi});
    }
  }
  std::size_t const reduced4 = 8 * 7 * 7 * 7;
  auto              sizes    = s.model->sphere_sizes(4);
  CHECK(sizes == std::vector<std::size_t>{1, 8, 56, 392, reduced4 - pairs.size()});
}

TEST_CASE("finite table backend") {
  auto t = fixture::load("z2table.grp");
  CHECK(t.model->ball(5).size() == 2);
  CHECK(t.model->is_trivial(t.word("aa")));
  CHECK_FALSE(t.model->is_trivial(t.word("aaa")));
  CHECK(t.model->canonical_forms());
}

TEST_CASE("backend validation") {
  CHECK_THROWS_AS(fixture::from_text("group g { generators: a, b; relators: [a,b]; backend: free; }"),
                  ValidationError);
  // A Dehn model without the declaration loads but refuses to reduce.
  auto d = fixture::from_text(
      "group g { generators: a, b, c, d; relators: [a,b][c,d]; backend: dehn; }");
  CHECK_THROWS_AS(d.model->is_trivial(d.word("ab")), DehnNotApplicable);
  CHECK_THROWS_AS(
      fixture::from_text("group g { generators: a, b; relators: aab; backend: abelian; }"),
      ValidationError);
  // Associativity failure in a table.
  CHECK_THROWS_AS(fixture::from_text("group g { generators: a; relators: ; backend: table; "
                                     "order: 3; table: 0,1,2 / 1,0,0 / 2,0,1; images: a=1; }"),
                  ValidationError);
}

TEST_CASE("marked alphabets may repeat generators and hit the identity") {
  auto z = fixture::from_text("group z { generators: a; backend: free; marking: e=1, c=a; }");
  CHECK(z.model->k() == 3);
  CHECK(z.model->is_trivial(z.word("e")));
  CHECK(z.model->equal(z.word("c"), z.word("a")));
  // Letters a and c both step to the same neighbours.
  CHECK(z.model->ball(2).size() == 5);
  CHECK(z.model->geodesic_length(z.word("aeeec")) == 2);
  CHECK_FALSE(z.model->geodesic_forms());
}

TEST_CASE("invariants separate elements of the abelianisation") {
  auto s = fixture::load("genus2.grp");
  CHECK(s.model->invariant(s.word("ab")) == s.model->invariant(s.word("ba")));
  CHECK(s.model->invariant(s.word("a")) != s.model->invariant(s.word("b")));
}
