#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "json.hpp"

#include "relcay/constants.hpp"
#include "relcay/hyperbolicity.hpp"
#include "relcay/random_walk.hpp"
#include "relcay/subgroup.hpp"

namespace relcay {

  inline constexpr std::string_view kVersion = "0.1.0";
  inline constexpr std::string_view kSchema  = "1";

  using nlohmann::ordered_json;

  // "num/den" (or an integer when den = 1).
  std::string rational(mpq_class const& q);
  std::uint64_t fnv1a64(std::string_view bytes);
  std::string   hex64(std::uint64_t value);

  struct RunManifest {
    std::string                  command;
    std::string                  spec_hash = "none";
    std::optional<std::uint64_t> seed;
    ordered_json                 certified = ordered_json::object();
    ordered_json                 exhaustive = ordered_json::object();
    double                       duration_ms = 0;

    // Every flag, certified and exhaustive alike, is true.
    bool all_certified() const;
  };

  ordered_json to_json(RunManifest const& m);
  // {"schema", "manifest", "result"}.
  ordered_json envelope(RunManifest const& m, ordered_json result);

  ordered_json to_json(DeltaReport const& r);
  ordered_json to_json(QuasiconvexityReport const& r, Alphabet const& alphabet);
  ordered_json to_json(DefectReport const& r, Alphabet const& alphabet);
  ordered_json to_json(ConstantLadder const& l);
  ordered_json to_json(GrowthCount const& n);
  ordered_json to_json(LadderVerdict const& v);
  ordered_json to_json(WalkResult const& r);
  ordered_json to_json(EscapeEntry const& e);
  ordered_json to_json(EscapeProfile const& p);
  ordered_json to_json(EmbeddingSpec const& s, Alphabet const& alphabet);
  ordered_json to_json(EmbeddingReport const& r);
  ordered_json to_json(FreeProductCheck const& c, Alphabet const& alphabet);

  // radius,vertices,p_esc,p_value,r_eff,r_value,identity
  std::string profile_csv(EscapeProfile const& p);

}  // namespace relcay
