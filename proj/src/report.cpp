#include "relcay/report.hpp"

#include <cstdio>
#include <sstream>

namespace relcay {

  std::string rational(mpq_class const& q) {
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 1) {
      return c.get_num().get_str();
    }
    return c.get_num().get_str() + "/" + c.get_den().get_str();
  }

  std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
  }

  namespace {

    std::string decimal(long double x) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17Lg", x);
      return buf;
    }

  }  // namespace

  bool RunManifest::all_certified() const {
    for (auto const* flags : {&certified, &exhaustive}) {
      for (auto const& [k, v] : flags->items()) {
        if (!v.get<bool>()) {
          return false;
        }
      }
    }
    return true;
  }

  ordered_json to_json(RunManifest const& m) {
    ordered_json j;
    j["command"]     = m.command;
    j["spec_hash"]   = m.spec_hash;
    j["version"]     = kVersion;
    j["seed"]        = m.seed ? ordered_json(*m.seed) : ordered_json(nullptr);
    j["certified"]   = m.certified;
    j["exhaustive"]  = m.exhaustive;
    j["duration_ms"] = m.duration_ms;
    return j;
  }

  ordered_json envelope(RunManifest const& m, ordered_json result) {
    ordered_json j;
    j["schema"]   = kSchema;
    j["manifest"] = to_json(m);
    j["result"]   = std::move(result);
    return j;
  }

  ordered_json to_json(DeltaReport const& r) {
    ordered_json j;
    j["mode"]            = to_string(r.mode);
    j["radius"]          = r.radius;
    j["delta_emp"]       = r.delta_emp.decimal();
    j["delta_doubled"]   = r.delta_emp.value;
    j["witness"]         = r.witness;
    j["pairs_scanned"]   = r.pairs_scanned;
    j["triples_scanned"] = r.triples_scanned;
    j["exhaustive"]      = r.exhaustive;
    j["certified"]       = r.certified;
    j["method"]          = r.method;
    return j;
  }

  ordered_json to_json(QuasiconvexityReport const& r, Alphabet const& alphabet) {
    ordered_json j;
    j["radius_scanned"] = r.radius_scanned;
    j["E_emp"]          = r.E_emp;
    j["pairs_scanned"]  = r.pairs_scanned;
    j["certified"]      = r.certified;
    j["witness"]        = {{"source", to_string(r.witness_source, alphabet)},
                           {"target", to_string(r.witness_target, alphabet)},
                           {"vertex", to_string(r.witness_vertex, alphabet)}};
    return j;
  }

  ordered_json to_json(DefectReport const& r, Alphabet const& alphabet) {
    ordered_json j;
    j["radius_scanned"] = r.radius_scanned;
    j["K_emp"]          = r.K_emp;
    j["hausdorff_emp"]  = r.hausdorff_emp;
    j["pairs_scanned"]  = r.pairs_scanned;
    j["certified"]      = r.certified;
    j["witness"]        = {{"h", to_string(r.witness_h, alphabet)},
                           {"g", to_string(r.witness_g, alphabet)}};
    return j;
  }

  ordered_json to_json(ConstantLadder const& l) {
    ordered_json in;
    in["delta"]         = l.inputs.delta.get_str();
    in["E"]             = l.inputs.E.get_str();
    in["K"]             = l.inputs.K.get_str();
    in["N"]             = l.inputs.N.get_str();
    in["N_exact"]       = l.inputs.N_exact;
    in["delta_clamped"] = l.inputs.delta_clamped;
    ordered_json j;
    j["inputs"]      = in;
    j["K1"]          = l.K1.get_str();
    j["K2"]          = l.K2.get_str();
    j["K3"]          = l.K3.get_str();
    j["delta_prime"] = l.delta_prime.get_str();
    j["branch"]      = l.first_branch ? "6K1 + 2K2 + 12delta" : "K3 + 7delta";
    j["lower_bound_ladder"] = !l.inputs.N_exact;
    return j;
  }

  ordered_json to_json(GrowthCount const& n) {
    return {{"N", n.N.get_str()}, {"exact", n.exact}, {"method", n.method}};
  }

  ordered_json to_json(LadderVerdict const& v) {
    return {{"verdict", v.consistent ? "consistent" : "inconsistent"},
            {"asserted", v.asserted},
            {"slack", v.slack_decimal()}};
  }

  ordered_json to_json(WalkResult const& r) {
    ordered_json j;
    j["trials"]           = r.trials;
    j["returned"]         = r.returned;
    j["escaped_frontier"] = r.escaped_frontier;
    j["still_walking"]    = r.still_walking;
    j["return_freq"]      = rational(r.return_freq);
    j["certified"]        = r.certified;
    return j;
  }

  ordered_json to_json(EscapeEntry const& e) {
    ordered_json j;
    j["radius"]   = e.radius;
    j["vertices"] = e.vertices;
    j["closed"]   = e.closed;
    j["exact"]    = e.exact;
    j["certified"] = e.certified;
    j["p_esc"]    = e.exact ? ordered_json(rational(e.p_esc)) : ordered_json(nullptr);
    j["p_value"]  = decimal(e.p_value);
    j["r_eff"]    = e.r_eff ? ordered_json(rational(*e.r_eff)) : ordered_json(nullptr);
    j["r_value"]  = e.closed ? ordered_json(nullptr) : ordered_json(decimal(e.r_value));
    if (!e.exact) {
      j["residual"] = decimal(e.residual);
    }
    j["identity"] = e.identity;
    return j;
  }

  ordered_json to_json(EscapeProfile const& p) {
    ordered_json j;
    j["entries"] = ordered_json::array();
    for (auto const& e : p.entries) {
      j["entries"].push_back(to_json(e));
    }
    j["monotone"] = p.monotone;
    j["identity"] = p.identity;
    j["verdict"]  = to_string(p.verdict);
    j["reason"]   = p.reason;
    j["limit"]    = p.limit ? ordered_json(decimal(*p.limit)) : ordered_json(nullptr);
    return j;
  }

  ordered_json to_json(EmbeddingSpec const& s, Alphabet const& alphabet) {
    return {{"c", to_string(s.c, alphabet)},
            {"h0", to_string(s.h0, alphabet)},
            {"a", to_string(s.a, alphabet)},
            {"b", to_string(s.b, alphabet)},
            {"lambda_prime", s.lambda_prime}};
  }

  ordered_json to_json(EmbeddingReport const& r) {
    ordered_json j;
    j["radius"]     = r.radius;
    j["elements"]   = r.elements;
    j["pairs"]      = r.pairs;
    j["violations"] = r.violations;
    j["lambda_emp"] = rational(r.lambda_emp);
    j["injective"]  = r.injective;
    j["metric"]     = r.uses_core ? "folded core" : "coset ball";
    j["witness"]    = {r.witness_f1, r.witness_f2};
    return j;
  }

  ordered_json to_json(FreeProductCheck const& c, Alphabet const& alphabet) {
    ordered_json j;
    j["ok"]       = c.ok;
    j["products"] = c.products;
    j["witness"]  = c.ok ? ordered_json(nullptr) : ordered_json(to_string(c.witness, alphabet));
    return j;
  }

  std::string profile_csv(EscapeProfile const& p) {
    std::ostringstream out;
    out << "radius,vertices,p_esc,p_value,r_eff,r_value,identity\n";
    for (auto const& e : p.entries) {
      out << e.radius << ',' << e.vertices << ',' << (e.exact ? rational(e.p_esc) : "") << ','
          << decimal(e.p_value) << ',' << (e.r_eff ? rational(*e.r_eff) : "") << ','
          << (e.closed ? "" : decimal(e.r_value)) << ',' << (e.identity ? "true" : "false")
          << '\n';
    }
    return out.str();
  }

}  // namespace relcay
