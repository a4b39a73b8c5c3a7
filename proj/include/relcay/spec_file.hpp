#pragma once

// Reader for group/subgroup description files:
//
//   group f2 { generators: a, b; relators: ; backend: free }
//   subgroup Ha { generators: a; membership: stallings }
//
// Group fields: generators, relators, backend (free|dehn|abelian|table),
// marking (x=<word>, ...), small_cancellation (yes|no), and for tables
// order, table (rows separated by '/') and images (a=<element>, ...).
// Subgroup fields: generators, membership (stallings|bounded(<limit>)).
// '#' starts a comment that runs to the end of the line.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relcay/group_model.hpp"
#include "relcay/subgroup.hpp"

namespace relcay {

  struct Diagnostic {
    std::size_t line   = 0;
    std::size_t column = 0;
    std::string message;
  };

  struct SubgroupDecl {
    std::string  name;
    SubgroupSpec spec;
    std::size_t  line = 0, column = 0;
  };

  struct SpecFile {
    std::optional<Presentation> group;
    std::size_t                 group_line = 0, group_column = 0;
    std::vector<SubgroupDecl>   subgroups;
    std::vector<Diagnostic>     diagnostics;

    bool ok() const noexcept {
      return diagnostics.empty();
    }
    // nullptr when absent.
    SubgroupDecl const* subgroup(std::string_view name) const;
  };

  // Never throws: grammar and compatibility problems become diagnostics.
  SpecFile parse_spec(std::string_view text);
  // Throws ValidationError when the file cannot be read.
  SpecFile read_spec_file(std::filesystem::path const& path);
  // Throws ParseError for the first diagnostic, if any.
  void require_valid(SpecFile const& spec);

  std::string normalized(SpecFile const& spec);

}  // namespace relcay
