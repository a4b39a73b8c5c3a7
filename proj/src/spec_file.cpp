#include "relcay/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "relcay/errors.hpp"

namespace relcay {

  namespace {

    struct Field {
      std::string key;
      std::size_t key_offset;
      std::string value;  // comments blanked out, offsets preserved
      std::size_t value_offset;
    };

    struct Block {
      std::string        kind, name;
      std::size_t        offset;
      std::vector<Field> fields;
    };

    struct Item {
      std::string text;
      std::size_t offset;
    };

    std::string trim(std::string_view s, std::size_t& lead) {
      std::size_t b = 0, e = s.size();
      while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
      }
      while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
      }
      lead = b;
      return std::string(s.substr(b, e - b));
    }

    class Reader {
     public:
      explicit Reader(std::string_view text) : _text(text) {
        // Blank comments so offsets stay aligned with the original text.
        bool comment = false;
        for (char& c : _text) {
          if (c == '\n') {
            comment = false;
          } else if (c == '#') {
            comment = true;
          }
          if (comment) {
            c = ' ';
          }
        }
      }

      void diag(std::size_t offset, std::string message) {
        auto [line, column] = position(std::min(offset, _original_size()));
        _out.diagnostics.push_back({line, column, std::move(message)});
      }

      std::pair<std::size_t, std::size_t> position(std::size_t offset) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset && i < _text.size(); ++i) {
          if (_text[i] == '\n') {
            ++line;
            column = 1;
          } else {
            ++column;
          }
        }
        return {line, column};
      }

      SpecFile run() {
        std::vector<Block> blocks;
        while (true) {
          skip_space();
          if (_pos >= _text.size()) {
            break;
          }
          auto block = read_block();
          if (!block) {
            break;
          }
          blocks.push_back(std::move(*block));
        }
        if (!_out.diagnostics.empty()) {
          return std::move(_out);
        }
        bool seen_group = false;
        for (Block const& b : blocks) {
          if (b.kind == "group") {
            if (seen_group) {
              diag(b.offset, "only one group block is allowed per file");
              continue;
            }
            seen_group = true;
            interpret_group(b);
          } else if (!seen_group) {
            diag(b.offset, "subgroup '" + b.name + "' appears before the group block");
          } else if (_out.group) {
            interpret_subgroup(b);
          }
        }
        if (!seen_group && _out.diagnostics.empty()) {
          diag(_text.size(), "missing group block");
        }
        return std::move(_out);
      }

     private:
      std::size_t _original_size() const {
        return _text.size();
      }

      void skip_space() {
        while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
      }

      std::string identifier() {
        std::size_t start = _pos;
        while (_pos < _text.size()
               && (std::isalnum(static_cast<unsigned char>(_text[_pos])) || _text[_pos] == '_'
                   || _text[_pos] == '-')) {
          ++_pos;
        }
        return _text.substr(start, _pos - start);
      }

      std::optional<Block> read_block() {
        Block b;
        b.offset = _pos;
        b.kind   = identifier();
        if (b.kind != "group" && b.kind != "subgroup") {
          diag(b.offset, b.kind.empty() ? "unexpected character '" + std::string(1, _text[_pos]) + "'"
                                        : "expected 'group' or 'subgroup', found '" + b.kind + "'");
          return std::nullopt;
        }
        skip_space();
        std::size_t name_at = _pos;
        b.name              = identifier();
        if (b.name.empty()) {
          diag(name_at, "expected a block name");
          return std::nullopt;
        }
        skip_space();
        if (_pos >= _text.size() || _text[_pos] != '{') {
          diag(_pos, "expected '{'");
          return std::nullopt;
        }
        ++_pos;
        while (true) {
          skip_space();
          if (_pos >= _text.size()) {
            diag(_pos, "unterminated block '" + b.name + "'");
            return std::nullopt;
          }
          if (_text[_pos] == '}') {
            ++_pos;
            return b;
          }
          if (_text[_pos] == ';') {
            ++_pos;
            continue;
          }
          Field f;
          f.key_offset = _pos;
          f.key        = identifier();
          if (f.key.empty()) {
            diag(_pos, "expected a field name");
            return std::nullopt;
          }
          skip_space();
          if (_pos >= _text.size() || _text[_pos] != ':') {
            diag(_pos, "expected ':' after '" + f.key + "'");
            return std::nullopt;
          }
          ++_pos;
          f.value_offset = _pos;
          int depth      = 0;
          while (_pos < _text.size()) {
            char c = _text[_pos];
            if (c == '(' || c == '[') {
              ++depth;
            } else if ((c == ')' || c == ']') && depth > 0) {
              --depth;
            } else if (depth == 0 && (c == ';' || c == '}')) {
              break;
            }
            ++_pos;
          }
          f.value = _text.substr(f.value_offset, _pos - f.value_offset);
          b.fields.push_back(std::move(f));
        }
      }

      // Splits on commas outside brackets, trimming each piece.
      static std::vector<Item> split(Field const& f, char sep = ',') {
        std::vector<Item> items;
        int               depth = 0;
        std::size_t       start = 0;
        auto              flush = [&](std::size_t end) {
          std::size_t lead;
          std::string t = trim(std::string_view(f.value).substr(start, end - start), lead);
          items.push_back({t, f.value_offset + start + lead});
        };
        for (std::size_t i = 0; i < f.value.size(); ++i) {
          char c = f.value[i];
          if (c == '(' || c == '[') {
            ++depth;
          } else if ((c == ')' || c == ']') && depth > 0) {
            --depth;
          } else if (c == sep && depth == 0) {
            flush(i);
            start = i + 1;
          }
        }
        flush(f.value.size());
        if (items.size() == 1 && items[0].text.empty()) {
          items.clear();
        }
        return items;
      }

      std::optional<Word> word(Item const& item, Alphabet const& alphabet) {
        if (item.text.empty()) {
          diag(item.offset, "empty word (write 1 for the identity)");
          return std::nullopt;
        }
        try {
          return parse_word(item.text, alphabet);
        } catch (ParseError const& e) {
          std::string msg = e.what();
          msg             = msg.substr(msg.find(": ") + 2);
          diag(item.offset + e.column() - 1, msg);
          return std::nullopt;
        }
      }

      std::optional<long> integer(Item const& item) {
        long value = 0;
        auto [ptr, ec] = std::from_chars(item.text.data(), item.text.data() + item.text.size(), value);
        if (ec != std::errc() || ptr != item.text.data() + item.text.size() || item.text.empty()) {
          diag(item.offset, "expected an integer, found '" + item.text + "'");
          return std::nullopt;
        }
        return value;
      }

      std::map<std::string, Field const*> index(Block const& b,
                                                std::vector<std::string> const& allowed) {
        std::map<std::string, Field const*> fields;
        for (Field const& f : b.fields) {
          if (std::find(allowed.begin(), allowed.end(), f.key) == allowed.end()) {
            diag(f.key_offset, "unknown field '" + f.key + "' in " + b.kind + " block");
            continue;
          }
          if (!fields.emplace(f.key, &f).second) {
            diag(f.key_offset, "duplicate field '" + f.key + "'");
          }
        }
        return fields;
      }

      void interpret_group(Block const& b) {
        auto fields = index(b, {"generators", "relators", "backend", "marking",
                                "small_cancellation", "order", "table", "images"});
        std::size_t const before = _out.diagnostics.size();
        Presentation      p;
        p.name             = b.name;
        _out.group_line    = position(b.offset).first;
        _out.group_column  = position(b.offset).second;

        if (!fields.count("generators")) {
          diag(b.offset, "group '" + b.name + "' has no generators field");
          return;
        }
        for (Item const& it : split(*fields["generators"])) {
          if (it.text.size() != 1) {
            diag(it.offset, "generator '" + it.text + "' must be a single lowercase letter");
            continue;
          }
          try {
            p.generators.push_back(it.text[0]);
          } catch (ValidationError const& e) {
            diag(it.offset, e.what());
          }
        }
        if (fields.count("backend")) {
          std::size_t lead;
          std::string v = trim(fields["backend"]->value, lead);
          std::size_t at = fields["backend"]->value_offset + lead;
          if (v == "free") {
            p.backend = Backend::FreeReduction;
          } else if (v == "dehn") {
            p.backend = Backend::DehnAlgorithm;
          } else if (v == "abelian") {
            p.backend = Backend::AbelianNormalForm;
          } else if (v == "table") {
            p.backend = Backend::FiniteTable;
          } else {
            diag(at, "unknown backend '" + v + "' (expected free, dehn, abelian or table)");
          }
        }
        if (fields.count("relators")) {
          for (Item const& it : split(*fields["relators"])) {
            if (auto w = word(it, p.generators)) {
              p.relators.push_back(free_reduce(*w));
            }
          }
        }
        if (fields.count("small_cancellation")) {
          std::size_t lead;
          std::string v = trim(fields["small_cancellation"]->value, lead);
          if (v == "yes" || v == "true") {
            p.small_cancellation = true;
          } else if (v != "no" && v != "false") {
            diag(fields["small_cancellation"]->value_offset + lead,
                 "small_cancellation must be yes or no");
          }
        }
        if (fields.count("marking")) {
          for (Item const& it : split(*fields["marking"])) {
            auto eq = it.text.find('=');
            if (eq == std::string::npos) {
              diag(it.offset, "marking entries look like x=<word>");
              continue;
            }
            std::size_t lead;
            std::string sym = trim(std::string_view(it.text).substr(0, eq), lead);
            if (sym.size() != 1 || !std::islower(static_cast<unsigned char>(sym[0]))) {
              diag(it.offset, "marking symbol '" + sym + "' must be a single lowercase letter");
              continue;
            }
            if (p.generators.contains(sym[0])
                || std::any_of(p.marking.begin(), p.marking.end(),
                               [&](auto const& m) { return m.first == sym[0]; })) {
              diag(it.offset, "marking symbol '" + sym + "' is already in use");
              continue;
            }
            std::string rest = trim(std::string_view(it.text).substr(eq + 1), lead);
            if (auto w = word({rest, it.offset + eq + 1 + lead}, p.generators)) {
              p.marking.emplace_back(sym[0], *w);
            }
          }
        }
        if (p.backend == Backend::FiniteTable) {
          interpret_table(b, fields, p);
        } else {
          for (char const* key : {"order", "table", "images"}) {
            if (fields.count(key)) {
              diag(fields[key]->key_offset,
                   std::string("field '") + key + "' only applies to the table backend");
            }
          }
        }
        if (_out.diagnostics.size() != before) {
          return;
        }
        try {
          GroupModel check(p);
          _out.group = std::move(p);
        } catch (ValidationError const& e) {
          diag(b.offset, e.what());
        }
      }

      void interpret_table(Block const&, std::map<std::string, Field const*>& fields,
                           Presentation& p) {
        for (char const* key : {"order", "table", "images"}) {
          if (!fields.count(key)) {
            diag(_text.size(), std::string("table backend needs the '") + key + "' field");
            return;
          }
        }
        MultiplicationTable t;
        std::size_t lead;
        std::string order = trim(fields["order"]->value, lead);
        auto n = integer({order, fields["order"]->value_offset + lead});
        if (!n || *n <= 0) {
          if (n) {
            diag(fields["order"]->value_offset + lead, "table order must be positive");
          }
          return;
        }
        t.order = static_cast<std::size_t>(*n);
        Field const& tf = *fields["table"];
        for (std::size_t i = 0; i < tf.value.size();) {
          while (i < tf.value.size()
                 && (std::isspace(static_cast<unsigned char>(tf.value[i])) || tf.value[i] == '/'
                     || tf.value[i] == ',')) {
            ++i;
          }
          std::size_t start = i;
          while (i < tf.value.size() && !std::isspace(static_cast<unsigned char>(tf.value[i]))
                 && tf.value[i] != '/' && tf.value[i] != ',') {
            ++i;
          }
          if (i > start) {
            auto v = integer({tf.value.substr(start, i - start), tf.value_offset + start});
            if (!v) {
              return;
            }
            if (*v < 0 || static_cast<std::size_t>(*v) >= t.order) {
              diag(tf.value_offset + start, "table entry out of range");
              return;
            }
            t.products.push_back(static_cast<std::uint32_t>(*v));
          }
        }
        t.images.assign(p.generators.size(), 0);
        std::vector<bool> given(p.generators.size(), false);
        for (Item const& it : split(*fields["images"])) {
          auto eq = it.text.find('=');
          std::size_t g = eq == 1 ? p.generators.index_of(it.text[0]) : p.generators.size();
          if (g == p.generators.size()) {
            diag(it.offset, "image entries look like <generator>=<element>");
            continue;
          }
          std::string rest = trim(std::string_view(it.text).substr(eq + 1), lead);
          auto v = integer({rest, it.offset + eq + 1 + lead});
          if (v) {
            t.images[g] = static_cast<std::uint32_t>(*v);
            given[g]    = true;
          }
        }
        for (std::size_t g = 0; g < given.size(); ++g) {
          if (!given[g]) {
            diag(fields["images"]->value_offset,
                 std::string("generator '") + p.generators.symbol(g) + "' has no table image");
          }
        }
        p.table = std::move(t);
      }

      void interpret_subgroup(Block const& b) {
        auto fields = index(b, {"generators", "membership"});
        SubgroupDecl decl;
        decl.name                 = b.name;
        std::tie(decl.line, decl.column) = position(b.offset);
        if (b.name == "1") {
          diag(b.offset, "the name '1' is reserved for the trivial subgroup");
          return;
        }
        for (auto const& s : _out.subgroups) {
          if (s.name == b.name) {
            diag(b.offset, "duplicate subgroup '" + b.name + "'");
            return;
          }
        }
        GroupModel model(*_out.group);
        if (fields.count("generators")) {
          for (Item const& it : split(*fields["generators"])) {
            if (auto w = word(it, model.alphabet())) {
              decl.spec.generators.push_back(*w);
            }
          }
        }
        if (fields.count("membership")) {
          std::size_t lead;
          std::string v  = trim(fields["membership"]->value, lead);
          std::size_t at = fields["membership"]->value_offset + lead;
          if (v == "stallings") {
            decl.spec.mode = MembershipMode::StallingsFolding;
            if (model.backend() != Backend::FreeReduction) {
              diag(at, "stallings membership requires the free backend, group '"
                           + model.name() + "' uses " + std::string(to_string(model.backend())));
            }
          } else if (v.rfind("bounded(", 0) == 0 && v.back() == ')') {
            decl.spec.mode = MembershipMode::BoundedSearch;
            std::string inner = v.substr(8, v.size() - 9);
            auto limit = integer({inner, at + 8});
            if (limit && *limit < 1) {
              diag(at + 8, "bounded search limit must be at least 1");
            } else if (limit) {
              decl.spec.limit = static_cast<std::size_t>(*limit);
            }
          } else {
            diag(at, "membership must be stallings or bounded(<limit>)");
          }
        } else {
          diag(b.offset, "subgroup '" + b.name + "' has no membership field");
        }
        _out.subgroups.push_back(std::move(decl));
      }

      std::string _text;
      std::size_t _pos = 0;
      SpecFile    _out;
    };

  }  // namespace

  SubgroupDecl const* SpecFile::subgroup(std::string_view name) const {
    for (auto const& s : subgroups) {
      if (s.name == name) {
        return &s;
      }
    }
    return nullptr;
  }

  SpecFile parse_spec(std::string_view text) {
    return Reader(text).run();
  }

  SpecFile read_spec_file(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ValidationError("cannot read spec file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_spec(buffer.str());
  }

  void require_valid(SpecFile const& spec) {
    if (!spec.diagnostics.empty()) {
      auto const& d = spec.diagnostics.front();
      throw ParseError(d.message, d.line, d.column);
    }
  }

  std::string normalized(SpecFile const& spec) {
    std::ostringstream out;
    if (!spec.group) {
      return {};
    }
    Presentation const& p = *spec.group;
    auto join = [](std::vector<std::string> const& parts) {
      std::string s;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        s += (i ? ", " : "") + parts[i];
      }
      return s;
    };
    std::vector<std::string> parts;
    for (char c : p.generators.symbols()) {
      parts.emplace_back(1, c);
    }
    out << "group " << p.name << " {\n  generators: " << join(parts) << ";\n";
    parts.clear();
    for (Word const& r : p.relators) {
      parts.push_back(to_string(r, p.generators));
    }
    out << "  relators: " << join(parts) << ";\n";
    out << "  backend: " << to_string(p.backend) << ";\n";
    if (p.small_cancellation) {
      out << "  small_cancellation: yes;\n";
    }
    if (!p.marking.empty()) {
      parts.clear();
      for (auto const& [c, w] : p.marking) {
        parts.push_back(std::string(1, c) + "=" + to_string(w, p.generators));
      }
      out << "  marking: " << join(parts) << ";\n";
    }
    if (p.table) {
      out << "  order: " << p.table->order << ";\n  table: ";
      for (std::size_t i = 0; i < p.table->order; ++i) {
        for (std::size_t j = 0; j < p.table->order; ++j) {
          out << (j ? " " : "") << p.table->products[i * p.table->order + j];
        }
        out << (i + 1 < p.table->order ? " / " : ";\n");
      }
      parts.clear();
      for (std::size_t g = 0; g < p.generators.size(); ++g) {
        parts.push_back(std::string(1, p.generators.symbol(g)) + "="
                        + std::to_string(p.table->images[g]));
      }
      out << "  images: " << join(parts) << ";\n";
    }
    out << "}\n";
    GroupModel model(p);
    for (auto const& s : spec.subgroups) {
      parts.clear();
      for (Word const& w : s.spec.generators) {
        parts.push_back(to_string(w, model.alphabet()));
      }
      out << "subgroup " << s.name << " {\n  generators: " << join(parts) << ";\n  membership: "
          << (s.spec.mode == MembershipMode::StallingsFolding
                  ? std::string("stallings")
                  : "bounded(" + std::to_string(s.spec.limit) + ")")
          << ";\n}\n";
    }
    return out.str();
  }

}  // namespace relcay
